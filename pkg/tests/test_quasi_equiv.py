import itertools

import numpy as np
import pytest

from koethe_lab.construct import orthonormal_realizations
from koethe_lab.growth_dsl import TabulatedMatrix, permute, scale_rows
from koethe_lab.quasi_equiv import (bottleneck_assignment, finite_square_witness, match, normalize_profile,
                                    pair_costs, planted_instance, verify_quasi_equivalence)
from koethe_lab.smooth_ops import block_householder_family, profile


def brute_bottleneck(cost):
    n = cost.shape[0]
    return min(max(cost[i, p[i]] for i in range(n)) for p in itertools.permutations(range(n)))


def test_normalize_unit_rows_unchanged():
    tab = profile(list(np.eye(5)), 3)
    assert normalize_profile(tab, np.ones(5)).allclose(tab)


def test_normalize_undoes_scaling():
    tab = profile(list(np.eye(5)), 3)
    assert normalize_profile(scale_rows(tab, np.full(5, 3.0)), np.full(5, 3.0)).allclose(tab)


def test_normalize_rejects_bad_scalars():
    tab = profile(list(np.eye(3)), 2)
    with pytest.raises(ValueError):
        normalize_profile(tab, [1.0, 0.0, 1.0])
    with pytest.raises(ValueError):
        normalize_profile(tab, [1.0, 1.0])


def test_match_identity():
    tab = profile(list(np.eye(6)), 4)
    res = match(tab, tab)
    assert np.array_equal(res.sigma, np.arange(6))
    assert np.allclose(res.log_lambda, 0) and res.distortion == 0 and res.status == "exact"


def test_match_shift():
    n = 6
    A = profile(list(np.eye(n)), 4)
    B = profile([np.eye(n)[(j + 1) % n] for j in range(n)], 4)
    res = match(A, B)
    # row j of A is the basis vector e_j; e_j is row j-1 of B
    assert res.sigma.tolist() == [(j - 1) % n for j in range(n)]
    assert np.allclose(res.log_lambda, 0)


@pytest.mark.parametrize("seed", range(10))
def test_bottleneck_against_exhaustive_search(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    cost = rng.uniform(0, 1, (n, n)).round(2)
    sigma, value = bottleneck_assignment(cost)
    assert sorted(sigma) == list(range(n))
    assert value == pytest.approx(brute_bottleneck(cost))
    assert cost[np.arange(n), sigma].max() == pytest.approx(value)


@pytest.mark.parametrize("seed", range(10))
def test_planted_recovery(seed):
    inst = planted_instance(40 + 10 * seed, 8, seed)
    res = match(inst.A, inst.B)
    assert np.array_equal(res.sigma, inst.sigma)
    assert np.allclose(res.log_lambda, inst.log_lambda, atol=1e-9)
    assert res.distortion <= 1e-9 and res.status == "exact"


def test_planted_match_is_symmetric():
    inst = planted_instance(60, 8, 3)
    fwd, back = match(inst.A, inst.B), match(inst.B, inst.A)
    assert np.array_equal(back.sigma[fwd.sigma], np.arange(60))
    assert np.allclose(back.log_lambda[fwd.sigma], -fwd.log_lambda)


def test_verify_quasi_equivalence():
    tab = profile(list(np.eye(5)), 3)
    assert verify_quasi_equivalence(tab, tab, np.arange(5), np.ones(5), C=1.0)
    inst = planted_instance(30, 8, 11)
    assert verify_quasi_equivalence(inst.A, inst.B, inst.sigma, log_lambda=inst.log_lambda, C=1 + 1e-9)
    wrong = np.roll(inst.sigma, 1)
    assert not verify_quasi_equivalence(inst.A, inst.B, wrong, log_lambda=inst.log_lambda, C=2.0)
    with pytest.raises(ValueError, match="bijection"):
        verify_quasi_equivalence(tab, tab, [0, 0, 1, 2, 3], np.ones(5))


def test_match_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        match(profile(list(np.eye(4)), 3), profile(list(np.eye(5)), 3))


def test_failed_status_past_threshold():
    A = TabulatedMatrix.from_log(np.array([[0.0, 1.0], [0.0, 5.0]]))
    B = TabulatedMatrix.from_log(np.array([[0.0, 3.0], [0.0, 3.0]]))
    res = match(A, B, max_distortion=0.5)
    assert res.status == "failed" and res.distortion == pytest.approx(1.0)


def test_pair_costs_scale_invariant():
    inst = planted_instance(20, 6, 5)
    cost, _ = pair_costs(inst.A, scale_rows(inst.A, np.exp(np.linspace(-2, 2, 20))))
    assert np.allclose(np.diag(cost), 0, atol=1e-12)


def test_two_realizations_match():
    A, B, shuffle = orthonormal_realizations(range(6, 14), 8, seed=0)
    res = match(A, B)
    assert res.distortion <= 0.1
    assert np.array_equal(shuffle[res.sigma], np.arange(8))


@pytest.mark.parametrize("seed", range(5))
def test_square_witness_for_orthonormal_families(seed):
    V = block_householder_family(6, seed=seed, per_block=3)
    tab = normalize_profile(profile(V, 8), np.linalg.norm(V, axis=1))
    assert tab.log_entries.min() >= -1e-12
    assert finite_square_witness(tab)["ok"]


def test_permute_then_match():
    inst = planted_instance(25, 5, 2)
    perm = np.random.default_rng(0).permutation(25)
    res = match(inst.A, permute(inst.A, perm))
    assert verify_quasi_equivalence(inst.A, permute(inst.A, perm), res.sigma, log_lambda=res.log_lambda,
                                    C=1 + 1e-9)
