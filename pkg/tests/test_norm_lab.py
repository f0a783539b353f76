import json

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings, strategies as st

from koethe_lab.norm_lab import (SQRT3, HilbertNorm, NormLadder, SubspaceModel, canonical_norms,
                                 dominating_extension, extend_hilbert_norm, inf_convolution_norm, load_model,
                                 parallelogram_residual, random_inf_convolution_instance, random_pd,
                                 restriction_error, verify_inf_convolution)


def inf_by_least_squares(x, model, GE, M):
    """min_z ||z||_E^2 + ||x - Uz||_M^2 as a stacked least-squares problem."""
    LE = np.linalg.cholesky(GE).T
    LM = sla.sqrtm(M).real
    A = np.vstack([LE, LM @ model.U])
    b = np.concatenate([np.zeros(model.k), LM @ x])
    z, *_ = np.linalg.lstsq(A, b, rcond=None)
    return float(np.sum((A @ z - b) ** 2))


def test_two_dimensional_example():
    model = SubspaceModel.coordinate(2, 1)
    normF = inf_convolution_norm(model, np.eye(1), *canonical_norms(model, np.eye(1)))
    assert np.allclose(normF.gram, np.diag([0.5, 1.0]))
    assert normF(np.array([1.0, 0.0])) == pytest.approx(1 / np.sqrt(2))
    rep = verify_inf_convolution(normF, model, np.eye(1), np.eye(1), n_samples=100)
    assert rep.passed
    assert rep.exact_ratio_max == pytest.approx(np.sqrt(2))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.data())
def test_schur_formula_matches_direct_minimization(N, data):
    k = data.draw(st.integers(1, N - 1))
    rng = np.random.default_rng(data.draw(st.integers(0, 2 ** 32 - 1)))
    inst = random_inf_convolution_instance(N, k, rng)
    normF = inf_convolution_norm(inst.model, inst.normE, inst.norm1, inst.norm2)
    M = inst.norm1.gram + inst.norm2.gram
    for x in rng.standard_normal((5, N)):
        direct = inf_by_least_squares(x, inst.model, inst.normE.gram, M)
        assert normF(x) ** 2 == pytest.approx(direct, rel=1e-8, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2 ** 32 - 1))
def test_inf_convolution_bounds_random(N, seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(0, N + 1))
    inst = random_inf_convolution_instance(N, k, rng)
    normF = inf_convolution_norm(inst.model, inst.normE, inst.norm1, inst.norm2)
    rep = verify_inf_convolution(normF, inst.model, inst.normE, inst.normG, n_samples=200, seed=seed)
    assert rep.passed, rep.violations
    assert rep.exact_ratio_min >= 1 - 1e-9 and rep.exact_ratio_max <= SQRT3 * (1 + 1e-9)


def test_precondition_violation_reports_witness():
    model = SubspaceModel.coordinate(2, 1)
    small = np.diag([0.25, 1.0])
    with pytest.raises(ValueError, match="witness z"):
        inf_convolution_norm(model, np.eye(1), small, np.diag([0.0, 1.0]))


def test_hilbert_norm_validation():
    with pytest.raises(ValueError, match="positive definite"):
        HilbertNorm(np.diag([1.0, 0.0]))
    HilbertNorm(np.diag([1.0, 0.0]), allow_semidefinite=True)
    with pytest.raises(ValueError, match="Hermitian"):
        HilbertNorm(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_parallelogram_law():
    assert parallelogram_residual(HilbertNorm(random_pd(6, np.random.default_rng(1)))) < 1e-12


def test_extension_of_equal_spaces_is_identity():
    model = SubspaceModel.coordinate(3, 3)
    GE = random_pd(3, np.random.default_rng(4))
    assert np.allclose(extend_hilbert_norm(model, GE).gram, GE)


@pytest.mark.parametrize("seed", range(10))
def test_extension_restricts_exactly(seed):
    rng = np.random.default_rng(seed)
    N = int(rng.integers(2, 15))
    model = SubspaceModel.random(N, int(rng.integers(1, N)), rng)
    GE = random_pd(model.k, rng)
    normF = HilbertNorm(random_pd(N, rng))
    ext = extend_hilbert_norm(model, GE, normF)
    assert restriction_error(ext, model, GE) <= 1e-10
    # the quotient part is untouched
    assert np.allclose(ext.quotient(model.U, model.W).gram, normF.quotient(model.U, model.W).gram)


def test_ladder_log_convexity():
    assert NormLadder(5).log_convexity_defect() <= 1e-12
    with pytest.raises(ValueError, match="log-convex"):
        NormLadder(2, grams=[np.eye(2), 4 * np.eye(2), 5 * np.eye(2)])
    with pytest.raises(ValueError, match="monotone"):
        NormLadder(2, grams=[np.eye(2), 0.5 * np.eye(2)])


def _independent_ratio(model, ladderE, ladderG, new_norm, level, rng):
    """||x||_u^2 / (||x|| c_V ||x||_{12u}) on fresh samples, in original coordinates."""
    T = model.T
    Fu = T @ sla.block_diag(ladderE.gram(level.u), ladderG.gram(level.u)) @ T.T
    Fv = T @ sla.block_diag(ladderE.gram(level.v_level), ladderG.gram(level.v_level)) @ T.T
    X = rng.standard_normal((500, model.N))
    nu = np.einsum("ij,jk,ik->i", X, Fu, X)
    nv = np.sqrt(np.einsum("ij,jk,ik->i", X, Fv, X))
    return float(np.max(nu / (new_norm(X) * level.c_V * nv)))


@pytest.mark.parametrize("seed", range(8))
def test_dominating_extension(seed):
    rng = np.random.default_rng(seed)
    N = int(rng.integers(2, 17))
    model = SubspaceModel.random(N, int(rng.integers(1, N)), rng)
    lE, lG = NormLadder(model.k), NormLadder(N - model.k)
    new_norm, rep = dominating_extension(model, lE, lG, n_samples=300, seed=seed)
    assert rep.passed and rep.restriction_error <= 1e-10
    for level in rep.levels:
        assert _independent_ratio(model, lE, lG, new_norm, level, rng) <= 49 * (1 + 1e-6)


def test_model_json_roundtrip(tmp_path):
    model = SubspaceModel.random(5, 2, np.random.default_rng(0))
    (tmp_path / "m.json").write_text(json.dumps(model.to_json_dict()))
    back, ladder = load_model(tmp_path / "m.json")
    assert ladder == {}
    # same subspace: projectors agree
    assert np.allclose(back.U @ back.U.T, model.U @ model.U.T)


def test_model_rejects_dependent_basis():
    with pytest.raises(ValueError, match="dependent"):
        SubspaceModel.from_json_dict({"dim": 3, "subspace": [[1, 0, 0], [2, 0, 0]]})
