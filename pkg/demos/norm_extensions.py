"""
Gluing and extending Hilbert norms
==================================

The inf-convolution of a norm on a subspace E with an ambient norm, and the
extension of a norm ladder from E to a dominating norm on the whole space.
"""

import numpy as np

from koethe_lab.norm_lab import (NormLadder, SubspaceModel, canonical_norms, dominating_extension,
                                 inf_convolution_norm, verify_inf_convolution)

# E = span{e1} in R^2: the glued norm is x1^2/2 + x2^2
model = SubspaceModel.coordinate(2, 1)
normF = inf_convolution_norm(model, np.eye(1), *canonical_norms(model, np.eye(1)))
print("glued Gram matrix:\n", normF.gram)
print("||e1||_F =", normF(np.array([1.0, 0.0])))

rng = np.random.default_rng(0)
model = SubspaceModel.random(12, 5, rng)
GE = np.diag(rng.uniform(0.5, 2.0, 5))
normF = inf_convolution_norm(model, GE, *canonical_norms(model, GE))
rep = verify_inf_convolution(normF, model, GE, np.eye(7), n_samples=2000)
print(f"ratio ||x||_E/||x||_F on E: [{rep.exact_ratio_min:.4f}, {rep.exact_ratio_max:.4f}] (bound sqrt 3)")

new_norm, rep = dominating_extension(model, NormLadder(5), NormLadder(7), n_samples=2000)
for lv in rep.levels:
    print(f"level {lv.u}: worst ||x||_U^2/(||x|| ||x||_V) = {lv.observed:.4f}")
print("restriction error on E:", rep.restriction_error)
