# %% [markdown]
# Channels, non-CP maps and the qubit semigroup
# ---------------------------------------------

# %%
import numpy as np

from tomosep.maps import (
    KrausMap,
    MixedUnitaryMap,
    apply_mixed_unitary,
    block_relation_defect,
    epsilon_map,
    local_product_superop,
    purify,
    qubit_semigroup_sample,
    random_su2_ensemble,
    superop_of,
    transpose_superop,
)
from tomosep.states import SIGMA, bell
from tomosep.vectorize import Superoperator

up = np.diag([1.0, 0.0])
flip = MixedUnitaryMap((0.5, 0.5), (np.eye(2), SIGMA[0]))
print("half bit flip on |0><0|:\n", apply_mixed_unitary(up, flip).mat.real)

# %% Amplitude damping as a Kraus map and as a 4x4 superoperator
g = 0.3
damp = KrausMap((np.array([[1, 0], [0, np.sqrt(1 - g)]]), np.array([[0, np.sqrt(g)], [0, 0]])))
L = superop_of(damp)
print(L.mat.real.round(3))
print("trace preserving:", L.is_trace_preserving())

# %% A trace-preserving map that is not completely positive
for eps in (0.2, 1.5):
    out = epsilon_map(eps, 2).apply(up)
    print(f"eps={eps}: output eigenvalues {np.linalg.eigvalsh(out).round(3)}")

# %% The transpose is positive but its partial version is not
T_B = local_product_superop([Superoperator(np.eye(4)), transpose_superop(2)])
print("spectrum of (I (x) T) Bell:", np.linalg.eigvalsh(T_B.apply(bell("phi+").mat)).round(3))

# %% Averages of u (x) u* over SU(2) samples
rng = np.random.default_rng(3)
L1, params = qubit_semigroup_sample(*random_su2_ensemble(5, rng))
L2, _ = qubit_semigroup_sample(*random_su2_ensemble(5, rng))
print(params)
print("det from the means:", params.determinant(), " numeric:", np.linalg.det(L1.mat).real)
print("block relations of the product:", block_relation_defect(L1 @ L2))

# %% Purification with a fiducial projector
zero, one = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
phi = np.array([0.6, 0.8j])
pure = purify([0.3, 0.7], [zero, one], np.outer(phi, phi.conj()))
print("purified state:\n", pure.mat.round(3), "\npurity", pure.purity)
