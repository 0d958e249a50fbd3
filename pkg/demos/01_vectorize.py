# %% [markdown]
# Matrices as vectors
# -------------------
# Row-major vec turns every linear operation on matrices into a matrix acting
# on a vector, which is how all maps in tomosep are represented.

# %%
import numpy as np

from tomosep.vectorize import devec, metric_g, metric_product, reshuffle_C, superop, vec

M = np.array([[1, 2], [3, 4]])
print("vec M =", vec(M))
print("devec(vec M) == M:", np.array_equal(devec(vec(M)), M))

# %% Left, right and similarity actions
rng = np.random.default_rng(0)
g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
for mode, target in [("left", g @ M), ("right", M @ g), ("similarity", g @ M @ np.linalg.inv(g))]:
    err = np.abs(superop(g, mode).mat @ vec(M) - vec(target)).max()
    print(f"{mode:>10}: |L vec M - vec(target)| = {err:.1e}")

# %% The Hilbert-Schmidt product through the metric g
A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
B = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
print("metric g for n=2:\n", metric_g(2))
print("metric product:", metric_product(vec(A), vec(B)))
print("Tr(A^dagger B):", np.trace(A.conj().T @ B))

# %% Reshuffling product vectors
# vec(a) (x) vec(b) and vec(a (x) b) hold the same numbers in a different order.
a, b = rng.standard_normal((2, 2)), rng.standard_normal((3, 3))
C = reshuffle_C(2, 3)
print("C (vec a (x) vec b) == vec(a (x) b):", np.allclose(C @ np.kron(vec(a), vec(b)), vec(np.kron(a, b))))
print("C is a permutation, C^T C = I:", np.array_equal(C.T @ C, np.eye(36)))
print("but C C = I only for equal factors:", np.array_equal(C @ C, np.eye(36)))
