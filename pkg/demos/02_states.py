# %% [markdown]
# States and distances
# --------------------

# %%
import numpy as np

from tomosep.states import (
    bell,
    bloch_vector,
    from_bloch,
    hellinger_sq,
    hs_distance_sq,
    measure_e,
    measure_e_tilde,
    random_density,
    sqrt_distance_sq,
    werner,
)

rho = from_bloch([0.3, -0.2, 0.5])
print(rho.mat.round(3))
print("Bloch vector back:", bloch_vector(rho))
print("purity:", rho.purity)

# %% Werner family: one eigenvalue (1+3p)/4, three (1-p)/4
for p in (-1 / 3, 0.0, 1 / 3, 1.0):
    print(f"p={p:+.3f}", np.sort(werner(p).eigenvalues)[::-1].round(4))

# %% Distances
r1, r2 = random_density(3, rng=1), random_density(3, rng=2)
print("HS distance^2:", hs_distance_sq(r1, r2))
print("sqrt distance^2:", sqrt_distance_sq(r1, r2))
P1, P2 = np.diag(r1.mat).real, np.diag(r2.mat).real
print("on the diagonals the sqrt distance is Hellinger:", sqrt_distance_sq(np.diag(P1), np.diag(P2)), hellinger_sq(P1, P2))

# %% How far a state is from the product of its marginals
for p in (0.0, 0.5, 1.0):
    print(f"e(Werner {p}) = {measure_e(werner(p)):.4f}   (3p^2/4 = {3 * p**2 / 4:.4f})")
print("e~(Bell) =", measure_e_tilde(bell("phi+")))
