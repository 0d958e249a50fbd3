# %% [markdown]
# Spin tomograms
# --------------

# %%
import numpy as np

from tomosep.states import bell, from_bloch, random_density, werner
from tomosep.tomography import (
    Direction,
    Tomogram,
    bilinear_tomogram,
    bipartite_tomogram,
    correlation_tensor,
    reconstruct_qubit,
    spin_tomogram,
    un_tomogram,
    wigner_D,
)

n = np.array([0.2, 0.4, -0.6])
o = Direction(1.0, 0.5)
t = spin_tomogram(from_bloch(n), 0.5, o)
print(t.as_dict(), " closed form:", (1 + n @ o.vector) / 2)

# %% Higher spin and the third Euler angle
rho = random_density(4, rng=0)
print("j=3/2 along o:", spin_tomogram(rho, 1.5, o).probs.round(4))
print("same with gamma=1.2:", spin_tomogram(rho, 1.5, o, gamma=1.2).probs.round(4))
print("D(j=1, beta=pi):\n", wigner_D(1, 0, np.pi).real.round(12))

# %% Two spins
print("Bell along z,z:", bipartite_tomogram(bell("phi+"), 0.5, 0.5, Direction(0), Direction(0)).as_dict())
print("Werner(0.5):", bipartite_tomogram(werner(0.5), 0.5, 0.5, Direction(0), Direction(0)).probs)
a, b, T = correlation_tensor(werner(0.5))
print("correlation tensor:\n", T.round(3))
print(bilinear_tomogram(a, b, T, Direction(0.7, 0.1), Direction(2.0, 1.0)))

# %% Any unitary gives a tomogram
U = np.kron(wigner_D(0.5, 0.3, 1.1), wigner_D(0.5, 0.0, 0.4))
print(un_tomogram(werner(0.5), (2, 2), U).as_dict())

# %% Reconstructing a qubit from three noisy tomograms
rng = np.random.default_rng(1)
samples = []
for d in (Direction(np.pi / 2, 0), Direction(np.pi / 2, np.pi / 2), Direction(0)):
    p = spin_tomogram(from_bloch(n), 0.5, d).probs + rng.uniform(-1e-3, 1e-3) * np.array([1, -1])
    samples.append((d, Tomogram((0.5, -0.5), p)))
est = reconstruct_qubit(samples)
print("true n:", n, " estimate error:", np.abs(est.mat - from_bloch(n).mat).max())
