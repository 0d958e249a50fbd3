# %% [markdown]
# Separability tests on the Werner family
# ---------------------------------------
# Every test is one-sided: it can witness entanglement, never prove separability.

# %%
import numpy as np

from tomosep.separability import (
    F_max,
    block_inequalities,
    check_decomposition,
    peres_maps,
    positive_map_criterion,
    positivity_diag_criterion,
    ppt_test,
    werner_ensemble,
)
from tomosep.linalg import partial_transpose
from tomosep.states import bell, werner

print(" p     PT min eig   blocks   F_max")
for p in np.linspace(0, 1, 11):
    rho = werner(p)
    lam, v = ppt_test(rho)
    f = F_max(rho, n_maps=10, n_unitaries=2, rng=0).value
    print(f"{p:.1f}  {lam:+.4f}  {v.flag:22s} {block_inequalities(rho).entangled!s:6s} {f:.4f}")

# %% Below p = 1/3 an explicit product-state mixture exists
ens = werner_ensemble(0.2)
print("weights:", np.round(ens.weights, 4))
print("decomposition verified:", check_decomposition(ens, werner(0.2)))

# %% Positive maps: the Peres case and the F functional
v = positive_map_criterion(werner(0.9), (2, 2), [peres_maps((2, 2))])
print(v.flag, v.margin, v.witness)
best = F_max(bell("phi+"), rng=0)
print("F_max(Bell) =", best.value, "via", best.witness)

# %% Positivity from the moduli of diagonal elements
print(positivity_diag_criterion(partial_transpose(werner(0.9).mat, (2, 2)), rng=0))
