# %% [markdown]
# Symbols and star products on a tomographic frame
# ------------------------------------------------
# Projectors on spin states along six directions form an overcomplete frame.
# Symbols are the tomogram values; the star product reproduces matrix
# multiplication.

# %%
import numpy as np

from tomosep.starprod import reconstruct, star_kernel, star_product, symbol, tomographic_frame, trace_power
from tomosep.tomography import Direction

dirs = [Direction(np.pi / 2, k * np.pi / 2) for k in range(4)] + [Direction(0), Direction(np.pi)]
frame = tomographic_frame(0.5, dirs)
print(len(frame.labels), "labels, rank", frame.rank)

rng = np.random.default_rng(0)
A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
B = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
fA, fB = symbol(A, frame), symbol(B, frame)
print("roundtrip error:", np.abs(reconstruct(fA) - A).max())

# %%
K = star_kernel(frame)
print("kernel shape:", K.shape)
err = np.abs(star_product(fA, fB, K).values - symbol(A @ B, frame).values).max()
print("symbol(AB) - symbol(A)*symbol(B):", err)

# %% Purity from the symbol alone
rho = np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]])
print("Tr rho^2 =", np.trace(rho @ rho).real, " from symbol:", trace_power(symbol(rho, frame), 2).real)
