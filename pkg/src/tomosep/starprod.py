"""Symbols and star products over a finite set of labels.

A frame pairs quantizers ``U(x)`` with dequantizers ``D(x)``. The symbol of
``A`` is ``f(x) = Tr[A U(x)]`` and ``A = sum_x f(x) D(x)`` recovers it. The
dequantizers are the canonical (pseudoinverse) dual of the quantizers, so
overcomplete frames such as spin tomographic frames work without a choice of
basis.
"""

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .errors import FrameIncomplete, ShapeMismatch
from .tomography import as_direction, spin_labels, wigner_D
from .vectorize import devec, vec

RANK_RTOL = 1e-10
ROUNDTRIP_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SymbolFrame:
    labels: tuple
    quantizers: np.ndarray  # (K, n, n)
    dequantizers: np.ndarray  # (K, n, n)
    rank: int

    @property
    def n(self) -> int:
        return self.quantizers.shape[1]

    @property
    def complete(self) -> bool:
        return self.rank == self.n * self.n

    @classmethod
    def from_quantizers(cls, labels: Sequence, quantizers: Sequence[np.ndarray]) -> "SymbolFrame":
        """Build a frame whose dequantizers are the minimum-norm dual of ``quantizers``."""
        Us = np.array([np.asarray(u, dtype=complex) for u in quantizers])
        if Us.ndim != 3 or Us.shape[1] != Us.shape[2]:
            raise ShapeMismatch("quantizers must be square matrices of one size")
        if len(labels) != Us.shape[0]:
            raise ShapeMismatch("one label per quantizer required")
        # row x of the analysis matrix gives Tr[A U(x)] = vec(U(x)^T) . vec(A)
        T = np.array([vec(u.T) for u in Us])
        dual = np.linalg.pinv(T, rcond=RANK_RTOL)
        Ds = np.array([devec(dual[:, k]) for k in range(len(labels))])
        rank = int(np.linalg.matrix_rank(T, tol=RANK_RTOL * max(1.0, np.linalg.norm(T, 2))))
        for arr in (Us, Ds):
            arr.setflags(write=False)
        return cls(tuple(labels), Us, Ds, rank)


@dataclass(frozen=True, eq=False)
class Symbol:
    frame: SymbolFrame
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).reshape(-1)
        if v.size != len(self.frame.labels):
            raise ShapeMismatch(f"{v.size} values for {len(self.frame.labels)} labels")
        object.__setattr__(self, "values", v)

    def __getitem__(self, label) -> complex:
        return complex(self.values[self.frame.labels.index(label)])


def symbol(A, frame: SymbolFrame) -> Symbol:
    """``f(x) = Tr[A U(x)]`` for every label."""
    A = np.asarray(A, dtype=complex)
    if A.shape != (frame.n, frame.n):
        raise ShapeMismatch(f"expected {frame.n}x{frame.n}, got {A.shape}")
    return Symbol(frame, np.einsum("ij,kji->k", A, frame.quantizers))


def _roundtrip_residual(frame: SymbolFrame) -> float:
    n = frame.n
    worst = 0.0
    for a in range(n):
        for b in range(n):
            E = np.zeros((n, n), dtype=complex)
            E[a, b] = 1.0
            back = np.einsum("k,kij->ij", symbol(E, frame).values, frame.dequantizers)
            worst = max(worst, float(np.abs(back - E).max()))
    return worst


def reconstruct(f: Symbol) -> np.ndarray:
    """``A = sum_x f(x) D(x)``; refuses frames that cannot reproduce every matrix unit."""
    frame = f.frame
    resid = _roundtrip_residual(frame)
    if resid > ROUNDTRIP_TOL:
        raise FrameIncomplete(f"frame rank {frame.rank} < {frame.n ** 2} (roundtrip residual {resid:.2e})")
    return np.einsum("k,kij->ij", f.values, frame.dequantizers)


def star_kernel(frame: SymbolFrame) -> np.ndarray:
    """``K[x2, x1, x] = Tr[D(x2) D(x1) U(x)]``."""
    DD = np.einsum("aij,bjk->abik", frame.dequantizers, frame.dequantizers)
    return np.einsum("abik,cki->abc", DD, frame.quantizers)


def star_product(f: Symbol, g: Symbol, kernel: np.ndarray | None = None) -> Symbol:
    """``(f * g)(x) = sum f(x2) g(x1) K[x2, x1, x]``, the symbol of the operator product."""
    if f.frame is not g.frame:
        raise ShapeMismatch("symbols belong to different frames")
    K = star_kernel(f.frame) if kernel is None else kernel
    return Symbol(f.frame, np.einsum("a,b,abc->c", f.values, g.values, K))


def trace_power(f: Symbol, N: int) -> complex:
    """``sum_{x1..xN} f(x1)...f(xN) Tr[D(x1)...D(xN)]``, which equals ``Tr A^N``.

    The sum is enumerated label tuple by label tuple, so the cost grows as
    ``K^N`` for ``K`` labels.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    Ds = f.frame.dequantizers
    vals = f.values
    K = len(vals)
    total = 0j
    for xs in product(range(K), repeat=N):
        coeff = np.prod(vals[list(xs)])
        if coeff == 0:
            continue
        P = Ds[xs[0]]
        for x in xs[1:]:
            P = P @ Ds[x]
        total += coeff * np.trace(P)
    return complex(total)


def tomographic_frame(j, directions: Sequence) -> SymbolFrame:
    """Rotated projectors ``D(g)|j m><j m|D(g)^dagger`` labelled ``(m, direction index)``."""
    dirs = [as_direction(d) for d in directions]
    ms = spin_labels(j)
    labels, quantizers = [], []
    for k, o in enumerate(dirs):
        D = wigner_D(j, o.phi, o.theta)
        for a, m in enumerate(ms):
            col = D[:, a]
            labels.append((m, k))
            quantizers.append(np.outer(col, col.conj()))
    frame = SymbolFrame.from_quantizers(labels, quantizers)
    if not frame.complete:
        raise FrameIncomplete(f"{len(dirs)} directions span rank {frame.rank} < {frame.n ** 2}")
    return frame
