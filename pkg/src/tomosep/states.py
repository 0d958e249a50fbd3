"""Density matrices, named state families, distances and entanglement measures."""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BlochOutOfBall,
    DimMismatch,
    InvalidState,
    NotADistribution,
    NotBipartite,
    OutOfRange,
)
from .linalg import _subsystem_index, as_rng, herm_eig, mat_sqrt, partial_trace, tensor
from .vectorize import metric_product, vec

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
SIGMA = (PAULI["X"], PAULI["Y"], PAULI["Z"])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated quantum state with a subsystem dimension signature.

    Construction rejects anything that is not Hermitian (1e-10), unit trace
    (1e-10) and positive semidefinite (smallest eigenvalue >= -1e-9). Nothing
    is silently repaired; the stored matrix is exactly Hermitian.
    """

    mat: np.ndarray
    dims: tuple = field(default=())

    def __post_init__(self):
        mat = np.array(self.mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InvalidState(f"density matrix must be square, got {mat.shape}")
        n = mat.shape[0]
        dims = tuple(int(d) for d in self.dims) if self.dims else (n,)
        if int(np.prod(dims)) != n:
            raise DimMismatch(f"dims {dims} do not multiply to {n}")
        if not np.all(np.isfinite(mat)):
            raise InvalidState("non-finite entries")
        asym = float(np.abs(mat - mat.conj().T).max())
        if asym > HERMITIAN_TOL:
            raise InvalidState(f"not Hermitian: |rho - rho^dagger|_max = {asym:.3e}")
        mat = (mat + mat.conj().T) / 2
        tr = np.trace(mat).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidState(f"trace {tr!r} differs from 1")
        min_eig = float(herm_eig(mat).eigenvalues[-1])
        if min_eig < -PSD_TOL:
            raise InvalidState(f"not positive semidefinite: min eigenvalue {min_eig:.3e}")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return herm_eig(self.mat).eigenvalues

    @property
    def purity(self) -> float:
        return float(np.trace(self.mat @ self.mat).real)

    def ptrace(self, which="B") -> "DensityMatrix":
        """Reduced state after tracing out one subsystem."""
        keep = list(self.dims)
        del keep[_subsystem_index(which, len(keep))]
        return DensityMatrix(partial_trace(self.mat, self.dims, which), tuple(keep))

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)


def as_matrix(rho) -> np.ndarray:
    """Matrix of a ``DensityMatrix`` or array-like."""
    if isinstance(rho, DensityMatrix):
        return rho.mat
    return np.asarray(rho, dtype=complex)


def dims_of(rho, dims=None) -> tuple:
    if dims is not None:
        return tuple(int(d) for d in dims)
    if isinstance(rho, DensityMatrix):
        return rho.dims
    return (as_matrix(rho).shape[0],)


def product_state(*states) -> DensityMatrix:
    """Tensor product of states, keeping the concatenated dimension signature."""
    dims: list[int] = []
    for s in states:
        dims.extend(dims_of(s))
    return DensityMatrix(tensor(*(as_matrix(s) for s in states)), tuple(dims))


def from_bloch(n: Sequence[float]) -> DensityMatrix:
    """Qubit state ``(1 + n . sigma) / 2``."""
    n = np.asarray(n, dtype=float).reshape(-1)
    if n.size != 3:
        raise BlochOutOfBall("Bloch vector must have 3 components")
    if np.linalg.norm(n) > 1 + 1e-12:
        raise BlochOutOfBall(f"|n| = {np.linalg.norm(n):.6g} > 1")
    mat = 0.5 * (np.eye(2) + sum(c * s for c, s in zip(n, SIGMA)))
    return DensityMatrix(mat, (2,))


def bloch_vector(rho) -> np.ndarray:
    """Inverse of :func:`from_bloch`: ``n_i = Tr(rho sigma_i)``."""
    M = as_matrix(rho)
    return np.array([np.trace(M @ s).real for s in SIGMA])


_BELL_KETS = {
    "phi+": np.array([1, 0, 0, 1]),
    "phi-": np.array([1, 0, 0, -1]),
    "psi+": np.array([0, 1, 1, 0]),
    "psi-": np.array([0, 1, -1, 0]),
}


def bell(which: str = "phi+") -> DensityMatrix:
    """Projector onto one of the four Bell states ``phi+``, ``phi-``, ``psi+``, ``psi-``."""
    key = which.lower().replace("φ", "phi").replace("ψ", "psi").replace("⁺", "+").replace("⁻", "-")
    if key not in _BELL_KETS:
        raise ValueError(f"unknown Bell state {which!r}")
    ket = _BELL_KETS[key] / np.sqrt(2.0)
    return DensityMatrix(np.outer(ket, ket.conj()), (2, 2))


def werner(p: float) -> DensityMatrix:
    """Two-qubit Werner state ``p |phi+><phi+| + (1 - p) I / 4``, valid for ``-1/3 <= p <= 1``."""
    p = float(p)
    if not -1 / 3 - 1e-12 <= p <= 1 + 1e-12:
        raise OutOfRange(f"Werner parameter {p} outside [-1/3, 1]")
    a, b, c = (1 + p) / 4, (1 - p) / 4, p / 2
    mat = np.array(
        [
            [a, 0, 0, c],
            [0, b, 0, 0],
            [0, 0, b, 0],
            [c, 0, 0, a],
        ],
        dtype=complex,
    )
    return DensityMatrix(mat, (2, 2))


def random_density(n: int, rank: int | None = None, rng=None, dims=None) -> DensityMatrix:
    """Random state ``G G^dagger / Tr(G G^dagger)`` with ``G`` an ``n x rank`` complex Gaussian."""
    rank = n if rank is None else int(rank)
    if not 1 <= rank <= n:
        raise OutOfRange(f"rank {rank} outside [1, {n}]")
    rng = as_rng(rng)
    G = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    M = G @ G.conj().T
    M = M / np.trace(M).real
    return DensityMatrix((M + M.conj().T) / 2, dims or (n,))


def _check_same_shape(r1: np.ndarray, r2: np.ndarray) -> None:
    if r1.shape != r2.shape:
        raise DimMismatch(f"shapes differ: {r1.shape} vs {r2.shape}")


def hs_distance_sq(rho1, rho2) -> float:
    """Hilbert-Schmidt distance ``Tr (rho1 - rho2)^2``."""
    r1, r2 = as_matrix(rho1), as_matrix(rho2)
    _check_same_shape(r1, r2)
    d = r1 - r2
    return float(metric_product(vec(d), vec(d)).real)


def sqrt_distance_sq(rho1, rho2) -> float:
    """``Tr (sqrt(rho1) - sqrt(rho2))^2``; raises ``NotPSD`` for non-positive input."""
    r1, r2 = as_matrix(rho1), as_matrix(rho2)
    _check_same_shape(r1, r2)
    d = mat_sqrt(r1) - mat_sqrt(r2)
    return float(np.trace(d @ d).real)


def _as_distribution(P) -> np.ndarray:
    P = np.asarray(P, dtype=float).reshape(-1)
    if np.any(P < 0) or abs(P.sum() - 1.0) > 1e-10:
        raise NotADistribution("entries must be >= 0 and sum to 1")
    return P


def prob_distance_sq(P1, P2) -> float:
    """Squared Euclidean distance between two probability vectors."""
    P1, P2 = _as_distribution(P1), _as_distribution(P2)
    if P1.shape != P2.shape:
        raise DimMismatch("distributions have different lengths")
    return float(np.sum((P1 - P2) ** 2))


def hellinger_sq(P1, P2) -> float:
    """``2 - 2 sum_k sqrt(P1(k) P2(k))``, a value in ``[0, 2]``."""
    P1, P2 = _as_distribution(P1), _as_distribution(P2)
    if P1.shape != P2.shape:
        raise DimMismatch("distributions have different lengths")
    return float(2.0 - 2.0 * np.sum(np.sqrt(P1 * P2)))


def _bipartite(rho, dims) -> tuple[np.ndarray, tuple]:
    dims = dims_of(rho, dims)
    if len(dims) != 2:
        raise NotBipartite(f"expected two subsystems, got dims {dims}")
    M = as_matrix(rho)
    if M.shape[0] != dims[0] * dims[1]:
        raise DimMismatch(f"matrix of size {M.shape[0]} does not match dims {dims}")
    return M, dims


def measure_e(rho, dims=None) -> float:
    """Intrinsic entanglement measure ``Tr (rho_AB - rho_A (x) rho_B)^2``."""
    M, dims = _bipartite(rho, dims)
    d = M - np.kron(partial_trace(M, dims, "B"), partial_trace(M, dims, "A"))
    return float(np.trace(d @ d.conj().T).real)


def measure_e_tilde(rho, dims=None) -> float:
    """``|| sqrt(rho) - Tr_B sqrt(rho) (x) Tr_A sqrt(rho) ||_HS^2``.

    The reduced square roots are not renormalized, so the value is not zero
    on mixed product states in general (it is ``1`` for ``I/4``).
    """
    M, dims = _bipartite(rho, dims)
    S = mat_sqrt(M)
    d = S - np.kron(partial_trace(S, dims, "B"), partial_trace(S, dims, "A"))
    return float(np.trace(d @ d.conj().T).real)
