"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays. The Hermitian eigensolver is a cyclic
complex Jacobi method so that every spectral verdict in the package goes
through one small, auditable routine; dimensions here never exceed a few
dozen.
"""

from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimMismatch, NoConvergence, NotHermitian, NotPSD

HERMITIAN_RTOL = 1e-12
CLAMP_WINDOW = 1e-10
MAX_SWEEPS = 100


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_rng(rng=None) -> np.random.Generator:
    """Return a ``numpy`` Generator from a seed, a Generator, or ``None``."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def check_hermitian(H: np.ndarray, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Validate Hermiticity and return the exactly symmetrized matrix."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {H.shape}")
    scale = max(1.0, float(np.abs(H).max(initial=0.0)))
    asym = float(np.abs(H - H.conj().T).max(initial=0.0))
    if asym > rtol * scale:
        raise NotHermitian(f"|H - H^dagger|_max = {asym:.3e} exceeds {rtol * scale:.3e}")
    return (H + H.conj().T) / 2


def _offdiag_norm(A: np.ndarray) -> float:
    off = A - np.diag(np.diag(A))
    return float(np.linalg.norm(off))


def herm_eig(H: np.ndarray, tol: float = 1e-13) -> EigenDecomposition:
    """Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi sweeps.

    Each rotation first removes the phase of the pivot ``A[p, q]`` with a
    diagonal unitary, then applies a real Givens rotation that zeroes it.
    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``tol * ||H||_F``.

    Args:
        H: square Hermitian matrix.
        tol: relative convergence threshold on the off-diagonal mass.

    Returns:
        ``EigenDecomposition`` with eigenvalues sorted in descending order
        (stable with respect to the Jacobi output order) and the matching
        orthonormal eigenvectors as columns.

    Raises:
        NotHermitian: if ``H`` is not Hermitian to ``1e-12`` relative.
        NoConvergence: if 100 sweeps do not reach the threshold.
    """
    A = check_hermitian(H).copy()
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    threshold = tol * float(np.linalg.norm(A))
    sweeps = 0
    while _offdiag_norm(A) > threshold:
        if sweeps == MAX_SWEEPS:
            raise NoConvergence(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = A[p, q]
                mag = abs(h)
                if mag == 0.0:
                    continue
                phase = h / mag
                app = A[p, p].real
                aqq = A[q, q].real
                zeta = (aqq - app) / (2.0 * mag)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                G = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = G.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ G
    lam = np.diag(A).real.copy()
    order = np.argsort(-lam, kind="stable")
    return EigenDecomposition(lam[order], V[:, order])


def eigvalsh(H: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of a Hermitian matrix."""
    return herm_eig(H).eigenvalues


def _clamped_spectrum(rho: np.ndarray) -> EigenDecomposition:
    lam, V = herm_eig(rho)
    if lam.size and lam[-1] < -CLAMP_WINDOW:
        raise NotPSD(f"minimum eigenvalue {lam[-1]:.3e} below -{CLAMP_WINDOW:g}")
    return EigenDecomposition(np.where(lam < 0.0, 0.0, lam), V)


def mat_sqrt(rho: np.ndarray) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix.

    Eigenvalues in ``[-1e-10, 0)`` are treated as zero; anything more
    negative raises ``NotPSD``.
    """
    lam, V = _clamped_spectrum(rho)
    S = (V * np.sqrt(lam)) @ V.conj().T
    return (S + S.conj().T) / 2


def tensor(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product ``A (x) B (x) ...`` with the block layout ``A[i, j] * B``."""
    out = np.array([[1.0 + 0j]])
    for M in mats:
        out = np.kron(out, np.asarray(M))
    return out


def _subsystem_index(which, count: int) -> int:
    if isinstance(which, str):
        idx = "ABCDEFGH".find(which.upper())
        if len(which) != 1 or idx < 0:
            raise DimMismatch(f"unknown subsystem label {which!r}")
    else:
        idx = int(which)
    if not 0 <= idx < count:
        raise DimMismatch(f"subsystem {which!r} out of range for {count} factors")
    return idx


def _as_blocks(rho: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    rho = np.asarray(rho)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimMismatch(f"matrix shape {rho.shape} does not match dims {tuple(dims)}")
    return rho.reshape(tuple(dims) * 2)


def partial_trace(rho: np.ndarray, dims: Sequence[int], which="B") -> np.ndarray:
    """Trace out subsystem ``which`` (``'A'``, ``'B'``, ... or an index)."""
    dims = [int(d) for d in dims]
    k = _subsystem_index(which, len(dims))
    t = _as_blocks(rho, dims)
    t = np.trace(t, axis1=k, axis2=k + len(dims))
    rest = int(np.prod(dims)) // dims[k]
    return t.reshape(rest, rest)


def partial_transpose(rho: np.ndarray, dims: Sequence[int], which="B") -> np.ndarray:
    """Transpose the indices of one subsystem; an exact entry permutation."""
    dims = [int(d) for d in dims]
    k = _subsystem_index(which, len(dims))
    t = _as_blocks(rho, dims)
    axes = list(range(2 * len(dims)))
    axes[k], axes[k + len(dims)] = axes[k + len(dims)], axes[k]
    total = int(np.prod(dims))
    return t.transpose(axes).reshape(total, total)


def _mgs(Z: np.ndarray) -> np.ndarray:
    n = Z.shape[1]
    Q = Z.copy()
    for k in range(n):
        v = Q[:, k]
        for j in range(k):
            v = v - (Q[:, j].conj() @ v) * Q[:, j]
        Q[:, k] = v / np.linalg.norm(v)
    return Q


def haar_unitary(n: int, rng=None) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary.

    A Ginibre matrix is orthonormalized column by column with modified
    Gram-Schmidt (run twice to hold unitarity at roundoff level). Gram-Schmidt
    produces a positive ``R`` diagonal, which is the phase convention that
    makes the result Haar distributed.
    """
    if n < 1:
        raise DimMismatch("n must be >= 1")
    rng = as_rng(rng)
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    # The second pass only corrects roundoff; its R factor is ~identity with
    # positive diagonal, so the distribution is unchanged.
    return _mgs(_mgs(Z))


def is_psd(A: np.ndarray, tol: float = 1e-9) -> tuple[bool, float]:
    """Return ``(min_eig >= -tol, min_eig)`` for a Hermitian matrix."""
    lam = herm_eig(A).eigenvalues
    min_eig = float(lam[-1])
    return min_eig >= -tol, min_eig


def is_unitary(U: np.ndarray, atol: float = 1e-10) -> bool:
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return bool(np.abs(U.conj().T @ U - np.eye(U.shape[0])).max() <= atol)
