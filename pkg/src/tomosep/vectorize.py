"""Matrix <-> vector maps and the superoperator algebra built on them.

A matrix ``M`` is flattened row by row, so ``vec(M)[i * cols + d] == M[i, d]``.
Under this convention ``vec(g M h) == (g (x) h^T) vec(M)``; every
superoperator formula below follows from that identity.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import LengthMismatch, ShapeMismatch, Singular
from .linalg import check_hermitian


def vec(M: np.ndarray) -> np.ndarray:
    """Row-major flattening of a matrix into a vector."""
    return np.asarray(M).reshape(-1).copy()


def devec(v: np.ndarray, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec`.

    With neither ``rows`` nor ``cols`` given the vector must have a square
    length and a square matrix is returned.
    """
    v = np.asarray(v).reshape(-1)
    if rows is None and cols is None:
        n = int(round(np.sqrt(v.size)))
        if n * n != v.size:
            raise LengthMismatch(f"length {v.size} is not a perfect square")
        rows = cols = n
    elif cols is None:
        cols = v.size // rows if rows else 0
    elif rows is None:
        rows = v.size // cols if cols else 0
    if rows * cols != v.size:
        raise LengthMismatch(f"cannot reshape length {v.size} into {rows}x{cols}")
    return v.reshape(rows, cols).copy()


@dataclass(frozen=True)
class Superoperator:
    """An ``n^2 x n^2`` matrix acting on row-major vectorized ``n x n`` matrices.

    ``provenance`` records how the matrix was built (``"left"``,
    ``"mixed-unitary"``, ``"kraus"``, ``"transpose"``, ``"local-product"``, ...).
    """

    mat: np.ndarray
    provenance: str = "generic"
    dims: tuple = field(default=())

    def __post_init__(self):
        mat = np.array(self.mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ShapeMismatch(f"superoperator must be square, got {mat.shape}")
        n = int(round(np.sqrt(mat.shape[0])))
        if n * n != mat.shape[0]:
            raise ShapeMismatch(f"size {mat.shape[0]} is not n^2")
        dims = tuple(int(d) for d in self.dims) if self.dims else (n,)
        if int(np.prod(dims)) != n:
            raise ShapeMismatch(f"dims {dims} do not multiply to {n}")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        """Dimension of the matrices this superoperator acts on."""
        return int(np.prod(self.dims))

    def apply(self, M: np.ndarray) -> np.ndarray:
        """``devec(L @ vec(M))``."""
        M = np.asarray(M)
        if M.shape != (self.n, self.n):
            raise ShapeMismatch(f"expected {self.n}x{self.n} input, got {M.shape}")
        return devec(self.mat @ vec(M), self.n, self.n)

    def __matmul__(self, other: "Superoperator") -> "Superoperator":
        if not isinstance(other, Superoperator):
            return NotImplemented
        if self.mat.shape != other.mat.shape:
            raise ShapeMismatch("cannot compose superoperators of different sizes")
        return Superoperator(self.mat @ other.mat, f"{self.provenance}*{other.provenance}", self.dims)

    def is_trace_preserving(self, atol: float = 1e-9) -> bool:
        # Tr M = vec(I) . vec(M), so TP means vec(I)^T L == vec(I)^T.
        ident = vec(np.eye(self.n))
        return bool(np.abs(ident @ self.mat - ident).max() <= atol)


def superop(g: np.ndarray, mode: str = "similarity") -> Superoperator:
    """Superoperator of ``M -> gM`` (left), ``M -> Mg`` (right) or ``M -> g M g^-1``."""
    g = np.asarray(g, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ShapeMismatch(f"g must be square, got {g.shape}")
    ident = np.eye(g.shape[0])
    if mode == "left":
        mat = np.kron(g, ident)
    elif mode == "right":
        mat = np.kron(ident, g.T)
    elif mode == "similarity":
        if abs(np.linalg.det(g)) < 1e-12:
            raise Singular("similarity superoperator needs an invertible g")
        mat = np.kron(g, np.linalg.inv(g).T)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Superoperator(mat, mode)


def reshuffle_C(*dims: int) -> np.ndarray:
    """Permutation taking ``vec(r1) (x) vec(r2) (x) ...`` to ``vec(r1 (x) r2 (x) ...)``.

    Defined by the index shuffle ``(i1, j1, i2, j2, ...) -> (i1, i2, ..., j1, j2, ...)``
    on elementary tensors. For two factors of equal size the matrix is
    symmetric and squares to the identity; in general its inverse is its
    transpose.
    """
    dims = [int(d) for d in dims]
    if not dims or min(dims) < 1:
        raise ShapeMismatch("dims must be positive")
    k = len(dims)
    total = int(np.prod(dims)) ** 2
    src_shape = [d for d in dims for _ in (0, 1)]
    src = np.arange(total).reshape(src_shape)
    # axes of src are (i1, j1, i2, j2, ...); reorder them to (i1, ..., ik, j1, ..., jk)
    order = [2 * a for a in range(k)] + [2 * a + 1 for a in range(k)]
    src_in_target_order = src.transpose(order).reshape(-1)
    P = np.zeros((total, total))
    P[np.arange(total), src_in_target_order] = 1.0
    return P


def metric_g(n: int) -> np.ndarray:
    """Metric on vectorized ``n x n`` matrices: the permutation ``vec(M) -> vec(M^T)``."""
    idx = np.arange(n * n).reshape(n, n).T.reshape(-1)
    P = np.zeros((n * n, n * n))
    P[np.arange(n * n), idx] = 1.0
    return P


def metric_product(v1: np.ndarray, v2: np.ndarray) -> complex:
    """Scalar product ``Tr(M1^dagger M2)`` written through the metric.

    The left factor enters as ``vec(M1^dagger)``; contracting it with
    ``g^{ab}`` and ``vec(M2)`` gives ``sum_ij (M1^dagger)_{ij} (M2)_{ji}``.
    """
    v1 = np.asarray(v1).reshape(-1)
    v2 = np.asarray(v2).reshape(-1)
    if v1.size != v2.size:
        raise LengthMismatch(f"lengths differ: {v1.size} vs {v2.size}")
    M1 = devec(v1)
    n = M1.shape[0]
    return complex(vec(M1.conj().T) @ metric_g(n) @ v2)


def preserves_metric(ell: np.ndarray, atol: float = 1e-10) -> bool:
    """Whether ``ell^-1 == g ell^dagger g`` for the transpose metric ``g``."""
    ell = np.asarray(ell, dtype=complex)
    n = int(round(np.sqrt(ell.shape[0])))
    g = metric_g(n)
    return bool(np.abs(np.linalg.inv(ell) - g @ ell.conj().T @ g).max() <= atol)


def vec_star(v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """Associative product of vectors induced by the matrix product."""
    v1 = np.asarray(v1).reshape(-1)
    v2 = np.asarray(v2).reshape(-1)
    try:
        M1, M2 = devec(v1), devec(v2)
    except LengthMismatch as exc:
        raise ShapeMismatch(str(exc)) from exc
    if M1.shape != M2.shape:
        raise ShapeMismatch(f"shapes differ: {M1.shape} vs {M2.shape}")
    return vec(M1 @ M2)


def real_map_S(n: int) -> np.ndarray:
    """Unitary taking ``vec(rho)`` of a Hermitian ``rho`` to a real vector.

    Diagonal entries pass through; each off-diagonal pair ``(rho_jk, rho_kj)``
    with ``j < k`` is mixed by ``[[1, 1], [-i, i]] / sqrt(2)`` into
    ``sqrt(2) Re rho_jk`` (at the ``(j, k)`` slot) and ``sqrt(2) Im rho_jk``
    (at the ``(k, j)`` slot).
    """
    S = np.zeros((n * n, n * n), dtype=complex)
    r2 = 1 / np.sqrt(2.0)
    for j in range(n):
        S[j * n + j, j * n + j] = 1.0
        for k in range(j + 1, n):
            a, b = j * n + k, k * n + j
            S[a, a], S[a, b] = r2, r2
            S[b, a], S[b, b] = -1j * r2, 1j * r2
    return S


def real_vec(rho: np.ndarray) -> np.ndarray:
    """Real coordinates ``S vec(rho)`` of a Hermitian matrix; the norm equals ``sqrt(Tr rho^2)``."""
    rho = check_hermitian(rho)
    v = real_map_S(rho.shape[0]) @ vec(rho)
    return v.real.copy()


def discrete_D(n: int) -> np.ndarray:
    """Sign flip of every imaginary coordinate of :func:`real_vec`; realizes ``rho -> rho^T``."""
    d = np.ones(n * n)
    for j in range(n):
        for k in range(j + 1, n):
            d[k * n + j] = -1.0
    return np.diag(d)
