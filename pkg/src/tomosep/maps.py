"""Positive maps on density matrices and their superoperator matrices.

Covers mixed-unitary and Kraus channels, differences of Kraus sums (positive
but not completely positive maps), the transpose, the qubit semigroup
``<u (x) u*>`` built from weighted SU(2) samples, local product maps on
composite systems, purification of unitary mixtures, and the real quadratic
form picture of a Hermitian matrix.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateFiducial,
    DimMismatch,
    IncompleteKraus,
    InvalidState,
    NormalizationFail,
    NotUnitary,
    ShapeMismatch,
)
from .linalg import as_rng, check_hermitian, haar_unitary, is_unitary, tensor
from .states import SIGMA, DensityMatrix, as_matrix, dims_of
from .vectorize import Superoperator, reshuffle_C

KRAUS_TOL = 1e-9


@dataclass(frozen=True)
class MixedUnitaryMap:
    """``rho -> sum_k p_k U_k rho U_k^dagger``."""

    weights: tuple
    unitaries: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        us = tuple(np.asarray(u, dtype=complex) for u in self.unitaries)
        if len(us) != w.size or w.size == 0:
            raise ValueError("need one weight per unitary")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be non-negative and sum to 1")
        for u in us:
            if not is_unitary(u, 1e-10):
                raise NotUnitary("mixed-unitary map contains a non-unitary matrix")
        object.__setattr__(self, "weights", tuple(w))
        object.__setattr__(self, "unitaries", us)

    @property
    def n(self) -> int:
        return self.unitaries[0].shape[0]

    def as_kraus(self) -> "KrausMap":
        return KrausMap(tuple(np.sqrt(p) * u for p, u in zip(self.weights, self.unitaries)))


@dataclass(frozen=True)
class KrausMap:
    """``rho -> sum_k V_k rho V_k^dagger`` with ``sum_k V_k^dagger V_k = I``."""

    kraus_ops: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(v, dtype=complex) for v in self.kraus_ops)
        if not ops:
            raise IncompleteKraus("empty Kraus set")
        n = ops[0].shape[0]
        if any(v.shape != (n, n) for v in ops):
            raise ShapeMismatch("Kraus operators must all be n x n")
        defect = np.abs(sum(v.conj().T @ v for v in ops) - np.eye(n)).max()
        if defect > KRAUS_TOL:
            raise IncompleteKraus(f"sum V^dagger V deviates from I by {defect:.3e}")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def n(self) -> int:
        return self.kraus_ops[0].shape[0]


def _check_input(rho, n: int) -> tuple[np.ndarray, tuple]:
    M = as_matrix(rho)
    if M.shape != (n, n):
        raise DimMismatch(f"state is {M.shape[0]}-dimensional, map acts on {n}")
    return M, dims_of(rho)


def apply_mixed_unitary(rho, channel: MixedUnitaryMap) -> DensityMatrix:
    M, dims = _check_input(rho, channel.n)
    out = sum(p * u @ M @ u.conj().T for p, u in zip(channel.weights, channel.unitaries))
    return DensityMatrix(out, dims)


def apply_kraus(rho, channel: KrausMap) -> DensityMatrix:
    M, dims = _check_input(rho, channel.n)
    out = sum(v @ M @ v.conj().T for v in channel.kraus_ops)
    return DensityMatrix(out, dims)


def unitary_channel(u: np.ndarray) -> Superoperator:
    """``u (x) u*``, the superoperator of ``rho -> u rho u^dagger``."""
    u = np.asarray(u, dtype=complex)
    return Superoperator(np.kron(u, u.conj()), "unitary")


def superop_of(channel) -> Superoperator:
    """Superoperator matrix ``sum_k p_k U_k (x) U_k*`` or ``sum_k V_k (x) V_k*``."""
    if isinstance(channel, MixedUnitaryMap):
        mat = sum(p * np.kron(u, u.conj()) for p, u in zip(channel.weights, channel.unitaries))
        return Superoperator(mat, "mixed-unitary")
    if isinstance(channel, KrausMap):
        return Superoperator(sum(np.kron(v, v.conj()) for v in channel.kraus_ops), "kraus")
    raise TypeError(f"unsupported map type {type(channel).__name__}")


def noncp_difference(plus: Sequence[np.ndarray], minus: Sequence[np.ndarray] = ()) -> Superoperator:
    """``sum V (x) V* - sum v (x) v*`` subject to ``sum V^dagger V - sum v^dagger v = I``.

    The result is trace preserving and Hermiticity preserving but in general
    not positive.
    """
    plus = [np.asarray(v, dtype=complex) for v in plus]
    minus = [np.asarray(v, dtype=complex) for v in minus]
    if not plus:
        raise NormalizationFail("need at least one positive term")
    n = plus[0].shape[0]
    if any(v.shape != (n, n) for v in plus + minus):
        raise ShapeMismatch("all operators must be n x n")
    norm = sum(v.conj().T @ v for v in plus) - sum((v.conj().T @ v for v in minus), np.zeros((n, n)))
    defect = np.abs(norm - np.eye(n)).max()
    if defect > KRAUS_TOL:
        raise NormalizationFail(f"normalization deviates from I by {defect:.3e}")
    mat = sum(np.kron(v, v.conj()) for v in plus)
    if minus:
        mat = mat - sum(np.kron(v, v.conj()) for v in minus)
        return Superoperator(mat, "non-cp")
    return Superoperator(mat, "kraus")


def epsilon_map(eps: float, n: int) -> Superoperator:
    """``rho -> -eps rho + (1 + eps) / n * Tr(rho) I`` as a difference of Kraus sums.

    The positive part is the completely depolarizing channel scaled by
    ``1 + eps`` (Kraus operators ``sqrt((1 + eps) / n) E_jk``), the negative
    part is ``sqrt(eps) I``.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    plus = []
    for j in range(n):
        for k in range(n):
            E = np.zeros((n, n))
            E[j, k] = 1.0
            plus.append(np.sqrt((1 + eps) / n) * E)
    minus = [np.sqrt(eps) * np.eye(n)] if eps > 0 else []
    return noncp_difference(plus, minus)


def transpose_superop(n: int) -> Superoperator:
    """Permutation superoperator ``vec(rho) -> vec(rho^T)``."""
    idx = np.arange(n * n).reshape(n, n).T.reshape(-1)
    P = np.zeros((n * n, n * n))
    P[np.arange(n * n), idx] = 1.0
    return Superoperator(P, "transpose")


# qubit semigroup <u (x) u*> -------------------------------------------------


def su2(alpha: complex, beta: complex) -> np.ndarray:
    """``[[alpha, beta], [-beta*, alpha*]]``."""
    return np.array([[alpha, beta], [-np.conj(beta), np.conj(alpha)]], dtype=complex)


@dataclass(frozen=True)
class QubitSemigroupParams:
    """The five ensemble means that fix a qubit semigroup element.

    ``ell = <|alpha|^2>``, ``m = <alpha beta*>``, ``n = <alpha beta>``,
    ``s = <alpha^2>``, ``q = <beta^2>``.
    """

    ell: float
    m: complex
    n: complex
    s: complex
    q: complex

    def __post_init__(self):
        if not -1e-12 <= self.ell <= 1 + 1e-12:
            raise ValueError(f"ell = {self.ell} outside [0, 1]")
        for name in ("m", "n", "s", "q"):
            if abs(getattr(self, name)) > 1 + 1e-12:
                raise ValueError(f"|{name}| exceeds 1")

    def matrix(self) -> np.ndarray:
        """The 4x4 semigroup matrix assembled from the means."""
        ell, m, n, s, q = self.ell, self.m, self.n, self.s, self.q
        mc, nc, sc, qc = np.conj(m), np.conj(n), np.conj(s), np.conj(q)
        return np.array(
            [
                [ell, m, mc, 1 - ell],
                [-n, s, -q, n],
                [-nc, -qc, sc, nc],
                [1 - ell, -m, -mc, ell],
            ],
            dtype=complex,
        )

    def determinant(self) -> float:
        """Closed-form determinant of :meth:`matrix`."""
        ell, m, n, s, q = self.ell, self.m, self.n, self.s, self.q
        cross = np.conj(q) * np.conj(m) * n + m * n * np.conj(s)
        return float((1 - 2 * ell) * (abs(q) ** 2 - abs(s) ** 2) + 4 * cross.real)


def qubit_semigroup_sample(weights, alphas, betas) -> tuple[Superoperator, QubitSemigroupParams]:
    """Semigroup element ``<u (x) u*>`` for a weighted set of SU(2) matrices.

    Each sample is ``su2(alpha_k, beta_k)`` with ``|alpha|^2 + |beta|^2 = 1``.
    """
    w = np.asarray(weights, dtype=float).reshape(-1)
    a = np.asarray(alphas, dtype=complex).reshape(-1)
    b = np.asarray(betas, dtype=complex).reshape(-1)
    if not (w.size == a.size == b.size) or w.size == 0:
        raise ValueError("weights, alphas and betas must have equal non-zero length")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be non-negative and sum to 1")
    if np.abs(np.abs(a) ** 2 + np.abs(b) ** 2 - 1.0).max() > 1e-10:
        raise NotUnitary("samples must satisfy |alpha|^2 + |beta|^2 = 1")
    params = QubitSemigroupParams(
        ell=float(np.sum(w * np.abs(a) ** 2)),
        m=complex(np.sum(w * a * b.conj())),
        n=complex(np.sum(w * a * b)),
        s=complex(np.sum(w * a * a)),
        q=complex(np.sum(w * b * b)),
    )
    return Superoperator(params.matrix(), "mixed-unitary"), params


def random_su2_ensemble(k: int, rng=None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``k`` Haar SU(2) samples (uniform on the 3-sphere) with Dirichlet(1) weights."""
    rng = as_rng(rng)
    x = rng.standard_normal((k, 4))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return rng.dirichlet(np.ones(k)), x[:, 0] + 1j * x[:, 1], x[:, 2] + 1j * x[:, 3]


def semigroup_blocks(L) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    M = L.mat if isinstance(L, Superoperator) else np.asarray(L)
    return M[:2, :2], M[:2, 2:], M[2:, :2], M[2:, 2:]


def block_relation_defect(L) -> float:
    """Largest violation of ``D = s2 A* s2`` and ``C = -s2 B* s2``."""
    A, B, C, D = semigroup_blocks(L)
    s2 = SIGMA[1]
    return float(max(np.abs(D - s2 @ A.conj() @ s2).max(), np.abs(C + s2 @ B.conj() @ s2).max()))


# composite systems ----------------------------------------------------------


def _part_matrix(part) -> np.ndarray:
    return part.mat if isinstance(part, Superoperator) else np.asarray(part, dtype=complex)


def local_product_superop(parts: Sequence, dims: Sequence[int] | None = None) -> Superoperator:
    """``C (L_1 (x) L_2 (x) ...) C^T`` acting on ``vec`` of the composite state.

    ``C`` is :func:`reshuffle_C`; for two equal factors ``C^T = C``.
    """
    mats = [_part_matrix(p) for p in parts]
    sub = []
    for M in mats:
        d = int(round(np.sqrt(M.shape[0])))
        if M.shape != (d * d, d * d):
            raise DimMismatch(f"part of shape {M.shape} is not a superoperator")
        sub.append(d)
    if dims is not None and tuple(int(d) for d in dims) != tuple(sub):
        raise DimMismatch(f"parts act on dims {tuple(sub)}, expected {tuple(dims)}")
    C = reshuffle_C(*sub)
    return Superoperator(C @ tensor(*mats) @ C.T, "local-product", tuple(sub))


def local_mixture_superop(weights: Sequence[float], terms: Sequence[Sequence]) -> Superoperator:
    """``sum_s p_s C (L_s^(1) (x) L_s^(2) (x) ...) C^T``."""
    w = np.asarray(weights, dtype=float).reshape(-1)
    if len(terms) != w.size or np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be a probability vector matching the terms")
    ops = [local_product_superop(t) for t in terms]
    if len({op.dims for op in ops}) != 1:
        raise DimMismatch("all terms must act on the same subsystem dims")
    return Superoperator(sum(p * op.mat for p, op in zip(w, ops)), "local-product", ops[0].dims)


def random_mixed_unitary_superop(n: int, rng=None, max_terms: int = 4) -> Superoperator:
    """Mixture of 1..``max_terms`` Haar unitary channels with Dirichlet(1) weights."""
    rng = as_rng(rng)
    k = int(rng.integers(1, max_terms + 1))
    w = rng.dirichlet(np.ones(k))
    us = [haar_unitary(n, rng) for _ in range(k)]
    return superop_of(MixedUnitaryMap(tuple(w), tuple(us)))


# purification ---------------------------------------------------------------


def purify(weights: Sequence[float], states: Sequence, fiducial) -> DensityMatrix:
    """Rank-one state built from a mixture ``sum_k p_k rho_k`` and a fiducial projector.

    ``N sum_kj sqrt(p_k p_j) rho_k P0 rho_j / sqrt(Tr rho_k P0 rho_j P0)``
    with ``N`` fixing the trace to one.
    """
    w = np.asarray(weights, dtype=float).reshape(-1)
    mats = [as_matrix(s) for s in states]
    P0 = as_matrix(fiducial)
    if len(mats) != w.size or w.size == 0:
        raise ValueError("need one weight per state")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be non-negative and sum to 1")
    if np.abs(P0 @ P0 - P0).max() > 1e-10 or abs(np.trace(P0).real - 1.0) > 1e-10:
        raise InvalidState("fiducial must be a rank-one projector")
    acc = np.zeros_like(P0)
    for pk, rk in zip(w, mats):
        for pj, rj in zip(w, mats):
            overlap = np.trace(rk @ P0 @ rj @ P0)
            if abs(overlap) <= 1e-14:
                raise DegenerateFiducial("fiducial projector has vanishing overlap with a component")
            acc = acc + np.sqrt(pk * pj) * (rk @ P0 @ rj) / np.sqrt(overlap)
    norm = np.trace(acc)
    if abs(norm) <= 1e-14:
        raise DegenerateFiducial("purified operator has zero trace")
    out = acc / norm
    return DensityMatrix((out + out.conj().T) / 2, dims_of(states[0]))


# real quadratic forms -------------------------------------------------------


def quad_form(rho) -> np.ndarray:
    """Real ``2n x 2n`` matrix ``[[r, R], [R^T, r]]`` with ``r = Re rho`` and ``R = Im rho``."""
    M = check_hermitian(as_matrix(rho))
    r, R = M.real, M.imag
    return np.block([[r, R], [R.T, r]])


def quad_eval(D: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    """``(x, y) D (x, y)^T``.

    For ``D = quad_form(rho)`` this is ``z^dagger rho z`` with ``z = x - i y``
    (equivalently ``z^dagger rho^T z`` with ``z = x + i y``).
    """
    xy = np.concatenate([np.asarray(x, dtype=float), np.asarray(y, dtype=float)])
    return float(xy @ np.asarray(D) @ xy)


_PERES_N3 = np.diag([1.0, 1.0, -1.0])


def peres_like_n3(rho) -> tuple[np.ndarray, np.ndarray]:
    """``(a rho a^T, a rho^T a^T)`` with ``a = diag(1, 1, -1)``.

    The first flips the signs of the third row and column off the diagonal,
    the second does the same after transposing.
    """
    M = check_hermitian(as_matrix(rho))
    if M.shape != (3, 3):
        raise ShapeMismatch(f"expected a 3x3 matrix, got {M.shape}")
    a = _PERES_N3
    return a @ M @ a.T, a @ M.T @ a.T


def coshsinh_map(rho, theta: float, phases: Sequence[float]) -> np.ndarray:
    """Entrywise ``rho_jk -> rho_jk (cosh^2 t cos(t_j - t_k) - sinh^2 t delta_jk)``.

    Trace preserving and Hermiticity preserving, but not positive: the
    multiplier matrix has a negative eigenvalue whenever ``theta != 0`` and
    ``n >= 3``.
    """
    M = check_hermitian(as_matrix(rho))
    ph = np.asarray(phases, dtype=float).reshape(-1)
    if ph.size != M.shape[0]:
        raise ShapeMismatch(f"need {M.shape[0]} phases, got {ph.size}")
    mult = np.cosh(theta) ** 2 * np.cos(ph[:, None] - ph[None, :]) - np.sinh(theta) ** 2 * np.eye(ph.size)
    return M * mult


__all__ = [
    "KrausMap",
    "MixedUnitaryMap",
    "QubitSemigroupParams",
    "apply_kraus",
    "apply_mixed_unitary",
    "block_relation_defect",
    "coshsinh_map",
    "epsilon_map",
    "local_mixture_superop",
    "local_product_superop",
    "noncp_difference",
    "peres_like_n3",
    "purify",
    "quad_eval",
    "quad_form",
    "qubit_semigroup_sample",
    "random_mixed_unitary_superop",
    "random_su2_ensemble",
    "semigroup_blocks",
    "su2",
    "superop_of",
    "transpose_superop",
    "unitary_channel",
]
