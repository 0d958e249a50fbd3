"""Entanglement witnesses and separable decompositions.

Every test here is one-sided: a negative outcome after a positive map (or a
tomographic sum exceeding one) proves entanglement, while passing only means
the state is consistent with being separable. Verdicts therefore never say
"separable".
"""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BadMap, BadMapSample, DimMismatch, NonpositiveTrace, NotUnitary, PatternMismatch
from .linalg import as_rng, check_hermitian, haar_unitary, herm_eig, is_unitary, partial_transpose, tensor
from .maps import local_product_superop, random_mixed_unitary_superop, transpose_superop
from .states import DensityMatrix, _bipartite, as_matrix, dims_of, from_bloch, product_state
from .tomography import bipartite_tomogram, direction_grid, un_tomogram_values
from .vectorize import Superoperator

SEPARABLE_CONSISTENT = "SEPARABLE-CONSISTENT"
ENTANGLED_WITNESSED = "ENTANGLED-WITNESSED"
WITNESS_TOL = 1e-9


@dataclass(frozen=True)
class Verdict:
    """Outcome of a separability test.

    ``margin`` is signed the way each test naturally reports it: eigenvalue
    tests give the smallest eigenvalue (negative when witnessed), sum-of-moduli
    tests give the excess over the trace (positive when witnessed).
    """

    flag: str
    margin: float
    witness: str = ""
    tol: float = WITNESS_TOL
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.flag not in (SEPARABLE_CONSISTENT, ENTANGLED_WITNESSED):
            raise ValueError(f"unknown verdict {self.flag!r}")
        if self.flag == ENTANGLED_WITNESSED and not abs(self.margin) > self.tol:
            raise ValueError("an entanglement witness needs a margin beyond the tolerance")

    @property
    def entangled(self) -> bool:
        return self.flag == ENTANGLED_WITNESSED


def _eigen_verdict(min_eig: float, tol: float, witness: str, **details) -> Verdict:
    flag = ENTANGLED_WITNESSED if min_eig < -tol else SEPARABLE_CONSISTENT
    return Verdict(flag, float(min_eig), witness if flag == ENTANGLED_WITNESSED else "", tol, details)


def ppt_test(rho, dims=None, which="B", tol: float = WITNESS_TOL) -> tuple[float, Verdict]:
    """Smallest eigenvalue of the partial transpose and the resulting verdict."""
    M, dims = _bipartite(rho, dims)
    min_eig = float(herm_eig(partial_transpose(M, dims, which)).eigenvalues[-1])
    return min_eig, _eigen_verdict(min_eig, tol, f"partial transpose on {which} has eigenvalue {min_eig:.6g}")


_BLOCK_SUPPORT = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1, 1, 0],
        [1, 0, 0, 1],
    ],
    dtype=bool,
)


def block_inequalities(rho, tol: float = WITNESS_TOL) -> Verdict:
    """Two-qubit X-shaped states: ``R11 R22 >= |r12|^2`` and ``r11 r22 >= |R12|^2``.

    ``R`` is the outer block (indices 0 and 3), ``r`` the inner block (1 and 2).
    Both inequalities are the positivity conditions of the partial transpose.
    """
    M = as_matrix(rho)
    if M.shape != (4, 4):
        raise PatternMismatch(f"expected a 4x4 matrix, got {M.shape}")
    stray = float(np.abs(M[~_BLOCK_SUPPORT]).max())
    if stray > 1e-12:
        raise PatternMismatch(f"entry of size {stray:.3e} outside the X pattern")
    outer = M[0, 0].real * M[3, 3].real - abs(M[1, 2]) ** 2
    inner = M[1, 1].real * M[2, 2].real - abs(M[0, 3]) ** 2
    margin = float(min(outer, inner))
    which = "R11 R22 >= |r12|^2" if outer <= inner else "r11 r22 >= |R12|^2"
    return _eigen_verdict(margin, tol, f"violates {which} by {-margin:.6g}", outer=float(outer), inner=float(inner))


# local positive maps --------------------------------------------------------


def sample_local_map(d: int, rng=None, max_terms: int = 4, transpose: bool | None = None) -> Superoperator:
    """Mixture of Haar unitary channels on a ``d``-level system, optionally followed by a transpose.

    When ``transpose`` is None the choice is a fair coin.
    """
    rng = as_rng(rng)
    L = random_mixed_unitary_superop(d, rng, max_terms)
    if transpose is None:
        transpose = bool(rng.integers(2))
    if transpose:
        L = transpose_superop(d) @ L
    return L


def identity_superop(d: int) -> Superoperator:
    return Superoperator(np.eye(d * d), "identity")


def peres_maps(dims: Sequence[int], which: int = -1) -> tuple:
    """Identity on every factor except a transpose on factor ``which``."""
    dims = [int(d) for d in dims]
    k = which % len(dims)
    return tuple(transpose_superop(d) if i == k else identity_superop(d) for i, d in enumerate(dims))


def sample_map_pool(dims: Sequence[int], count: int, rng=None, include_peres: bool = True) -> list[tuple]:
    """Per-subsystem positive maps: optional Peres entries followed by ``count`` random samples."""
    rng = as_rng(rng)
    dims = [int(d) for d in dims]
    pool = [peres_maps(dims, k) for k in range(len(dims))] if include_peres else []
    for _ in range(count):
        pool.append(tuple(sample_local_map(d, rng) for d in dims))
    return pool


def _validate_parts(parts, dims) -> tuple:
    parts = tuple(parts)
    if len(parts) != len(dims):
        raise BadMapSample(f"{len(parts)} maps for {len(dims)} subsystems")
    for L, d in zip(parts, dims):
        if not isinstance(L, Superoperator) or L.n != d:
            raise BadMapSample(f"map does not act on a {d}-level subsystem")
        if not L.is_trace_preserving():
            raise BadMapSample(f"{L.provenance} map is not trace preserving")
    return parts


def _describe(parts) -> str:
    return " (x) ".join(L.provenance for L in parts)


def positive_map_criterion(rho, dims, map_samples: Sequence, tol: float = WITNESS_TOL) -> Verdict:
    """Apply ``C (L_A (x) L_B (x) ...) C^T`` for every sample; any negative eigenvalue witnesses entanglement."""
    M = as_matrix(rho)
    dims = dims_of(rho, dims)
    if int(np.prod(dims)) != M.shape[0]:
        raise DimMismatch(f"dims {dims} do not match size {M.shape[0]}")
    worst, worst_idx = np.inf, -1
    for idx, parts in enumerate(map_samples):
        parts = _validate_parts(parts, dims)
        out = local_product_superop(parts).apply(M)
        lam = float(herm_eig((out + out.conj().T) / 2).eigenvalues[-1])
        if lam < worst:
            worst, worst_idx = lam, idx
    if worst_idx < 0:
        raise BadMapSample("empty map sample list")
    witness = f"sample {worst_idx} ({_describe(map_samples[worst_idx])}) gives eigenvalue {worst:.6g}"
    return _eigen_verdict(worst, tol, witness, sample=worst_idx, samples=len(map_samples))


# separable decompositions ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class SeparableEnsemble:
    """``sum_k p_k rho_k^(1) (x) rho_k^(2) (x) ...``."""

    weights: tuple
    factors: tuple  # one tuple of DensityMatrix per term

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if np.any(w < 0) or np.any(w > 1) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must lie in [0, 1] and sum to 1")
        terms = tuple(tuple(f if isinstance(f, DensityMatrix) else DensityMatrix(f) for f in t) for t in self.factors)
        if len(terms) != w.size or not terms:
            raise ValueError("one factor tuple per weight required")
        shapes = {tuple(f.n for f in t) for t in terms}
        if len(shapes) != 1:
            raise DimMismatch("all terms must have the same subsystem dims")
        object.__setattr__(self, "weights", tuple(w))
        object.__setattr__(self, "factors", terms)

    @property
    def dims(self) -> tuple:
        return tuple(f.n for f in self.factors[0])

    def matrix(self) -> np.ndarray:
        return sum(p * tensor(*(f.mat for f in t)) for p, t in zip(self.weights, self.factors))

    def state(self) -> DensityMatrix:
        return DensityMatrix(self.matrix(), self.dims)


_AXES = np.eye(3)


def werner_ensemble(p: float) -> SeparableEnsemble:
    """Explicit product-state mixture equal to ``werner(p)`` for ``|p| <= 1/3``.

    Terms: ``I/2 (x) I/2`` with weight ``(1 - 3|p|)/4``; the four
    computational-basis products with ``3(1 - 3|p|)/16`` each; and for every
    axis ``i`` and sign ``s`` the pair of Bloch states ``(s e_i, s c_i e_i)``
    with weight ``|p|/2``, where ``c = (1, -1, 1)`` reproduces the
    correlations of ``phi+`` (``c`` flips sign for negative ``p``).
    """
    p = float(p)
    if abs(p) > 1 / 3 + 1e-12:
        raise ValueError(f"no separable decomposition for |p| = {abs(p)} > 1/3")
    a = min(abs(p), 1 / 3)
    rest = max(1 - 3 * a, 0.0)
    c = np.array([1.0, -1.0, 1.0]) * (1.0 if p >= 0 else -1.0)
    half = DensityMatrix(np.eye(2) / 2)
    weights = [rest / 4]
    factors = [(half, half)]
    for b0 in (0, 1):
        for b1 in (0, 1):
            weights.append(3 * rest / 16)
            factors.append((from_bloch([0, 0, 1 - 2 * b0]), from_bloch([0, 0, 1 - 2 * b1])))
    for i in range(3):
        for s in (1.0, -1.0):
            weights.append(a / 2)
            factors.append((from_bloch(s * _AXES[i]), from_bloch(s * c[i] * _AXES[i])))
    return SeparableEnsemble(tuple(weights), tuple(factors))


def decomposition_residual(ens: SeparableEnsemble, rho) -> float:
    M = as_matrix(rho)
    S = ens.matrix()
    if S.shape != M.shape:
        raise DimMismatch(f"ensemble has size {S.shape[0]}, state {M.shape[0]}")
    return float(np.abs(S - M).max())


def check_decomposition(ens: SeparableEnsemble, rho, tol: float = 1e-12, grid=None) -> bool:
    """Whether ``ens`` reproduces ``rho`` entrywise and in every two-spin tomogram.

    The tomographic comparison (joint probability vs. ``sum_k p_k W_k W~_k``)
    runs over ``grid`` directions on both subsystems, for bipartite ensembles.
    """
    if decomposition_residual(ens, rho) > tol:
        return False
    if len(ens.dims) != 2:
        return True
    j1, j2 = [(d - 1) / 2 for d in ens.dims]
    grid = direction_grid(3, 4) if grid is None else grid
    M = as_matrix(rho)
    ttol = max(tol, 1e-10)
    for o1 in grid:
        for o2 in grid:
            joint = bipartite_tomogram(M, j1, j2, o1, o2).probs
            mix = sum(
                p * bipartite_tomogram(product_state(fa, fb), j1, j2, o1, o2).probs
                for p, (fa, fb) in zip(ens.weights, ens.factors)
            )
            if np.abs(joint - mix).max() > ttol:
                return False
    return True


# F functional ---------------------------------------------------------------


def _check_map(L: Superoperator, n: int) -> None:
    if not isinstance(L, Superoperator):
        raise BadMap("L must be a Superoperator")
    if L.n != n:
        raise BadMap(f"L acts on {L.n}-dimensional matrices, state is {n}-dimensional")
    if not L.is_trace_preserving():
        raise BadMap("L is not trace preserving")


def F_function(rho, dims, g: np.ndarray, L: Superoperator) -> float:
    """``sum_m |<m| g^dagger rho_L g |m>|`` with ``rho_L = devec(L vec rho)``."""
    M = as_matrix(rho)
    g = np.asarray(g, dtype=complex)
    _check_map(L, M.shape[0])
    if not is_unitary(g, 1e-10) or g.shape != M.shape:
        raise NotUnitary("g must be a unitary of the state's size")
    return float(np.abs(un_tomogram_values(L.apply(M), g)).sum())


@dataclass(frozen=True, eq=False)
class FMaxResult:
    value: float
    parts: tuple
    g: np.ndarray
    evaluated: int

    @property
    def witness(self) -> str:
        return f"{_describe(self.parts)}, unitary diagonalizing rho_L"


def F_max(rho, dims=None, n_maps: int = 50, n_unitaries: int = 10, rng=None, include_transpose: bool = True) -> FMaxResult:
    """Largest ``F`` over a pool of local positive maps.

    For each map the maximum over ``g`` is the trace norm of ``rho_L`` (reached
    at its eigenbasis); ``n_unitaries`` Haar draws per map are evaluated as well
    and can only confirm that bound.
    """
    rng = as_rng(rng)
    M = as_matrix(rho)
    dims = dims_of(rho, dims)
    if int(np.prod(dims)) != M.shape[0]:
        raise DimMismatch(f"dims {dims} do not match size {M.shape[0]}")
    if include_transpose:
        pool = sample_map_pool(dims, n_maps, rng)
    else:
        pool = [tuple(identity_superop(d) for d in dims)]
        pool += [tuple(sample_local_map(d, rng, transpose=False) for d in dims) for _ in range(n_maps)]
    n = M.shape[0]
    best = FMaxResult(-np.inf, (), np.eye(n), 0)
    count = 0
    for parts in pool:
        L = local_product_superop(parts)
        rho_L = L.apply(M)
        lam, V = herm_eig((rho_L + rho_L.conj().T) / 2)
        value = float(np.abs(lam).sum())
        g = V
        for _ in range(n_unitaries):
            u = haar_unitary(n, rng)
            f = F_function(M, dims, u, L)
            if f > value:
                value, g = f, u
        count += 1 + n_unitaries
        if value > best.value:
            best = FMaxResult(value, parts, g, count)
    return FMaxResult(best.value, best.parts, best.g, count)


def positivity_diag_criterion(A, n_samples: int = 100, rng=None, tol: float = WITNESS_TOL) -> Verdict:
    """Witness non-positivity of ``A`` by ``sum |diag(U A U^dagger)| > Tr A``.

    The eigenbasis of ``A`` is always one of the samples, which makes the test
    exact: there the sum is ``sum |lambda|``, larger than ``Tr A`` iff some
    eigenvalue is negative.
    """
    A = check_hermitian(np.asarray(A, dtype=complex))
    tr = float(np.trace(A).real)
    if tr <= 0:
        raise NonpositiveTrace(f"Tr A = {tr:.6g} is not positive")
    rng = as_rng(rng)
    V = herm_eig(A).eigenvectors
    unitaries = [V.conj().T] + [haar_unitary(A.shape[0], rng) for _ in range(n_samples)]
    sums = [float(np.abs(np.einsum("ij,jk,ik->i", U, A, U.conj())).sum()) for U in unitaries]
    k = int(np.argmax(sums))
    excess = sums[k] - tr
    if excess > tol:
        src = "eigenbasis" if k == 0 else f"random unitary {k}"
        return Verdict(ENTANGLED_WITNESSED, excess, f"{src} gives sum |diag| = {sums[k]:.6g} > Tr A = {tr:.6g}", tol)
    return Verdict(SEPARABLE_CONSISTENT, excess, "", tol)
