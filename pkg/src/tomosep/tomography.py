"""Spin tomograms, bipartite and U(n) tomograms, and qubit state reconstruction.

Spin states use the standard basis ``|j, m>`` ordered ``m = j, j-1, ..., -j``
(index 0 is ``m = +j``). Rotations follow the zyz Euler convention
``D(a, b, c) = exp(-i a Jz) exp(-i b Jy) exp(-i c Jz)``; a measurement
direction ``(theta, phi)`` corresponds to ``a = phi``, ``b = theta``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Sequence

import numpy as np

from .errors import BadSpin, DimMismatch, DirectionsDegenerate, InvalidState, NotUnitary, OutOfRange
from .linalg import is_unitary, tensor
from .states import SIGMA, DensityMatrix, as_matrix, dims_of, from_bloch

MAX_J = 8
NEG_CLIP = 1e-12
NORM_TOL = 1e-10

_FACT = [factorial(k) for k in range(4 * MAX_J + 2)]


@dataclass(frozen=True)
class Direction:
    """Unit vector ``(cos phi sin theta, sin phi sin theta, cos theta)``."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        if not -1e-12 <= theta <= np.pi + 1e-12:
            raise OutOfRange(f"theta = {theta} outside [0, pi]")
        object.__setattr__(self, "theta", min(max(theta, 0.0), np.pi))
        object.__setattr__(self, "phi", float(self.phi) % (2 * np.pi))

    @property
    def vector(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([np.cos(self.phi) * st, np.sin(self.phi) * st, np.cos(self.theta)])

    @classmethod
    def from_vector(cls, o: Sequence[float]) -> "Direction":
        o = np.asarray(o, dtype=float).reshape(-1)
        r = np.linalg.norm(o)
        if o.size != 3 or r == 0:
            raise OutOfRange("direction must be a non-zero 3-vector")
        o = o / r
        return cls(np.arccos(np.clip(o[2], -1.0, 1.0)), np.arctan2(o[1], o[0]))


X = Direction(np.pi / 2, 0.0)
Y = Direction(np.pi / 2, np.pi / 2)
Z = Direction(0.0, 0.0)


def as_direction(d) -> Direction:
    return d if isinstance(d, Direction) else Direction.from_vector(d)


@dataclass(frozen=True, eq=False)
class Tomogram:
    """Probabilities over outcome labels, with the rotation that produced them."""

    labels: tuple
    probs: np.ndarray
    context: dict = field(default_factory=dict)

    def __post_init__(self):
        p = np.array(self.probs, dtype=float).reshape(-1)
        if p.size != len(self.labels):
            raise DimMismatch("one probability per label required")
        if p.size and p.min() < -NEG_CLIP:
            raise InvalidState(f"negative tomogram value {p.min():.3e}")
        p[p < 0] = 0.0
        if abs(p.sum() - 1.0) > NORM_TOL:
            raise InvalidState(f"tomogram sums to {p.sum()!r}")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "labels", tuple(self.labels))

    def __getitem__(self, label) -> float:
        return float(self.probs[self.labels.index(label)])

    def as_dict(self) -> dict:
        return dict(zip(self.labels, self.probs.tolist()))


def _two_j(j) -> int:
    tj = Fraction(j).limit_denominator(2) * 2
    if tj.denominator != 1 or tj < 0 or abs(float(tj) / 2 - float(j)) > 1e-12:
        raise BadSpin(f"j = {j} is not a non-negative half-integer")
    if tj > 2 * MAX_J:
        raise BadSpin(f"j = {j} exceeds {MAX_J}")
    return int(tj)


def spin_labels(j) -> tuple:
    """``m`` values ``j, j-1, ..., -j`` as floats."""
    tj = _two_j(j)
    return tuple((tj - 2 * k) / 2 for k in range(tj + 1))


def wigner_small_d(j, beta: float) -> np.ndarray:
    """``d^j_{m'm}(beta) = <j m'| exp(-i beta Jy) |j m>`` from the factorial sum."""
    tj = _two_j(j)
    c, s = np.cos(beta / 2), np.sin(beta / 2)
    d = np.zeros((tj + 1, tj + 1))
    # work with doubled quantities so every index is an integer
    for a in range(tj + 1):
        mp2 = tj - 2 * a
        for b in range(tj + 1):
            m2 = tj - 2 * b
            jpm, jmm = (tj + m2) // 2, (tj - m2) // 2
            jpmp, jmmp = (tj + mp2) // 2, (tj - mp2) // 2
            diff = (mp2 - m2) // 2
            pref = np.sqrt(float(_FACT[jpmp] * _FACT[jmmp] * _FACT[jpm] * _FACT[jmm]))
            total = 0.0
            for k in range(max(0, -diff), min(jpm, jmmp) + 1):
                den = _FACT[jpm - k] * _FACT[k] * _FACT[jmmp - k] * _FACT[k + diff]
                sign = -1.0 if (k + diff) % 2 else 1.0
                total += sign / den * c ** (tj - 2 * k - diff) * s ** (2 * k + diff)
            d[a, b] = pref * total
    return d


def wigner_D(j, alpha: float, beta: float, gamma: float = 0.0) -> np.ndarray:
    """Spin-``j`` rotation matrix ``exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz)``."""
    m = np.array(spin_labels(j))
    d = wigner_small_d(j, beta)
    return np.exp(-1j * alpha * m)[:, None] * d * np.exp(-1j * gamma * m)[None, :]


def _rotation(j, direction, gamma: float) -> np.ndarray:
    o = as_direction(direction)
    return wigner_D(j, o.phi, o.theta, gamma)


def _check_dim(M: np.ndarray, n: int, what: str) -> None:
    if M.shape != (n, n):
        raise DimMismatch(f"{what} needs a {n}x{n} matrix, got {M.shape}")


def spin_tomogram(rho, j, direction, gamma: float = 0.0) -> Tomogram:
    """``W(m) = <j m| D^dagger rho D |j m>`` for the rotation to ``direction``."""
    M = as_matrix(rho)
    D = _rotation(j, direction, gamma)
    _check_dim(M, D.shape[0], "spin tomogram")
    w = np.einsum("im,ij,jm->m", D.conj(), M, D).real
    return Tomogram(spin_labels(j), w, {"j": float(j), "direction": as_direction(direction), "gamma": gamma})


def bipartite_tomogram(rho, j1, j2, dir1, dir2, gammas=(0.0, 0.0)) -> Tomogram:
    """Joint probabilities of ``(m1, m2)`` with each spin measured along its own direction."""
    M = as_matrix(rho)
    U = tensor(_rotation(j1, dir1, gammas[0]), _rotation(j2, dir2, gammas[1]))
    _check_dim(M, U.shape[0], "bipartite tomogram")
    w = un_tomogram_values(M, U).real
    labels = tuple(product(spin_labels(j1), spin_labels(j2)))
    ctx = {"j": (float(j1), float(j2)), "directions": (as_direction(dir1), as_direction(dir2))}
    return Tomogram(labels, w, ctx)


def un_tomogram_values(A: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Diagonal of ``U^dagger A U`` for any square ``A`` (no positivity assumed)."""
    A = np.asarray(A)
    U = np.asarray(U)
    return np.einsum("im,ij,jm->m", U.conj(), A, U)


def un_tomogram(rho, dims, U: np.ndarray) -> Tomogram:
    """``w(m) = <m| U^dagger rho U |m>`` over the product basis of ``dims``."""
    M = as_matrix(rho)
    dims = dims_of(rho, dims)
    U = np.asarray(U, dtype=complex)
    if not is_unitary(U, 1e-10):
        raise NotUnitary("U(n) tomogram needs a unitary matrix")
    _check_dim(M, U.shape[0], "U(n) tomogram")
    if int(np.prod(dims)) != M.shape[0]:
        raise DimMismatch(f"dims {dims} do not match size {M.shape[0]}")
    labels = tuple(product(*(range(d) for d in dims)))
    return Tomogram(labels, un_tomogram_values(M, U).real, {"dims": dims})


def estimate_bloch(samples) -> np.ndarray:
    """Least-squares Bloch vector from ``(direction, spin-1/2 tomogram)`` pairs.

    Each sample contributes ``o . n = 2 W(+1/2) - 1``.
    """
    rows, rhs = [], []
    for direction, tomo in samples:
        rows.append(as_direction(direction).vector)
        rhs.append(2.0 * tomo[0.5] - 1.0)
    A = np.array(rows).reshape(-1, 3)
    if np.linalg.matrix_rank(A, tol=1e-10) < 3:
        raise DirectionsDegenerate("directions do not span three dimensions")
    n, *_ = np.linalg.lstsq(A, np.array(rhs), rcond=None)
    return n


def reconstruct_qubit(samples) -> DensityMatrix:
    """Qubit state whose spin-1/2 tomograms best fit the samples."""
    return from_bloch(estimate_bloch(samples))


def correlation_tensor(rho) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Local Bloch vectors ``a``, ``b`` and correlations ``T_ik = Tr rho sigma_i (x) sigma_k``."""
    M = as_matrix(rho)
    if M.shape != (4, 4):
        raise DimMismatch("correlation tensor is defined for two qubits")
    I2 = np.eye(2)
    a = np.array([np.trace(M @ np.kron(s, I2)).real for s in SIGMA])
    b = np.array([np.trace(M @ np.kron(I2, s)).real for s in SIGMA])
    T = np.array([[np.trace(M @ np.kron(s, t)).real for t in SIGMA] for s in SIGMA])
    return a, b, T


def bilinear_tomogram(a, b, T, o1, o2) -> np.ndarray:
    """Two-qubit tomogram ``W(m1, m2) = [1 + s1 a.o1 + s2 b.o2 + s1 s2 o1.T.o2] / 4``.

    Returned as a 2x2 array indexed ``[m1 = +1/2, -1/2][m2 = +1/2, -1/2]``.
    """
    o1, o2 = as_direction(o1).vector, as_direction(o2).vector
    ao, bo, too = np.dot(a, o1), np.dot(b, o2), o1 @ np.asarray(T) @ o2
    s = np.array([1.0, -1.0])
    return (1 + s[:, None] * ao + s[None, :] * bo + np.outer(s, s) * too) / 4


def direction_grid(n_theta: int = 5, n_phi: int = 8) -> list[Direction]:
    """Regular grid of directions including both poles."""
    dirs = [Z, Direction(np.pi, 0.0)]
    for t in np.linspace(0, np.pi, n_theta + 2)[1:-1]:
        dirs.extend(Direction(t, p) for p in np.linspace(0, 2 * np.pi, n_phi, endpoint=False))
    return dirs
