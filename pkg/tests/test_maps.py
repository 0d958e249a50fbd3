import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import rand_complex, rand_density_np, rand_hermitian, rand_unitary_np, seeds
from tomosep.errors import (
    DegenerateFiducial,
    DimMismatch,
    IncompleteKraus,
    InvalidState,
    NormalizationFail,
    NotHermitian,
    NotUnitary,
    ShapeMismatch,
)
from tomosep.linalg import partial_transpose
from tomosep.maps import (
    KrausMap,
    MixedUnitaryMap,
    QubitSemigroupParams,
    apply_kraus,
    apply_mixed_unitary,
    block_relation_defect,
    coshsinh_map,
    epsilon_map,
    local_mixture_superop,
    local_product_superop,
    noncp_difference,
    peres_like_n3,
    purify,
    quad_eval,
    quad_form,
    qubit_semigroup_sample,
    random_su2_ensemble,
    semigroup_blocks,
    su2,
    superop_of,
    transpose_superop,
    unitary_channel,
)
from tomosep.states import SIGMA, DensityMatrix, from_bloch, product_state, random_density
from tomosep.vectorize import Superoperator, devec, vec

S1, S2, S3 = SIGMA
TRANSPOSE_2 = np.array(
    [
        [1, 0, 0, 0],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
    ]
)
RHO0 = np.array([0.5, 0, 0, 0.5])


def random_kraus(rng, n, k):
    """k Kraus operators from the blocks of a random isometry (QR of a Ginibre stack)."""
    Q, _ = np.linalg.qr(rand_complex(rng, n * k, n))
    return [Q[i * n : (i + 1) * n] for i in range(k)]


def random_ensemble(rng, k=5):
    w, a, b = random_su2_ensemble(k, rng)
    return w, a, b


# channels -------------------------------------------------------------------


def test_mixed_unitary_examples():
    rho = random_density(3, rng=1)
    same = apply_mixed_unitary(rho, MixedUnitaryMap((1.0,), (np.eye(3),)))
    assert np.allclose(same.mat, rho.mat)
    out = apply_mixed_unitary(np.diag([1.0, 0.0]), MixedUnitaryMap((0.5, 0.5), (np.eye(2), S1)))
    assert np.allclose(out.mat, np.eye(2) / 2)
    with pytest.raises(DimMismatch):
        apply_mixed_unitary(rho, MixedUnitaryMap((1.0,), (np.eye(2),)))


def test_mixed_unitary_validation():
    with pytest.raises(ValueError):
        MixedUnitaryMap((0.5, 0.4), (np.eye(2), S1))
    with pytest.raises(ValueError):
        MixedUnitaryMap((1.5, -0.5), (np.eye(2), S1))
    with pytest.raises(NotUnitary):
        MixedUnitaryMap((1.0,), (2 * np.eye(2),))
    with pytest.raises(ValueError):
        MixedUnitaryMap((1.0,), (np.eye(2), S1))


@given(seeds, st.integers(2, 5))
def test_mixed_unitary_smooths_diagonal_states(seed, n):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(n))
    k = int(rng.integers(1, 5))
    ch = MixedUnitaryMap(tuple(rng.dirichlet(np.ones(k))), tuple(rand_unitary_np(rng, n) for _ in range(k)))
    out = np.sort(apply_mixed_unitary(np.diag(p), ch).eigenvalues)[::-1]
    src = np.sort(p)[::-1]
    # output spectrum is majorized by the input spectrum
    assert np.all(np.cumsum(out) <= np.cumsum(src) + 1e-12)
    assert out.max() - out.min() <= src.max() - src.min() + 1e-12


def test_kraus_examples_and_validation(rng):
    rho = random_density(3, rng=2)
    assert np.allclose(apply_kraus(rho, KrausMap((np.eye(3),))).mat, rho.mat)
    with pytest.raises(IncompleteKraus):
        KrausMap((0.9 * np.eye(2),))
    with pytest.raises(IncompleteKraus):
        KrausMap(())
    with pytest.raises(ShapeMismatch):
        KrausMap((np.eye(2), np.zeros((3, 3))))
    # completeness within 1e-9 is accepted without renormalization
    ops = random_kraus(rng, 2, 3)
    ops[0] = ops[0] * (1 + 1e-11)
    assert KrausMap(tuple(ops)).kraus_ops[0][0, 0] == ops[0][0, 0]


def test_many_kraus_terms_approach_maximally_mixed():
    n = 3
    rho = np.diag([1.0, 0.0, 0.0])
    dist = {}
    for k in (1, 4, 16, 64):
        rng = np.random.default_rng(k)
        d = [np.linalg.norm(apply_kraus(rho, KrausMap(tuple(random_kraus(rng, n, k)))).mat - np.eye(n) / n) for _ in range(20)]
        dist[k] = np.mean(d)
    assert dist[1] > dist[4] > dist[16] > dist[64]
    # distance from I/n shrinks roughly like 1/sqrt(k)
    assert dist[64] < dist[1] / 4


@given(seeds, st.integers(1, 4))
def test_mixed_unitary_as_kraus_agrees(seed, k):
    rng = np.random.default_rng(seed)
    ch = MixedUnitaryMap(tuple(rng.dirichlet(np.ones(k))), tuple(rand_unitary_np(rng, 3) for _ in range(k)))
    rho = rand_density_np(rng, 3)
    assert np.allclose(apply_mixed_unitary(rho, ch).mat, apply_kraus(rho, ch.as_kraus()).mat, atol=1e-14)


def test_superop_of_identity():
    assert np.allclose(superop_of(MixedUnitaryMap((1.0,), (np.eye(3),))).mat, np.eye(9))
    with pytest.raises(TypeError):
        superop_of("depolarizing")


@given(seeds, st.integers(1, 4), st.integers(2, 4))
def test_channel_superoperator_commuting_square(seed, k, n):
    rng = np.random.default_rng(seed)
    rho = rand_density_np(rng, n)
    kraus = KrausMap(tuple(random_kraus(rng, n, k)))
    mixed = MixedUnitaryMap(tuple(rng.dirichlet(np.ones(k))), tuple(rand_unitary_np(rng, n) for _ in range(k)))
    assert np.abs(devec(superop_of(kraus).mat @ vec(rho)) - apply_kraus(rho, kraus).mat).max() <= 1e-10
    assert np.abs(superop_of(mixed).apply(rho) - apply_mixed_unitary(rho, mixed).mat).max() <= 1e-10
    assert superop_of(kraus).is_trace_preserving()


def test_qubit_channels_have_twelve_real_parameters():
    # trace-preserving, Hermiticity-preserving 4x4 superoperators: 16 real entries minus 4 trace conditions
    rng = np.random.default_rng(0)
    base = superop_of(KrausMap(tuple(random_kraus(rng, 2, 4)))).mat
    rows = []
    for _ in range(40):
        L = superop_of(KrausMap(tuple(random_kraus(rng, 2, 4)))).mat - base
        rows.append(np.concatenate([L.real.ravel(), L.imag.ravel()]))
    assert np.linalg.matrix_rank(np.array(rows), tol=1e-9) == 12


@given(seeds)
def test_cp_maps_keep_states_positive(seed):
    rng = np.random.default_rng(seed)
    rho = rand_density_np(rng, 3, 1)
    out = superop_of(KrausMap(tuple(random_kraus(rng, 3, 3)))).apply(rho)
    assert np.linalg.eigvalsh(out).min() >= -1e-9


# non-CP differences -----------------------------------------------------------


def test_noncp_difference_without_minus_is_kraus(rng):
    ops = random_kraus(rng, 2, 3)
    assert np.allclose(noncp_difference(ops).mat, superop_of(KrausMap(tuple(ops))).mat)
    with pytest.raises(NormalizationFail):
        noncp_difference([np.eye(2)], [0.5 * np.eye(2)])
    with pytest.raises(NormalizationFail):
        noncp_difference([])
    with pytest.raises(ShapeMismatch):
        noncp_difference([np.eye(2)], [np.zeros((3, 3))])


def test_epsilon_map_on_basis_state():
    L = epsilon_map(0.2, 2)
    assert L.provenance == "non-cp"
    assert np.allclose(L.apply(np.diag([1.0, 0.0])), np.diag([0.4, 0.6]))
    assert L.is_trace_preserving()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_epsilon_map_positivity_threshold(n):
    # on a pure state the smallest output eigenvalue is (1 + eps) / n - eps
    psi = rand_density_np(np.random.default_rng(n), n, 1)
    for eps in (0.5 / (n - 1), 1.0 / (n - 1) - 1e-6, 1.0 / (n - 1) + 0.05, 2.0):
        out = epsilon_map(eps, n).apply(psi)
        lam = np.linalg.eigvalsh((out + out.conj().T) / 2).min()
        assert np.isclose(lam, (1 + eps) / n - eps, atol=1e-12)
        assert (lam < -1e-9) == (eps > 1 / (n - 1))


@given(seeds)
def test_noncp_difference_is_trace_and_hermiticity_preserving(seed):
    rng = np.random.default_rng(seed)
    L = epsilon_map(float(rng.uniform(0, 3)), 3)
    H = rand_hermitian(rng, 3)
    out = L.apply(H)
    assert np.allclose(out, out.conj().T, atol=1e-14)
    assert np.isclose(np.trace(out), np.trace(H))


# transpose ------------------------------------------------------------------


def test_transpose_superop_two_level():
    assert np.array_equal(transpose_superop(2).mat, TRANSPOSE_2)


@given(seeds, st.integers(2, 5))
def test_transpose_superop_action(seed, n):
    rng = np.random.default_rng(seed)
    rho = rand_density_np(rng, n)
    out = transpose_superop(n).apply(rho)
    assert np.array_equal(out, rho.T)
    assert np.allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(rho), atol=1e-13)
    sym = rand_complex(rng, n, n)
    sym = sym + sym.T
    assert np.array_equal(transpose_superop(n).apply(sym), sym)


@given(seeds)
def test_transpose_pauli_combination(seed):
    rho = rand_density_np(np.random.default_rng(seed), 2)
    combo = 0.5 * (rho + S1 @ rho @ S1 - S2 @ rho @ S2 + S3 @ rho @ S3)
    assert np.allclose(transpose_superop(2).apply(rho), combo, atol=1e-14)


# qubit semigroup ------------------------------------------------------------


def test_semigroup_single_identity_sample():
    L, params = qubit_semigroup_sample([1.0], [1.0], [0.0])
    assert np.array_equal(L.mat, np.eye(4))
    assert params.ell == 1 and params.m == params.n == params.q == 0 and params.s == 1


def test_semigroup_matches_mean_of_u_tensor_ustar(rng):
    w, a, b = random_ensemble(rng, 6)
    L, _ = qubit_semigroup_sample(w, a, b)
    direct = sum(p * np.kron(su2(x, y), su2(x, y).conj()) for p, x, y in zip(w, a, b))
    assert np.allclose(L.mat, direct, atol=1e-14)


def test_semigroup_degenerate_family_has_zero_determinant():
    # ell = 1/2, m = 0: alpha = 1/sqrt(2), beta = +-1/sqrt(2) with equal weight
    r = 1 / np.sqrt(2)
    L, params = qubit_semigroup_sample([0.5, 0.5], [r, r], [r, -r])
    assert np.isclose(params.ell, 0.5) and abs(params.m) < 1e-15
    assert abs(np.linalg.det(L.mat)) < 1e-15
    assert abs(params.determinant()) < 1e-15


def test_semigroup_validation():
    with pytest.raises(NotUnitary):
        qubit_semigroup_sample([1.0], [1.0], [0.5])
    with pytest.raises(ValueError):
        qubit_semigroup_sample([0.5, 0.6], [1.0, 1.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        qubit_semigroup_sample([1.0], [1.0, 1.0], [0.0])
    with pytest.raises(ValueError):
        QubitSemigroupParams(1.5, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        QubitSemigroupParams(0.5, 2.0, 0, 0, 0)


@given(seeds, st.integers(1, 8))
def test_semigroup_structure(seed, k):
    rng = np.random.default_rng(seed)
    L, params = qubit_semigroup_sample(*random_ensemble(rng, k))
    assert block_relation_defect(L) <= 1e-12
    assert abs(np.linalg.det(L.mat) - params.determinant()) <= 1e-9
    assert np.abs(L.mat @ RHO0 - RHO0).max() <= 1e-10
    assert L.provenance == "mixed-unitary"
    for name in ("m", "n", "s", "q"):
        assert abs(getattr(params, name)) <= 1
    M, _ = qubit_semigroup_sample(*random_ensemble(rng, 3))
    prod = L @ M
    assert block_relation_defect(prod) <= 1e-12
    assert np.abs(prod.mat @ RHO0 - RHO0).max() <= 1e-10


def test_semigroup_blocks_layout():
    L = np.arange(16).reshape(4, 4)
    A, B, C, D = semigroup_blocks(L)
    assert np.array_equal(np.block([[A, B], [C, D]]), L)


# local product maps ---------------------------------------------------------


def test_local_product_identity():
    I4 = Superoperator(np.eye(4))
    assert np.array_equal(local_product_superop([I4, I4]).mat, np.eye(16))
    I9 = Superoperator(np.eye(9))
    assert np.array_equal(local_product_superop([I4, I9]).mat, np.eye(36))


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 2), (2, 2, 2)])
def test_local_unitary_product_matches_global_conjugation(rng, dims):
    us = [rand_unitary_np(rng, d) for d in dims]
    L = local_product_superop([unitary_channel(u) for u in us], dims)
    assert L.dims == tuple(dims)
    U = us[0]
    for u in us[1:]:
        U = np.kron(U, u)
    rho = rand_density_np(rng, U.shape[0])
    assert np.allclose(L.apply(rho), U @ rho @ U.conj().T, atol=1e-13)
    assert np.allclose(L.mat, np.kron(U, U.conj()), atol=1e-13)


def test_local_transpose_is_partial_transpose(rng):
    for dims in [(2, 2), (2, 3)]:
        rho = rand_density_np(rng, dims[0] * dims[1])
        L = local_product_superop([Superoperator(np.eye(dims[0] ** 2)), transpose_superop(dims[1])])
        assert np.array_equal(L.apply(rho), partial_transpose(rho, dims, "B"))


@given(seeds)
def test_local_transpose_keeps_separable_states_positive(seed):
    rng = np.random.default_rng(seed)
    k = 4
    w = rng.dirichlet(np.ones(k))
    rho = sum(p * np.kron(rand_density_np(rng, 2), rand_density_np(rng, 2)) for p in w)
    L = local_product_superop([Superoperator(np.eye(4)), transpose_superop(2)])
    assert np.linalg.eigvalsh(L.apply(rho)).min() >= -1e-12


def test_local_product_errors():
    with pytest.raises(DimMismatch):
        local_product_superop([Superoperator(np.eye(4)), Superoperator(np.eye(9))], dims=(2, 2))
    with pytest.raises(DimMismatch):
        local_product_superop([np.eye(4), np.eye(5)])


def test_local_mixture(rng):
    u1, u2 = rand_unitary_np(rng, 2), rand_unitary_np(rng, 2)
    terms = [[unitary_channel(u1), unitary_channel(u2)], [unitary_channel(u2), transpose_superop(2)]]
    L = local_mixture_superop([0.3, 0.7], terms)
    rho = rand_density_np(rng, 4)
    expected = 0.3 * local_product_superop(terms[0]).apply(rho) + 0.7 * local_product_superop(terms[1]).apply(rho)
    assert np.allclose(L.apply(rho), expected, atol=1e-14)
    with pytest.raises(ValueError):
        local_mixture_superop([0.5, 0.6], terms)


# purification ---------------------------------------------------------------


def test_purify_single_pure_state():
    rho = rand_density_np(np.random.default_rng(1), 3, 1)
    out = purify([1.0], [rho], rho)
    assert np.allclose(out.mat, rho, atol=1e-12)


def test_purify_two_orthogonal_states_closed_form():
    # pure components |0>, |1> and fiducial |phi> = (a, b): the result is the
    # projector on sqrt(p1) e^{i arg a} |0> + sqrt(p2) e^{i arg b} |1>
    a, b = 0.6 * np.exp(0.4j), 0.8 * np.exp(-1.1j)
    phi = np.array([a, b])
    P0 = np.outer(phi, phi.conj())
    p = [0.3, 0.7]
    out = purify(p, [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])], P0)
    psi = np.array([np.sqrt(p[0]) * np.exp(1j * np.angle(a)), np.sqrt(p[1]) * np.exp(1j * np.angle(b))])
    assert np.allclose(out.mat, np.outer(psi, psi.conj()), atol=1e-14)
    assert np.isclose(np.trace(out.mat), 1) and np.isclose(out.purity, 1)


@given(seeds, st.integers(1, 4), st.integers(2, 4))
def test_purify_output_is_rank_one_state(seed, k, n):
    rng = np.random.default_rng(seed)
    states = [rand_density_np(rng, n, 1) for _ in range(k)]
    P0 = rand_density_np(rng, n, 1)
    out = purify(rng.dirichlet(np.ones(k)), states, P0)
    lam = np.linalg.eigvalsh(out.mat)
    assert lam.min() >= -1e-9 and np.isclose(lam.max(), 1, atol=1e-9)
    assert np.isclose(out.purity, 1, atol=1e-9)


def test_purify_errors():
    zero, one = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    with pytest.raises(DegenerateFiducial):
        purify([0.5, 0.5], [zero, one], zero)
    with pytest.raises(InvalidState):
        purify([1.0], [zero], np.eye(2) / 2)
    with pytest.raises(ValueError):
        purify([0.5, 0.6], [zero, one], zero)


# quadratic forms ------------------------------------------------------------


def test_quad_form_real_state():
    rho = np.array([[0.7, 0.2], [0.2, 0.3]])
    D = quad_form(rho)
    assert np.array_equal(D, np.block([[rho, np.zeros((2, 2))], [np.zeros((2, 2)), rho]]))


def test_quad_form_sigma_y_state():
    rho = (np.eye(2) + S2) / 2
    D = quad_form(rho)
    R = D[:2, 2:]
    assert np.allclose(R, (S2 / 2j).real) and np.allclose(R, -R.T)
    assert np.allclose(D[:2, :2], np.eye(2) / 2)


def test_quad_form_conjugation_convention():
    # the block form reproduces z^dagger rho z for z = x - i y
    rho = (np.eye(2) + S2) / 2
    x, y = np.array([1.0, 0.0]) / np.sqrt(2), np.array([0.0, 1.0]) / np.sqrt(2)
    D = quad_form(rho)
    z_minus, z_plus = x - 1j * y, x + 1j * y
    assert np.isclose(quad_eval(D, x, y), 0.0)
    assert np.isclose((z_minus.conj() @ rho @ z_minus).real, 0.0)
    assert np.isclose((z_plus.conj() @ rho @ z_plus).real, 1.0)


@given(seeds, st.integers(1, 5))
def test_quad_eval_matches_complex_form(seed, n):
    rng = np.random.default_rng(seed)
    rho = rand_hermitian(rng, n)
    x, y = rng.standard_normal(n), rng.standard_normal(n)
    z = x + 1j * y
    D = quad_form(rho)
    assert np.allclose(D, D.T)
    # sum_jk z_j rho_jk z_k^*, i.e. z^dagger rho^T z
    assert abs(quad_eval(D, x, y) - (z @ rho @ z.conj()).real) <= 1e-12 * max(1, np.abs(rho).max() * (z @ z.conj()).real)
    psd = rand_density_np(rng, n)
    assert quad_eval(quad_form(psd), x, y) >= -1e-12


def test_quad_form_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        quad_form(np.array([[1, 1], [0, 1]]))


# three-level sign flips -----------------------------------------------------


def test_peres_like_n3_on_diagonal():
    rho = np.diag([0.5, 0.3, 0.2])
    r1, r2 = peres_like_n3(rho)
    assert np.array_equal(r1, rho) and np.array_equal(r2, rho)


def test_peres_like_n3_patterns(rng):
    rho = rand_hermitian(rng, 3)
    r1, r2 = peres_like_n3(rho)
    flip = np.array([[1, 1, -1], [1, 1, -1], [-1, -1, 1]])
    assert np.array_equal(r1, rho * flip)
    assert np.array_equal(r2, rho.T * flip)
    for out in (r1, r2):
        assert np.array_equal(out, out.conj().T)
        assert np.isclose(np.trace(out), np.trace(rho))


@given(seeds)
def test_peres_like_n3_preserves_spectrum(seed):
    rho = rand_density_np(np.random.default_rng(seed), 3)
    r1, r2 = peres_like_n3(rho)
    ref = np.linalg.eigvalsh(rho)
    assert np.allclose(np.linalg.eigvalsh(r1), ref, atol=1e-13)
    assert np.allclose(np.linalg.eigvalsh(r2), ref, atol=1e-13)


def test_peres_like_n3_shape():
    with pytest.raises(ShapeMismatch):
        peres_like_n3(np.eye(2) / 2)


# cosh/sinh map --------------------------------------------------------------


def test_coshsinh_identity_and_diagonal(rng):
    rho = rand_density_np(rng, 3)
    assert np.allclose(coshsinh_map(rho, 0.0, [0.3, 0.3, 0.3]), rho, atol=1e-15)
    out = coshsinh_map(rho, 1.3, [0.1, 0.9, -2.0])
    assert np.allclose(np.diag(out), np.diag(rho), atol=1e-12)
    assert np.allclose(out, out.conj().T)
    assert np.isclose(np.trace(out), 1)
    with pytest.raises(ShapeMismatch):
        coshsinh_map(rho, 1.0, [0.0, 1.0])


def test_coshsinh_is_not_positive():
    rng = np.random.default_rng(4)
    phases = [0.0, 0.0, 0.0]
    found = []
    for theta in np.linspace(0.1, 2.0, 20):
        states = [np.ones((3, 3)) / 3] + [rand_density_np(rng, 3, 1) for _ in range(20)]
        for rho in states:
            if np.linalg.eigvalsh(coshsinh_map(rho, theta, phases)).min() < -1e-9:
                found.append(theta)
                break
    assert len(found) == 20
    # uniform superposition: the multiplier has eigenvalue -sinh^2 theta, so output eigenvalue -sinh^2/3
    theta = 0.7
    lam = np.linalg.eigvalsh(coshsinh_map(np.ones((3, 3)) / 3, theta, phases))
    assert np.isclose(lam.min(), -np.sinh(theta) ** 2 / 3)
