import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qutritbell.linalg import DimensionError, random_state
from qutritbell.spin import (
    PAULI,
    PHI_MINUS,
    PHI_PLUS,
    PSI_MINUS,
    PSI_PLUS,
    SINGLET_PROJECTOR,
    SYM_PROJECTOR,
    SpinVariant,
    delta_basis,
    embed_state,
    gamma_basis,
    ghz_qubits,
    ghz_qutrits,
    ket,
    qutrit_ket,
    solve_embedding,
    spin_matrices,
)

X, Y, Z, I2 = PAULI["X"], PAULI["Y"], PAULI["Z"], PAULI["I"]
SQ2 = np.sqrt(2)
VARIANTS = list(SpinVariant)


def test_variant_a_sz_diagonal():
    assert np.array_equal(spin_matrices("A")[2], np.diag([1, 0, -1]))


def test_variant_b_sx_entries():
    sx = spin_matrices("B")[0]
    expected = np.zeros((3, 3), dtype=complex)
    expected[1, 2], expected[2, 1] = -1j, 1j
    assert np.array_equal(sx, expected)


@pytest.mark.parametrize("variant", VARIANTS)
def test_cyclic_commutation(variant):
    s = spin_matrices(variant)
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        assert np.max(np.abs(s[a] @ s[b] - s[b] @ s[a] - 1j * s[c])) <= 1e-14


@pytest.mark.parametrize("variant", VARIANTS)
def test_casimir_gives_identity(variant):
    g = gamma_basis(variant)
    assert np.allclose(g[3] + g[4] + g[5], np.eye(3))


@pytest.mark.parametrize("variant", VARIANTS)
def test_gamma_hermitian_orthogonal(variant):
    g = gamma_basis(variant)
    for e in g.elements:
        assert np.max(np.abs(e - e.conj().T)) <= 1e-12
    gram = g.gram()
    assert np.max(np.abs(gram - np.diag(np.diag(gram)))) <= 1e-12


def test_gamma_norms_variant_a():
    # oracle: squares of the explicit matrices
    g = gamma_basis("A")
    assert np.trace(g[0] @ g[0]).real == pytest.approx(2.0)
    assert np.allclose(g.norms, [2, 2, 2, 1, 1, 1, 2, 2, 2])


def test_gamma9_is_anticommutator():
    sx, sy, _ = spin_matrices("A")
    assert np.allclose(gamma_basis("A")[8], sx @ sy + sy @ sx)


def test_gamma_elements_read_only():
    with pytest.raises(ValueError):
        gamma_basis("A")[0][0, 0] = 5


def test_delta4_pauli_form():
    expected = (np.eye(4) - np.kron(X, X) + np.kron(Y, Y) + np.kron(Z, Z)) / 4
    assert np.allclose(delta_basis()[3], expected)


def test_delta_annihilates_singlet():
    for d in delta_basis().elements:
        assert np.max(np.abs(d @ PSI_MINUS)) <= 1e-12
        assert np.max(np.abs(SINGLET_PROJECTOR @ d @ SINGLET_PROJECTOR)) == 0


def test_delta_456_sum_is_symmetric_identity():
    d = delta_basis()
    assert np.allclose(d[3] + d[4] + d[5], np.eye(4) - np.outer(PSI_MINUS, PSI_MINUS.conj()))
    assert np.allclose(SYM_PROJECTOR, d[3] + d[4] + d[5])


def test_delta_orthogonal():
    gram = delta_basis().gram()
    assert np.max(np.abs(gram - np.diag(np.diag(gram)))) <= 1e-12


def test_delta_matches_pauli_symmetrisation():
    d = delta_basis()
    sym = lambda a, b: 0.5 * (np.kron(a, b) + np.kron(b, a))
    for k, p in enumerate((X, Y, Z)):
        assert np.allclose(d[k], sym(I2, p))
    assert np.allclose(d[6], sym(Y, Z))
    assert np.allclose(d[7], sym(X, Z))
    assert np.allclose(d[8], sym(X, Y))


def test_embedding_variant_a_matches_displayed_map():
    e = solve_embedding("A").images
    assert np.allclose(e[0], ket("00"))
    assert np.allclose(e[1], PSI_PLUS)
    assert np.allclose(e[2], ket("11"))


def test_embedding_variant_b():
    e = solve_embedding("B").images
    assert np.allclose(e[0], 1j * PHI_MINUS)
    assert np.allclose(e[2], 1j * PSI_PLUS)
    # the middle image is forced to -|Phi+>: the displayed +|Phi+> would flip
    # the sign of <0|gamma_j|1> for gamma_3 = S_z
    assert np.allclose(e[1], -PHI_PLUS)
    g3, d3 = gamma_basis("B")[2], delta_basis()[2]
    assert g3[0, 1] != 0
    assert np.isclose(np.vdot(1j * PHI_MINUS, d3 @ PHI_PLUS), -g3[0, 1])


@pytest.mark.parametrize("variant", VARIANTS)
def test_embedding_all_matrix_elements(variant):
    e = solve_embedding(variant).images
    g, d = gamma_basis(variant), delta_basis()
    for i, j, k in itertools.product(range(3), range(9), range(3)):
        assert abs(g[j][i, k] - np.vdot(e[i], d[j] @ e[k])) <= 1e-10


@pytest.mark.parametrize("variant", VARIANTS)
def test_embedding_orthonormal_symmetric(variant):
    iso = solve_embedding(variant).isometry()
    assert np.max(np.abs(iso.conj().T @ iso - np.eye(3))) <= 1e-12
    assert np.max(np.abs(PSI_MINUS.conj() @ iso)) <= 1e-12


def test_embed_single_qutrit():
    assert np.allclose(embed_state(qutrit_ket("0")), ket("00"))


def test_embed_two_qutrit_maximally_entangled():
    out = embed_state(ghz_qutrits(2))
    expected = np.sqrt(2 / 3) * ghz_qubits(4) + np.sqrt(1 / 3) * np.kron(PSI_PLUS, PSI_PLUS)
    assert np.allclose(out, expected, atol=1e-12)


def test_embed_three_qutrit_maximally_entangled():
    out = embed_state(ghz_qutrits(3))
    expected = np.sqrt(2 / 3) * ghz_qubits(6) + np.sqrt(1 / 3) * np.kron(np.kron(PSI_PLUS, PSI_PLUS), PSI_PLUS)
    assert np.allclose(out, expected, atol=1e-12)


def test_embed_rejects_bad_dimension():
    with pytest.raises(DimensionError):
        embed_state(np.ones(4) / 2)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.sampled_from(VARIANTS), st.integers(1, 2))
def test_embedding_preserves_inner_products(seed, variant, n):
    rng = np.random.default_rng(seed)
    phi, psi = random_state(3**n, rng), random_state(3**n, rng)
    lhs = np.vdot(phi, psi)
    rhs = np.vdot(embed_state(phi, variant), embed_state(psi, variant))
    assert abs(lhs - rhs) <= 1e-12
