import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qutritbell.decomp import (
    PauliPolynomial,
    TensorCoefficients,
    decompose_gamma,
    lift_to_qubits,
    pauli_expand,
    pauli_from_terms,
    pauli_reconstruct,
    pauli_string,
    reconstruct_gamma,
)
from qutritbell.linalg import DimensionError, NotHermitianError, expectation, kron_all, random_hermitian, random_state
from qutritbell.spin import SpinVariant, embed_state, gamma_basis


def naive_pauli(m):
    # oracle: one full trace per string
    n = int(np.log2(m.shape[0]))
    return {"".join(s): np.trace(m @ pauli_string("".join(s))).real / 2**n
            for s in itertools.product("IXYZ", repeat=n)}


@pytest.mark.parametrize("variant", list(SpinVariant))
@pytest.mark.parametrize("j", range(9))
def test_single_gamma_decomposes_to_itself(variant, j):
    c = decompose_gamma(gamma_basis(variant)[j], variant)
    assert c.terms == pytest.approx({(j + 1,): 1.0})


def test_identity_two_qutrits():
    c = decompose_gamma(np.eye(9))
    expected = {(a, b): 1.0 for a in (4, 5, 6) for b in (4, 5, 6)}
    assert c.terms == pytest.approx(expected)


def test_product_coefficients():
    g = gamma_basis("A")
    m = 2.5 * np.kron(g[0], g[8]) - 0.75 * np.kron(g[6], g[3])
    assert decompose_gamma(m).terms == pytest.approx({(1, 9): 2.5, (7, 4): -0.75})


@pytest.mark.parametrize("dim", [3, 9, 27])
@pytest.mark.parametrize("variant", list(SpinVariant))
def test_gamma_round_trip(dim, variant):
    m = random_hermitian(dim, np.random.default_rng(dim))
    assert np.max(np.abs(reconstruct_gamma(decompose_gamma(m, variant), variant) - m)) <= 1e-10


def test_decompose_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        decompose_gamma(np.triu(np.ones((3, 3))))


def test_decompose_rejects_bad_dimension():
    with pytest.raises(DimensionError):
        decompose_gamma(np.eye(4))


def test_reconstruct_rejects_bad_index():
    with pytest.raises(ValueError):
        reconstruct_gamma(TensorCoefficients(1, {(10,): 1.0}))


def test_coefficients_wrong_arity():
    with pytest.raises(ValueError):
        TensorCoefficients(2, {(1,): 1.0})


def test_coefficients_json_round_trip():
    c = TensorCoefficients(2, {(1, 9): 0.5, (4, 4): -1.25})
    back = TensorCoefficients.from_json(c.to_json())
    assert back == c
    assert c[(3, 3)] == 0.0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lift_preserves_expectations(n):
    rng = np.random.default_rng(100 + n)
    m = random_hermitian(3**n, rng)
    lifted = lift_to_qubits(decompose_gamma(m))
    for _ in range(10):
        psi = random_state(3**n, rng)
        assert abs(expectation(m, psi) - expectation(lifted, embed_state(psi))) <= 1e-9


def test_lift_of_identity_is_symmetric_projector():
    lifted = lift_to_qubits(decompose_gamma(np.eye(3)))
    swap = np.eye(4)[[0, 2, 1, 3]]
    assert np.allclose(lifted, (np.eye(4) + swap) / 2)


def test_pauli_expand_matches_naive_trace():
    m = random_hermitian(8, np.random.default_rng(3))
    fast = pauli_expand(m, tol=0.0)
    for s, v in naive_pauli(m).items():
        assert fast[s] == pytest.approx(v, abs=1e-12)


def test_pauli_string_kron_order():
    assert np.allclose(pauli_string("XZ"), kron_all([pauli_string("X"), pauli_string("Z")]))


def test_pauli_expand_known_operator():
    m = 0.5 * pauli_string("XIY") - 2 * pauli_string("ZZZ")
    assert pauli_expand(m).terms == pytest.approx({"XIY": 0.5, "ZZZ": -2.0})


@pytest.mark.parametrize("nq", [1, 2, 4, 6])
def test_pauli_round_trip(nq):
    m = random_hermitian(2**nq, np.random.default_rng(nq))
    assert np.max(np.abs(pauli_reconstruct(pauli_expand(m)) - m)) <= 1e-10


def test_pauli_expand_rejects_bad_dimension():
    with pytest.raises(DimensionError):
        pauli_expand(np.eye(3))


def test_pauli_from_terms_checks_lengths():
    assert pauli_from_terms({"XY": 1.0}) == PauliPolynomial(2, {"XY": 1.0})
    with pytest.raises(ValueError):
        pauli_from_terms({"X": 1.0, "XY": 1.0})


def test_delta_product_in_paulis():
    # delta_1 (x) delta_1 = 1/4 (IX + XI) (x) (IX + XI)
    lifted = lift_to_qubits(TensorCoefficients(2, {(1, 1): 1.0}))
    expected = {a + b: 0.25 for a in ("IX", "XI") for b in ("IX", "XI")}
    assert pauli_expand(lifted).terms == pytest.approx(expected)


@settings(max_examples=20, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(1, 9), st.integers(1, 9)),
                       st.floats(-5, 5, allow_nan=False).filter(lambda x: abs(x) > 1e-6), max_size=6))
def test_coefficients_survive_reconstruction(terms):
    c = TensorCoefficients(2, terms)
    back = decompose_gamma(reconstruct_gamma(c))
    for k in set(terms) | set(back.terms):
        assert back[k] == pytest.approx(terms.get(k, 0.0), abs=1e-10)
