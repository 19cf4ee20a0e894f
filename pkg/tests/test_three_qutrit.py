import itertools
import math

import numpy as np
import pytest

from qutritbell import three_qutrit as tq
from qutritbell.decomp import lift_to_qubits, decompose_gamma
from qutritbell.functional import lhv_bounds, probability_table
from qutritbell.linalg import expectation, random_state
from qutritbell.spin import embed_state, qutrit_ket


@pytest.fixture(scope="module")
def m27():
    return tq.operator_27()


@pytest.fixture(scope="module")
def m64():
    return tq.operator_64()


@pytest.fixture(scope="module")
def optima(m64):
    return {mode: tq.optimize_family_3(mode, m64=m64) for mode in ("p-only", "p-theta")}


def permute_parties(m, perm):
    t = m.reshape((3,) * 6)
    return t.transpose(list(perm) + [3 + p for p in perm]).reshape(27, 27)


def test_classical_bounds():
    assert lhv_bounds(tq.functional()) == (-3.0, 3.0)


def test_printed_variant_has_classical_max_four():
    assert lhv_bounds(tq.functional(printed=True)) == (-3.0, 4.0)


def test_settings_orthonormal_and_shared():
    s = tq.optimal_settings()
    for basis in s.bases[0]:
        assert np.allclose(basis.conj() @ basis.T, np.eye(3))
    assert all(np.array_equal(a, b) for a, b in zip(s.bases[0], s.bases[2]))


def test_operator_matches_born_rule(m27):
    # oracle: functional value from probability tables
    f, s = tq.functional(), tq.optimal_settings()
    psi = random_state(27, np.random.default_rng(4))
    total = 0.0
    for t in f.terms:
        table = probability_table(s, psi, t.settings)
        for outs in itertools.product(range(3), repeat=3):
            if (sum(sg * o for sg, o in zip(t.signs, outs)) - t.target) % 3 == 0:
                total += t.coeff * table[outs]
    assert expectation(m27, psi) == pytest.approx(total, abs=1e-12)


@pytest.mark.parametrize("perm", list(itertools.permutations(range(3))))
def test_party_swap_invariance(m27, perm):
    assert np.max(np.abs(permute_parties(m27, perm) - m27)) <= 1e-12


def test_lambda_max(m27):
    ev = np.linalg.eigvalsh(m27)
    assert ev[-1] == pytest.approx(tq.LAMBDA_MAX, abs=1e-10)
    assert tq.LAMBDA_MAX == pytest.approx(4.372281323269, abs=1e-12)
    assert ev[-1] > 3.0


def test_maximally_entangled_value(m27):
    assert expectation(m27, tq.maximally_entangled()) == pytest.approx(13 / 3, abs=1e-12)


def test_top_eigenvector():
    v = tq.top_eigenvector()
    expected = 0.6426205505756484 * qutrit_ket("000") + 0.5417743201637784 * (qutrit_ket("111") + qutrit_ket("222"))
    assert np.max(np.abs(v - expected)) <= 1e-9


def test_random_state_embedding_equality(m27, m64):
    rng = np.random.default_rng(27)
    for _ in range(10):
        psi = random_state(27, rng)
        assert abs(expectation(m27, psi) - expectation(m64, embed_state(psi))) <= 1e-9


def test_gamma_table_round_trip(m27):
    table = tq.gamma_table()
    assert len(table.entries) == 86
    rebuilt = tq.operator_from_gamma_table(table)
    assert np.max(np.abs(rebuilt - m27)) <= 1e-10


def test_pauli_table_size():
    assert len(tq.pauli_table().entries) == 96


def test_cross_check_residual():
    assert tq.cross_check_residual() <= 1e-12


def test_lifted_gamma_equals_lift(m27, m64):
    assert np.max(np.abs(lift_to_qubits(decompose_gamma(m27)) - m64)) <= 1e-12


def test_gamma_table_rejects_asymmetric_operator():
    m = np.zeros((27, 27))
    m[0, 1] = m[1, 0] = 1.0
    with pytest.raises(ValueError):
        tq.gamma_table_from_operator(m)


def test_gamma_entry_labels():
    assert tq.GammaEntry((1, 2, 2), True, 0.0).label() == "[122]"
    assert tq.GammaEntry((4, 4, 4), False, 0.0).label() == "444"


def test_pair_strings_orbit():
    assert tq._pair_strings(((0, 1), (0, 0), (0, 0)), True) == sorted(
        {"IXIIII", "XIIIII", "IIIXII", "IIXIII", "IIIIIX", "IIIIXI"})


def test_printed_gamma_table_conflicts():
    with pytest.raises(ValueError):
        tq.PRINTED_GAMMA_TABLE.expand()
    _, conflicts = tq.PRINTED_GAMMA_TABLE.expand("first")
    assert [c[0] for c in conflicts] == [(4, 4, 4)]


def test_printed_pauli_table_conflicts():
    _, conflicts = tq.PRINTED_PAULI_TABLE.expand("last")
    assert sorted({c[0] for c in conflicts}) == ["IIZZZZ", "ZZIIZZ", "ZZZZII"]


def test_printed_tables_differ_from_reference():
    d = tq.printed_table_diagnostics()
    assert all(g["residual_vs_reference"] > 1.0 for g in d["gamma"])
    assert d["pauli"]["residual_vs_reference"] > 1.0
    assert d["printed_functional"]["lhv_bounds"] == [-3.0, 4.0]


@pytest.mark.parametrize("p,theta", [(0.0, 0.3), (0.5, math.pi / 4), (1.0, 1.2)])
def test_family_state_normalised(p, theta):
    assert np.linalg.norm(tq.family_state_3(p, theta)) == pytest.approx(1.0)


def test_family_p_one_third_at_pi_over_four_is_embedded_ghz(m64):
    # sqrt(2/3) GHZ_6 + sqrt(1/3) psi+^3 is the image of the three-qutrit GHZ state
    psi = tq.family_state_3(2 / 3, math.pi / 4)
    assert np.allclose(psi, embed_state(tq.maximally_entangled()), atol=1e-12)
    assert tq.family_expectation_3(2 / 3, m64=m64) == pytest.approx(13 / 3, abs=1e-12)


def test_family_rejects_bad_p():
    with pytest.raises(ValueError):
        tq.family_state_3(-0.1, 0.0)


def test_unknown_mode():
    with pytest.raises(ValueError):
        tq.optimize_family_3("nope")


def test_p_only_optimum(optima):
    o = optima["p-only"]
    assert o.value == pytest.approx(4.34520787991172, abs=1e-9)
    assert o.p == pytest.approx(0.713200709302743, abs=1e-5)
    assert math.sqrt(o.p) == pytest.approx(0.8445, abs=5e-4)


def test_p_theta_optimum(optima):
    o = optima["p-theta"]
    assert o.value == pytest.approx(tq.LAMBDA_MAX, abs=1e-9)
    assert o.p == pytest.approx(0.706480583820107, abs=1e-5)
    assert o.theta == pytest.approx(0.8703390649284586, abs=1e-5)
    assert math.sqrt(o.p) == pytest.approx(0.8405, abs=5e-4)


def test_p_theta_optimum_is_embedded_top_eigenvector(optima):
    o = optima["p-theta"]
    overlap = abs(np.vdot(tq.embedded_top_eigenvector(), tq.family_state_3(o.p, o.theta))) ** 2
    assert overlap == pytest.approx(1.0, abs=1e-9)
