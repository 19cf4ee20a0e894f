"""Acceptance checks shared by the test-suite and the ``reproduce`` command.

Every criterion is a list of ``Check`` records holding the computed value,
the reference value and the tolerance, so a failure shows by how much.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import cglmp, three_qutrit, tsirelson
from .decomp import decompose_gamma, pauli_expand, pauli_reconstruct, reconstruct_gamma
from .functional import lhv_bounds
from .linalg import commutator, expectation, fix_global_phase, hermitian_eig, random_hermitian, random_state
from .spin import SpinVariant, delta_basis, embed_state, gamma_basis, spin_matrices


@dataclass(frozen=True)
class Check:
    name: str
    computed: float
    expected: float
    tol: float
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "computed": self.computed, "expected": self.expected, "tol": self.tol,
                "passed": self.passed}


def close(name: str, computed: float, expected: float, tol: float) -> Check:
    computed, expected = float(computed), float(expected)
    return Check(name, computed, expected, tol, abs(computed - expected) <= tol)


def at_most(name: str, computed: float, bound: float) -> Check:
    return Check(name, float(computed), float(bound), 0.0, float(computed) <= bound)


def flag(name: str, ok: bool) -> Check:
    return Check(name, float(bool(ok)), 1.0, 0.0, bool(ok))


def criterion_1() -> list:
    eig = hermitian_eig(cglmp.canonical_operator())
    v = fix_global_phase(eig.top)
    return [
        close("lambda_max = 1 + sqrt(11/3)", eig.max, cglmp.LAMBDA_MAX, 1e-9),
        close("eigenvector a on |00>", v[0].real, cglmp.A_COEF, 1e-9),
        close("eigenvector b on |11>", v[4].real, cglmp.B_COEF, 1e-9),
        close("eigenvector a on |22>", v[8].real, cglmp.A_COEF, 1e-9),
        at_most("eigenvector weight elsewhere", np.linalg.norm(np.delete(v, [0, 4, 8])), 1e-9),
        close("a vs 0.617", cglmp.A_COEF, 0.617, 5e-4),
        close("b vs 0.489", cglmp.B_COEF, 0.489, 5e-4),
    ]


def criterion_2() -> list:
    val = expectation(cglmp.canonical_operator(), cglmp.maximally_entangled())
    return [
        close("<B> on maximally entangled = 4/3 + 8/(3 sqrt 3)", val, cglmp.ME_VALUE, 1e-12),
        close("<B> on maximally entangled vs 2.873", val, 2.873, 1e-3),
    ]


SPIN_FORM = {(1, 1): 2 / math.sqrt(3), (2, 2): -2 / math.sqrt(3), (4, 4): 1.0, (5, 5): 1.0,
             (4, 5): -1.0, (5, 4): -1.0, (9, 9): -1.0}


def expected_four_qubit_terms() -> dict:
    c = 1 / (2 * math.sqrt(3))
    terms = {s: c for s in ("XIXI", "XIIX", "IXXI", "IXIX")}
    terms.update({s: -c for s in ("YIYI", "YIIY", "IYYI", "IYIY")})
    terms.update({s: 0.25 for s in ("XXXX", "YYYY")})
    terms.update({s: -0.25 for s in ("XXYY", "YYXX", "XYXY", "XYYX", "YXXY", "YXYX")})
    return terms


def criterion_3() -> list:
    spin = cglmp.spin_form()
    poly = cglmp.qubit_polynomial()
    expected = expected_four_qubit_terms()
    cls = cglmp.classify_terms(poly, strict=False)
    spin_err = max(abs(spin[k] - SPIN_FORM.get(k, 0.0)) for k in set(spin.terms) | set(SPIN_FORM))
    pauli_err = max(abs(poly[k] - expected.get(k, 0.0)) for k in set(poly.terms) | set(expected))
    return [
        close("spin form term count", len(spin), 7, 0),
        at_most("spin form max coefficient error", spin_err, 1e-12),
        close("Pauli term count", len(poly), 16, 0),
        at_most("Pauli max coefficient error", pauli_err, 1e-12),
        close("CHSH blocks with two terms", sum(len(b) == 2 for b in cls.chsh_blocks.values()), 4, 0),
        close("Mermin block size", len(cls.mermin_block), 8, 0),
        close("residual size", len(cls.residual), 0, 0),
    ]


def criterion_4(samples: int = 100, seed: int = 2024) -> list:
    rng = np.random.default_rng(seed)
    m = cglmp.canonical_operator()
    lifted = cglmp.qubit_operator()
    worst = 0.0
    for _ in range(samples):
        psi = random_state(9, rng)
        worst = max(worst, abs(expectation(m, psi) - expectation(lifted, embed_state(psi))))
    return [at_most(f"embedding gap over {samples} random states", worst, 1e-10)]


def criterion_5() -> list:
    lo, hi = lhv_bounds(cglmp.functional())
    lo4, hi4 = lhv_bounds(cglmp.four_qubit_functional())
    lo3, hi3 = lhv_bounds(three_qutrit.functional())
    return [
        close("CGLMP classical min", lo, -4, 0),
        close("CGLMP classical max", hi, 2, 0),
        close("four-qubit classical min", lo4, 1 - 4 / math.sqrt(3), 1e-12),
        close("four-qubit classical max", hi4, 1 + 4 / math.sqrt(3), 1e-12),
        close("three-qutrit classical max", hi3, 3, 0),
    ]


def criterion_6() -> list:
    rep = cglmp.four_qubit_nonviolation()
    return [
        at_most("four-qubit quantum max <= 1 + 4/sqrt 3", rep.quantum_max, 1 + 4 / math.sqrt(3) + 1e-9),
        flag("four-qubit inequality not violated", not rep.violated),
    ]


def criterion_7() -> list:
    p, val = cglmp.optimize_family()
    img = embed_state(cglmp.maximally_entangled())
    return [
        close("p_max = (11 + sqrt 33)/22", p, cglmp.P_MAX, 1e-8),
        close("family maximum = 1 + sqrt(11/3)", val, cglmp.LAMBDA_MAX, 1e-9),
        at_most("|psi(2/3)> vs embedded maximally entangled state",
                np.max(np.abs(cglmp.family_state(2 / 3) - img)), 1e-12),
    ]


def criterion_8() -> list:
    checks = [flag(f"anticommuting witness for {{{', '.join(w.variables)}}}", w.found)
              for w in tsirelson.verify_anticommuting_sets()]
    pi_spec = hermitian_eig(tsirelson.pi_operator()).eigenvalues
    dist = max(min(abs(x), abs(x - 4)) for x in pi_spec)
    _, value = tsirelson.maximize()
    lam = hermitian_eig(cglmp.canonical_operator()).max
    checks += [
        at_most("Pi spectrum distance from {0, 4}", dist, 1e-10),
        close("constrained max = (4 + 4 sqrt(11/3))/4", value, tsirelson.TSIRELSON_VALUE, 1e-6),
        close("constrained max vs lambda_max", value, lam, 1e-6),
    ]
    return checks


def criterion_9() -> list:
    m27 = three_qutrit.operator_27()
    lam = hermitian_eig(m27).max
    me = expectation(m27, three_qutrit.maximally_entangled())
    p_only = three_qutrit.optimize_family_3("p-only")
    p_theta = three_qutrit.optimize_family_3("p-theta")
    top = three_qutrit.embedded_top_eigenvector()
    overlap = abs(np.vdot(top, three_qutrit.family_state_3(p_theta.p, p_theta.theta))) ** 2
    return [
        at_most("gamma-table lift vs Pauli table residual", three_qutrit.cross_check_residual(), 1e-9),
        close("lambda_max vs 4.372", lam, 4.372, 1e-3),
        close("<B> on maximally entangled vs 4.333", me, 4.333, 1e-3),
        close("p-only optimum value vs 4.345", p_only.value, 4.345, 1e-3),
        close("p-only optimum p vs 0.845", p_only.p, 0.845, 5e-3),
        close("(p, theta) optimum value vs 4.372", p_theta.value, 4.372, 1e-3),
        close("(p, theta) optimum p vs 0.841", p_theta.p, 0.841, 5e-3),
        close("(p, theta) optimum theta vs 0.870", p_theta.theta, 0.870, 5e-3),
        close("optimum state overlap with top eigenvector", overlap, 1.0, 1e-6),
    ]


def property_checks(seed: int = 7) -> list:
    rng = np.random.default_rng(seed)
    out = []
    for variant in SpinVariant:
        sx, sy, sz = spin_matrices(variant)
        comm = max(np.max(np.abs(commutator(a, b) - 1j * c)) for a, b, c in ((sx, sy, sz), (sy, sz, sx), (sz, sx, sy)))
        out.append(at_most(f"spin commutation residual, variant {variant.value}", comm, 1e-14))
        g = gamma_basis(variant).gram()
        out.append(at_most(f"gamma orthogonality, variant {variant.value}", np.max(np.abs(g - np.diag(np.diag(g)))), 1e-12))
    d = delta_basis().gram()
    out.append(at_most("delta orthogonality", np.max(np.abs(d - np.diag(np.diag(d)))), 1e-12))
    worst_rt = 0.0
    worst_eig = 0.0
    for dim in (3, 9, 27):
        m = random_hermitian(dim, rng)
        worst_rt = max(worst_rt, np.max(np.abs(reconstruct_gamma(decompose_gamma(m)) - m)))
        eig = hermitian_eig(m)
        scale = np.max(np.abs(m))
        for lam, vec in zip(eig.eigenvalues, eig.eigenvectors):
            worst_eig = max(worst_eig, np.max(np.abs(m @ vec - lam * vec)) / scale)
    m = random_hermitian(16, rng)
    worst_rt = max(worst_rt, np.max(np.abs(pauli_reconstruct(pauli_expand(m)) - m)))
    out.append(at_most("decomposition round-trip error", worst_rt, 1e-10))
    out.append(at_most("eigensolver relative residual", worst_eig, 1e-9))
    return out


CRITERIA: dict = {
    1: ("CGLMP maximal eigenvalue and eigenvector", criterion_1),
    2: ("CGLMP value on the maximally entangled state", criterion_2),
    3: ("spin form, four-qubit form and term classification", criterion_3),
    4: ("expectation preserved by the lift", criterion_4),
    5: ("classical bounds by enumeration", criterion_5),
    6: ("four-qubit inequality not violated", criterion_6),
    7: ("two-qutrit state family optimum", criterion_7),
    8: ("Tsirelson bound from complementarity", criterion_8),
    9: ("three-qutrit operator and state families", criterion_9),
}


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}


def run_criterion(number: int) -> CriterionResult:
    if number == 10:
        earlier = [run_criterion(k) for k in CRITERIA]
        checks = property_checks() + [flag("reproduce exits 0 (criteria 1-9 pass)", all(r.passed for r in earlier))]
        return CriterionResult(10, "property suites and reproduce exit status", tuple(checks))
    title, fn = CRITERIA[number]
    return CriterionResult(number, title, tuple(fn()))


def run_all() -> list:
    results = [run_criterion(k) for k in CRITERIA]
    props = property_checks() + [flag("reproduce exits 0 (criteria 1-9 pass)", all(r.passed for r in results))]
    results.append(CriterionResult(10, "property suites and reproduce exit status", tuple(props)))
    return results
