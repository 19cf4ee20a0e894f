"""Tsirelson bound of CGLMP from complementarity of four-qubit correlations.

The lifted CGLMP operator only involves a handful of correlation classes
whose members share one expectation value on symmetric states:

    alpha: X.X. type two-body terms    beta: Y..Y type two-body terms
    tau:   mixed XY four-body terms    eps:  XXYY, YYXX

Writing the Bell value in these variables and bounding squared expectations
of pairwise-anticommuting observables turns the Tsirelson bound into a small
constrained maximization.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .decomp import pauli_string
from .linalg import anticommutator, expectation, hermitian_eig

SQ3 = math.sqrt(3.0)
TSIRELSON_VALUE = (4.0 + 4.0 * math.sqrt(11.0 / 3.0)) / 4.0

CLASSES = {
    "alpha": ("XIXI", "XIIX", "IXXI", "IXIX"),
    "beta": ("YIIY", "YIYI", "IYYI", "IYIY"),
    "tau": ("YXYX", "YXXY", "XYXY", "XYYX"),
    "epsilon": ("XXYY", "YYXX"),
}
UNIT_CLASS = ("XXXX", "YYYY")
VARIABLES = ("alpha", "beta", "tau", "epsilon")
ANTICOMMUTING_SETS = (("alpha", "beta", "epsilon"), ("alpha", "tau"), ("beta", "tau"))


@dataclass(frozen=True)
class CorrelationVariables:
    alpha: float
    beta: float
    tau: float
    epsilon: float

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.tau, self.epsilon])

    @classmethod
    def from_array(cls, x) -> "CorrelationVariables":
        return cls(*(float(v) for v in x))

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in VARIABLES}


@dataclass(frozen=True)
class ConstraintSystem:
    """``alpha^2+beta^2+eps^2 <= 1``, ``alpha^2+tau^2 <= 1``,
    ``beta^2+tau^2 <= 1``, ``eps - 2 tau <= 1`` and the unit box."""

    tol: float = 1e-12

    def slacks(self, v: CorrelationVariables) -> np.ndarray:
        a, b, t, e = v.as_array()
        return np.array([
            1 - a * a - b * b - e * e,
            1 - a * a - t * t,
            1 - b * b - t * t,
            1 - e + 2 * t,
            *(1 - abs(x) for x in (a, b, t, e)),
        ])

    def feasible(self, v: CorrelationVariables) -> bool:
        return bool(np.all(self.slacks(v) >= -self.tol))


def objective(v: CorrelationVariables) -> float:
    """``(8/sqrt(3) (alpha - beta) - 4 tau - 2 eps + 2) / 4``."""
    return 0.25 * (8.0 / SQ3 * (v.alpha - v.beta) - 4.0 * v.tau - 2.0 * v.epsilon + 2.0)


def bell_polynomial_from_classes() -> dict:
    """The four-qubit CGLMP polynomial rebuilt from the class definitions."""
    c2 = 1.0 / (2.0 * SQ3)
    terms = {}
    for s in CLASSES["alpha"]:
        terms[s] = c2
    for s in CLASSES["beta"]:
        terms[s] = -c2
    for s in CLASSES["tau"] + CLASSES["epsilon"]:
        terms[s] = -0.25
    for s in UNIT_CLASS:
        terms[s] = 0.25
    return terms


@dataclass(frozen=True)
class AnticommutationWitness:
    variables: tuple
    representatives: tuple
    found: bool

    def to_json(self) -> dict:
        return {"set": list(self.variables), "representatives": list(self.representatives), "found": self.found}


def find_anticommuting_representatives(variables, tol: float = 1e-12) -> AnticommutationWitness:
    """Search all choices of one class member per variable for a pairwise
    anticommuting assignment; the first in lexicographic order is returned."""
    for choice in itertools.product(*(CLASSES[v] for v in variables)):
        mats = [pauli_string(s) for s in choice]
        if all(np.max(np.abs(anticommutator(a, b))) <= tol for a, b in itertools.combinations(mats, 2)):
            return AnticommutationWitness(tuple(variables), choice, True)
    return AnticommutationWitness(tuple(variables), (), False)


def verify_anticommuting_sets() -> list:
    return [find_anticommuting_representatives(s) for s in ANTICOMMUTING_SETS]


def pi_operator() -> np.ndarray:
    """``2 - XXXX - XXYY + YXYX + YXXY``, four times a projector."""
    return (2.0 * np.eye(16) - pauli_string("XXXX") - pauli_string("XXYY")
            + pauli_string("YXYX") + pauli_string("YXXY"))


def class_expectations(psi) -> dict:
    """Expectation of every class member (and the unit class) on a four-qubit state."""
    out = {name: [expectation(pauli_string(s), psi) for s in members] for name, members in CLASSES.items()}
    out["unit"] = [expectation(pauli_string(s), psi) for s in UNIT_CLASS]
    return out


def _grid_candidate(step: float) -> np.ndarray:
    # eps enters the objective with a negative sign and only in the first and
    # the linear constraint, so for fixed (alpha, beta, tau) its best value is
    # -sqrt(1 - alpha^2 - beta^2), feasible iff that is <= 1 + 2 tau.
    ticks = np.round(np.arange(-1.0, 1.0 + step / 2, step), 12)
    a, b = np.meshgrid(ticks, ticks, indexing="ij")
    r = 1.0 - a * a - b * b
    ok_ab = r >= 0
    eps = -np.sqrt(np.where(ok_ab, r, 0.0))
    best_val, best = -np.inf, None
    for t in ticks:
        ok = ok_ab & (a * a + t * t <= 1.0) & (b * b + t * t <= 1.0) & (eps <= 1.0 + 2.0 * t)
        if not ok.any():
            continue
        val = np.where(ok, 0.25 * (8.0 / SQ3 * (a - b) - 4.0 * t - 2.0 * eps + 2.0), -np.inf)
        k = np.unravel_index(np.argmax(val), val.shape)
        if val[k] > best_val:
            best_val, best = val[k], np.array([a[k], b[k], t, eps[k]])
    return best


def maximize(c: ConstraintSystem = ConstraintSystem(), step: float = 0.01) -> tuple:
    """Global maximum of ``objective`` under ``c``: grid search, then SLSQP from
    the best grid point.  Returns ``(CorrelationVariables, value)``."""
    x0 = _grid_candidate(step)
    cons = [{"type": "ineq", "fun": (lambda x, i=i: c.slacks(CorrelationVariables.from_array(x))[i])}
            for i in range(4)]
    res = minimize(lambda x: -objective(CorrelationVariables.from_array(x)), x0, method="SLSQP",
                   bounds=[(-1.0, 1.0)] * 4, constraints=cons, options={"ftol": 1e-15, "maxiter": 500})
    x = res.x if c.feasible(CorrelationVariables.from_array(res.x)) else x0
    v = CorrelationVariables.from_array(x)
    return v, objective(v)


def report() -> dict:
    from .cglmp import canonical_operator, embedded_max_state

    argmax, value = maximize()
    pi_spec = hermitian_eig(pi_operator()).eigenvalues
    lam = hermitian_eig(canonical_operator()).max
    return {
        "witnesses": [w.to_json() for w in verify_anticommuting_sets()],
        "pi_spectrum": {"min": float(pi_spec.min()), "max": float(pi_spec.max()),
                        "count_4": int(np.sum(np.abs(pi_spec - 4) < 1e-10)),
                        "count_0": int(np.sum(np.abs(pi_spec) < 1e-10))},
        "argmax": argmax.to_json(),
        "max_value": value,
        "expected": TSIRELSON_VALUE,
        "lambda_max_cglmp": lam,
        "difference": value - lam,
        "pi_on_max_state": expectation(pi_operator(), embedded_max_state()),
    }
