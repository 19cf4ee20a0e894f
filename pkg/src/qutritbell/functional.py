"""Bell functionals, their quantum Bell operators and exact classical bounds.

A functional is a weighted sum of either

* probability terms ``P(sum_i s_i A_i == target (mod d))`` for one setting
  choice per party, or
* correlation terms ``<prod_i A_i>`` with outcomes ``o`` mapped to ``(-1)^o``;
  a party whose setting is ``None`` does not take part in the product.

Classical bounds are found by enumerating every deterministic local strategy,
i.e. every assignment of an outcome to each (party, setting) pair.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Sequence, Union

import numpy as np

from .linalg import DimensionError, as_state, expectation, kron_all, projector

ENUMERATION_BUDGET = 10**7


@dataclass(frozen=True)
class ProbabilityTerm:
    settings: tuple
    signs: tuple
    target: int
    coeff: float


@dataclass(frozen=True)
class CorrelationTerm:
    settings: tuple
    coeff: float


Term = Union[ProbabilityTerm, CorrelationTerm]


class EnumerationBudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class BellFunctional:
    parties: int
    settings: int
    outcomes: int
    terms: tuple
    bounds: Optional[tuple] = None
    name: str = ""

    def __post_init__(self):
        kinds = {type(t) for t in self.terms}
        if len(kinds) > 1:
            raise ValueError("probability and correlation terms cannot be mixed")
        for t in self.terms:
            if len(t.settings) != self.parties:
                raise ValueError(f"term {t} does not have {self.parties} setting entries")
            for s in t.settings:
                if s is not None and not 0 <= s < self.settings:
                    raise ValueError(f"setting {s} out of range")
            if isinstance(t, ProbabilityTerm):
                if len(t.signs) != self.parties:
                    raise ValueError(f"term {t} does not have {self.parties} signs")
                if any(s is None for s in t.settings):
                    raise ValueError("probability terms need a setting for every party")
            elif self.outcomes != 2:
                raise ValueError("correlation terms need two outcomes per setting")

    @property
    def is_correlation(self) -> bool:
        return bool(self.terms) and isinstance(self.terms[0], CorrelationTerm)

    def scaled(self, factor: float) -> "BellFunctional":
        terms = tuple(_with_coeff(t, t.coeff * factor) for t in self.terms)
        return BellFunctional(self.parties, self.settings, self.outcomes, terms, None, self.name)

    def to_json(self) -> dict:
        out = {"parties": self.parties, "settings": self.settings, "outcomes": self.outcomes, "terms": []}
        if self.name:
            out["name"] = self.name
        for t in self.terms:
            if isinstance(t, ProbabilityTerm):
                out["terms"].append({"kind": "prob", "settings": list(t.settings), "signs": list(t.signs),
                                     "target": t.target, "coeff": t.coeff})
            else:
                out["terms"].append({"kind": "corr", "settings": list(t.settings), "coeff": t.coeff})
        if self.bounds is not None:
            out["bounds"] = list(self.bounds)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "BellFunctional":
        terms = []
        for t in obj["terms"]:
            settings = tuple(None if s is None else int(s) for s in t["settings"])
            if t["kind"] == "prob":
                terms.append(ProbabilityTerm(settings, tuple(int(s) for s in t["signs"]), int(t["target"]),
                                             float(t["coeff"])))
            elif t["kind"] == "corr":
                terms.append(CorrelationTerm(settings, float(t["coeff"])))
            else:
                raise ValueError(f"unknown term kind {t['kind']!r}")
        bounds = tuple(obj["bounds"]) if obj.get("bounds") is not None else None
        return cls(int(obj["parties"]), int(obj["settings"]), int(obj["outcomes"]), tuple(terms), bounds,
                   obj.get("name", ""))

    @classmethod
    def load(cls, path) -> "BellFunctional":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def _with_coeff(t: Term, coeff: float) -> Term:
    if isinstance(t, ProbabilityTerm):
        return ProbabilityTerm(t.settings, t.signs, t.target, coeff)
    return CorrelationTerm(t.settings, coeff)


@dataclass(frozen=True)
class MeasurementSettings:
    """``bases[party][setting][outcome]`` is the outcome's basis vector."""

    bases: tuple = field(default_factory=tuple)

    def __post_init__(self):
        for p, party in enumerate(self.bases):
            for s, basis in enumerate(party):
                b = np.asarray(basis)
                gram = b.conj() @ b.T
                if np.max(np.abs(gram - np.eye(len(b)))) > 1e-12:
                    raise ValueError(f"basis for party {p}, setting {s} is not orthonormal")

    @property
    def parties(self) -> int:
        return len(self.bases)

    @property
    def settings(self) -> int:
        return len(self.bases[0])

    @property
    def outcomes(self) -> int:
        return len(self.bases[0][0])

    @classmethod
    def from_arrays(cls, bases) -> "MeasurementSettings":
        return cls(tuple(tuple(np.array(b, dtype=complex) for b in party) for party in bases))

    def to_json(self) -> dict:
        return {"bases": [[[[[float(z.real), float(z.imag)] for z in vec] for vec in basis]
                           for basis in party] for party in self.bases]}

    @classmethod
    def from_json(cls, obj: dict) -> "MeasurementSettings":
        return cls.from_arrays([[[[complex(re, im) for re, im in vec] for vec in basis]
                                 for basis in party] for party in obj["bases"]])


def _strategy_values(f: BellFunctional) -> np.ndarray:
    n, m, d = f.parties, f.settings, f.outcomes
    count = d ** (n * m)
    if count > ENUMERATION_BUDGET:
        raise EnumerationBudgetError(f"{count} deterministic strategies exceed the budget of {ENUMERATION_BUDGET}")
    # strategies[k, party, setting] = outcome
    strategies = np.array(list(itertools.product(range(d), repeat=n * m)), dtype=np.int64).reshape(count, n, m)
    values = np.zeros(count)
    for t in f.terms:
        if isinstance(t, ProbabilityTerm):
            total = sum(sign * strategies[:, p, s] for p, (s, sign) in enumerate(zip(t.settings, t.signs)))
            values += t.coeff * ((total - t.target) % d == 0)
        else:
            prod = np.ones(count)
            for p, s in enumerate(t.settings):
                if s is not None:
                    prod = prod * (1 - 2 * strategies[:, p, s])
            values += t.coeff * prod
    return values


def lhv_bounds(f: BellFunctional) -> tuple:
    """Minimum and maximum of ``f`` over all deterministic local strategies."""
    values = _strategy_values(f)
    return float(values.min()), float(values.max())


def _check_arity(f: BellFunctional, s: MeasurementSettings):
    if (s.parties, s.settings, s.outcomes) != (f.parties, f.settings, f.outcomes):
        raise DimensionError(
            f"settings shape {(s.parties, s.settings, s.outcomes)} does not match functional "
            f"{(f.parties, f.settings, f.outcomes)}")


def bell_operator(f: BellFunctional, s: MeasurementSettings) -> np.ndarray:
    """Sum over terms of coefficient times the matching product of outcome
    projectors (probability terms) or of +-1 observables (correlation terms)."""
    _check_arity(f, s)
    d, n = f.outcomes, f.parties
    proj = [[[projector(v) for v in basis] for basis in party] for party in s.bases]
    out = np.zeros((d**n, d**n), dtype=complex)
    for t in f.terms:
        if t.coeff == 0:
            continue
        if isinstance(t, ProbabilityTerm):
            for outs in itertools.product(range(d), repeat=n):
                if (sum(sg * o for sg, o in zip(t.signs, outs)) - t.target) % d == 0:
                    out += t.coeff * kron_all([proj[p][t.settings[p]][outs[p]] for p in range(n)])
        else:
            factors = []
            for p in range(n):
                st = t.settings[p]
                if st is None:
                    factors.append(np.eye(d))
                else:
                    factors.append(sum((-1) ** o * proj[p][st][o] for o in range(d)))
            out += t.coeff * kron_all(factors)
    return out


def evaluate(f: BellFunctional, s: MeasurementSettings, psi) -> float:
    return expectation(bell_operator(f, s), as_state(psi))


def probability_table(s: MeasurementSettings, psi, choice: Sequence[int]) -> np.ndarray:
    """Joint outcome probabilities ``P(o_1..o_n | choice)`` by the Born rule."""
    psi = as_state(psi)
    n = s.parties
    d = s.outcomes
    table = np.zeros((d,) * n)
    for outs in itertools.product(range(d), repeat=n):
        vec = kron_all([s.bases[p][choice[p]][outs[p]] for p in range(n)])
        table[outs] = abs(np.vdot(vec, psi)) ** 2
    return table


BUILTIN = {
    "cglmp": "cglmp.json",
    "four-qubit": "four_qubit.json",
    "three-qutrit": "three_qutrit.json",
    "three-qutrit-printed": "three_qutrit_printed.json",
}


def builtin_json(name: str) -> dict:
    """Raw JSON of a shipped functional (see ``BUILTIN`` for names)."""
    try:
        fname = BUILTIN[name]
    except KeyError:
        raise KeyError(f"unknown built-in functional {name!r}; choose from {sorted(BUILTIN)}") from None
    return json.loads(resources.files("qutritbell.data").joinpath(fname).read_text())


def builtin(name: str) -> BellFunctional:
    return BellFunctional.from_json(builtin_json(name))
