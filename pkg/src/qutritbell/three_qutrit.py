"""Three-qutrit CGLMP-type inequality: operator, coefficient tables, optimal states.

The operator is built from the functional and an explicit party-symmetric
choice of Fourier-type settings.  From it we regenerate the two coefficient
tables (gamma basis and six-qubit Pauli strings, both in "[...]" orbit
notation) and cross-check that they describe the same operator.  The tables
as originally printed, inconsistencies included, are kept for diagnostics.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .decomp import TensorCoefficients, decompose_gamma, lift_to_qubits, pauli_expand, pauli_string, reconstruct_gamma
from .functional import BellFunctional, MeasurementSettings, bell_operator, builtin, lhv_bounds
from .linalg import expectation, fix_global_phase, hermitian_eig
from .optimize import golden_section_max
from .spin import PSI_PLUS, SpinVariant, embedding_isometry, ghz_qutrits, ket

SQ2 = math.sqrt(2.0)
LAMBDA_MAX = (3.0 + math.sqrt(33.0)) / 2.0
ME_VALUE = 13.0 / 3.0
PAULI_TABLE_SCALE = 16.0

# per-outcome-index phases in units of 2 pi / 3, identical for all parties
SETTING_PHASES = ((0.0, -1.0 / 6.0, -1.0 / 6.0), (0.0, -1.0 / 6.0, 5.0 / 6.0))


def phased_dft_basis(phases) -> np.ndarray:
    """Rows ``|k> = sum_j exp(2 pi i (phi_j + j k) / 3) |j> / sqrt(3)``."""
    j = np.arange(3)
    ph = np.asarray(phases, dtype=float)
    return np.array([np.exp(2j * np.pi * (ph + j * k) / 3.0) for k in range(3)]) / math.sqrt(3.0)


def functional(printed: bool = False) -> BellFunctional:
    """The inequality; ``printed=True`` gives the printed variant with
    ``P(A2+B1+C2=0)``, whose classical maximum is 4 rather than 3."""
    return builtin("three-qutrit-printed" if printed else "three-qutrit")


def optimal_settings() -> MeasurementSettings:
    party = [phased_dft_basis(ph) for ph in SETTING_PHASES]
    return MeasurementSettings.from_arrays([party, party, party])


def operator_27(printed: bool = False) -> np.ndarray:
    return bell_operator(functional(printed), optimal_settings())


# ---------------------------------------------------------------- tables


def _distinct_permutations(t) -> list:
    return sorted(set(itertools.permutations(t)))


@dataclass(frozen=True)
class GammaEntry:
    indices: tuple
    permute: bool
    coeff: float

    def label(self) -> str:
        body = "".join(str(i) for i in self.indices)
        return f"[{body}]" if self.permute else body


@dataclass(frozen=True)
class GammaTable:
    entries: tuple

    def expand(self, on_conflict: str = "error") -> tuple:
        """Per-index coefficients and the list of conflicting assignments.

        ``on_conflict`` is ``"error"``, ``"first"`` (keep the earlier value)
        or ``"last"``.
        """
        terms, conflicts = {}, []
        for e in self.entries:
            for idx in (_distinct_permutations(e.indices) if e.permute else [tuple(e.indices)]):
                if idx in terms and not math.isclose(terms[idx], e.coeff, abs_tol=1e-12):
                    conflicts.append((idx, terms[idx], e.coeff))
                    if on_conflict == "error":
                        raise ValueError(f"index {idx} assigned both {terms[idx]} and {e.coeff}")
                    if on_conflict == "first":
                        continue
                terms[idx] = e.coeff
        return TensorCoefficients(3, terms), conflicts

    def to_json(self) -> list:
        return [{"index": e.label(), "coeff": e.coeff} for e in self.entries]


@dataclass(frozen=True)
class PauliEntry:
    pairs: tuple
    permute: bool
    coeff: float

    def label(self) -> str:
        if not self.permute:
            return "".join(f"{a}{b}" for a, b in self.pairs)
        return "[" + "".join(f"({a}{b})" for a, b in self.pairs) + "]"


_PAULI_LETTERS = "IXYZ"


def _pair_strings(pairs, permute: bool) -> list:
    # pairs stay on the qubit pairs (1,2), (3,4), (5,6); within a pair both
    # orders L K and K L occur
    slots = _distinct_permutations(pairs) if permute else [tuple(pairs)]
    out = set()
    for sl in slots:
        for orders in itertools.product(*[sorted({(a, b), (b, a)}) for a, b in sl]):
            out.add("".join(_PAULI_LETTERS[i] for pr in orders for i in pr))
    return sorted(out)


@dataclass(frozen=True)
class PauliTable:
    entries: tuple
    scale: float = PAULI_TABLE_SCALE

    def expand(self, on_conflict: str = "error") -> tuple:
        terms, conflicts = {}, []
        for e in self.entries:
            for s in _pair_strings(e.pairs, e.permute):
                c = e.coeff / self.scale
                if s in terms and not math.isclose(terms[s], c, abs_tol=1e-12):
                    conflicts.append((s, terms[s] * self.scale, e.coeff))
                    if on_conflict == "error":
                        raise ValueError(f"string {s} assigned both {terms[s] * self.scale} and {e.coeff}")
                    if on_conflict == "first":
                        continue
                terms[s] = c
        return terms, conflicts

    def to_json(self) -> list:
        return [{"index": e.label(), "coeff": e.coeff} for e in self.entries]


def operator_from_gamma_table(t: GammaTable, variant: SpinVariant | str = SpinVariant.A,
                              on_conflict: str = "error") -> np.ndarray:
    coeffs, _ = t.expand(on_conflict)
    return reconstruct_gamma(coeffs, variant)


def lifted_from_gamma_table(t: GammaTable, on_conflict: str = "error") -> np.ndarray:
    coeffs, _ = t.expand(on_conflict)
    return lift_to_qubits(coeffs)


def operator_from_pauli_table(t: PauliTable, on_conflict: str = "error") -> np.ndarray:
    terms, _ = t.expand(on_conflict)
    out = np.zeros((64, 64), dtype=complex)
    for s, c in terms.items():
        out += c * pauli_string(s)
    return out


def gamma_table_from_operator(m, variant: SpinVariant | str = SpinVariant.A) -> GammaTable:
    """Group gamma coefficients into permutation orbits; every orbit must
    carry a single value (the operator is symmetric under party exchange)."""
    coeffs = decompose_gamma(m, variant)
    orbits = {}
    for idx, c in coeffs.items():
        orbits.setdefault(tuple(sorted(idx)), {})[idx] = c
    entries = []
    for key in sorted(orbits):
        members = orbits[key]
        values = list(members.values())
        if len(members) != len(_distinct_permutations(key)) or max(values) - min(values) > 1e-10:
            raise ValueError(f"coefficients of orbit {key} are not permutation symmetric")
        entries.append(GammaEntry(key, len(set(key)) > 1, float(np.mean(values))))
    return GammaTable(tuple(entries))


def pauli_table_from_operator(m64) -> PauliTable:
    """Group six-qubit Pauli coefficients into orbits of the (L,K) pair rule,
    scaled by 16 as in the printed table."""
    poly = pauli_expand(m64)
    orbits = {}
    for s, c in poly.items():
        pairs = tuple(sorted(tuple(sorted((_PAULI_LETTERS.index(s[2 * k]), _PAULI_LETTERS.index(s[2 * k + 1]))))
                             for k in range(3)))
        orbits.setdefault(pairs, {})[s] = c
    entries = []
    for key in sorted(orbits):
        members = orbits[key]
        values = list(members.values())
        permute = len(set(key)) > 1 or key[0][0] != key[0][1]
        if set(members) != set(_pair_strings(key, True)) or max(values) - min(values) > 1e-10:
            raise ValueError(f"coefficients of pair orbit {key} do not follow the pairing rule")
        entries.append(PauliEntry(key, permute, float(np.mean(values)) * PAULI_TABLE_SCALE))
    return PauliTable(tuple(entries))


def _r(k):
    return k / (8.0 * SQ2)


PRINTED_GAMMA_TABLE = GammaTable(tuple(GammaEntry(i, p, c) for i, p, c in [
    ((1, 2, 2), True, -3 * _r(1)), ((1, 7, 7), True, -3 * _r(1)), ((2, 7, 9), True, -3 * _r(1)),
    ((1, 2, 7), True, -_r(1)), ((2, 2, 8), True, -_r(1)), ((7, 7, 8), True, -_r(1)),
    ((4, 4, 4), False, -0.25), ((4, 5, 5), True, -0.25),
    ((5, 9, 9), True, -0.5), ((4, 9, 9), True, 0.5),
    ((3, 3, 4), True, 0.25), ((3, 3, 5), True, 0.25),
    ((8, 8, 8), False, _r(1)), ((1, 1, 8), True, _r(1)),
    ((1, 1, 1), False, 3 * _r(1)), ((1, 8, 8), True, 3 * _r(1)),
    ((5, 5, 5), False, 0.75), ((4, 4, 5), True, 0.75),
    ((4, 4, 4), False, 1.0),
]))

_S = 1.0 / SQ2
PRINTED_PAULI_TABLE = PauliTable(tuple(PauliEntry(p, perm, c) for p, perm, c in [
    (((0, 1), (0, 2), (0, 2)), True, -3 * _S), (((0, 1), (2, 3), (2, 3)), True, -3 * _S),
    (((1, 3), (0, 2), (2, 3)), True, -3 * _S),
    (((0, 1), (0, 2), (2, 3)), True, -_S), (((0, 1), (0, 1), (1, 3)), True, -_S),
    (((0, 2), (0, 2), (1, 3)), True, -_S),
    (((1, 1), (1, 2), (1, 2)), True, -4.0),
    (((2, 2), (2, 2), (2, 2)), False, -3.0), (((1, 1), (1, 1), (2, 2)), True, -3.0),
    (((0, 0), (1, 1), (3, 3)), True, -1.0), (((0, 0), (2, 2), (3, 3)), True, -1.0),
    (((0, 0), (0, 0), (1, 1)), True, 1.0), (((0, 0), (0, 0), (2, 2)), True, 1.0),
    (((0, 0), (0, 0), (3, 3)), True, 1.0), (((0, 0), (1, 1), (1, 1)), True, 1.0),
    (((0, 0), (2, 2), (2, 2)), True, 1.0), (((0, 0), (3, 3), (3, 3)), True, 1.0),
    (((0, 0), (1, 1), (2, 2)), True, 1.0), (((1, 1), (3, 3), (3, 3)), True, 1.0),
    (((2, 2), (3, 3), (3, 3)), True, 1.0), (((3, 3), (3, 3), (3, 3)), False, 1.0),
    (((0, 0), (0, 3), (0, 3)), True, 2.0), (((0, 3), (0, 3), (3, 3)), True, 2.0),
    (((0, 0), (0, 0), (0, 0)), False, 3.0), (((0, 0), (3, 3), (3, 3)), True, 3.0),
    (((1, 2), (1, 2), (2, 2)), True, 4.0),
    (((1, 1), (1, 1), (1, 1)), False, 5.0), (((1, 1), (2, 2), (2, 2)), True, 5.0),
    (((0, 1), (0, 1), (0, 1)), True, 3 * _S), (((0, 1), (1, 3), (1, 3)), True, 3 * _S),
    (((0, 1), (0, 1), (2, 3)), True, _S), (((1, 3), (1, 3), (1, 3)), True, _S),
]))


def gamma_table() -> GammaTable:
    return gamma_table_from_operator(operator_27(), SpinVariant.A)


def pauli_table() -> PauliTable:
    return pauli_table_from_operator(lifted_from_gamma_table(gamma_table()))


def operator_64() -> np.ndarray:
    """Six-qubit operator rebuilt from the regenerated Pauli table."""
    return operator_from_pauli_table(pauli_table())


def cross_check_residual() -> float:
    """Max entrywise gap between the lifted gamma table and the Pauli table."""
    return float(np.max(np.abs(lifted_from_gamma_table(gamma_table()) - operator_64())))


# ---------------------------------------------------------------- states


def _check_p(p: float):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p = {p} outside [0, 1]")


def family_state_3(p: float, theta: float) -> np.ndarray:
    """``sqrt(p)(sin t |0>^6 + cos t |1>^6) + sqrt(1-p)|psi+>^3``."""
    _check_p(p)
    ghz = math.sin(theta) * ket("0" * 6) + math.cos(theta) * ket("1" * 6)
    return math.sqrt(p) * ghz + math.sqrt(1.0 - p) * np.kron(np.kron(PSI_PLUS, PSI_PLUS), PSI_PLUS)


class _Family:
    # caches the six-qubit operator for repeated evaluations
    def __init__(self, m64=None):
        self.m = operator_64() if m64 is None else m64

    def __call__(self, p: float, theta: float) -> float:
        return expectation(self.m, family_state_3(p, theta))


def family_expectation_3(p: float, theta: float = math.pi / 4, m64=None) -> float:
    return _Family(m64)(p, theta)


@dataclass(frozen=True)
class FamilyOptimum:
    mode: str
    p: float
    theta: float
    value: float

    def to_json(self) -> dict:
        return {"mode": self.mode, "p": self.p, "sqrt_p": math.sqrt(self.p), "theta": self.theta, "value": self.value}


def optimize_family_3(mode: str = "p-theta", tol: float = 1e-10, m64=None) -> FamilyOptimum:
    """Nested golden-section search over ``p`` (inner) and ``theta`` in
    ``[0, pi/2]`` (outer); ``mode="p-only"`` fixes ``theta = pi/4``."""
    fam = _Family(m64)
    if mode == "p-only":
        p, v = golden_section_max(lambda q: fam(q, math.pi / 4), 0.0, 1.0, tol)
        return FamilyOptimum(mode, p, math.pi / 4, v)
    if mode != "p-theta":
        raise ValueError(f"unknown mode {mode!r}")

    def best_over_p(theta):
        return golden_section_max(lambda q: fam(q, theta), 0.0, 1.0, tol)

    theta, v = golden_section_max(lambda t: best_over_p(t)[1], 0.0, math.pi / 2, tol)
    p, v = best_over_p(theta)
    return FamilyOptimum(mode, p, theta, v)


def maximally_entangled() -> np.ndarray:
    return ghz_qutrits(3)


def top_eigenvector() -> np.ndarray:
    return fix_global_phase(hermitian_eig(operator_27()).top)


def embedded_top_eigenvector() -> np.ndarray:
    return fix_global_phase(embedding_isometry(3, SpinVariant.A) @ top_eigenvector())


# ---------------------------------------------------------------- diagnostics


def printed_table_diagnostics() -> dict:
    """How the printed tables fare against the reference operator."""
    ref27 = operator_27()
    ref64 = operator_64()
    me = maximally_entangled()
    out = {"gamma": [], "pauli": {}}
    for reading in ("first", "last"):
        coeffs, conflicts = PRINTED_GAMMA_TABLE.expand(reading)
        for variant in SpinVariant:
            m = operator_from_gamma_table(PRINTED_GAMMA_TABLE, variant, reading)
            out["gamma"].append({
                "reading": reading,
                "b444": coeffs[(4, 4, 4)],
                "variant": variant.value,
                "lambda_max": hermitian_eig(m).max,
                "maximally_entangled_value": expectation(m, me),
                "residual_vs_reference": float(np.max(np.abs(m - ref27))),
            })
    terms, conflicts = PRINTED_PAULI_TABLE.expand("last")
    m = operator_from_pauli_table(PRINTED_PAULI_TABLE, "last")
    out["pauli"] = {
        "strings": len(terms),
        "conflicts": [{"string": s, "values": [a, b]} for s, a, b in conflicts],
        "lambda_max": hermitian_eig(m).max,
        "residual_vs_reference": float(np.max(np.abs(m - ref64))),
        "residual_vs_printed_gamma": [
            float(np.max(np.abs(m - lifted_from_gamma_table(PRINTED_GAMMA_TABLE, r)))) for r in ("first", "last")],
    }
    printed = functional(printed=True)
    out["printed_functional"] = {
        "lhv_bounds": list(lhv_bounds(printed)),
        "lambda_max": hermitian_eig(operator_27(printed=True)).max,
    }
    return out


def report(include_diagnostics: bool = True) -> dict:
    m27 = operator_27()
    eig = hermitian_eig(m27)
    v = fix_global_phase(eig.top)
    p_only = optimize_family_3("p-only")
    p_theta = optimize_family_3("p-theta")
    overlap = abs(np.vdot(embedded_top_eigenvector(), family_state_3(p_theta.p, p_theta.theta))) ** 2
    out = {
        "gamma_table": gamma_table().to_json(),
        "pauli_table": pauli_table().to_json(),
        "spectrum_27": [float(x) for x in eig.eigenvalues],
        "lambda_max": eig.max,
        "lambda_max_64": hermitian_eig(operator_64()).max,
        "top_eigenvector": {d: float(v[int(d, 3)].real) for d in ("000", "111", "222")},
        "maximally_entangled_value": expectation(m27, maximally_entangled()),
        "cross_check_residual": cross_check_residual(),
        "family": {"p_only": p_only.to_json(), "p_theta": p_theta.to_json(), "overlap_with_top": overlap},
        "lhv_bounds": list(lhv_bounds(functional())),
    }
    if include_diagnostics:
        out["printed_tables"] = printed_table_diagnostics()
    return out
