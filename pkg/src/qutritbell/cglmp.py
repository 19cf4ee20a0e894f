"""Two-qutrit CGLMP analysis in the qutrit and the symmetric four-qubit pictures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decomp import PauliPolynomial, TensorCoefficients, decompose_gamma, lift_to_qubits, pauli_expand, pauli_string
from .functional import BellFunctional, MeasurementSettings, bell_operator, builtin, lhv_bounds
from .linalg import expectation, fix_global_phase, hermitian_eig
from .optimize import bisect_root, golden_section_max
from .spin import PSI_PLUS, SpinVariant, embed_state, ghz_qubits, qutrit_ket

SQ3 = math.sqrt(3.0)
LAMBDA_MAX = 1.0 + math.sqrt(11.0 / 3.0)
ME_VALUE = 4.0 / 3.0 + 8.0 / (3.0 * SQ3)
_NORM = math.sqrt(462.0 + 78.0 * math.sqrt(33.0))
A_COEF = (5.0 * SQ3 + 3.0 * math.sqrt(11.0)) / _NORM
B_COEF = (9.0 + math.sqrt(33.0)) / _NORM
P_MAX = (11.0 + math.sqrt(33.0)) / 22.0
FOUR_QUBIT_BOUNDS = (1.0 - 4.0 / SQ3, 1.0 + 4.0 / SQ3)

# qubit pairs (1-based) carrying a CHSH-like block
CHSH_PAIRS = ((1, 3), (1, 4), (2, 3), (2, 4))


def canonical_operator() -> np.ndarray:
    """The 9x9 CGLMP Bell operator at the optimal settings, in the
    ``|00>, |01>, ..., |22>`` basis."""
    m = np.zeros((9, 9), dtype=complex)
    t = 2.0 / SQ3
    for i, j, v in ((0, 4, t), (0, 8, 2.0), (1, 5, t), (3, 7, t), (4, 8, t)):
        m[i, j] = m[j, i] = v
    return m


def max_state() -> np.ndarray:
    """``a|00> + b|11> + a|22>``, the top eigenvector of the canonical operator."""
    return A_COEF * qutrit_ket("00") + B_COEF * qutrit_ket("11") + A_COEF * qutrit_ket("22")


def maximally_entangled() -> np.ndarray:
    return (qutrit_ket("00") + qutrit_ket("11") + qutrit_ket("22")) / SQ3


def dft_basis(offset: float, d: int = 3) -> np.ndarray:
    """Rows are outcome vectors ``|k> = sum_j exp(2 pi i j (k + offset) / d) |j> / sqrt(d)``."""
    j = np.arange(d)
    return np.array([np.exp(2j * np.pi * j * (k + offset) / d) for k in range(d)]) / math.sqrt(d)


def optimal_settings() -> MeasurementSettings:
    """Fourier-type bases: offsets 0 and 1/2 for the first party, -1/4 and 1/4 for the second."""
    return MeasurementSettings.from_arrays([[dft_basis(0.0), dft_basis(0.5)],
                                            [dft_basis(-0.25), dft_basis(0.25)]])


def functional() -> BellFunctional:
    return builtin("cglmp")


def settings_operator() -> np.ndarray:
    return bell_operator(functional(), optimal_settings())


def spin_form(variant: SpinVariant | str = SpinVariant.A) -> TensorCoefficients:
    return decompose_gamma(canonical_operator(), variant)


def qubit_operator() -> np.ndarray:
    """The canonical operator lifted to four qubits."""
    return lift_to_qubits(spin_form(SpinVariant.A))


def qubit_polynomial() -> PauliPolynomial:
    return pauli_expand(qubit_operator())


@dataclass(frozen=True)
class TermClassification:
    chsh_blocks: dict = field(default_factory=dict)
    mermin_block: dict = field(default_factory=dict)
    residual: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "chsh_blocks": {f"{a},{b}": dict(sorted(blk.items())) for (a, b), blk in sorted(self.chsh_blocks.items())},
            "mermin_block": dict(sorted(self.mermin_block.items())),
            "residual": dict(sorted(self.residual.items())),
        }


class ClassificationError(ValueError):
    pass


def classify_terms(p: PauliPolynomial, strict: bool = True) -> TermClassification:
    """Split a four-qubit polynomial into the CHSH blocks and the Mermin block.

    Two-body terms go to the block of the qubit pair they act on (only
    ``CHSH_PAIRS`` qualify), four-body terms to the Mermin block, anything
    else to the residual.
    """
    chsh = {pair: {} for pair in CHSH_PAIRS}
    mermin, residual = {}, {}
    for label, coeff in p.items():
        support = tuple(i + 1 for i, ch in enumerate(label) if ch != "I")
        if len(support) == 2 and support in chsh:
            chsh[support][label] = coeff
        elif len(support) == 4:
            mermin[label] = coeff
        else:
            residual[label] = coeff
    if strict and residual:
        raise ClassificationError(f"terms outside the CHSH and Mermin blocks: {sorted(residual)}")
    return TermClassification(chsh, mermin, residual)


def block_operator(terms: dict, n_qubits: int = 4) -> np.ndarray:
    out = np.zeros((2**n_qubits, 2**n_qubits), dtype=complex)
    for label, coeff in terms.items():
        out += coeff * pauli_string(label)
    return out


def family_state(p: float) -> np.ndarray:
    """``sqrt(p)|GHZ_4> + sqrt(1-p)|psi+>|psi+>``."""
    _check_p(p)
    return math.sqrt(p) * ghz_qubits(4) + math.sqrt(1.0 - p) * np.kron(PSI_PLUS, PSI_PLUS)


def _check_p(p: float):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p = {p} outside [0, 1]")


def family_expectation(p: float) -> float:
    """Closed form ``2p + 4 sqrt(2p(1-p)/3)``."""
    _check_p(p)
    return 2.0 * p + 4.0 * math.sqrt(2.0 * p * (1.0 - p) / 3.0)


def family_expectation_numeric(p: float) -> float:
    return expectation(qubit_operator(), family_state(p))


def family_derivative(p: float) -> float:
    return 2.0 + 4.0 * math.sqrt(2.0 / 3.0) * (1.0 - 2.0 * p) / (2.0 * math.sqrt(p * (1.0 - p)))


def optimize_family(tol: float = 1e-10) -> tuple:
    """Maximize the closed form over ``p``; returns ``(p_max, value)``.

    Golden-section search brackets the optimum; the flat top limits it to
    about ``sqrt(eps)`` in ``p``, so the stationary point is then polished by
    bisection on the analytic derivative.
    """
    p0, _ = golden_section_max(family_expectation, 0.0, 1.0, tol)
    width = 1e-4
    root = bisect_root(family_derivative, max(p0 - width, 1e-12), min(p0 + width, 1.0 - 1e-12))
    p = p0 if root is None else root
    return p, family_expectation(p)


def four_qubit_functional() -> BellFunctional:
    return builtin("four-qubit")


@dataclass(frozen=True)
class NonViolationReport:
    classical: tuple
    quantum_max: float
    violated: bool

    def to_json(self) -> dict:
        return {"classical": list(self.classical), "quantum_max": self.quantum_max, "violated": self.violated}


def four_qubit_nonviolation(tol: float = 1e-9) -> NonViolationReport:
    """Classical bounds of the four-party correlation inequality and the
    largest eigenvalue of its operator over the whole 16-dimensional space."""
    lo, hi = lhv_bounds(four_qubit_functional())
    qmax = hermitian_eig(qubit_operator()).max
    return NonViolationReport((lo, hi), qmax, qmax > hi + tol)


def top_eigenvector() -> np.ndarray:
    return fix_global_phase(hermitian_eig(canonical_operator()).top)


def embedded_max_state() -> np.ndarray:
    return embed_state(max_state(), SpinVariant.A)


def report() -> dict:
    """Everything the ``cglmp`` subcommand prints."""
    eig = hermitian_eig(canonical_operator())
    v = fix_global_phase(eig.top)
    p_max, value = optimize_family()
    classification = classify_terms(qubit_polynomial())
    return {
        "matrix": canonical_operator().real.tolist(),
        "spin_form": spin_form().to_json()["terms"],
        "pauli_terms": [{"index": k, "coeff": c} for k, c in qubit_polynomial().items()],
        "classification": classification.to_json(),
        "lambda_max": eig.max,
        "eigenvector": {"a": float(v[0].real), "b": float(v[4].real), "c": float(v[8].real)},
        "p_max": p_max,
        "family_max": value,
        "maximally_entangled_value": expectation(canonical_operator(), maximally_entangled()),
        "lhv_bounds": list(lhv_bounds(functional())),
        "four_qubit": four_qubit_nonviolation().to_json(),
    }
