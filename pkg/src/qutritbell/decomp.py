"""Operator expansions: product gamma basis, delta lift and Pauli strings.

An ``n``-qutrit operator is expanded as

    B = sum_{i1..in} c_{i1..in} gamma_{i1} (x) ... (x) gamma_{in},
    c = Tr(B G) / Tr(G G),   G = gamma_{i1} (x) ... (x) gamma_{in}

and the same coefficients placed on ``delta`` products give its symmetric
``2n``-qubit counterpart.  Indices are 1-based throughout, as in the usual
gamma_1..gamma_9 labelling.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .linalg import DimensionError, kron_all, power_of, require_hermitian
from .spin import PAULI, SpinVariant, delta_basis, gamma_basis

SPARSITY = 1e-12
REAL_TOL = 1e-10


def _index_tuple(idx) -> tuple:
    return tuple(int(i) for i in idx)


@dataclass(frozen=True)
class TensorCoefficients:
    """Sparse gamma-basis coefficients keyed by 1-based multi-indices."""

    n: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        for idx in self.terms:
            if len(idx) != self.n:
                raise ValueError(f"index {idx} does not have {self.n} entries")

    def items(self):
        return sorted(self.terms.items())

    def __getitem__(self, idx):
        return self.terms.get(_index_tuple(idx), 0.0)

    def __len__(self):
        return len(self.terms)

    def to_json(self) -> dict:
        return {"n": self.n, "terms": [{"index": list(k), "coeff": v} for k, v in self.items()]}

    @classmethod
    def from_json(cls, obj: dict) -> "TensorCoefficients":
        terms = {_index_tuple(t["index"]): float(t["coeff"]) for t in obj["terms"]}
        n = int(obj.get("n", len(next(iter(terms))) if terms else 1))
        return cls(n, terms)


@dataclass(frozen=True)
class PauliPolynomial:
    """Sparse expansion over Pauli strings such as ``"XIYZ"``."""

    n_qubits: int
    terms: dict = field(default_factory=dict)

    def items(self):
        return sorted(self.terms.items())

    def __getitem__(self, s):
        return self.terms.get(s, 0.0)

    def __len__(self):
        return len(self.terms)

    def to_json(self) -> dict:
        return {"n_qubits": self.n_qubits, "terms": [{"index": k, "coeff": v} for k, v in self.items()]}


def _real_coefficient(value: complex, where) -> float:
    if abs(value.imag) > REAL_TOL:
        raise ValueError(f"complex coefficient {value} at {where}; operator not Hermitian?")
    return float(value.real)


def decompose_gamma(m, variant: SpinVariant | str = SpinVariant.A) -> TensorCoefficients:
    """Coefficients of a Hermitian ``3^n``-dimensional operator in the product
    gamma basis.  Terms with ``|c| < 1e-12`` are dropped."""
    m = require_hermitian(m)
    try:
        n = power_of(m.shape[0], 3)
    except DimensionError:
        raise DimensionError(f"operator dimension {m.shape[0]} is not a power of 3") from None
    basis = gamma_basis(variant)
    norms = basis.norms
    t = m.reshape((3,) * (2 * n))
    gstack = np.array(basis.elements)
    # Tr(M (g1 x ... x gn)) for all index tuples in one contraction
    full = np.einsum(_trace_subscripts(n), t, *([gstack] * n))
    denom = np.ones((9,) * n)
    for axis in range(n):
        shape = [1] * n
        shape[axis] = 9
        denom = denom * norms.reshape(shape)
    full = full / denom
    terms = {}
    for idx in itertools.product(range(9), repeat=n):
        val = full[idx]
        if abs(val) >= SPARSITY:
            key = tuple(i + 1 for i in idx)
            terms[key] = _real_coefficient(val, key)
    return TensorCoefficients(n, terms)


def _trace_subscripts(n: int) -> str:
    # M[r1..rn, c1..cn] * g1[k1, c1, r1] * ... -> [k1..kn]
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows, cols, ks = letters[:n], letters[n:2 * n], letters[2 * n:3 * n]
    ops = ",".join(f"{ks[i]}{cols[i]}{rows[i]}" for i in range(n))
    return f"{rows}{cols},{ops}->{ks}"


def _check_indices(c: TensorCoefficients):
    for idx in c.terms:
        if any(not 1 <= i <= 9 for i in idx):
            raise ValueError(f"index {idx} outside 1..9")


def reconstruct_gamma(c: TensorCoefficients, variant: SpinVariant | str = SpinVariant.A) -> np.ndarray:
    _check_indices(c)
    basis = gamma_basis(variant)
    out = np.zeros((3 ** c.n, 3 ** c.n), dtype=complex)
    for idx, val in c.items():
        out += val * kron_all([basis[i - 1] for i in idx])
    return out


def lift_to_qubits(c: TensorCoefficients) -> np.ndarray:
    """Place the coefficients on delta products: a symmetric ``2n``-qubit operator."""
    _check_indices(c)
    basis = delta_basis()
    out = np.zeros((4 ** c.n, 4 ** c.n), dtype=complex)
    for idx, val in c.items():
        out += val * kron_all([basis[i - 1] for i in idx])
    return out


def pauli_string(label: str) -> np.ndarray:
    return kron_all([PAULI[ch] for ch in label])


def pauli_expand(m, tol: float = SPARSITY) -> PauliPolynomial:
    """Coefficients ``Tr(M s) / 2^m`` over all Pauli strings ``s``.

    Uses the fast recursive trace: one qubit is peeled off at a time, so a
    64x64 operator costs a few thousand small matrix operations.
    """
    m = require_hermitian(m)
    try:
        nq = power_of(m.shape[0], 2)
    except DimensionError:
        raise DimensionError(f"operator dimension {m.shape[0]} is not a power of 2") from None
    blocks = {"": m}
    for _ in range(nq):
        nxt = {}
        for label, b in blocks.items():
            h = b.shape[0] // 2
            b00, b01, b10, b11 = b[:h, :h], b[:h, h:], b[h:, :h], b[h:, h:]
            # Tr_1((P (x) 1) B) for the leading qubit, divided by 2
            nxt[label + "I"] = (b00 + b11) / 2
            nxt[label + "X"] = (b01 + b10) / 2
            nxt[label + "Y"] = (1j * b01 - 1j * b10) / 2
            nxt[label + "Z"] = (b00 - b11) / 2
        blocks = nxt
    terms = {}
    for label, b in blocks.items():
        val = complex(b[0, 0])
        if abs(val) >= tol:
            terms[label] = _real_coefficient(val, label)
    return PauliPolynomial(nq, terms)


def pauli_reconstruct(p: PauliPolynomial) -> np.ndarray:
    out = np.zeros((2 ** p.n_qubits, 2 ** p.n_qubits), dtype=complex)
    for label, val in p.items():
        if len(label) != p.n_qubits:
            raise ValueError(f"string {label!r} does not have {p.n_qubits} letters")
        out += val * pauli_string(label)
    return out


def pauli_from_terms(terms: dict) -> PauliPolynomial:
    n = {len(k) for k in terms}
    if len(n) != 1:
        raise ValueError("Pauli strings of unequal length")
    return PauliPolynomial(n.pop(), dict(terms))
