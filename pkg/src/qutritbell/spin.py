"""Spin-1 operator bases on a qutrit and on the symmetric subspace of two qubits.

Two spin-1 matrix triples are supported (``SpinVariant.A``: ``S_z`` diagonal;
``SpinVariant.B``: purely imaginary antisymmetric).  From a triple we build the
nine-element Hermitian basis

    gamma_1..3  spin components S_x, S_y, S_z
    gamma_4..6  shifted squares 1 - S_k^2
    gamma_7..9  anticommutators {S_z,S_y}, {S_x,S_z}, {S_x,S_y}

and its two-qubit image ``delta_1..9``.  ``solve_embedding`` recovers the
isometry that maps qutrit kets into the symmetric two-qubit subspace such that
``<i|gamma_j|k> = <e_i|delta_j|e_k>``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import (
    DimensionError,
    anticommutator,
    as_state,
    kron_all,
    power_of,
    projector,
)

SQ2 = np.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}

for _m in PAULI.values():
    _m.setflags(write=False)


class SpinVariant(str, enum.Enum):
    A = "A"
    B = "B"


def _frozen(m) -> np.ndarray:
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


def spin_matrices(variant: SpinVariant | str = SpinVariant.A):
    """Return ``(S_x, S_y, S_z)`` for the requested spin-1 representation."""
    variant = SpinVariant(variant)
    if variant is SpinVariant.A:
        sx = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]) / SQ2
        sy = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]]) / SQ2
        sz = np.diag([1, 0, -1])
    else:
        sx = np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]])
        sy = np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]])
        sz = np.array([[0, 1j, 0], [-1j, 0, 0], [0, 0, 0]])
    return _frozen(sx), _frozen(sy), _frozen(sz)


@dataclass(frozen=True)
class OperatorBasis:
    label: str
    elements: tuple
    dim: int

    @property
    def norms(self) -> np.ndarray:
        """Hilbert-Schmidt norms ``Tr(e_i^2)``."""
        return np.array([np.trace(e @ e).real for e in self.elements])

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def gram(self) -> np.ndarray:
        return np.array([[np.trace(a @ b) for b in self.elements] for a in self.elements])


@lru_cache(maxsize=None)
def gamma_basis(variant: SpinVariant | str = SpinVariant.A) -> OperatorBasis:
    variant = SpinVariant(variant)
    sx, sy, sz = spin_matrices(variant)
    one = np.eye(3)
    elements = (
        sx,
        sy,
        sz,
        one - sx @ sx,
        one - sy @ sy,
        one - sz @ sz,
        anticommutator(sz, sy),
        anticommutator(sx, sz),
        anticommutator(sx, sy),
    )
    return OperatorBasis(f"gamma-{variant.value}", tuple(_frozen(e) for e in elements), 3)


def ket(bits: str) -> np.ndarray:
    """Computational-basis ket for a bit string such as ``"0110"``."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


PHI_PLUS = (ket("00") + ket("11")) / SQ2
PHI_MINUS = (ket("00") - ket("11")) / SQ2
PSI_PLUS = (ket("01") + ket("10")) / SQ2
PSI_MINUS = (ket("01") - ket("10")) / SQ2

SINGLET_PROJECTOR = _frozen(projector(PSI_MINUS))
SYM_PROJECTOR = _frozen(np.eye(4) - SINGLET_PROJECTOR)


def _sym2(a, b) -> np.ndarray:
    return 0.5 * (np.kron(a, b) + np.kron(b, a))


@lru_cache(maxsize=None)
def delta_basis() -> OperatorBasis:
    """Symmetric two-qubit images of the gamma basis (variant independent)."""
    elements = (
        _sym2(I2, X),
        _sym2(I2, Y),
        _sym2(I2, Z),
        projector(PHI_MINUS),
        projector(PHI_PLUS),
        projector(PSI_PLUS),
        _sym2(Y, Z),
        _sym2(X, Z),
        _sym2(X, Y),
    )
    return OperatorBasis("delta", tuple(_frozen(e) for e in elements), 4)


def sym_projector(n: int) -> np.ndarray:
    """Projector onto the product of ``n`` two-qubit symmetric subspaces."""
    return kron_all([SYM_PROJECTOR] * n)


class EmbeddingError(RuntimeError):
    pass


@dataclass(frozen=True)
class StateEmbedding:
    variant: SpinVariant
    images: tuple

    def isometry(self) -> np.ndarray:
        """4x3 matrix whose columns are the images of the qutrit kets."""
        return np.column_stack(self.images)


# Phase of the first nonzero amplitude of e_0 in the displayed maps.
_PHASE_ANCHOR = {SpinVariant.A: 1.0, SpinVariant.B: 1j}


@lru_cache(maxsize=None)
def solve_embedding(variant: SpinVariant | str = SpinVariant.A, tol: float = 1e-10) -> StateEmbedding:
    """Find symmetric two-qubit states ``e_0, e_1, e_2`` with
    ``<i|gamma_j|k> = <e_i|delta_j|e_k>`` for every basis element.

    Writing ``e = Q W`` with ``Q`` an orthonormal frame of the symmetric
    subspace, the condition becomes ``(Q^+ delta_j Q) W = W gamma_j``.  The
    representation is irreducible, so the solutions form a one-dimensional
    space; ``W`` is its (rescaled) null vector, with the global phase chosen
    to match the conventional form of ``e_0``.
    """
    variant = SpinVariant(variant)
    gam = gamma_basis(variant)
    dlt = delta_basis()
    frame = np.column_stack([ket("00"), PSI_PLUS, ket("11")])
    blocks = []
    for g, d in zip(gam.elements, dlt.elements):
        dr = frame.conj().T @ d @ frame
        # vec(D W - W G) = (I (x) D - G^T (x) I) vec(W), column-major vec
        blocks.append(np.kron(np.eye(3), dr) - np.kron(g.T, np.eye(3)))
    system = np.vstack(blocks)
    _, sing, vh = np.linalg.svd(system)
    if sing[-1] > tol or sing[-2] < 1e-6:
        raise EmbeddingError(f"no unique embedding (singular values {sing[-2]:.3e}, {sing[-1]:.3e})")
    w = vh[-1].conj().reshape(3, 3, order="F")
    w = w / np.sqrt(np.trace(w.conj().T @ w).real / 3)
    iso = frame @ w
    first = next(a for a in iso[:, 0] if abs(a) > 1e-9)
    iso = iso * (_PHASE_ANCHOR[variant] / (first / abs(first)))
    # snap rounding noise from the SVD so exact zeros print as zeros
    iso = np.where(np.abs(iso.real) < 1e-14, 0.0, iso.real) + 1j * np.where(np.abs(iso.imag) < 1e-14, 0.0, iso.imag)
    for i in range(3):
        for j, (g, d) in enumerate(zip(gam.elements, dlt.elements)):
            lhs = g[i, :]
            rhs = iso[:, i].conj() @ d @ iso
            if np.max(np.abs(lhs - rhs)) > tol:
                raise EmbeddingError(f"matrix element mismatch for gamma_{j + 1}, row {i}")
    images = tuple(_frozen(iso[:, k]) for k in range(3))
    return StateEmbedding(variant, images)


def embedding_isometry(n: int, variant: SpinVariant | str = SpinVariant.A) -> np.ndarray:
    """``4^n x 3^n`` isometry applying the single-qutrit embedding factor-wise."""
    return kron_all([solve_embedding(variant).isometry()] * n)


def embed_state(psi, variant: SpinVariant | str = SpinVariant.A) -> np.ndarray:
    """Map an ``n``-qutrit state vector to its ``2n``-qubit image."""
    psi = as_state(psi)
    try:
        n = power_of(psi.shape[0], 3)
    except DimensionError:
        raise DimensionError(f"state dimension {psi.shape[0]} is not a power of 3") from None
    return embedding_isometry(n, variant) @ psi


def qutrit_ket(digits: str) -> np.ndarray:
    """Qutrit basis ket, e.g. ``qutrit_ket("012")``."""
    v = np.zeros(3 ** len(digits), dtype=complex)
    v[int(digits, 3)] = 1.0
    return v


def ghz_qutrits(n: int) -> np.ndarray:
    """Maximally entangled ``n``-qutrit state ``(|0..0> + |1..1> + |2..2>)/sqrt(3)``."""
    return sum(qutrit_ket(str(k) * n) for k in range(3)) / np.sqrt(3)


def ghz_qubits(n: int) -> np.ndarray:
    return (ket("0" * n) + ket("1" * n)) / SQ2
