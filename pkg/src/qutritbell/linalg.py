"""Dense complex linear algebra: Kronecker products, commutators, a cyclic
Jacobi eigensolver for Hermitian matrices and Born-rule expectations.

Matrices and states are plain ``numpy`` arrays of dtype ``complex128``.
Every function returns a fresh array and never modifies its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable

import numpy as np

HERMITIAN_TOL = 1e-12
IMAG_TOL = 1e-10
JACOBI_TOL = 1e-12
MAX_SWEEPS = 100


class NotHermitianError(ValueError):
    pass


class DimensionError(ValueError):
    pass


def as_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def as_state(v) -> np.ndarray:
    a = np.array(v, dtype=complex)
    if a.ndim != 1:
        raise DimensionError(f"expected a vector, got shape {a.shape}")
    return a


def normalize(v) -> np.ndarray:
    v = as_state(v)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


def hermiticity_error(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_error(m) <= tol


def require_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = as_matrix(m)
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max deviation {err:.3e})")
    return m


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; entry ``[i*dB + k, j*dB + l] = A[i, j] * B[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Iterable) -> np.ndarray:
    """Kronecker product of a sequence of matrices or vectors, left to right."""
    factors = [np.asarray(f, dtype=complex) for f in factors]
    if not factors:
        raise ValueError("need at least one factor")
    return reduce(np.kron, factors)


def _same_shape(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def anticommutator(a, b) -> np.ndarray:
    a, b = _same_shape(a, b)
    return a @ b + b @ a


def commutator(a, b) -> np.ndarray:
    a, b = _same_shape(a, b)
    return a @ b - b @ a


def projector(v) -> np.ndarray:
    v = as_state(v)
    return np.outer(v, v.conj())


def fix_global_phase(v, threshold: float = 1e-6) -> np.ndarray:
    """Rotate ``v`` so that its first amplitude with modulus above
    ``threshold`` is real and positive."""
    v = as_state(v)
    for amp in v:
        if abs(amp) > threshold:
            return v * (abs(amp) / amp)
    return v.copy()


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in ascending order; ``eigenvectors[k]`` belongs to
    ``eigenvalues[k]``."""

    eigenvalues: np.ndarray
    eigenvectors: tuple

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        for v in self.eigenvectors:
            v.setflags(write=False)

    @property
    def max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def top(self) -> np.ndarray:
        return self.eigenvectors[-1]

    def matrix(self) -> np.ndarray:
        """Eigenvectors as the columns of a unitary matrix."""
        return np.column_stack(self.eigenvectors)


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    # Zeroes a[p, q] in place with a 2x2 unitary acting on rows/cols p, q.
    b = a[p, q]
    mag = abs(b)
    phase = b / mag
    theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    if abs(theta) > 1e150:
        # tiny coupling between well-separated diagonals: t ~ 1 / (2 theta)
        t = 0.5 / theta
    else:
        t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
    idx = [p, q]
    a[:, idx] = a[:, idx] @ g
    a[idx, :] = g.conj().T @ a[idx, :]
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, idx] = v[:, idx] @ g


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _tie_key(vec: np.ndarray) -> tuple:
    vec = fix_global_phase(vec)
    return tuple(np.round(np.concatenate([vec.real, vec.imag]), 8))


def hermitian_eig(m, tol: float = JACOBI_TOL) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Sweeps over all index pairs until the off-diagonal Frobenius mass drops
    below ``tol * max(1, ||M||_F)``.  Degenerate eigenvalues (equal within
    1e-9) are ordered by the lexicographic order of their phase-fixed,
    rounded eigenvectors so the output is reproducible.

    Raises
    ------
    NotHermitianError
        If ``m`` deviates from Hermiticity by more than 1e-12.
    """
    a = require_hermitian(m).copy()
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(MAX_SWEEPS):
        if _off_norm(a) < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > 1e-300:
                    _jacobi_rotate(a, v, p, q)
    else:
        raise RuntimeError("Jacobi iteration did not converge")

    vals = np.diag(a).real.copy()
    vecs = [fix_global_phase(v[:, k]) for k in range(n)]
    order = sorted(range(n), key=lambda k: (vals[k], _tie_key(vecs[k])))
    # Clusters of (numerically) equal eigenvalues are re-sorted by eigenvector.
    grouped, start = [], 0
    for i in range(1, n + 1):
        if i == n or vals[order[i]] - vals[order[start]] > 1e-9:
            grouped.extend(sorted(order[start:i], key=lambda k: _tie_key(vecs[k])))
            start = i
    return EigenDecomposition(
        eigenvalues=np.array([vals[k] for k in grouped]),
        eigenvectors=tuple(vecs[k] for k in grouped),
    )


def expectation(m, psi) -> float:
    """``<psi|M|psi>`` for Hermitian ``M``.

    Raises ``ValueError`` if the imaginary part exceeds 1e-10, which means
    either ``M`` is not Hermitian or the numerics went wrong.
    """
    m, psi = as_matrix(m), as_state(psi)
    if m.shape[0] != psi.shape[0]:
        raise DimensionError(f"operator dim {m.shape[0]} does not match state dim {psi.shape[0]}")
    val = np.vdot(psi, m @ psi)
    if abs(val.imag) > IMAG_TOL:
        raise ValueError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2


def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    return normalize(rng.normal(size=dim) + 1j * rng.normal(size=dim))


# JSON wire format: complex numbers as [re, im] pairs, row-major.

def _pair(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def matrix_to_json(m) -> dict:
    m = as_matrix(m)
    return {"dim": m.shape[0], "entries": [[_pair(z) for z in row] for row in m]}


def matrix_from_json(obj: dict) -> np.ndarray:
    dim = int(obj["dim"])
    rows = obj["entries"]
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise DimensionError(f"entries are not {dim}x{dim}")
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def state_to_json(v) -> dict:
    v = as_state(v)
    return {"dim": v.shape[0], "amplitudes": [_pair(z) for z in v]}


def state_from_json(obj: dict) -> np.ndarray:
    amps = obj["amplitudes"]
    if len(amps) != int(obj["dim"]):
        raise DimensionError("amplitude count does not match dim")
    return np.array([complex(re, im) for re, im in amps])


def power_of(n: int, base: int) -> int:
    """Return ``k`` with ``base**k == n``, or raise ``DimensionError``."""
    k, m = 0, n
    while m > 1 and m % base == 0:
        m //= base
        k += 1
    if m != 1 or n < base:
        raise DimensionError(f"{n} is not a positive power of {base}")
    return k
