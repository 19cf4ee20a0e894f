"""Qutrit Bell operators analysed through symmetric two-qubit representations."""

from .decomp import (
    PauliPolynomial,
    TensorCoefficients,
    decompose_gamma,
    lift_to_qubits,
    pauli_expand,
    pauli_reconstruct,
    reconstruct_gamma,
)
from .functional import BellFunctional, MeasurementSettings, bell_operator, evaluate, lhv_bounds
from .linalg import anticommutator, commutator, expectation, hermitian_eig, tensor_product
from .spin import SpinVariant, delta_basis, embed_state, gamma_basis, solve_embedding, spin_matrices

__all__ = [
    "BellFunctional", "MeasurementSettings", "PauliPolynomial", "SpinVariant", "TensorCoefficients",
    "anticommutator", "bell_operator", "commutator", "decompose_gamma", "delta_basis", "embed_state",
    "evaluate", "expectation", "gamma_basis", "hermitian_eig", "lhv_bounds", "lift_to_qubits",
    "pauli_expand", "pauli_reconstruct", "reconstruct_gamma", "solve_embedding", "spin_matrices",
    "tensor_product",
]
