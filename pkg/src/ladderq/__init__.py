"""Polynomial vibrational Hamiltonians in truncated bases and on qubits."""

from .encoding import Binary, Unary, binary_creation, encode_hamiltonian, transition_operator
from .errors import ConfigError, NumericalAssertionError
from .ladder import LadderPoly, XPPoly, ladder_from_xp, normal_order, vacuum_expectation
from .matrices import AssemblyMode, assemble, ladder_matrix
from .models import DEFAULT_OMEGA, ModelSpec, Ordering, Preset, build_preset, make_model
from .pauli import PauliSum
from .spectral import SpectrumReport, SweepTable, convergence_sweep, eig, norm_scaling_fit, spectrum, weights

__version__ = "0.1.0"

__all__ = [
    "AssemblyMode", "Binary", "ConfigError", "DEFAULT_OMEGA", "LadderPoly", "ModelSpec",
    "NumericalAssertionError", "Ordering", "PauliSum", "Preset", "SpectrumReport", "SweepTable",
    "Unary", "XPPoly", "assemble", "binary_creation", "build_preset", "convergence_sweep", "eig",
    "encode_hamiltonian", "ladder_from_xp", "ladder_matrix", "make_model", "normal_order",
    "norm_scaling_fit", "spectrum", "transition_operator", "vacuum_expectation", "weights",
]
