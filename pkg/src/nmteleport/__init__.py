"""Teleportation fidelity through a two-qubit channel under non-Markovian amplitude damping."""

from .channel import InitialChannel, evolve, evolve_closed_form, single_qubit_kraus
from .decoherence import ReservoirParams, SolverConfig, SolverError, g_analytic, g_markovian, g_numeric
from .states import InputState, InvalidStateError, bell_overlap, bell_state, pauli_conjugate, pure_state_fidelity
from .teleport import (
    average_fidelity_optimized,
    minimal_fidelity,
    output_state,
    probabilities,
)

__version__ = "0.1.0"
