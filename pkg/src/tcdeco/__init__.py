"""Exact dynamics, entanglement, and Bell-CHSH violation of two
dipole-coupled atoms in a single-mode cavity under phase decoherence."""

__version__ = "0.1.0"

from .closedform import (
    AtomPairState,
    EvolutionCoefficients,
    atom_pair_state,
    coefficients,
    stationary_negativity_formula,
    stationary_state,
)
from .measures import (
    assemble_rho,
    bell_closed,
    bell_generic,
    correlation_matrix,
    negativity_closed,
    negativity_generic,
)
from .model import DressedBasis, ModelParams, build_hamiltonian, dressed_basis, initial_state
from .oracle import (
    SpectralPropagator,
    reduced_atoms,
    rk4_evolve,
    series_evolve,
    spectral_evolve,
    spectral_propagator,
)
from .qmath import (
    EigenDecomposition,
    hermitian_eig,
    is_density_matrix,
    kron,
    partial_trace_field,
    partial_transpose_b,
)

__all__ = [
    "__version__",
    "AtomPairState",
    "DressedBasis",
    "EigenDecomposition",
    "EvolutionCoefficients",
    "ModelParams",
    "SpectralPropagator",
    "assemble_rho",
    "atom_pair_state",
    "bell_closed",
    "bell_generic",
    "build_hamiltonian",
    "coefficients",
    "correlation_matrix",
    "dressed_basis",
    "hermitian_eig",
    "initial_state",
    "is_density_matrix",
    "kron",
    "negativity_closed",
    "negativity_generic",
    "partial_trace_field",
    "partial_transpose_b",
    "reduced_atoms",
    "rk4_evolve",
    "series_evolve",
    "spectral_evolve",
    "spectral_propagator",
    "stationary_negativity_formula",
    "stationary_state",
]
