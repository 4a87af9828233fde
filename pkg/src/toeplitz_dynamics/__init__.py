"""Quantum correlation dynamics of two-qubit states under tridiagonal
Toeplitz Hamiltonians."""
from .dynamics import (CorrelationTrace, SweepConfig, detect_balance_points, detect_esd, emit_csv,
                       emit_plot_script, invariance_suite, run_sweep)
from .evolution import EvolutionSpec, evolve, propagator, scaled_time_equivalence
from .hamiltonian import (ToeplitzParams, build_hamiltonian, closed_form_spectrum, numerical_spectrum,
                          spectrum_discrepancy)
from .lanczos import LanczosOutput, lanczos_tridiagonalize, tridiagonal_from
from .linalg import hermitian_eig, kron, matrix_function, partial_trace
from .measures import (DiscordResult, MeasurementBasis, concurrence, conditional_entropy, correlations_at,
                       discord, von_neumann_entropy)
from .states import DensityMatrix, StateParam, mems_state, validate_density, werner_state

__version__ = "0.1.0"
