"""spinrelay: how much direction information survives a chain of observers.

A direction encoded in N spin-1/2 systems is estimated by k successive
non-communicating observers, each measuring the state left behind by the
previous one.  This package provides the closed-form fidelity laws, the
optimal entangled encoding, and seeded Monte Carlo trajectory simulation
that cross-checks every closed form.
"""

from .encoding import (
    EncodingSpec,
    JacobiMatrix,
    OutcomeDensity,
    chain_delta,
    chain_dots_nspin,
    classical_threshold,
    delta_k_parallel_start,
    fk_asymptotic,
    fk_optimal,
    fk_parallel,
    jacobi_matrix,
    optimal_encoding,
    optimal_tilde_delta,
    outcome_density,
    parallel_tilde_delta,
    principal_eigenpair,
    sample_outcome_tilt,
    simulate_chain_nspin,
)
from .legendre import (
    BESSEL_J0_FIRST_ZERO,
    LegendreTable,
    bessel_j0_first_zero,
    legendre_all,
    legendre_largest_zero,
    legendre_series,
    legendre_values,
)
from .qubit import (
    BlochState,
    DepolarizingChannel,
    QubitKrausFamily,
    analytic_fk_single,
    apply_depolarizing,
    chain_dots_single,
    disturbance_constant,
    eta_from_c,
    fidelity_from_delta,
    simulate_chain_single,
    simulate_observer_covariant,
    simulate_observer_sg,
    single_qubit_fidelity,
)
from .records import ChainRecord, McEstimate
from .rng import RandomStream, as_generator
from .sphere import (
    inverse_cdf_cos_tilt,
    rotate_towards,
    sample_cos_tilt,
    sample_uniform_sphere,
    unit_vector,
)
from .sweep import SweepConfig, analytic_delta, emit_encoding, mc_estimate_delta, run_sweep

__version__ = "0.1.0"
