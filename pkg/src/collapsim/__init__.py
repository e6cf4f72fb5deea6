"""Exact Ising decision problems, exponential-cost measurements and a stochastic dephasing model."""

from .errors import CapacityError, CollapsimError, ParseError, RejectedInputError
from .hilbert import (
    DiagonalOperator,
    HermitianOperator,
    PropagatorSpec,
    StateVector,
    evolve,
    fidelity,
    inner_product,
    tensor_product,
)
from .ising import (
    CnfFormula,
    IsingModel,
    ReductionCertificate,
    SpinConfiguration,
    build_quantum_diagonal,
    classical_energy,
    decode_assignment,
    encode_3sat,
    random_3sat,
    random_ising_model,
)
from .solver import (
    DecisionOutcome,
    GroundStateResult,
    Restraint,
    SpectrumResult,
    brute_force_ground_state,
    exact_spectrum,
    sample_trajectory,
    solve_pi0,
    verify_eigenpair,
    verify_time_evolution,
)
from .scaling import BenchRecord, FeasibilityReport, feasibility, scaling_benchmark
from .collapse import (
    AngleSet,
    EnvironmentSpec,
    RandomDraw,
    TestParticle,
    TransitionStats,
    analytic_expected_cos,
    analytic_transition,
    born_limit,
    closed_form_overlap,
    decoherence_envelope,
    decohered_mean,
    final_state,
    monte_carlo_transition,
    overlap_probability,
    sample_environment,
)

__version__ = "0.1.0"
