"""Certification of frustration-free ground-state preparations.

The package covers the full desk-scale pipeline: represent k-local
Hamiltonians and compute their spectra (:mod:`ffcert.operators`), model exact
and noisy preparations (:mod:`ffcert.states`), compile circuits into
frustration-free clock Hamiltonians and polynomials into IQP circuits
(:mod:`ffcert.clock`, :mod:`ffcert.iqp`), simulate local energy measurements
(:mod:`ffcert.sampling`), run the weak-membership certification test
(:mod:`ffcert.certification`), and chase the certified error bound through
the sampling-hardness budget (:mod:`ffcert.supremacy`).
"""

__version__ = "0.1.0"

from .certification import (
    CertificationPlan,
    CertificationReport,
    certify,
    evaluate_protocol_regions,
    fidelity_bounds,
    hoeffding_shots,
    phase_estimation_fidelity,
    phase_register_qubits,
    plan,
    plan_for,
)
from .circuits import CircuitProgram, GateOp, decompose_ccz, gate, pad_identities, statevector
from .clock import ClockEncoding, build_feynman_kitaev, history_state
from .errors import (
    BudgetExceeded,
    ConvergenceFailure,
    DegenerateGround,
    DimensionMismatch,
    FFCertError,
    InvalidParameter,
    MissingTerm,
    NonUnitaryGate,
    ProbabilityLeak,
    ResolutionTooCoarse,
    RetryCapExceeded,
    SupportMismatch,
)
from .iqp import IQPPolynomial, encode_iqp, ngap, parse_polynomial, random_polynomial
from .operators import (
    FFVerdict,
    LocalHamiltonian,
    LocalTerm,
    SiteSystem,
    SpectralSummary,
    analyze,
    assemble,
    embed_term,
    term_eigendecomposition,
    verify_frustration_free,
)
from .sampling import (
    MeasurementRecord,
    SamplerConfig,
    estimate_energy,
    expected_energy,
    sample_hamiltonian,
    sample_term,
)
from .states import (
    NoiseSpec,
    PreparedState,
    PureState,
    apply_noise,
    fidelity,
    l1_distance,
    trace_distance,
)
from .supremacy import (
    BudgetLedger,
    ProcedureOutcome,
    SupremacyInstance,
    build_instance,
    exact_output_distribution,
    ledger,
    run_procedure,
)
