"""Certify-or-sample pipeline for IQP circuits encoded in clock Hamiltonians.

An IQP circuit is compiled (CCZ decomposed, identity-padded) into a compact
clock Hamiltonian whose ground state carries the circuit output in the work
register whenever the clock reads a completed time.  A fair coin decides
between (a) certifying the preparation by local energy measurements and
(b) projecting onto the completed-computation subspace and sampling the work
register in the Z basis.  The error budget tracks the certified trace-norm
bound through the projection contraction 2/c against the 1/192 total-
variation threshold below which classical simulation of IQP outputs is
conjectured hard (Bremner-Montanaro-Shepherd).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .certification import CertificationPlan, CertificationReport, certify
from .circuits import CircuitProgram, decompose_ccz, pad_identities, statevector
from .clock import build_feynman_kitaev, history_state
from .errors import BudgetExceeded, InvalidParameter, RetryCapExceeded
from .iqp import IQPPolynomial, encode_iqp
from .operators import LocalHamiltonian, SpectralSummary, analyze
from .rand import stream_rng
from .states import PreparedState

SAMPLING_HARDNESS_THRESHOLD = Fraction(1, 192)
RETRY_CAP = 64
OUTPUT_DIST_MAX_VARS = 14


@dataclass(frozen=True)
class SupremacyInstance:
    """Compiled IQP instance: circuit, clock Hamiltonian, completed-time projector."""

    polynomial: IQPPolynomial
    circuit: CircuitProgram  # CCZ-decomposed and padded
    hamiltonian: LocalHamiltonian
    summary: SpectralSummary
    completed_from: int  # first clock value with the computation finished
    completed_weight: float  # c = Tr(Pi rho_0)

    @property
    def num_work_qubits(self) -> int:
        return self.circuit.num_qubits

    @property
    def clock_dim(self) -> int:
        return self.circuit.length + 1

    def completed_mask(self) -> np.ndarray:
        """Boolean diagonal of Pi over the work (x) clock basis."""
        d = self.hamiltonian.system.dim
        clock = np.arange(d) % self.clock_dim
        return clock >= self.completed_from

    @property
    def pi(self) -> sp.csr_matrix:
        """The completed-computation projector as a sparse diagonal matrix."""
        return sp.diags(self.completed_mask().astype(complex)).tocsr()


def build_instance(p: IQPPolynomial, padding: int,
                   budget: int | None = None) -> SupremacyInstance:
    """Compile a polynomial into a padded compact-clock instance.

    ``padding`` extra identity gates raise the completed weight to
    (padding + 1)/(L_total + 1); padding = L_comp puts it at or above 1/2.
    """
    encoded = decompose_ccz(encode_iqp(p))
    l_comp = encoded.length
    padded = pad_identities(encoded, padding)
    h = build_feynman_kitaev(padded, "compact", budget=budget)
    summary = analyze(h)
    ground = summary.ground_vector()
    clock = np.arange(h.system.dim) % (padded.length + 1)
    weight = float(np.sum(np.abs(ground[clock >= l_comp]) ** 2))
    return SupremacyInstance(
        polynomial=p,
        circuit=padded,
        hamiltonian=h,
        summary=summary,
        completed_from=l_comp,
        completed_weight=weight,
    )


@dataclass(frozen=True)
class BudgetLedger:
    """Propagation of a preparation-error bound through the projection step."""

    epsilon_prep: float  # bound on ||rho_0 - rho_p||_1
    completed_weight: float
    post_bound: float  # (2/c) * epsilon_prep
    threshold: float
    passed: bool
    conversion: str = ""


def ledger(epsilon_prep: float, completed_weight: float,
           conversion: str = "") -> BudgetLedger:
    """Exact-arithmetic check of (2/c) eps_prep against the 1/192 threshold."""
    if not 0.0 < completed_weight <= 1.0:
        raise InvalidParameter(f"completed weight {completed_weight} outside (0, 1]")
    if epsilon_prep < 0.0 or not math.isfinite(epsilon_prep):
        raise InvalidParameter(f"preparation error bound {epsilon_prep} must be finite and >= 0")
    post_exact = 2 * Fraction(epsilon_prep) / Fraction(completed_weight)
    return BudgetLedger(
        epsilon_prep=float(epsilon_prep),
        completed_weight=float(completed_weight),
        post_bound=float(post_exact),
        threshold=float(SAMPLING_HARDNESS_THRESHOLD),
        passed=post_exact < SAMPLING_HARDNESS_THRESHOLD,
        conversion=conversion,
    )


@dataclass(frozen=True)
class ProcedureOutcome:
    """Result of one coin-flip run: a certificate or Z-basis samples."""

    branch: str  # "certify" | "sample"
    report: CertificationReport | None
    budget: BudgetLedger | None
    samples: np.ndarray | None  # work-register bitstrings as integers
    retries: np.ndarray | None  # projection attempts per sample
    completed_prob: float | None  # Tr(Pi rho_p)


_CONVERSION = "l1_bound = 2*sqrt(1 - (f_min_star - epsilon))"


def certified_l1_bound(report: CertificationReport) -> float:
    """Trace-norm bound implied by an accepting certificate.

    With probability >= 1 - alpha the fidelity is at least f_min_star - eps,
    and ||rho_0 - rho_p||_1 = 2 d <= 2 sqrt(1 - F).
    """
    f_lower = report.f_min_star - report.plan.epsilon
    return 2.0 * math.sqrt(max(0.0, 1.0 - f_lower))


def run_procedure(inst: SupremacyInstance, rho_p: PreparedState,
                  cert_plan: CertificationPlan, coin_seed: int,
                  shots: int) -> ProcedureOutcome:
    """Flip a fair coin; certify the preparation or sample its projected output."""
    rng = stream_rng(coin_seed, 0)
    take_certify = bool(rng.integers(0, 2) == 0)

    if take_certify:
        report = certify(inst.hamiltonian, inst.summary, rho_p, cert_plan,
                         seed=int(stream_rng(coin_seed, 1).integers(0, 2**63)))
        budget = None
        if report.accepted:
            budget = ledger(certified_l1_bound(report), inst.completed_weight,
                            conversion=_CONVERSION)
        return ProcedureOutcome("certify", report, budget, None, None, None)

    mask = inst.completed_mask()
    diag = rho_p.diagonal_probabilities()
    q = float(diag[mask].sum())
    if q <= 0.0:
        raise InvalidParameter("preparation has no weight on the completed subspace")

    # geometric retries for the projective filter, one success per output sample
    retry_rng = stream_rng(coin_seed, 2)
    retries = retry_rng.geometric(q, size=int(shots))
    if np.any(retries > RETRY_CAP):
        raise RetryCapExceeded(
            f"projection onto the completed subspace failed {RETRY_CAP} times"
        )

    # work-register Z-basis distribution of Pi rho_p Pi / q
    joint = np.where(mask, diag, 0.0) / q
    work_dist = joint.reshape(2**inst.num_work_qubits, inst.clock_dim).sum(axis=1)
    work_dist = np.clip(work_dist, 0.0, None)
    work_dist /= work_dist.sum()
    samples = stream_rng(coin_seed, 3).choice(work_dist.size, size=int(shots), p=work_dist)
    return ProcedureOutcome("sample", None, None, samples, retries, q)


def projected_state(state: PreparedState, inst: SupremacyInstance,
                    limit: int = 4096) -> np.ndarray:
    """Dense Pi rho Pi / Tr(Pi rho) for desk-scale checks."""
    rho = state.to_dense(limit)
    mask = inst.completed_mask()
    cut = rho * mask[None, :] * mask[:, None]
    tr = float(np.real(np.trace(cut)))
    if tr <= 0:
        raise InvalidParameter("state has no weight on the completed subspace")
    return cut / tr


def exact_output_distribution(p: IQPPolynomial) -> np.ndarray:
    """|<z| C_f |0...0>|^2 over all 2^n work bitstrings, by statevector simulation."""
    if p.n_vars > OUTPUT_DIST_MAX_VARS:
        raise BudgetExceeded(f"output distribution capped at {OUTPUT_DIST_MAX_VARS} qubits")
    amp = statevector(encode_iqp(p))
    probs = np.abs(amp) ** 2
    return probs / probs.sum()


def history_preparation(inst: SupremacyInstance, label: str = "ideal") -> PreparedState:
    """The ideal preparation: the instance's history (ground) state."""
    return PreparedState.from_pure(history_state(inst.circuit, "compact"), label=label)
