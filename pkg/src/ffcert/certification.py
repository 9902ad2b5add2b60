"""Weak-membership certification of ground-state preparations.

The verifier fixes a threshold fidelity F_T, a failure probability alpha and
an estimation error eps <= (1 - F_T)/2, measures every local term of a
frustration-free Hamiltonian m times on copies of the preparation, and turns
the energy estimate E* into the fidelity lower bound F*_min = 1 - E*/gap.
The preparation is accepted iff F*_min >= F_T + eps.

With m chosen by the Hoeffding bound

    m = ceil( J^2 n^2 / (2 gap^2 eps^2) * ln(-(n+1) / ln(1-alpha)) ),

every state with fidelity >= F_T + delta is accepted and every state with
fidelity <= F_T is rejected, each with probability >= 1 - alpha, where the
indeterminate-gap width is

    delta = (1 - F_T)(1 - gap/||H||) + 2 eps gap/||H||.

An alternative constant-accuracy estimator simulates textbook phase
estimation of exp(-iH) and reads the ground-bin frequency directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    BudgetExceeded,
    DegenerateGround,
    InvalidParameter,
    ResolutionTooCoarse,
)
from .operators import LocalHamiltonian, SpectralSummary, assemble
from .rand import RNG_ID, stream_rng
from .sampling import term_sample_means
from .states import PreparedState, fidelity

MUST_ACCEPT = "must_accept"
MUST_REJECT = "must_reject"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class CertificationPlan:
    """Resolved inputs of a certification run: thresholds, shot count, gap width."""

    f_threshold: float
    alpha: float
    epsilon: float
    shots_per_term: int
    fidelity_gap: float
    n_terms: int
    interaction_strength: float
    gap: float
    norm: float
    gap_source: str = "computed"


def sample_bound(n_terms: int, interaction_strength: float, gap: float,
                 epsilon: float, alpha: float) -> float:
    """Real-valued Hoeffding shot bound before taking the ceiling."""
    j2n2 = (interaction_strength * n_terms) ** 2
    return j2n2 / (2.0 * gap**2 * epsilon**2) * math.log(-(n_terms + 1) / math.log1p(-alpha))


def plan(f_threshold: float, alpha: float, epsilon: float, summary: SpectralSummary,
         n_terms: int, interaction_strength: float,
         gap_source: str = "computed") -> CertificationPlan:
    """Choose the shot count and fidelity-gap width for a certification run."""
    if not 0.0 < f_threshold < 1.0:
        raise InvalidParameter(f"threshold fidelity {f_threshold} outside (0, 1)")
    if not 0.0 < alpha < 1.0:
        raise InvalidParameter(f"failure probability {alpha} outside (0, 1)")
    # the 1e-12 slack keeps the boundary epsilon = (1-F_T)/2 admissible in floats
    if not 0.0 < epsilon <= (1.0 - f_threshold) / 2.0 + 1e-12:
        raise InvalidParameter(
            f"estimation error {epsilon} must lie in (0, (1-F_T)/2 = {(1 - f_threshold) / 2}]"
        )
    if not summary.unique_ground:
        raise DegenerateGround("certification requires a unique ground state")
    if summary.gap <= 0.0:
        raise InvalidParameter("certification requires a positive gap")
    if n_terms < 1 or interaction_strength <= 0.0:
        raise InvalidParameter("need n_terms >= 1 and a positive interaction strength")

    m_real = sample_bound(n_terms, interaction_strength, summary.gap, epsilon, alpha)
    m = math.ceil(m_real)
    if m < 1:
        raise InvalidParameter("shot formula yields m < 1; parameters outside its regime")
    ratio = summary.gap / summary.norm
    delta = (1.0 - f_threshold) * (1.0 - ratio) + 2.0 * epsilon * ratio
    return CertificationPlan(
        f_threshold=float(f_threshold),
        alpha=float(alpha),
        epsilon=float(epsilon),
        shots_per_term=m,
        fidelity_gap=delta,
        n_terms=int(n_terms),
        interaction_strength=float(interaction_strength),
        gap=float(summary.gap),
        norm=float(summary.norm),
        gap_source=gap_source,
    )


def plan_for(h: LocalHamiltonian, summary: SpectralSummary, f_threshold: float,
             alpha: float, epsilon: float) -> CertificationPlan:
    return plan(f_threshold, alpha, epsilon, summary, h.n_terms, h.interaction_strength)


def supplied_gap_summary(summary: SpectralSummary, gap: float,
                         norm: float | None = None) -> SpectralSummary:
    """Summary with an externally supplied gap (hardware setting); provenance is the caller's."""
    if gap <= 0:
        raise InvalidParameter("supplied gap must be positive")
    return replace(summary, gap=float(gap),
                   norm=float(norm) if norm is not None else summary.norm)


def fidelity_bounds(energy: float, summary: SpectralSummary) -> tuple[float, float]:
    """(F_min, F_max) = (1 - E/gap, 1 - E/||H||) for a ground energy at zero.

    Values are reported unclamped; F_min may be negative for high energies.
    """
    if energy < -1e-9:
        raise InvalidParameter(f"energy estimate {energy} below -1e-9")
    e = max(energy, 0.0)
    return 1.0 - e / summary.gap, 1.0 - e / summary.norm


@dataclass(frozen=True)
class CertificationReport:
    """Outcome of one certification run, with everything needed to reproduce it."""

    plan: CertificationPlan
    e_star_raw: float
    e_star: float
    f_min_star: float
    f_max_star: float
    verdict: str  # "accept" | "reject"
    seed: int
    rng: str = RNG_ID
    below_first_excited: bool | None = None
    true_fidelity: float | None = None

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"


def certify(h: LocalHamiltonian, summary: SpectralSummary, rho_p: PreparedState,
            cert_plan: CertificationPlan, seed: int,
            record_true_fidelity: bool = True) -> CertificationReport:
    """Run the full energy-measurement certification test on a preparation.

    Rejects iff the estimated fidelity lower bound falls below F_T + eps
    (ties accept).  ``true_fidelity`` is a simulation-only diagnostic and
    never influences the verdict.
    """
    if cert_plan.n_terms != h.n_terms:
        raise InvalidParameter(
            f"plan was made for {cert_plan.n_terms} terms, Hamiltonian has {h.n_terms}"
        )
    means = term_sample_means(rho_p, h, cert_plan.shots_per_term, seed)
    e_raw = float(means.sum() - h.energy_offset)
    e_clipped = max(e_raw, 0.0)
    # bound through the plan's gap and norm: those carry the provenance
    # (computed or supplied) the verdict is answerable to
    f_min = 1.0 - e_clipped / cert_plan.gap
    f_max = 1.0 - e_clipped / cert_plan.norm
    verdict = "accept" if f_min >= cert_plan.f_threshold + cert_plan.epsilon else "reject"
    true_f = None
    if record_true_fidelity and summary.unique_ground:
        true_f = fidelity(rho_p, summary.ground_vector())
    return CertificationReport(
        plan=cert_plan,
        e_star_raw=float(e_raw),
        e_star=float(e_clipped),
        f_min_star=float(f_min),
        f_max_star=float(f_max),
        verdict=verdict,
        seed=int(seed),
        below_first_excited=bool(e_clipped < summary.first_excited - summary.ground_energy),
        true_fidelity=true_f,
    )


def evaluate_protocol_regions(true_fidelity: float, cert_plan: CertificationPlan) -> str:
    """Classify a known fidelity into the guaranteed accept/reject/gap regions."""
    if true_fidelity >= cert_plan.f_threshold + cert_plan.fidelity_gap:
        return MUST_ACCEPT
    if true_fidelity <= cert_plan.f_threshold:
        return MUST_REJECT
    return INDETERMINATE


# ---------------------------------------------------------------------------
# phase-estimation alternative
# ---------------------------------------------------------------------------

def hoeffding_shots(alpha: float, epsilon: float) -> int:
    """ln(2/alpha) / (2 eps^2) shots for an additive-eps frequency estimate."""
    if not 0 < alpha < 1 or epsilon <= 0:
        raise InvalidParameter("need alpha in (0,1) and epsilon > 0")
    return math.ceil(math.log(2.0 / alpha) / (2.0 * epsilon**2))


def phase_register_qubits(n_bits: int, beta: float) -> int:
    """Register size for n_bits of precision with per-eigenvalue failure <= beta."""
    if beta <= 0:
        raise InvalidParameter("beta must be positive")
    return n_bits + math.ceil(math.log2(2.0 + 1.0 / (2.0 * beta)))


def _qpe_bin_probability(phase: float, m_outcomes: int, k: int) -> float:
    """Probability of readout k when estimating ``phase`` with M = 2^t outcomes."""
    x = phase - k / m_outcomes
    num = math.sin(math.pi * m_outcomes * x) ** 2
    den = (m_outcomes * math.sin(math.pi * x)) ** 2
    if den < 1e-300:
        return 1.0
    return num / den


def phase_estimation_fidelity(rho: PreparedState, h: LocalHamiltonian,
                              summary: SpectralSummary, t_qubits: int,
                              shots: int, seed: int) -> tuple[float, float]:
    """Ground-state fidelity via simulated phase estimation of exp(-iH).

    The spectrum is scaled so all eigenphases lie in [0, 1) with the ground
    state pinned exactly to readout zero; the two-outcome measurement
    {ground bin, rest} is drawn ``shots`` times.  Returns the observed
    ground-bin frequency and its binomial standard error.
    """
    if t_qubits < 1 or shots < 1:
        raise InvalidParameter("need t_qubits >= 1 and shots >= 1")
    dense = assemble(h)
    if dense.shape[0] > 4096:
        raise BudgetExceeded("phase-estimation simulation requires a dense spectrum")
    w, v = np.linalg.eigh(dense.toarray())
    energies = w - w[0]

    m_outcomes = 2**t_qubits
    separation = (m_outcomes - 1) * summary.gap / summary.norm
    if separation < 2.0:
        raise ResolutionTooCoarse(
            f"2^t resolution separates gap by only {separation:.2f} bins (< 2)"
        )
    scale = (m_outcomes - 1) / (m_outcomes * energies[-1])  # phases in [0, 1 - 2^-t]

    p_zero = 0.0
    for i in range(len(energies)):
        pop = rho.overlap_with_pure(v[:, i])
        if pop <= 1e-15:
            continue
        phase = energies[i] * scale
        p_zero += pop * (1.0 if phase == 0.0 else _qpe_bin_probability(phase, m_outcomes, 0))
    p_zero = min(max(p_zero, 0.0), 1.0)

    hits = stream_rng(seed, 11).binomial(int(shots), p_zero)
    f_hat = hits / shots
    stderr = math.sqrt(max(f_hat * (1.0 - f_hat), 0.0) / shots)
    return float(f_hat), float(stderr)
