"""Finite-statistics measurement of local Hamiltonian terms.

Each shot measures one term in its eigenbasis on a fresh copy of the state:
outcome e with probability Tr(rho_reduced P_e).  Streams are keyed by
(seed, term_index), so per-term sampling is order-independent and the whole
record set is reproducible byte for byte.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, MissingTerm, ProbabilityLeak
from .operators import LocalHamiltonian, LocalTerm, SiteSystem, term_eigendecomposition
from .rand import stream_rng
from .states import PreparedState

PROBABILITY_TOL = 1e-8


@dataclass(frozen=True)
class MeasurementRecord:
    term_index: int
    shot_index: int
    outcome: float


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    shots_per_term: int

    def __post_init__(self):
        if self.shots_per_term < 1:
            raise InvalidParameter("shots_per_term must be >= 1")


def outcome_distribution(rho: PreparedState, system: SiteSystem, term: LocalTerm
                         ) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of the term and their measurement probabilities on rho."""
    keep = tuple(system.index(s) for s in term.support)
    red = rho.reduced_density_matrix(system.dims, keep)
    eigs = term_eigendecomposition(term)
    values = np.array([e for e, _ in eigs])
    probs = np.array([float(np.real(np.trace(red @ proj))) for _, proj in eigs])
    leak = abs(probs.sum() - 1.0)
    if leak > PROBABILITY_TOL:
        raise ProbabilityLeak(f"outcome probabilities sum to 1 {leak:+.2e}")
    probs = np.clip(probs, 0.0, None)
    return values, probs / probs.sum()


def sample_outcomes(rho: PreparedState, system: SiteSystem, term: LocalTerm,
                    shots: int, seed: int, term_index: int = 0) -> np.ndarray:
    """i.i.d. eigenvalue draws for one term; deterministic given (seed, term_index)."""
    values, probs = outcome_distribution(rho, system, term)
    rng = stream_rng(seed, term_index)
    picks = rng.choice(len(values), size=int(shots), p=probs)
    return values[picks]


def sample_term(rho: PreparedState, system: SiteSystem, term: LocalTerm,
                shots: int, seed: int, term_index: int = 0) -> list[MeasurementRecord]:
    """Measurement records wrapping :func:`sample_outcomes` (same stream, same draws)."""
    outcomes = sample_outcomes(rho, system, term, shots, seed, term_index)
    return [MeasurementRecord(term_index, i, float(o)) for i, o in enumerate(outcomes)]


def term_sample_means(rho: PreparedState, h: LocalHamiltonian, shots: int,
                      seed: int) -> np.ndarray:
    """Per-term sample means without materializing record objects."""
    means = np.empty(h.n_terms)
    for idx, term in enumerate(h.terms):
        means[idx] = float(sample_outcomes(rho, h.system, term, shots, seed, idx).mean())
    return means


def sample_hamiltonian(rho: PreparedState, h: LocalHamiltonian, shots: int,
                       seed: int) -> list[MeasurementRecord]:
    """All terms, ``shots`` measurements each, on independent streams."""
    records: list[MeasurementRecord] = []
    for idx, term in enumerate(h.terms):
        records.extend(sample_term(rho, h.system, term, shots, seed, term_index=idx))
    return records


def estimate_energy(records: list[MeasurementRecord], n_terms: int,
                    energy_offset: float = 0.0) -> tuple[float, list[float]]:
    """Sum of per-term sample means, minus the energy offset."""
    sums = np.zeros(n_terms)
    counts = np.zeros(n_terms, dtype=int)
    for r in records:
        sums[r.term_index] += r.outcome
        counts[r.term_index] += 1
    missing = np.flatnonzero(counts == 0)
    if missing.size:
        raise MissingTerm(f"no measurement records for terms {missing.tolist()}")
    means = sums / counts
    return float(means.sum() - energy_offset), [float(m) for m in means]


def expected_energy(rho: PreparedState, h: LocalHamiltonian) -> float:
    """Exact <H>_rho via reduced density matrices (no full assembly)."""
    total = 0.0
    for term in h.terms:
        keep = tuple(h.system.index(s) for s in term.support)
        red = rho.reduced_density_matrix(h.system.dims, keep)
        total += float(np.real(np.trace(red @ term.matrix)))
    return total - h.energy_offset
