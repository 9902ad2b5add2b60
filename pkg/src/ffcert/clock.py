"""Circuit-to-Hamiltonian compiler via a Feynman-Kitaev clock.

A circuit of L one- and two-qubit gates on K work qubits becomes a local
Hamiltonian whose unique zero-energy ground state is the history state
(L+1)^(-1/2) sum_t (U_t ... U_1 |phi_0>) (x) |t>.  Every emitted term is a
(weighted) projector, so the Hamiltonian is frustration-free with ground
energy exactly zero.

Two clock registers are supported: a single (L+1)-dimensional site
("compact") and a chain of L qubits holding |1...1 0...0> ("unary").  The
unary form keeps all terms at most 5-local; illegal clock strings are
penalized by forbidden-pattern projectors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import CircuitProgram, snapshots
from .errors import InvalidParameter
from .operators import DEFAULT_DIM_BUDGET, LocalHamiltonian, LocalTerm, SiteSystem
from .states import PureState

COMPACT = "compact"
UNARY = "unary"


@dataclass(frozen=True)
class ClockEncoding:
    """Clock register layout: one (L+1)-level site or L unary qubits."""

    kind: str = COMPACT

    def __post_init__(self):
        if self.kind not in (COMPACT, UNARY):
            raise InvalidParameter(f"unknown clock encoding {self.kind!r}")


def work_sites(num_qubits: int) -> list[str]:
    return [f"w{i}" for i in range(num_qubits)]


def _proj(dim: int, *indices: int) -> np.ndarray:
    """Projector onto a set of basis states."""
    p = np.zeros((dim, dim), dtype=complex)
    for i in indices:
        p[i, i] = 1.0
    return p


def _hop(dim: int, to: int, frm: int) -> np.ndarray:
    m = np.zeros((dim, dim), dtype=complex)
    m[to, frm] = 1.0
    return m


def _update_term(u: np.ndarray, clock_dim: int, frm: int, to: int) -> np.ndarray:
    """Walk term tying the clock transition |frm> -> |to> to the gate unitary.

    1/2 (P_frm + P_to) (x) 1  -  1/2 (U (x) |to><frm| + U^dag (x) |frm><to|),
    laid out with the work factor first.  For unitary U this is a projector.
    """
    eye = np.eye(u.shape[0], dtype=complex)
    keep = 0.5 * np.kron(eye, _proj(clock_dim, frm, to))
    move = 0.5 * (np.kron(u, _hop(clock_dim, to, frm))
                  + np.kron(u.conj().T, _hop(clock_dim, frm, to)))
    return keep - move


def _compact_terms(c: CircuitProgram, weights: tuple[float, float, float],
                   clock_site: str) -> list[LocalTerm]:
    w_in, w_up, _ = weights
    L = c.length
    cd = L + 1
    terms: list[LocalTerm] = []

    bits = c.basis_input_bits()
    t0 = _proj(cd, 0)
    if bits is not None:
        for i, b in enumerate(bits):
            wrong = _proj(2, 1 - b)
            terms.append(LocalTerm((f"w{i}", clock_site), w_in * np.kron(wrong, t0)))
    else:
        # non-basis input: a single global projector on the whole work register
        phi = c.initial_vector()
        miss = np.eye(phi.size, dtype=complex) - np.outer(phi, phi.conj())
        support = tuple(work_sites(c.num_qubits)) + (clock_site,)
        terms.append(LocalTerm(support, w_in * np.kron(miss, t0)))

    for t, op in enumerate(c.gates, start=1):
        mat = w_up * _update_term(np.asarray(op.matrix), cd, t - 1, t)
        support = tuple(f"w{q}" for q in op.targets) + (clock_site,)
        terms.append(LocalTerm(support, mat))
    return terms


def _unary_clock_ops(L: int, t: int) -> tuple[tuple[str, ...], np.ndarray, np.ndarray]:
    """Clock-register factor of the step-t update term in the unary encoding.

    Returns (clock support sites, projector onto the two legal patterns,
    hopping matrix |after><before|) on that support.
    """
    if L == 1:
        sites = ("c1",)
        before, after, dim = 0, 1, 2
    elif t == 1:
        sites = ("c1", "c2")
        before, after, dim = 0b00, 0b10, 4
    elif t == L:
        sites = (f"c{L - 1}", f"c{L}")
        before, after, dim = 0b10, 0b11, 4
    else:
        sites = (f"c{t - 1}", f"c{t}", f"c{t + 1}")
        before, after, dim = 0b100, 0b110, 8
    return sites, _proj(dim, before, after), _hop(dim, after, before)


def _unary_terms(c: CircuitProgram, weights: tuple[float, float, float]) -> list[LocalTerm]:
    w_in, w_up, w_clk = weights
    L = c.length
    terms: list[LocalTerm] = []

    bits = c.basis_input_bits()
    zero_c1 = _proj(2, 0)
    if bits is not None:
        for i, b in enumerate(bits):
            terms.append(LocalTerm((f"w{i}", "c1"), w_in * np.kron(_proj(2, 1 - b), zero_c1)))
    else:
        phi = c.initial_vector()
        miss = np.eye(phi.size, dtype=complex) - np.outer(phi, phi.conj())
        support = tuple(work_sites(c.num_qubits)) + ("c1",)
        terms.append(LocalTerm(support, w_in * np.kron(miss, zero_c1)))

    for t, op in enumerate(c.gates, start=1):
        csites, keep, hop = _unary_clock_ops(L, t)
        u = np.asarray(op.matrix)
        eye = np.eye(u.shape[0], dtype=complex)
        mat = 0.5 * np.kron(eye, keep) - 0.5 * (np.kron(u, hop) + np.kron(u.conj().T, hop.conj().T))
        support = tuple(f"w{q}" for q in op.targets) + csites
        terms.append(LocalTerm(support, w_up * mat))

    # forbid the pattern 0 at t followed by 1 at t+1
    for t in range(1, L):
        mat = w_clk * np.kron(_proj(2, 0), _proj(2, 1))
        terms.append(LocalTerm((f"c{t}", f"c{t + 1}"), mat))
    return terms


def build_feynman_kitaev(c: CircuitProgram, encoding: ClockEncoding | str = COMPACT,
                         penalty_weights: tuple[float, float, float] = (1.0, 1.0, 1.0),
                         budget: int | None = None) -> LocalHamiltonian:
    """Compile a circuit into a frustration-free clock Hamiltonian.

    ``penalty_weights`` scales the (input, update, clock-legality) term
    groups; the ground space does not depend on them but the gap does, so
    they are recorded with the site system via the returned terms.
    """
    enc = ClockEncoding(encoding) if isinstance(encoding, str) else encoding
    if any(w <= 0 for w in penalty_weights):
        raise InvalidParameter("penalty weights must be positive")
    for op in c.gates:
        if op.arity > 2:
            raise InvalidParameter(
                "the clock compiler accepts 1- and 2-qubit gates only; "
                "decompose 3-qubit gates first"
            )
    K, L = c.num_qubits, c.length
    notes = []
    if c.basis_input_bits() is None:
        notes.append("input penalty is non-local in the work register")

    if enc.kind == COMPACT:
        sites = work_sites(K) + ["c"]
        dims = [2] * K + [L + 1]
        system = SiteSystem(tuple(sites), tuple(dims),
                            budget=budget if budget is not None else DEFAULT_DIM_BUDGET)
        terms = _compact_terms(c, penalty_weights, "c")
    else:
        sites = work_sites(K) + [f"c{t}" for t in range(1, L + 1)]
        dims = [2] * (K + L)
        system = SiteSystem(tuple(sites), tuple(dims),
                            budget=budget if budget is not None else DEFAULT_DIM_BUDGET)
        terms = _unary_terms(c, penalty_weights)
    return LocalHamiltonian(system, tuple(terms), energy_offset=0.0, notes=tuple(notes))


def unary_clock_index(L: int, t: int) -> int:
    """Basis index of |1^t 0^(L-t)> over the L clock qubits (c1 most significant)."""
    return sum(1 << (L - 1 - j) for j in range(t))


def history_state(c: CircuitProgram, encoding: ClockEncoding | str = COMPACT) -> PureState:
    """Uniform superposition of computation snapshots tagged by clock time."""
    enc = ClockEncoding(encoding) if isinstance(encoding, str) else encoding
    snaps = snapshots(c)
    L = c.length
    norm = 1.0 / np.sqrt(L + 1)
    if enc.kind == COMPACT:
        dim_c = L + 1
        psi = np.zeros(2**c.num_qubits * dim_c, dtype=complex)
        for t, s in enumerate(snaps):
            e = np.zeros(dim_c)
            e[t] = 1.0
            psi += norm * np.kron(s, e)
    else:
        dim_c = 2**L
        psi = np.zeros(2**c.num_qubits * dim_c, dtype=complex)
        for t, s in enumerate(snaps):
            e = np.zeros(dim_c)
            e[unary_clock_index(L, t)] = 1.0
            psi += norm * np.kron(s, e)
    return PureState(psi)
