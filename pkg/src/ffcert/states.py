"""Quantum states handed over for certification: exact and lazy forms.

A prepared state is a convex mixture of simple atoms: a pure vector, a dense
density matrix, a classical (diagonal) distribution over the computational
basis, or the maximally mixed state.  The mixture form keeps the standard
noise channels exact without ever materializing a D x D matrix, so reduced
density matrices and overlaps stay cheap at large dimension.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, InvalidParameter

DENSE_STATE_LIMIT = 4096  # largest dimension at which a dense matrix may be built

TRACE_TOL = 1e-10
NEGATIVITY_TOL = 1e-10
NORM_TOL = 1e-12


@dataclass(frozen=True)
class PureState:
    """Unit-norm complex amplitude vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).ravel()
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > NORM_TOL:
            raise InvalidParameter(f"state vector norm {nrm} is not 1")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


# ---------------------------------------------------------------------------
# mixture atoms
# ---------------------------------------------------------------------------

class _Atom:
    dim: int

    def reduced(self, dims: tuple[int, ...], keep: tuple[int, ...]) -> np.ndarray:
        raise NotImplementedError

    def overlap_pure(self, psi: np.ndarray) -> float:
        raise NotImplementedError

    def diagonal(self) -> np.ndarray:
        raise NotImplementedError

    def dense(self) -> np.ndarray:
        raise NotImplementedError


def _move_keep_axes(dims: tuple[int, ...], keep: tuple[int, ...]) -> tuple[list[int], int, int]:
    rest = [i for i in range(len(dims)) if i not in keep]
    d_keep = math.prod(dims[i] for i in keep)
    d_rest = math.prod([dims[i] for i in rest]) if rest else 1
    return rest, d_keep, d_rest


class _PureAtom(_Atom):
    def __init__(self, vec: np.ndarray):
        self.vec = np.asarray(vec, dtype=complex).ravel()
        self.dim = self.vec.size

    def reduced(self, dims, keep):
        rest, d_keep, d_rest = _move_keep_axes(dims, keep)
        psi = self.vec.reshape(dims)
        psi = np.transpose(psi, list(keep) + rest).reshape(d_keep, d_rest)
        return psi @ psi.conj().T

    def overlap_pure(self, psi):
        return float(abs(np.vdot(psi, self.vec)) ** 2)

    def diagonal(self):
        return np.abs(self.vec) ** 2

    def dense(self):
        return np.outer(self.vec, self.vec.conj())


class _DenseAtom(_Atom):
    def __init__(self, rho: np.ndarray, validate: bool = True):
        rho = np.array(rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise DimensionMismatch("density matrix must be square")
        if validate:
            if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
                raise InvalidParameter("density matrix not Hermitian within 1e-12")
            tr = float(np.real(np.trace(rho)))
            if abs(tr - 1.0) > TRACE_TOL:
                raise InvalidParameter(f"density matrix trace {tr} is not 1")
            w = np.linalg.eigvalsh(rho)
            if w[0] < -NEGATIVITY_TOL:
                raise InvalidParameter(f"density matrix has eigenvalue {w[0]:.3e} < -1e-10")
            if w[0] < 0:
                # numerical hygiene: clip tiny negativity and renormalize
                vals, vecs = np.linalg.eigh(rho)
                vals = np.clip(vals, 0.0, None)
                vals /= vals.sum()
                rho = (vecs * vals) @ vecs.conj().T
        self.rho = rho
        self.dim = rho.shape[0]

    def reduced(self, dims, keep):
        rest, d_keep, d_rest = _move_keep_axes(dims, keep)
        n = len(dims)
        perm = list(keep) + rest
        r = self.rho.reshape(dims + dims)
        r = np.transpose(r, perm + [p + n for p in perm])
        r = r.reshape(d_keep, d_rest, d_keep, d_rest)
        return np.trace(r, axis1=1, axis2=3)

    def overlap_pure(self, psi):
        return float(np.real(np.vdot(psi, self.rho @ psi)))

    def diagonal(self):
        return np.real(np.diag(self.rho)).copy()

    def dense(self):
        return self.rho.copy()


class _ClassicalAtom(_Atom):
    """Diagonal density matrix: a probability vector over the basis."""

    def __init__(self, probs: np.ndarray):
        p = np.asarray(probs, dtype=float).ravel()
        if p.min() < -NEGATIVITY_TOL:
            raise InvalidParameter("classical distribution has a negative weight")
        p = np.clip(p, 0.0, None)
        s = p.sum()
        if abs(s - 1.0) > TRACE_TOL:
            raise InvalidParameter(f"classical distribution sums to {s}, not 1")
        self.probs = p / s
        self.dim = p.size

    def reduced(self, dims, keep):
        rest, d_keep, _ = _move_keep_axes(dims, keep)
        p = self.probs.reshape(dims)
        p = np.transpose(p, list(keep) + rest).reshape(d_keep, -1).sum(axis=1)
        return np.diag(p).astype(complex)

    def overlap_pure(self, psi):
        return float(np.real(np.sum(self.probs * np.abs(psi) ** 2)))

    def diagonal(self):
        return self.probs.copy()

    def dense(self):
        return np.diag(self.probs).astype(complex)


class _MaxMixedAtom(_Atom):
    def __init__(self, dim: int):
        self.dim = int(dim)

    def reduced(self, dims, keep):
        d_keep = math.prod(dims[i] for i in keep)
        return np.eye(d_keep, dtype=complex) / d_keep

    def overlap_pure(self, psi):
        return 1.0 / self.dim

    def diagonal(self):
        return np.full(self.dim, 1.0 / self.dim)

    def dense(self):
        return np.eye(self.dim, dtype=complex) / self.dim


@dataclass(frozen=True)
class PreparedState:
    """Possibly mixed state, stored as a weighted mixture of simple atoms.

    ``recipe`` optionally remembers a JSON-able description (used by file
    round-tripping); it has no effect on the physics.
    """

    parts: tuple[tuple[float, _Atom], ...]
    label: str = ""
    recipe: dict | None = None

    def __post_init__(self):
        if not self.parts:
            raise InvalidParameter("state needs at least one mixture component")
        dims = {atom.dim for _, atom in self.parts}
        if len(dims) != 1:
            raise DimensionMismatch("mixture components differ in dimension")
        w = np.array([wt for wt, _ in self.parts], dtype=float)
        if w.min() < -NEGATIVITY_TOL:
            raise InvalidParameter("mixture weight below zero")
        if abs(w.sum() - 1.0) > TRACE_TOL:
            raise InvalidParameter(f"mixture weights sum to {w.sum()}, not 1")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_pure(vec: np.ndarray | PureState, label: str = "") -> "PreparedState":
        v = vec.amplitudes if isinstance(vec, PureState) else np.asarray(vec, dtype=complex)
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > 1e-10:
            raise InvalidParameter(f"pure-state norm {nrm} is not 1")
        return PreparedState(((1.0, _PureAtom(v / nrm)),), label=label)

    @staticmethod
    def from_dense(rho: np.ndarray, label: str = "") -> "PreparedState":
        return PreparedState(((1.0, _DenseAtom(rho)),), label=label)

    @staticmethod
    def from_diagonal(probs: np.ndarray, label: str = "") -> "PreparedState":
        return PreparedState(((1.0, _ClassicalAtom(probs)),), label=label)

    @staticmethod
    def maximally_mixed(dim: int, label: str = "") -> "PreparedState":
        return PreparedState(((1.0, _MaxMixedAtom(dim)),), label=label)

    # -- queries ------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.parts[0][1].dim

    def reduced_density_matrix(self, dims: tuple[int, ...], keep: tuple[int, ...]) -> np.ndarray:
        """Reduced state on the axes in ``keep`` (in the given order)."""
        if math.prod(dims) != self.dim:
            raise DimensionMismatch("site dimensions do not match state dimension")
        out = 0.0
        for wt, atom in self.parts:
            out = out + wt * atom.reduced(tuple(dims), tuple(keep))
        return out

    def overlap_with_pure(self, psi: np.ndarray | PureState) -> float:
        """<psi| rho |psi> for a unit vector psi."""
        v = psi.amplitudes if isinstance(psi, PureState) else np.asarray(psi, dtype=complex)
        if v.size != self.dim:
            raise DimensionMismatch("vector dimension does not match state")
        return float(sum(wt * atom.overlap_pure(v) for wt, atom in self.parts))

    def diagonal_probabilities(self) -> np.ndarray:
        """Diagonal of rho in the computational basis (a probability vector)."""
        out = np.zeros(self.dim)
        for wt, atom in self.parts:
            out += wt * atom.diagonal()
        np.clip(out, 0.0, None, out=out)
        return out / out.sum()

    def to_dense(self, limit: int = DENSE_STATE_LIMIT) -> np.ndarray:
        if self.dim > limit:
            raise BudgetExceeded(
                f"refusing to materialize a {self.dim}-dimensional density matrix"
            )
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for wt, atom in self.parts:
            out += wt * atom.dense()
        return out

    @property
    def rho(self) -> np.ndarray:
        return self.to_dense()


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def fidelity(sigma: PreparedState, rho_pure: PureState | np.ndarray) -> float:
    """Overlap Tr[rho sigma] = <psi|sigma|psi> with the pure state psi."""
    return sigma.overlap_with_pure(rho_pure)


def trace_distance(a: PreparedState, b: PreparedState,
                   limit: int = DENSE_STATE_LIMIT) -> float:
    """Half the trace norm of a - b."""
    if a.dim != b.dim:
        raise DimensionMismatch("states live on different spaces")
    diff = a.to_dense(limit) - b.to_dense(limit)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def l1_distance(a: PreparedState, b: PreparedState,
                limit: int = DENSE_STATE_LIMIT) -> float:
    """Trace norm ||a - b||_1 (twice the trace distance)."""
    return 2.0 * trace_distance(a, b, limit)


# ---------------------------------------------------------------------------
# noise channels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NoiseSpec:
    """One of the supported preparation-error channels."""

    name: str  # "depolarizing" | "ground_mix" | "dephasing"
    p: float
    other: PreparedState | None = None
    basis: str = "computational"

    def __post_init__(self):
        if self.name not in ("depolarizing", "ground_mix", "dephasing"):
            raise InvalidParameter(f"unknown channel {self.name!r}")
        if not 0.0 <= self.p <= 1.0:
            raise InvalidParameter(f"channel strength p={self.p} outside [0, 1]")
        if self.name == "ground_mix" and self.other is None:
            raise InvalidParameter("ground_mix requires the admixed state")
        if self.name == "dephasing" and self.basis != "computational":
            raise InvalidParameter("dephasing supports the computational basis only")

    @staticmethod
    def depolarizing(p: float) -> "NoiseSpec":
        return NoiseSpec("depolarizing", p)

    @staticmethod
    def ground_mix(p: float, other: PreparedState) -> "NoiseSpec":
        return NoiseSpec("ground_mix", p, other=other)

    @staticmethod
    def dephasing(p: float, basis: str = "computational") -> "NoiseSpec":
        return NoiseSpec("dephasing", p, basis=basis)


def apply_noise(rho: PreparedState, channel: NoiseSpec) -> PreparedState:
    """Convex combination implementing the channel, kept in lazy mixture form."""
    p = channel.p
    if p == 0.0:
        return rho
    base = [(wt * (1.0 - p), atom) for wt, atom in rho.parts] if p < 1.0 else []

    if channel.name == "depolarizing":
        extra = [(p, _MaxMixedAtom(rho.dim))]
    elif channel.name == "ground_mix":
        other = channel.other
        if other.dim != rho.dim:
            raise DimensionMismatch("admixed state dimension mismatch")
        extra = [(p * wt, atom) for wt, atom in other.parts]
    else:  # dephasing: p-weighted collapse onto the computational diagonal
        extra = [(p, _ClassicalAtom(rho.diagonal_probabilities()))]

    label = rho.label
    return PreparedState(tuple(base + extra), label=label)
