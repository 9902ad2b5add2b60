"""Gate-list circuits and a small dense statevector simulator.

Qubit 0 is the most significant bit: basis index of |q0 q1 ... q_{K-1}> is
sum_i q_i 2^(K-1-i), matching the row-major site ordering used for local
Hamiltonians.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidParameter, NonUnitaryGate

UNITARITY_TOL = 1e-12

_S2 = 1.0 / np.sqrt(2.0)
_T = np.exp(1j * np.pi / 4)

_CCX = np.eye(8, dtype=complex)
_CCX[6:8, 6:8] = [[0, 1], [1, 0]]

GATES: dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _S2,
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, _T]], dtype=complex),
    "TDG": np.array([[1, 0], [0, np.conj(_T)]], dtype=complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "CX": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
    "CCZ": np.diag([1, 1, 1, 1, 1, 1, 1, -1]).astype(complex),
    "CCX": _CCX,
}
GATES["CNOT"] = GATES["CX"]


@dataclass(frozen=True)
class GateOp:
    """A unitary applied to an ordered tuple of qubits."""

    targets: tuple[int, ...]
    matrix: np.ndarray
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        m = np.array(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        k = len(self.targets)
        if len(set(self.targets)) != k:
            raise InvalidParameter("gate targets must be distinct")
        if m.shape != (2**k, 2**k):
            raise DimensionMismatch(f"gate on {k} qubits needs a {2**k}x{2**k} matrix")
        if np.max(np.abs(m @ m.conj().T - np.eye(2**k))) > UNITARITY_TOL:
            raise NonUnitaryGate(f"gate {self.name or 'matrix'} is not unitary")

    @property
    def arity(self) -> int:
        return len(self.targets)


def gate(name: str, *targets: int) -> GateOp:
    """Named gate from the registry."""
    key = name.upper()
    if key not in GATES:
        raise InvalidParameter(f"unknown gate {name!r}")
    return GateOp(tuple(targets), GATES[key], name=key)


@dataclass(frozen=True)
class CircuitProgram:
    """Ordered gate list on ``num_qubits`` qubits with a fixed input state."""

    num_qubits: int
    gates: tuple[GateOp, ...]
    input_state: np.ndarray | None = None  # default |0...0>

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 1:
            raise InvalidParameter("need at least one qubit")
        if len(self.gates) < 1:
            raise InvalidParameter("need at least one gate")
        for g in self.gates:
            if any(t < 0 or t >= self.num_qubits for t in g.targets):
                raise InvalidParameter(f"gate targets {g.targets} out of range")
        if self.input_state is not None:
            v = np.array(self.input_state, dtype=complex).ravel()
            if v.size != 2**self.num_qubits:
                raise DimensionMismatch("input state has wrong dimension")
            if abs(np.linalg.norm(v) - 1.0) > 1e-10:
                raise InvalidParameter("input state is not normalized")
            v.setflags(write=False)
            object.__setattr__(self, "input_state", v)

    @property
    def length(self) -> int:
        return len(self.gates)

    def initial_vector(self) -> np.ndarray:
        if self.input_state is not None:
            return np.array(self.input_state, dtype=complex)
        v = np.zeros(2**self.num_qubits, dtype=complex)
        v[0] = 1.0
        return v

    def basis_input_bits(self) -> tuple[int, ...] | None:
        """Input bits if the input is a computational basis state, else None."""
        v = self.initial_vector()
        hot = np.flatnonzero(np.abs(v) > 0)
        if hot.size != 1 or abs(v[hot[0]] - 1.0) > 1e-12:
            return None
        g = int(hot[0])
        return tuple((g >> (self.num_qubits - 1 - i)) & 1 for i in range(self.num_qubits))


def apply_gate(state: np.ndarray, op: GateOp, num_qubits: int) -> np.ndarray:
    """Apply a k-qubit unitary to a statevector."""
    k = op.arity
    psi = state.reshape([2] * num_qubits)
    u = op.matrix.reshape([2] * (2 * k))
    psi = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), list(op.targets)))
    psi = np.moveaxis(psi, range(k), op.targets)
    return psi.reshape(-1)


def statevector(c: CircuitProgram) -> np.ndarray:
    """Final state after all gates."""
    psi = c.initial_vector()
    for op in c.gates:
        psi = apply_gate(psi, op, c.num_qubits)
    return psi


def snapshots(c: CircuitProgram) -> list[np.ndarray]:
    """States after 0, 1, ..., L gates (length L+1)."""
    psi = c.initial_vector()
    out = [psi.copy()]
    for op in c.gates:
        psi = apply_gate(psi, op, c.num_qubits)
        out.append(psi.copy())
    return out


def circuit_unitary(c: CircuitProgram, max_qubits: int = 12) -> np.ndarray:
    """Full unitary of the gate list (input state ignored)."""
    if c.num_qubits > max_qubits:
        raise InvalidParameter(f"unitary construction capped at {max_qubits} qubits")
    dim = 2**c.num_qubits
    u = np.eye(dim, dtype=complex)
    for op in c.gates:
        u = np.column_stack([apply_gate(u[:, j], op, c.num_qubits) for j in range(dim)])
    return u


# CCZ on (a, b, c) as T/CX gates; exact, no global phase.
_CCZ_PATTERN = (
    ("CX", 1, 2), ("TDG", 2), ("CX", 0, 2), ("T", 2), ("CX", 1, 2), ("TDG", 2),
    ("CX", 0, 2), ("T", 1), ("T", 2), ("CX", 0, 1), ("T", 0), ("TDG", 1), ("CX", 0, 1),
)


def decompose_ccz(c: CircuitProgram) -> CircuitProgram:
    """Rewrite CCZ gates into one- and two-qubit gates; other gates pass through."""
    out: list[GateOp] = []
    for op in c.gates:
        if op.name == "CCZ" or (op.arity == 3 and np.allclose(op.matrix, GATES["CCZ"], atol=1e-14)):
            a, b, t = op.targets
            lookup = (a, b, t)
            for step in _CCZ_PATTERN:
                out.append(gate(step[0], *(lookup[i] for i in step[1:])))
        else:
            out.append(op)
    return CircuitProgram(c.num_qubits, tuple(out), input_state=c.input_state)


def pad_identities(c: CircuitProgram, count: int) -> CircuitProgram:
    """Append ``count`` identity gates (raises the completed-computation weight)."""
    if count < 0:
        raise InvalidParameter("padding count must be >= 0")
    if count == 0:
        return c
    extra = tuple(gate("I", 0) for _ in range(count))
    return CircuitProgram(c.num_qubits, c.gates + extra, input_state=c.input_state)
