"""Degree-3 polynomials over F2 and their IQP circuit encodings.

A polynomial f(x) = sum a_ijk x_i x_j x_k + sum b_ij x_i x_j + sum c_i x_i
(mod 2) maps to the commuting circuit H^(x)n . (Z/CZ/CCZ per monomial) .
H^(x)n, whose 0...0 -> 0...0 amplitude equals the normalized gap
(|f^-1(0)| - |f^-1(1)|) / 2^n.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import CircuitProgram, GateOp, gate
from .errors import BudgetExceeded, InvalidParameter
from .rand import stream_rng

NGAP_MAX_VARS = 26  # enumeration budget: 2^26 inputs
_CHUNK = 1 << 18


def _norm_monomials(n: int, items, size: int) -> frozenset:
    out = set()
    for mono in items:
        t = tuple(sorted(int(i) for i in mono)) if size > 1 else (int(mono),)
        if len(t) != size or len(set(t)) != size:
            raise InvalidParameter(f"monomial {mono} must have {size} distinct variables")
        if t[0] < 1 or t[-1] > n:
            raise InvalidParameter(f"monomial {mono} outside variable range 1..{n}")
        out.add(t if size > 1 else t[0])
    return frozenset(out)


@dataclass(frozen=True)
class IQPPolynomial:
    """Monomials (1-based variable indices) with coefficient one."""

    n_vars: int
    cubic: frozenset
    quadratic: frozenset
    linear: frozenset

    def __post_init__(self):
        if self.n_vars < 1:
            raise InvalidParameter("need at least one variable")
        object.__setattr__(self, "cubic", _norm_monomials(self.n_vars, self.cubic, 3))
        object.__setattr__(self, "quadratic", _norm_monomials(self.n_vars, self.quadratic, 2))
        object.__setattr__(self, "linear", _norm_monomials(self.n_vars, self.linear, 1))

    @staticmethod
    def make(n_vars: int, cubic=(), quadratic=(), linear=()) -> "IQPPolynomial":
        return IQPPolynomial(n_vars, frozenset(cubic), frozenset(quadratic), frozenset(linear))

    @property
    def n_monomials(self) -> int:
        return len(self.cubic) + len(self.quadratic) + len(self.linear)

    def sorted_monomials(self) -> tuple[list, list, list]:
        return sorted(self.cubic), sorted(self.quadratic), sorted(self.linear)


def _eval_chunk(p: IQPPolynomial, xs: np.ndarray) -> np.ndarray:
    """f(x) for an array of inputs packed as integers (bit i-1 = variable i)."""
    val = np.zeros(xs.shape, dtype=np.uint8)
    for (i, j, k) in p.cubic:
        val ^= ((xs >> (i - 1)) & (xs >> (j - 1)) & (xs >> (k - 1)) & 1).astype(np.uint8)
    for (i, j) in p.quadratic:
        val ^= ((xs >> (i - 1)) & (xs >> (j - 1)) & 1).astype(np.uint8)
    for i in p.linear:
        val ^= ((xs >> (i - 1)) & 1).astype(np.uint8)
    return val


def ngap(p: IQPPolynomial) -> float:
    """Normalized gap (#zeros - #ones)/2^n by exhaustive enumeration.

    Exact: the gap is an integer below 2^26, so the binary fraction is
    represented without rounding.
    """
    n = p.n_vars
    if n > NGAP_MAX_VARS:
        raise BudgetExceeded(f"enumeration of 2^{n} inputs exceeds the budget")
    total = 1 << n
    ones = 0
    for start in range(0, total, _CHUNK):
        xs = np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
        ones += int(np.count_nonzero(_eval_chunk(p, xs)))
    return (total - 2 * ones) / total


def encode_iqp(p: IQPPolynomial) -> CircuitProgram:
    """Hadamard sandwich around one diagonal gate per monomial.

    Variable i acts on qubit i-1.  CCZ gates are emitted as explicit 3-qubit
    diagonal gates; run :func:`ffcert.circuits.decompose_ccz` before feeding
    the result to the clock compiler.
    """
    n = p.n_vars
    ops: list[GateOp] = [gate("H", q) for q in range(n)]
    cubic, quadratic, linear = p.sorted_monomials()
    for (i, j, k) in cubic:
        ops.append(gate("CCZ", i - 1, j - 1, k - 1))
    for (i, j) in quadratic:
        ops.append(gate("CZ", i - 1, j - 1))
    for i in linear:
        ops.append(gate("Z", i - 1))
    ops.extend(gate("H", q) for q in range(n))
    return CircuitProgram(n, tuple(ops))


def random_polynomial(n_vars: int, seed: int) -> IQPPolynomial:
    """Uniformly random degree-3 polynomial: every monomial coefficient is a fair bit."""
    rng = stream_rng(seed, 7)  # dedicated stream for instance generation
    cubic = [(i, j, k)
             for i in range(1, n_vars + 1)
             for j in range(i + 1, n_vars + 1)
             for k in range(j + 1, n_vars + 1)]
    quadratic = [(i, j) for i in range(1, n_vars + 1) for j in range(i + 1, n_vars + 1)]
    linear = list(range(1, n_vars + 1))
    keep_c = [m for m in cubic if rng.integers(0, 2)]
    keep_q = [m for m in quadratic if rng.integers(0, 2)]
    keep_l = [m for m in linear if rng.integers(0, 2)]
    return IQPPolynomial.make(n_vars, keep_c, keep_q, keep_l)


# ---------------------------------------------------------------------------
# text format: one monomial per line ("a i j k" / "b i j" / "c i")
# ---------------------------------------------------------------------------

def format_polynomial(p: IQPPolynomial) -> str:
    cubic, quadratic, linear = p.sorted_monomials()
    lines = [f"n {p.n_vars}"]
    lines += [f"a {i} {j} {k}" for (i, j, k) in cubic]
    lines += [f"b {i} {j}" for (i, j) in quadratic]
    lines += [f"c {i}" for i in linear]
    return "\n".join(lines) + "\n"


def parse_polynomial(text: str) -> IQPPolynomial:
    n_vars = None
    cubic, quadratic, linear = [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        kind, args = fields[0], fields[1:]
        try:
            ints = [int(a) for a in args]
        except ValueError:
            raise InvalidParameter(f"line {lineno}: non-integer index in {raw!r}") from None
        if kind == "n" and len(ints) == 1:
            n_vars = ints[0]
        elif kind == "a" and len(ints) == 3:
            cubic.append(tuple(ints))
        elif kind == "b" and len(ints) == 2:
            quadratic.append(tuple(ints))
        elif kind == "c" and len(ints) == 1:
            linear.append(ints[0])
        else:
            raise InvalidParameter(f"line {lineno}: cannot parse {raw!r}")
    if n_vars is None:
        peak = 0
        for group in (cubic, quadratic):
            for mono in group:
                peak = max(peak, max(mono))
        peak = max([peak] + linear) if linear else peak
        if peak == 0:
            raise InvalidParameter("polynomial file declares no variables")
        n_vars = peak
    return IQPPolynomial.make(n_vars, cubic, quadratic, linear)
