"""JSON and CSV formats for Hamiltonians, states, circuits, plans and reports.

Complex numbers are stored as [re, im] pairs, matrices row-major.  Floats are
emitted through Python's shortest round-trip repr, so every serialized value
re-parses to the identical bits.
"""
from __future__ import annotations

import io as _io
import json
from typing import Any

import numpy as np

from .certification import CertificationPlan, CertificationReport
from .circuits import GATES, CircuitProgram, GateOp, gate
from .errors import InvalidParameter
from .operators import FFVerdict, LocalHamiltonian, LocalTerm, SiteSystem, SpectralSummary
from .sampling import MeasurementRecord
from .states import NoiseSpec, PreparedState, PureState, _PureAtom, apply_noise
from .supremacy import BudgetLedger


# ---------------------------------------------------------------------------
# complex payloads
# ---------------------------------------------------------------------------

def pairs_from_vector(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex).ravel()]


def vector_from_pairs(pairs: list) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=complex)


def pairs_from_matrix(m: np.ndarray) -> list:
    return [pairs_from_vector(row) for row in np.asarray(m, dtype=complex)]


def matrix_from_pairs(rows: list) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


# ---------------------------------------------------------------------------
# Hamiltonian files
# ---------------------------------------------------------------------------

def hamiltonian_to_dict(h: LocalHamiltonian) -> dict:
    return {
        "sites": [{"id": s, "dim": d} for s, d in zip(h.system.sites, h.system.dims)],
        "terms": [{"support": list(t.support), "matrix": pairs_from_matrix(t.matrix)}
                  for t in h.terms],
        "energy_offset": float(h.energy_offset),
    }


def hamiltonian_from_dict(d: dict, budget: int | None = None) -> LocalHamiltonian:
    sites = tuple(s["id"] for s in d["sites"])
    dims = tuple(int(s["dim"]) for s in d["sites"])
    kwargs = {} if budget is None else {"budget": budget}
    system = SiteSystem(sites, dims, **kwargs)
    terms = tuple(
        LocalTerm(tuple(t["support"]), matrix_from_pairs(t["matrix"])) for t in d["terms"]
    )
    return LocalHamiltonian(system, terms, energy_offset=float(d.get("energy_offset", 0.0)))


# ---------------------------------------------------------------------------
# state files
# ---------------------------------------------------------------------------

def channel_from_dict(d: dict) -> NoiseSpec:
    name = d.get("name")
    if name == "depolarizing":
        return NoiseSpec.depolarizing(float(d["p"]))
    if name == "ground_mix":
        return NoiseSpec.ground_mix(float(d["p"]), state_from_dict(d["other"]))
    if name == "dephasing":
        return NoiseSpec.dephasing(float(d["p"]), d.get("basis", "computational"))
    raise InvalidParameter(f"unknown channel {name!r}")


def channel_to_dict(spec: NoiseSpec) -> dict:
    out: dict[str, Any] = {"name": spec.name, "p": float(spec.p)}
    if spec.name == "ground_mix":
        out["other"] = state_to_dict(spec.other)
    if spec.name == "dephasing":
        out["basis"] = spec.basis
    return out


def state_from_dict(d: dict) -> PreparedState:
    kind = d.get("kind")
    if kind == "pure":
        st = PreparedState.from_pure(vector_from_pairs(d["amplitudes"]),
                                     label=d.get("label", ""))
    elif kind == "dense":
        st = PreparedState.from_dense(matrix_from_pairs(d["rho"]), label=d.get("label", ""))
    elif kind == "noisy_pure":
        base = state_from_dict(d["base"])
        st = apply_noise(base, channel_from_dict(d["channel"]))
        if d.get("label"):
            st = PreparedState(st.parts, label=d["label"])
    else:
        raise InvalidParameter(f"unknown state kind {kind!r}")
    return PreparedState(st.parts, label=st.label, recipe=d)


def state_to_dict(state: PreparedState) -> dict:
    if state.recipe is not None:
        return state.recipe
    if len(state.parts) == 1:
        _, atom = state.parts[0]
        if isinstance(atom, _PureAtom):
            return {"kind": "pure", "amplitudes": pairs_from_vector(atom.vec),
                    "label": state.label}
    return {"kind": "dense", "rho": pairs_from_matrix(state.to_dense()),
            "label": state.label}


# ---------------------------------------------------------------------------
# circuit files
# ---------------------------------------------------------------------------

def circuit_to_dict(c: CircuitProgram) -> dict:
    gates_out = []
    for op in c.gates:
        if op.name and op.name in GATES:
            gates_out.append({"name": op.name, "targets": list(op.targets)})
        else:
            gates_out.append({"matrix": pairs_from_matrix(op.matrix),
                              "targets": list(op.targets)})
    bits = c.basis_input_bits()
    inp: Any = "".join(str(b) for b in bits) if bits is not None \
        else pairs_from_vector(c.initial_vector())
    return {"qubits": c.num_qubits, "input": inp, "gates": gates_out}


def circuit_from_dict(d: dict) -> CircuitProgram:
    k = int(d["qubits"])
    ops = []
    for g in d["gates"]:
        targets = tuple(int(t) for t in g["targets"])
        if "name" in g:
            ops.append(gate(g["name"], *targets))
        else:
            ops.append(GateOp(targets, matrix_from_pairs(g["matrix"])))
    inp = d.get("input")
    input_state = None
    if isinstance(inp, str):
        if len(inp) != k or any(ch not in "01" for ch in inp):
            raise InvalidParameter(f"input bitstring {inp!r} must be {k} bits")
        if any(ch == "1" for ch in inp):
            v = np.zeros(2**k, dtype=complex)
            v[int(inp, 2)] = 1.0
            input_state = v
    elif inp is not None:
        input_state = vector_from_pairs(inp)
    return CircuitProgram(k, tuple(ops), input_state=input_state)


# ---------------------------------------------------------------------------
# spectral summaries, plans, reports
# ---------------------------------------------------------------------------

def summary_to_dict(s: SpectralSummary) -> dict:
    return {
        "ground_energy": float(s.ground_energy),
        "first_excited": float(s.first_excited),
        "gap": float(s.gap),
        "norm": float(s.norm),
        "unique_ground": bool(s.unique_ground),
        "degeneracy": int(s.degeneracy),
        "degeneracy_tol": float(s.degeneracy_tol),
        "ground_basis": pairs_from_matrix(s.ground_basis),
    }


def summary_from_dict(d: dict) -> SpectralSummary:
    return SpectralSummary(
        ground_energy=float(d["ground_energy"]),
        first_excited=float(d["first_excited"]),
        gap=float(d["gap"]),
        norm=float(d["norm"]),
        ground_basis=matrix_from_pairs(d["ground_basis"]),
        unique_ground=bool(d["unique_ground"]),
        degeneracy_tol=float(d["degeneracy_tol"]),
    )


def verdict_to_dict(v: FFVerdict) -> dict:
    return {
        "frustration_free": bool(v.frustration_free),
        "hamiltonian_residual": float(v.hamiltonian_residual),
        "term_residuals": [float(r) for r in v.term_residuals],
        "tol": float(v.tol),
    }


def plan_to_dict(p: CertificationPlan) -> dict:
    return {
        "f_threshold": p.f_threshold,
        "alpha": p.alpha,
        "epsilon": p.epsilon,
        "shots_per_term": p.shots_per_term,
        "fidelity_gap": p.fidelity_gap,
        "n_terms": p.n_terms,
        "interaction_strength": p.interaction_strength,
        "gap": p.gap,
        "norm": p.norm,
        "gap_source": p.gap_source,
    }


def plan_from_dict(d: dict) -> CertificationPlan:
    return CertificationPlan(
        f_threshold=float(d["f_threshold"]),
        alpha=float(d["alpha"]),
        epsilon=float(d["epsilon"]),
        shots_per_term=int(d["shots_per_term"]),
        fidelity_gap=float(d["fidelity_gap"]),
        n_terms=int(d["n_terms"]),
        interaction_strength=float(d["interaction_strength"]),
        gap=float(d["gap"]),
        norm=float(d["norm"]),
        gap_source=str(d.get("gap_source", "computed")),
    )


def report_to_dict(r: CertificationReport) -> dict:
    return {
        "plan": plan_to_dict(r.plan),
        "E_star": r.e_star,
        "E_star_raw": r.e_star_raw,
        "F_min_star": r.f_min_star,
        "F_max_star": r.f_max_star,
        "verdict": r.verdict,
        "seed": r.seed,
        "rng": r.rng,
        "gap_source": r.plan.gap_source,
        "below_first_excited": r.below_first_excited,
        "true_fidelity": r.true_fidelity,
    }


def report_from_dict(d: dict) -> CertificationReport:
    return CertificationReport(
        plan=plan_from_dict(d["plan"]),
        e_star_raw=float(d["E_star_raw"]),
        e_star=float(d["E_star"]),
        f_min_star=float(d["F_min_star"]),
        f_max_star=float(d["F_max_star"]),
        verdict=str(d["verdict"]),
        seed=int(d["seed"]),
        rng=str(d["rng"]),
        below_first_excited=d.get("below_first_excited"),
        true_fidelity=d.get("true_fidelity"),
    )


def ledger_to_dict(lg: BudgetLedger) -> dict:
    return {
        "epsilon_prep": lg.epsilon_prep,
        "completed_weight": lg.completed_weight,
        "post_bound": lg.post_bound,
        "threshold": lg.threshold,
        "passed": lg.passed,
        "conversion": lg.conversion,
    }


# ---------------------------------------------------------------------------
# record CSV
# ---------------------------------------------------------------------------

def records_to_csv(records: list[MeasurementRecord]) -> str:
    buf = _io.StringIO()
    buf.write("term_index,shot_index,outcome\n")
    for r in records:
        buf.write(f"{r.term_index},{r.shot_index},{r.outcome!r}\n")
    return buf.getvalue()


def records_from_csv(text: str) -> list[MeasurementRecord]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    out = []
    for ln in lines[1:]:
        t, s, o = ln.split(",")
        out.append(MeasurementRecord(int(t), int(s), float(o)))
    return out


# ---------------------------------------------------------------------------
# json helpers
# ---------------------------------------------------------------------------

def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_json(path: str) -> Any:
    with open(path) as fh:
        return json.load(fh)


def save_json(obj: Any, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def pure_state_to_dict(psi: PureState, label: str = "") -> dict:
    return {"kind": "pure", "amplitudes": pairs_from_vector(psi.amplitudes), "label": label}
