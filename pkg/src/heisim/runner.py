"""Circuit execution: descriptor evolution, oracle cross-check, query answers.

Every run validates the Heisenberg evolution against the Schrodinger oracle
and reports residual summaries next to the query results. Output is a plain
dict ready for deterministic JSON serialization (sorted keys, floats rounded
to 12 significant digits).
"""

from __future__ import annotations

import json

import numpy as np

from . import network, oracle, registers, relative
from .circuit import CircuitFile
from .errors import ToleranceViolation
from .linalg import COMPONENTS, DEFAULT_TOL, Tolerances
from .network import Gate, NetworkState

ARTIFACT_VERSION = "0.1.0"
REPORT_FORMAT_VERSION = 1


def _round_sig(value: float) -> float:
    """Round to 12 significant digits for stable report formatting."""
    if value == 0 or not np.isfinite(value):
        return float(value)
    return float(f"{value:.12g}")


def _clean(obj):
    """Recursively normalize report values for JSON output."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return _round_sig(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, complex):
        return {"re": _round_sig(obj.real), "im": _round_sig(obj.imag)}
    return obj


def _frame_from_ref(state: NetworkState, ref: dict) -> relative.RelativeFrame:
    snapshot = state.get_record(ref["qubit"], ref["component"], ref["step"])
    source = f"q_{ref['qubit']}{ref['component']} at t={ref['step']}"
    plus, minus = relative.make_pvm(state, snapshot, source)
    return plus if ref["label"] == 1 else minus


def _answer_query(state: NetworkState, query: dict) -> dict:
    kind = query["kind"]
    if kind == "expectation":
        obs = state.descriptor(query["qubit"]).component(query["component"])
        if "frame" in query:
            frame = _frame_from_ref(state, query["frame"])
            value = relative.relative_expectation(state, obs, frame)
            return {"kind": kind, "value": np.real(value),
                    "frame_label": query["frame"]["label"],
                    "frame_weight": frame.weight}
        return {"kind": kind, "value": np.real(network.expectation(state, obs))}
    if kind == "sharpness":
        obs = state.descriptor(query["qubit"]).component(query["component"])
        value = network.is_sharp(state, obs)
        return {"kind": kind, "sharp": value is not None, "value": value}
    if kind == "entanglement":
        a, b = query["qubits"]
        witness = network.are_entangled(state, a, b)
        return {"kind": kind, "entangled": witness.entangled,
                "witness": list(witness.components) if witness.components else None,
                "discrepancy": witness.discrepancy}
    if kind == "foliate":
        ref = query["record"]
        snapshot = state.get_record(ref["qubit"], ref["component"], ref["step"])
        source = f"q_{ref['qubit']}{ref['component']} at t={ref['step']}"
        report = relative.foliate(state, snapshot, query["qubits"], source)
        rel_exp = {}
        for q, branch in report.relative.items():
            per_frame = {}
            for rd in branch:
                if rd.frame.weight <= state.tol.weight:
                    continue
                per_frame[f"{rd.frame.label:g}"] = [
                    np.real(relative.relative_expectation(
                        state, state.descriptor(q).component(c), rd.frame))
                    for c in COMPONENTS]
            rel_exp[str(q)] = per_frame
        return {"kind": kind,
                "frames": [{"label": f.label, "weight": f.weight}
                           for f in report.frames],
                "completeness_residual": report.completeness_residual,
                "max_commutator": report.max_commutator,
                "valid": report.valid,
                "relative_expectations": rel_exp}
    if kind == "autonomy":
        gate_spec = dict(query["gate"])
        gate_spec.pop("step", None)
        gate = Gate(str(gate_spec["kind"]).upper(),
                    tuple(gate_spec.get("operands", [])),
                    tuple(float(p) for p in gate_spec.get("params", [])))
        snapshots = [state.get_record(r["qubit"], r["component"], r["step"])
                     for r in query["records"]]
        result = relative.autonomy_check(state, gate, snapshots)
        return {"kind": kind, "classification": result.classification,
                "violated_index": result.violated_index,
                "commutator_norm": result.commutator_norm}
    if kind == "classical":
        bm = registers.register_descriptor(state, query["register"])
        bs = registers.register_descriptor(state, query["reference"])
        branches = registers.classical_branches(state, bm, bs)
        product = bm.matrix @ bs.matrix
        mean = np.real(network.expectation(state, product))
        second = np.real(network.expectation(state, product @ product))
        return {"kind": kind,
                "branches": [{"label": b.frame.label,
                              "weight": b.frame.weight,
                              "value": b.value,
                              "variance": b.variance}
                             for b in branches],
                "product_sharpness_residual": abs(second - mean * mean)}
    raise AssertionError(f"unhandled query kind {kind}")


def execute(circuit: CircuitFile, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Run a circuit in both pictures and answer its queries.

    Raises ToleranceViolation when a residual summary exceeds its bound;
    physics errors from individual queries propagate unchanged.
    """
    state0 = network.init_network(circuit.qubits, tol)
    record_plan: dict[int, list] = {}
    for ref in circuit.records:
        record_plan.setdefault(ref.step, []).append((ref.qubit, ref.component))
    timeline = network.run_gates(state0, circuit.gates, record_plan)
    final = timeline[-1]

    run = oracle.evolve(state0.psi, circuit.gates, circuit.qubits, tol)
    cross = oracle.cross_validate(run, timeline)
    algebra = network.algebra_residual(final)

    results = [_answer_query(final, q) for q in circuit.queries]

    report = {
        "report_format_version": REPORT_FORMAT_VERSION,
        "artifact_version": ARTIFACT_VERSION,
        "qubits": circuit.qubits,
        "steps": len(circuit.gates),
        "tolerances": tol.as_dict(),
        "queries": results,
        "residuals": {
            "algebra": algebra,
            "oracle_max": cross.max_residual,
            "oracle_per_step": list(cross.per_step),
        },
    }
    algebra_bound = 100 * tol.general
    if algebra > algebra_bound:
        raise ToleranceViolation(
            f"algebra residual {algebra:.3e} > {algebra_bound:.3e}")
    if cross.max_residual > tol.oracle:
        raise ToleranceViolation(
            f"oracle residual {cross.max_residual:.3e} > {tol.oracle:.3e}")
    return _clean(report)


def render_report(report: dict, summary: bool = False) -> str:
    """JSON report, or a human-readable table with --summary."""
    if not summary:
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    lines = [
        f"heisim report (artifact {report['artifact_version']})",
        f"qubits: {report['qubits']}  steps: {report['steps']}",
        f"residuals: algebra={report['residuals']['algebra']:.3e} "
        f"oracle={report['residuals']['oracle_max']:.3e}",
        "queries:",
    ]
    for i, q in enumerate(report["queries"]):
        parts = [f"  [{i}] {q['kind']}:"]
        for key in sorted(q):
            if key == "kind":
                continue
            parts.append(f"{key}={q[key]}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"
