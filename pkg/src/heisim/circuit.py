"""Circuit document parsing and validation.

The on-disk format is YAML: a versioned document with qubit count, one gate
per time step, record markers, and a list of queries. See README for the
schema and shipped examples under circuits/.
"""

from __future__ import annotations

from dataclasses import dataclass

import yaml

from .errors import ParseError, ValidationError
from .linalg import COMPONENTS
from .network import Gate

FORMAT_VERSION = 1

QUERY_KINDS = ("expectation", "sharpness", "entanglement", "foliate",
               "autonomy", "classical")


@dataclass(frozen=True)
class RecordRef:
    """Reference to a snapshot: (qubit, component, step)."""

    qubit: int
    component: str
    step: int

    @property
    def key(self) -> tuple:
        return (self.qubit, self.component, self.step)


@dataclass(frozen=True)
class CircuitFile:
    qubits: int
    gates: tuple[Gate, ...]
    records: tuple[RecordRef, ...]
    queries: tuple[dict, ...]
    format_version: int = FORMAT_VERSION


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise ValidationError(f"{context}: missing field {key!r}")
    return mapping[key]


def _int_field(mapping: dict, key: str, context: str) -> int:
    value = _require(mapping, key, context)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValidationError(f"{context}: field {key!r} must be an integer")
    return value


def _parse_gate(entry: dict, index: int, n: int) -> tuple[int, Gate]:
    context = f"gates[{index}]"
    if not isinstance(entry, dict):
        raise ValidationError(f"{context}: expected a mapping")
    step = _int_field(entry, "step", context)
    kind = str(_require(entry, "kind", context)).upper()
    operands = entry.get("operands", [])
    params = entry.get("params", [])
    if not isinstance(operands, list) or not all(
            isinstance(q, int) and not isinstance(q, bool) for q in operands):
        raise ValidationError(f"{context}: operands must be a list of integers")
    if not isinstance(params, list) or not all(
            isinstance(p, (int, float)) and not isinstance(p, bool)
            for p in params):
        raise ValidationError(f"{context}: params must be a list of numbers")
    gate = Gate(kind, tuple(operands), tuple(float(p) for p in params))
    try:
        gate.validate(n)
    except ValidationError as exc:
        raise ValidationError(f"{context}: {exc}") from None
    return step, gate


def _parse_record_ref(entry: dict, context: str, n: int,
                      max_step: int) -> RecordRef:
    if not isinstance(entry, dict):
        raise ValidationError(f"{context}: expected a mapping")
    qubit = _int_field(entry, "qubit", context)
    component = str(_require(entry, "component", context))
    step = _int_field(entry, "step", context)
    if not 1 <= qubit <= n:
        raise ValidationError(f"{context}: qubit {qubit} out of range 1..{n}")
    if component not in COMPONENTS:
        raise ValidationError(f"{context}: component must be one of x, y, z")
    if not 0 <= step <= max_step:
        raise ValidationError(f"{context}: step {step} out of range 0..{max_step}")
    return RecordRef(qubit, component, step)


def _validate_query(query: dict, index: int, n: int, max_step: int,
                    records: tuple[RecordRef, ...]) -> dict:
    context = f"queries[{index}]"
    if not isinstance(query, dict):
        raise ValidationError(f"{context}: expected a mapping")
    kind = str(_require(query, "kind", context))
    if kind not in QUERY_KINDS:
        raise ValidationError(f"{context}: unknown query kind {kind!r}")
    recorded_keys = {r.key for r in records}

    def check_ref(entry, label):
        ref = _parse_record_ref(entry, f"{context}.{label}", n, max_step)
        if ref.key not in recorded_keys:
            raise ValidationError(
                f"{context}.{label}: no matching record marker for {ref.key}")
        return ref

    if kind in ("expectation", "sharpness"):
        qubit = _int_field(query, "qubit", context)
        component = str(_require(query, "component", context))
        if not 1 <= qubit <= n or component not in COMPONENTS:
            raise ValidationError(f"{context}: bad qubit/component")
        if "frame" in query:
            frame = query["frame"]
            check_ref(frame, "frame")
            label = _int_field(frame, "label", f"{context}.frame")
            if label not in (1, -1):
                raise ValidationError(f"{context}.frame: label must be +-1")
    elif kind == "entanglement":
        qubits = _require(query, "qubits", context)
        if (not isinstance(qubits, list) or len(qubits) != 2
                or qubits[0] == qubits[1]
                or not all(isinstance(q, int) and 1 <= q <= n for q in qubits)):
            raise ValidationError(f"{context}: qubits must be two distinct indices")
    elif kind == "foliate":
        qubits = _require(query, "qubits", context)
        if not isinstance(qubits, list) or not all(
                isinstance(q, int) and 1 <= q <= n for q in qubits):
            raise ValidationError(f"{context}: bad qubits list")
        check_ref(_require(query, "record", context), "record")
    elif kind == "autonomy":
        step, _gate = _parse_gate({"step": 0, **_require(query, "gate", context)},
                                  index, n)
        refs = _require(query, "records", context)
        if not isinstance(refs, list) or not refs:
            raise ValidationError(f"{context}: records must be a nonempty list")
        for ref in refs:
            check_ref(ref, "records")
    elif kind == "classical":
        for key in ("register", "reference"):
            qubits = _require(query, key, context)
            if not isinstance(qubits, list) or not qubits or not all(
                    isinstance(q, int) and 1 <= q <= n for q in qubits):
                raise ValidationError(f"{context}: bad {key} qubit list")
    return query


def parse_circuit(text: str) -> CircuitFile:
    """Parse and validate a YAML circuit document."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}" if mark else ""
        raise ParseError(f"invalid YAML{where}: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("circuit document must be a mapping")
    version = _int_field(doc, "format_version", "document")
    if version != FORMAT_VERSION:
        raise ValidationError(f"unsupported format_version {version}")
    n = _int_field(doc, "qubits", "document")
    if n < 1:
        raise ValidationError("qubits must be >= 1")

    raw_gates = doc.get("gates", [])
    if not isinstance(raw_gates, list):
        raise ValidationError("gates must be a list")
    stepped = [_parse_gate(entry, i, n) for i, entry in enumerate(raw_gates)]
    stepped.sort(key=lambda sg: sg[0])
    for i, (step, _) in enumerate(stepped):
        if step != i:
            raise ValidationError(
                f"gate steps must be consecutive integers starting at 0; "
                f"expected {i}, got {step}")
    gates = tuple(g for _, g in stepped)
    max_step = len(gates)

    raw_records = doc.get("records", [])
    if not isinstance(raw_records, list):
        raise ValidationError("records must be a list")
    records = tuple(_parse_record_ref(entry, f"records[{i}]", n, max_step)
                    for i, entry in enumerate(raw_records))

    raw_queries = doc.get("queries", [])
    if not isinstance(raw_queries, list):
        raise ValidationError("queries must be a list")
    queries = tuple(_validate_query(q, i, n, max_step, records)
                    for i, q in enumerate(raw_queries))
    return CircuitFile(n, gates, records, queries, version)


def load_circuit(path) -> CircuitFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_circuit(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
