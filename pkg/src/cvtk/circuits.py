"""Circuit description files: parsing, validation, and rendering.

The text format is line oriented; ``#`` starts a comment, blank lines are
ignored, and mode indices are 1-based in files (0-based everywhere in the
Python API).  Grammar:

    modes: <int>
    initial: <kind> [name=value ...] modes=<i[,j]>
    op: <kind> [name=value ...] modes=<i[,j]>
    measure: <kind> [name=value ...] mode=<i>
    report: <name> [<name> ...]

Initial-state kinds: vacuum, thermal(nbar), coherent(x, p), squeezed(r),
tmsv(r, two modes).  Operation kinds: displacement(x, p), squeezer(r),
rotation(theta), beam_splitter(beta), two_mode_squeezer(r) [unitaries] and
pure_loss(T), amplifier(G), phase_insensitive(tau, mu) [channels].
Measurement kinds: homodyne(phi, x0), onoff; at most one measurement per
mode.  An equivalent JSON encoding of the same schema is accepted by the CLI
under ``--json``.

Parsing reports *all* problems at once, each with its line and column.
"""

from __future__ import annotations

import dataclasses
import json

__all__ = [
    "CircuitSpec",
    "InitialState",
    "CircuitOp",
    "Measurement",
    "ParseIssue",
    "CircuitParseError",
    "parse_circuit",
    "render_circuit",
    "circuit_from_json",
    "circuit_to_json",
    "INITIAL_KINDS",
    "OP_KINDS",
    "CHANNEL_KINDS",
    "MEASURE_KINDS",
    "REPORT_KINDS",
]

# kind -> (parameter names, mode arity)
INITIAL_KINDS: dict[str, tuple[tuple[str, ...], int]] = {
    "vacuum": ((), 1),
    "thermal": (("nbar",), 1),
    "coherent": (("x", "p"), 1),
    "squeezed": (("r",), 1),
    "tmsv": (("r",), 2),
}

UNITARY_KINDS: dict[str, tuple[tuple[str, ...], int]] = {
    "displacement": (("x", "p"), 1),
    "squeezer": (("r",), 1),
    "rotation": (("theta",), 1),
    "beam_splitter": (("beta",), 2),
    "two_mode_squeezer": (("r",), 2),
}

CHANNEL_KINDS: dict[str, tuple[tuple[str, ...], int]] = {
    "pure_loss": (("T",), 1),
    "amplifier": (("G",), 1),
    "phase_insensitive": (("tau", "mu"), 1),
}

OP_KINDS = UNITARY_KINDS | CHANNEL_KINDS

MEASURE_KINDS: dict[str, tuple[tuple[str, ...], int]] = {
    "homodyne": (("phi", "x0"), 1),
    "onoff": ((), 1),
}

REPORT_KINDS = (
    "mean",
    "cov",
    "photon_number",
    "entropy",
    "symplectic_spectrum",
    "log_negativity",
    "duan_witness",
)


@dataclasses.dataclass(frozen=True)
class InitialState:
    kind: str
    params: tuple[float, ...]
    modes: tuple[int, ...]


@dataclasses.dataclass(frozen=True)
class CircuitOp:
    kind: str
    params: tuple[float, ...]
    modes: tuple[int, ...]

    @property
    def is_channel(self) -> bool:
        return self.kind in CHANNEL_KINDS


@dataclasses.dataclass(frozen=True)
class Measurement:
    kind: str
    params: tuple[float, ...]
    mode: int


@dataclasses.dataclass(frozen=True)
class CircuitSpec:
    n_modes: int
    initial: tuple[InitialState, ...]
    ops: tuple[CircuitOp, ...]
    measurements: tuple[Measurement, ...]
    reports: tuple[str, ...]


@dataclasses.dataclass(frozen=True)
class ParseIssue:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, col {self.column}: {self.message}"


class CircuitParseError(ValueError):
    """Carries every problem found in a circuit file."""

    def __init__(self, issues: list[ParseIssue]):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


class _Collector:
    def __init__(self):
        self.issues: list[ParseIssue] = []

    def add(self, line: int, column: int, message: str):
        self.issues.append(ParseIssue(line, column, message))


def _parse_fields(tokens, line_no, col_of, collector):
    """Split name=value tokens into (params dict, modes list or None)."""
    params: dict[str, float] = {}
    modes = None
    for tok in tokens:
        col = col_of(tok)
        if "=" not in tok:
            collector.add(line_no, col, f"expected name=value, got {tok!r}")
            continue
        name, _, value = tok.partition("=")
        if name in ("modes", "mode"):
            try:
                modes = tuple(int(v) for v in value.split(","))
            except ValueError:
                collector.add(line_no, col, f"bad mode list {value!r} in field {name!r}")
            continue
        try:
            params[name] = float(value)
        except ValueError:
            collector.add(line_no, col, f"bad numeric value {value!r} in field {name!r}")
    return params, modes


def _check_entry(kind, params, modes, table, line_no, col, collector, n_modes, what):
    """Validate kind, parameter names/arity, and mode indices; return normalized tuple fields."""
    if kind not in table:
        collector.add(line_no, col, f"unknown {what} name {kind!r}; known: {', '.join(sorted(table))}")
        return None
    names, arity = table[kind]
    missing = [p for p in names if p not in params]
    extra = [p for p in params if p not in names]
    if missing:
        collector.add(line_no, col, f"{what} {kind!r} missing parameter(s): {', '.join(missing)}")
    if extra:
        collector.add(line_no, col, f"{what} {kind!r} got unknown parameter(s): {', '.join(extra)}")
    if modes is None:
        collector.add(line_no, col, f"{what} {kind!r} needs a modes= field")
        return None
    if len(modes) != arity:
        collector.add(line_no, col, f"{what} {kind!r} expects {arity} mode(s), got {len(modes)}")
        return None
    if len(set(modes)) != len(modes):
        collector.add(line_no, col, f"{what} {kind!r} lists a mode twice")
        return None
    for m in modes:
        if not 1 <= m <= n_modes:
            collector.add(line_no, col, f"mode {m} out of range 1..{n_modes}")
            return None
    if missing or extra:
        return None
    return tuple(float(params[p]) for p in names), tuple(m - 1 for m in modes)


def parse_circuit(text: str) -> CircuitSpec:
    """Parse the text format; raises :class:`CircuitParseError` listing every issue."""
    collector = _Collector()
    n_modes = None
    initial: list[InitialState] = []
    ops: list[CircuitOp] = []
    measurements: list[Measurement] = []
    reports: list[str] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue

        def col_of(token, _line=raw):
            at = _line.find(token)
            return at + 1 if at >= 0 else 1

        if ":" not in line:
            collector.add(line_no, 1, f"expected 'key: value', got {line.strip()!r}")
            continue
        key, _, rest = line.partition(":")
        key = key.strip()
        tokens = rest.split()

        if key == "modes":
            if n_modes is not None:
                collector.add(line_no, 1, "duplicate modes: line")
                continue
            try:
                n_modes = int(rest.strip())
                if n_modes < 1:
                    collector.add(line_no, col_of(rest.strip()), "mode count must be >= 1")
                    n_modes = None
            except ValueError:
                collector.add(line_no, col_of(rest.strip() or ":"), f"bad mode count {rest.strip()!r}")
            continue

        if key in ("initial", "op", "measure"):
            if n_modes is None:
                collector.add(line_no, 1, f"'{key}:' before 'modes:'")
                continue
            if not tokens:
                collector.add(line_no, 1, f"'{key}:' line is empty")
                continue
            kind = tokens[0]
            params, modes = _parse_fields(tokens[1:], line_no, col_of, collector)
            table = {"initial": INITIAL_KINDS, "op": OP_KINDS, "measure": MEASURE_KINDS}[key]
            checked = _check_entry(kind, params, modes, table, line_no, col_of(kind), collector, n_modes, key)
            if checked is None:
                continue
            values, zero_based = checked
            if key == "initial":
                initial.append(InitialState(kind, values, zero_based))
            elif key == "op":
                ops.append(CircuitOp(kind, values, zero_based))
            else:
                measurements.append(Measurement(kind, values, zero_based[0]))
            continue

        if key == "report":
            for tok in tokens:
                if tok not in REPORT_KINDS:
                    collector.add(line_no, col_of(tok), f"unknown report {tok!r}; known: {', '.join(REPORT_KINDS)}")
                else:
                    reports.append(tok)
            continue

        collector.add(line_no, 1, f"unknown key {key!r}")

    if n_modes is None:
        collector.add(0, 1, "missing 'modes:' line")
    else:
        covered = set()
        for ini in initial:
            overlap = covered & set(ini.modes)
            if overlap:
                collector.add(0, 1, f"mode {min(overlap) + 1} initialized twice")
            covered |= set(ini.modes)
        measured = [m.mode for m in measurements]
        for m in set(measured):
            if measured.count(m) > 1:
                collector.add(0, 1, f"mode {m + 1} measured more than once")

    if collector.issues:
        raise CircuitParseError(collector.issues)
    # Unmentioned modes start in vacuum.
    covered = {m for ini in initial for m in ini.modes}
    for m in range(n_modes):
        if m not in covered:
            initial.append(InitialState("vacuum", (), (m,)))
    initial.sort(key=lambda ini: ini.modes[0])
    return CircuitSpec(n_modes, tuple(initial), tuple(ops), tuple(measurements), tuple(reports))


def _fields(kind: str, params: tuple[float, ...], modes: tuple[int, ...], table) -> str:
    names = table[kind][0]
    parts = [kind]
    parts += [f"{n}={v!r}" for n, v in zip(names, params)]
    key = "mode" if table is MEASURE_KINDS else "modes"
    parts.append(f"{key}={','.join(str(m + 1) for m in modes)}")
    return " ".join(parts)


def render_circuit(spec: CircuitSpec) -> str:
    """Canonical text rendering; parse(render(spec)) == spec."""
    lines = [f"modes: {spec.n_modes}"]
    lines += [f"initial: {_fields(i.kind, i.params, i.modes, INITIAL_KINDS)}" for i in spec.initial]
    lines += [f"op: {_fields(o.kind, o.params, o.modes, OP_KINDS)}" for o in spec.ops]
    lines += [f"measure: {_fields(m.kind, m.params, (m.mode,), MEASURE_KINDS)}" for m in spec.measurements]
    if spec.reports:
        lines.append(f"report: {' '.join(spec.reports)}")
    return "\n".join(lines) + "\n"


def circuit_to_json(spec: CircuitSpec) -> str:
    """JSON encoding of the same schema (1-based modes, like the text format)."""
    doc = {
        "modes": spec.n_modes,
        "initial": [
            {"kind": i.kind, "params": list(i.params), "modes": [m + 1 for m in i.modes]} for i in spec.initial
        ],
        "ops": [{"kind": o.kind, "params": list(o.params), "modes": [m + 1 for m in o.modes]} for o in spec.ops],
        "measurements": [{"kind": m.kind, "params": list(m.params), "mode": m.mode + 1} for m in spec.measurements],
        "reports": list(spec.reports),
    }
    return json.dumps(doc, indent=2) + "\n"


def circuit_from_json(text: str) -> CircuitSpec:
    """Parse the JSON encoding by rendering it through the text grammar's validator."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitParseError([ParseIssue(exc.lineno, exc.colno, f"invalid JSON: {exc.msg}")]) from None
    lines = [f"modes: {doc.get('modes', 0)}"]
    try:
        for entry in doc.get("initial", []):
            plist = " ".join(
                f"{n}={v}" for n, v in zip(INITIAL_KINDS.get(entry["kind"], ((),))[0], entry.get("params", []))
            )
            lines.append(f"initial: {entry['kind']} {plist} modes={','.join(str(m) for m in entry['modes'])}")
        for entry in doc.get("ops", []):
            plist = " ".join(f"{n}={v}" for n, v in zip(OP_KINDS.get(entry["kind"], ((),))[0], entry.get("params", [])))
            lines.append(f"op: {entry['kind']} {plist} modes={','.join(str(m) for m in entry['modes'])}")
        for entry in doc.get("measurements", []):
            plist = " ".join(
                f"{n}={v}" for n, v in zip(MEASURE_KINDS.get(entry["kind"], ((),))[0], entry.get("params", []))
            )
            lines.append(f"measure: {entry['kind']} {plist} mode={entry['mode']}")
    except (KeyError, TypeError) as exc:
        raise CircuitParseError([ParseIssue(0, 1, f"malformed JSON circuit: {exc!r}")]) from None
    if doc.get("reports"):
        lines.append("report: " + " ".join(doc["reports"]))
    return parse_circuit("\n".join(lines))
