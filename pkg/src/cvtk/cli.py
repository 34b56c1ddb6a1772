"""Command-line front end: ``cvtk run | check | majorize | wigner``.

``run`` executes a circuit file on the Gaussian pipeline, optionally
cross-checking every comparable metric against the truncated Fock engine, and
emits a deterministic plain-text report (plus CSV Wigner grids under
``--grid``).  Exit codes: 0 success, 2 parse error, 3 physicality violation
(including out-of-range physical parameters), 4 numerical failure.

Every report starts with a header naming the conventions (quadrature scaling,
mode ordering, log base) so numbers are never quoted without their units.
All numerical output is rendered with fixed format strings; a rerun of the
same command produces a byte-identical report.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from . import channels as ch
from . import entanglement as ent
from . import fock
from . import majorization as maj
from . import measurements as meas
from . import phase_space as ps
from . import unitaries as un
from .circuits import (
    CHANNEL_KINDS,
    CircuitParseError,
    CircuitSpec,
    ParseIssue,
    circuit_from_json,
    parse_circuit,
)
from .conventions import NumericalError, PhysicalityError

__all__ = ["RunOptions", "RunReport", "run", "format_report", "emit_wigner_grid", "main", "console_main"]

_CONVENTION_LINE = "convention: quadratures [X,P]=2i, vacuum variance 1, ordering x1 p1 x2 p2 ..."


def _fmt(value: float) -> str:
    return f"{value:.12g}"


@dataclasses.dataclass(frozen=True)
class RunOptions:
    log_base: float = 2.0
    oracle: bool = False
    oracle_cutoff: int = 24
    grid: tuple[float, float, float, float, float] | None = None
    out_dir: str | None = None


@dataclasses.dataclass(frozen=True)
class MeasurementRecord:
    kind: str
    mode: int  # original 0-based mode index
    values: tuple[tuple[str, float], ...]


@dataclasses.dataclass(frozen=True)
class RunReport:
    log_base: float
    n_modes: int
    remaining_modes: tuple[int, ...]
    final_mean: np.ndarray
    final_cov: np.ndarray
    measurements: tuple[MeasurementRecord, ...]
    metrics: tuple[tuple[str, float], ...]
    oracle_cutoff: int | None
    oracle_deltas: tuple[tuple[str, float], ...]


def _build_initial(spec: CircuitSpec) -> ps.GaussianState:
    mean = np.zeros(2 * spec.n_modes)
    cov = np.eye(2 * spec.n_modes)
    tmsv_entries = []
    for ini in spec.initial:
        m = ini.modes[0]
        sl = slice(2 * m, 2 * m + 2)
        if ini.kind == "vacuum":
            pass
        elif ini.kind == "thermal":
            cov[sl, sl] = ps.thermal(ini.params[0]).cov
        elif ini.kind == "coherent":
            mean[sl] = ini.params
        elif ini.kind == "squeezed":
            cov[sl, sl] = ps.squeezed(ini.params[0]).cov
        elif ini.kind == "tmsv":
            tmsv_entries.append(ini)
        else:  # pragma: no cover - parse already rejects unknown kinds
            raise ValueError(f"unknown initial kind {ini.kind!r}")
    state = ps.GaussianState(mean, cov)
    for ini in tmsv_entries:
        op = un.embed(un.two_mode_squeezer(ini.params[0]), spec.n_modes, ini.modes)
        state = un.apply(op, state)
    return state


_UNITARY_BUILDERS = {
    "displacement": lambda x, p: un.displacement(x, p),
    "squeezer": lambda r: un.squeezer(r),
    "rotation": lambda theta: un.rotation(theta),
    "beam_splitter": lambda beta: un.beam_splitter(beta),
    "two_mode_squeezer": lambda r: un.two_mode_squeezer(r),
}

_CHANNEL_BUILDERS = {
    "pure_loss": lambda T: ch.pure_loss(T),
    "amplifier": lambda G: ch.quantum_limited_amp(G),
    "phase_insensitive": lambda tau, mu: ch.phase_insensitive(tau, mu),
}


def _embed_channel(channel: ch.GaussianChannel, n_modes: int, mode: int) -> ch.GaussianChannel:
    K = np.eye(2 * n_modes)
    N = np.zeros((2 * n_modes, 2 * n_modes))
    sl = slice(2 * mode, 2 * mode + 2)
    K[sl, sl] = channel.K
    N[sl, sl] = channel.Nmat
    return ch.GaussianChannel(K, N)


_OP_PARAM_NAMES = {
    "displacement": ("x", "p"),
    "squeezer": ("r",),
    "rotation": ("theta",),
    "beam_splitter": ("beta",),
    "two_mode_squeezer": ("r",),
}


class _FockMirror:
    """Fock-space shadow of the Gaussian pipeline, used for cross-check deltas."""

    def __init__(self, spec: CircuitSpec, cutoff: int):
        self.cutoff = cutoff
        factors = [fock.to_density(fock.number_basis_state(0, cutoff)) for _ in range(spec.n_modes)]
        tmsv_entries = []
        for ini in spec.initial:
            m = ini.modes[0]
            if ini.kind == "thermal":
                factors[m] = fock.thermal(ini.params[0], cutoff, tail_budget=1e-6)
            elif ini.kind == "coherent":
                x, p = ini.params
                factors[m] = fock.to_density(fock.coherent((x + 1j * p) / 2.0, cutoff, tail_budget=1e-6))
            elif ini.kind == "squeezed":
                factors[m] = fock.to_density(fock.squeezed_vacuum(ini.params[0], cutoff, tail_budget=1e-6))
            elif ini.kind == "tmsv":
                tmsv_entries.append(ini)
        state = fock.tensor(*factors) if len(factors) > 1 else factors[0]
        for ini in tmsv_entries:
            state = fock.apply_unitary(state, fock.two_mode_squeeze_matrix(ini.params[0], cutoff), ini.modes)
        self.state = state

    def apply_op(self, kind: str, params: tuple[float, ...], modes: tuple[int, ...]):
        if kind in CHANNEL_KINDS:
            self._apply_channel(kind, params, modes[0])
            return
        u = fock.gaussian_unitary_matrix(kind, self.cutoff, **dict(zip(_OP_PARAM_NAMES[kind], params)))
        self.state = fock.apply_unitary(self.state, u, modes)

    def _loss_kraus(self, T: float) -> list[np.ndarray]:
        u = fock.beam_splitter_matrix(math.acos(math.sqrt(T)), self.cutoff)
        return self._kraus_from(u)

    def _amp_kraus(self, G: float) -> list[np.ndarray]:
        u = fock.two_mode_squeeze_matrix(math.acosh(math.sqrt(G)), self.cutoff)
        return self._kraus_from(u)

    def _kraus_from(self, u: np.ndarray) -> list[np.ndarray]:
        # Kraus elements read off the dilation unitary: E_j = <j|_env U |0>_env.
        d = self.cutoff + 1
        ut = u.reshape(d, d, d, d)
        return [np.ascontiguousarray(ut[:, j, :, 0]) for j in range(d)]

    def _apply_channel(self, kind: str, params: tuple[float, ...], mode: int):
        if kind == "pure_loss":
            kraus = self._loss_kraus(params[0])
        elif kind == "amplifier":
            kraus = self._amp_kraus(params[0])
        else:  # phase_insensitive( tau, mu ) = amplifier after pure loss
            tau, mu = params
            g = (mu + tau + 1.0) / 2.0
            t = tau / g if g > 0 else 1.0
            kraus = None
            self._apply_channel("pure_loss", (t,), mode)
            self._apply_channel("amplifier", (g,), mode)
            return
        dim = self.cutoff + 1
        n = self.state.n_modes
        rho = self.state.matrix.reshape((dim,) * (2 * n))
        out = np.zeros_like(rho)
        for e in kraus:
            term = np.tensordot(e, rho, axes=([1], [mode]))
            term = np.moveaxis(term, 0, mode)
            term = np.tensordot(e.conj(), term, axes=([1], [n + mode]))
            term = np.moveaxis(term, 0, n + mode)
            out += term
        self.state = fock.FockDensity(out.reshape(dim**n, dim**n), self.cutoff, n, self.state.deficit)

    def measure(self, kind: str, params: tuple[float, ...], mode: int) -> dict[str, float]:
        if kind == "onoff":
            result = fock.on_off_probabilities(self.state, mode)
            self.state = result.off_state
            return {"p_off": result.p_off, "p_on": result.p_on}
        phi, x0 = params
        if abs(phi) > 1e-15:
            self.state = fock.apply_unitary(self.state, fock.rotation_matrix(phi, self.cutoff), [mode])
        density, conditional = fock.homodyne_condition(self.state, mode, x0)
        self.state = conditional
        return {"density": density}

    def photon_number(self) -> float:
        a, ad = fock.ladder_ops(self.cutoff)
        num = ad @ a
        total = 0.0
        for m in range(self.state.n_modes):
            reduced = fock.partial_trace_fock(self.state, [m])
            total += fock.expect(reduced, num).real
        return total

    def entropy(self, base: float) -> float:
        return fock.vn_entropy(self.state.normalized(), base)

    def log_negativity(self, base: float) -> float:
        return fock.log_negativity_fock(self.state.normalized(), (0,), base)


def run(spec: CircuitSpec, options: RunOptions = RunOptions()) -> RunReport:
    """Execute a circuit: initial states, ops in order, then measurements in order.

    Measurements are destructive partial measurements; the pipeline follows
    the Gaussian branch (the *off* outcome for on/off detection, the recorded
    x0 outcome for homodyne).  The on-branch signed mixture of the final
    on/off measurement is kept aside for Wigner-grid output.
    """
    state = _build_initial(spec)
    ps.assert_physical(state, context="initial state")
    mirror = _FockMirror(spec, options.oracle_cutoff) if options.oracle else None

    for step, op in enumerate(spec.ops):
        label = f"op {step + 1} ({op.kind} modes {','.join(str(m + 1) for m in op.modes)})"
        try:
            if op.kind in CHANNEL_KINDS:
                channel = _CHANNEL_BUILDERS[op.kind](*op.params)
                state = ch.apply_channel(_embed_channel(channel, state.n_modes, op.modes[0]), state)
            else:
                sym = _UNITARY_BUILDERS[op.kind](*op.params)
                state = un.apply(un.embed(sym, state.n_modes, op.modes), state)
        except (PhysicalityError, NumericalError):
            raise
        except ValueError as exc:
            raise PhysicalityError(f"{label}: {exc}") from exc
        if mirror is not None:
            mirror.apply_op(op.kind, op.params, op.modes)

    records: list[MeasurementRecord] = []
    deltas: list[tuple[str, float]] = []
    measured: list[int] = []
    last_on_mixture: meas.SignedGaussianMixture | None = None
    for m_entry in spec.measurements:
        pos = _pos(spec, m_entry.mode, measured)
        if m_entry.kind == "onoff":
            result = meas.on_off_detect(state, pos)
            state = result.off.conditional
            values = [("p_off", result.off.probability), ("p_on", result.on.probability)]
            last_on_mixture = result.on.conditional
        else:
            phi, x0 = m_entry.params
            density, state = meas.homodyne_quadrature(state, pos, phi, x0)
            values = [("density", density)]
            last_on_mixture = None
        if mirror is not None:
            oracle_values = mirror.measure(m_entry.kind, m_entry.params, pos)
            for name, val in values:
                if name in oracle_values:
                    deltas.append((f"{m_entry.kind}[mode {m_entry.mode + 1}] {name}", abs(val - oracle_values[name])))
        records.append(MeasurementRecord(m_entry.kind, m_entry.mode, tuple(values)))
        measured.append(m_entry.mode)

    remaining = tuple(m for m in range(spec.n_modes) if m not in measured)
    metrics: list[tuple[str, float]] = []
    for name in spec.reports:
        if name in ("mean", "cov"):
            continue  # always present in the report body
        if name == "photon_number":
            value = ps.mean_photon_number(state)
            if mirror is not None:
                deltas.append(("photon_number", abs(value - mirror.photon_number())))
        elif name == "entropy":
            value = ent.von_neumann_entropy(state, options.log_base)
            if mirror is not None:
                deltas.append(("entropy", abs(value - mirror.entropy(options.log_base))))
        elif name == "symplectic_spectrum":
            for j, nu in enumerate(ps.symplectic_spectrum(state.cov)):
                metrics.append((f"symplectic_spectrum[{j}]", float(nu)))
            continue
        elif name == "log_negativity":
            if state.n_modes < 2:
                raise PhysicalityError("log_negativity requires at least two remaining modes")
            value = ent.log_negativity(state, (0,), options.log_base)
            if mirror is not None:
                deltas.append(("log_negativity", abs(value - mirror.log_negativity(options.log_base))))
        elif name == "duan_witness":
            if state.n_modes != 2:
                raise PhysicalityError("duan_witness requires exactly two remaining modes")
            value = ent.duan_witness_min(ent.standard_form_reduce(state))
        else:  # pragma: no cover - parse already rejects unknown reports
            raise ValueError(f"unknown report {name!r}")
        metrics.append((name, float(value)))

    report = RunReport(
        log_base=options.log_base,
        n_modes=spec.n_modes,
        remaining_modes=remaining,
        final_mean=state.mean,
        final_cov=state.cov,
        measurements=tuple(records),
        metrics=tuple(metrics),
        oracle_cutoff=options.oracle_cutoff if options.oracle else None,
        oracle_deltas=tuple(deltas),
    )
    if options.grid is not None:
        _emit_run_grids(state, last_on_mixture, options)
    return report


def _pos(spec: CircuitSpec, original_mode: int, measured: list[int]) -> int:
    """Current index of an original mode after earlier destructive measurements."""
    if original_mode in measured:
        raise PhysicalityError(f"mode {original_mode + 1} was already measured")
    return original_mode - sum(1 for m in measured if m < original_mode)


def _emit_run_grids(state: ps.GaussianState, on_mixture, options: RunOptions):
    out_dir = Path(options.out_dir or ".")
    if state.n_modes == 1:
        emit_wigner_grid(state, options.grid, out_dir / "wigner.csv")
    if on_mixture is not None and on_mixture.n_modes == 1:
        emit_wigner_grid(on_mixture, options.grid, out_dir / "wigner_on.csv")


def emit_wigner_grid(state_or_mixture, region, path) -> Path:
    """Write a CSV grid "x,p,w" over the region (xmin, xmax, pmin, pmax, step).

    Rows are emitted row-major (x outer loop, p inner loop) with 17
    significant digits, so reruns are byte-identical.
    """
    xmin, xmax, pmin, pmax, step = region
    if step <= 0 or xmax < xmin or pmax < pmin:
        raise ValueError(f"bad grid region {region}")
    xs = np.arange(xmin, xmax + step / 2, step)
    prs = np.arange(pmin, pmax + step / 2, step)
    if hasattr(state_or_mixture, "wigner"):
        evaluate = state_or_mixture.wigner
    elif isinstance(state_or_mixture, ps.GaussianState):
        if state_or_mixture.n_modes != 1:
            raise ValueError("Wigner grids are emitted for single-mode states only")
        evaluate = lambda pts: ps.wigner_fn(state_or_mixture, pts)  # noqa: E731
    else:
        evaluate = state_or_mixture  # callable(points) -> values
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8") as fh:
            fh.write("x,p,w\n")
            for x in xs:
                pts = np.column_stack([np.full_like(prs, x), prs])
                vals = np.asarray(evaluate(pts), dtype=float)
                for p, w in zip(prs, vals):
                    fh.write(f"{x:.17g},{p:.17g},{w:.17g}\n")
    except OSError as exc:
        raise OSError(f"cannot write Wigner grid to {path}: {exc}") from exc
    return path


def format_report(report: RunReport) -> str:
    """Stable plain-text rendering; field order is fixed and documented here.

    Order: header (tool, convention, log base, mode counts), measurement
    records in circuit order, final mean and covariance, requested metrics in
    request order, then oracle deltas when the oracle ran.
    """
    base_name = "2" if abs(report.log_base - 2.0) < 1e-12 else "e"
    lines = [
        "cvtk run report",
        _CONVENTION_LINE,
        f"log base: {base_name}",
        f"modes: {report.n_modes}",
        f"remaining modes: {' '.join(str(m + 1) for m in report.remaining_modes)}",
    ]
    if report.measurements:
        lines.append("-- measurements --")
        for rec in report.measurements:
            vals = ", ".join(f"{name}={_fmt(v)}" for name, v in rec.values)
            lines.append(f"{rec.kind} mode={rec.mode + 1}: {vals}")
    lines.append("-- final state --")
    lines.append("mean: " + " ".join(_fmt(v) for v in report.final_mean))
    lines.append("cov:")
    for row in report.final_cov:
        lines.append("  " + " ".join(_fmt(v) for v in row))
    if report.metrics:
        lines.append("-- metrics --")
        for name, value in report.metrics:
            suffix = f" (base {base_name})" if name in ("entropy", "log_negativity") else ""
            lines.append(f"{name}{suffix}: {_fmt(value)}")
    if report.oracle_cutoff is not None:
        lines.append("-- oracle cross-check --")
        lines.append(f"oracle cutoff: {report.oracle_cutoff}")
        for name, delta in report.oracle_deltas:
            lines.append(f"|gaussian - fock| {name}: {delta:.3e}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Entry points


def _parse_grid(text: str) -> tuple[float, float, float, float, float]:
    parts = text.split(":")
    if len(parts) != 5:
        raise argparse.ArgumentTypeError("grid must be xmin:xmax:pmin:pmax:step")
    try:
        return tuple(float(p) for p in parts)  # type: ignore[return-value]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid value: {exc}") from None


def _load_spec(path: str, as_json: bool) -> CircuitSpec:
    text = Path(path).read_text(encoding="utf-8")
    return circuit_from_json(text) if as_json else parse_circuit(text)


def _state_from_cli_spec(text: str):
    """State specs for ``cvtk wigner``: vacuum | thermal:N | coherent:X,P | squeezed:R | fock:N | tmsv_on:R."""
    kind, _, arg = text.partition(":")
    if kind == "vacuum":
        return ps.vacuum(1)
    if kind == "thermal":
        return ps.thermal(float(arg))
    if kind == "coherent":
        x, p = (float(v) for v in arg.split(","))
        return ps.coherent(x, p)
    if kind == "squeezed":
        return ps.squeezed(float(arg))
    if kind == "tmsv_on":
        result = meas.on_off_detect(ps.tmsv(float(arg)), 1)
        if result.on.conditional is None:
            raise PhysicalityError("on outcome has zero probability")
        return result.on.conditional
    if kind == "fock":
        n = int(arg)
        return lambda pts: fock.number_wigner(n, pts[..., 0], pts[..., 1])
    raise ValueError(f"unknown state spec {text!r}")


def _cmd_run(args) -> int:
    spec = _load_spec(args.file, args.json)
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
    options = RunOptions(
        log_base=2.0 if args.log_base == "2" else math.e,
        oracle=args.oracle,
        oracle_cutoff=args.oracle_cutoff,
        grid=args.grid,
        out_dir=args.out,
    )
    report = run(spec, options)
    text = format_report(report)
    sys.stdout.write(text)
    if args.out:
        (Path(args.out) / "report.txt").write_text(text, encoding="utf-8")
    return 0


def _cmd_check(args) -> int:
    spec = _load_spec(args.file, args.json)
    state = _build_initial(spec)
    report = ps.assert_physical(state, context="initial state")
    for op in spec.ops:
        if op.kind in CHANNEL_KINDS:
            _CHANNEL_BUILDERS[op.kind](*op.params)
        else:
            _UNITARY_BUILDERS[op.kind](*op.params)
    sys.stdout.write(
        f"OK: {spec.n_modes} mode(s), {len(spec.ops)} op(s), {len(spec.measurements)} measurement(s); "
        f"initial min eig(V+iOmega) = {report.min_eigenvalue:.3e}\n"
    )
    return 0


def _read_vector(path: str) -> np.ndarray:
    values = []
    for token in Path(path).read_text(encoding="utf-8").replace(",", " ").split():
        values.append(float(token))
    return np.asarray(values)


def _cmd_majorize(args) -> int:
    try:
        p = maj.as_prob_vector(_read_vector(args.p), tol=1e-8)
        q = maj.as_prob_vector(_read_vector(args.q), tol=1e-8)
    except ValueError as exc:
        raise CircuitParseError([ParseIssue(0, 1, str(exc))]) from exc
    pq = maj.majorizes(p, q)
    qp = maj.majorizes(q, p)
    sys.stdout.write(f"p majorizes q: {str(pq).lower()}\n")
    sys.stdout.write(f"q majorizes p: {str(qp).lower()}\n")
    sys.stdout.write(f"H(p) = {_fmt(maj.shannon_entropy(p))} bits, H(q) = {_fmt(maj.shannon_entropy(q))} bits\n")
    return 0


def _cmd_wigner(args) -> int:
    state = _state_from_cli_spec(args.state)
    path = emit_wigner_grid(state, args.grid, args.out)
    sys.stdout.write(f"wrote {path}\n")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="cvtk", description="Gaussian quantum-information toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a circuit file and print the report")
    run_p.add_argument("file")
    run_p.add_argument("--json", action="store_true", help="input file is the JSON encoding of the schema")
    run_p.add_argument("--oracle", action="store_true", help="cross-check against the Fock engine")
    run_p.add_argument("--oracle-cutoff", type=int, default=24)
    run_p.add_argument("--log-base", choices=("2", "e"), default="2")
    run_p.add_argument("--grid", type=_parse_grid, default=None, metavar="XMIN:XMAX:PMIN:PMAX:STEP")
    run_p.add_argument("--out", default=None, help="directory for report.txt and grid CSVs")
    run_p.set_defaults(func=_cmd_run)

    check_p = sub.add_parser("check", help="parse a circuit file and check physicality only")
    check_p.add_argument("file")
    check_p.add_argument("--json", action="store_true")
    check_p.set_defaults(func=_cmd_check)

    maj_p = sub.add_parser("majorize", help="compare two probability vectors from CSV files")
    maj_p.add_argument("p")
    maj_p.add_argument("q")
    maj_p.set_defaults(func=_cmd_majorize)

    wig_p = sub.add_parser("wigner", help="write a Wigner-function grid for a state spec")
    wig_p.add_argument("--state", required=True)
    wig_p.add_argument("--grid", type=_parse_grid, default=(-6.0, 6.0, -6.0, 6.0, 0.1), metavar="XMIN:XMAX:PMIN:PMAX:STEP")
    wig_p.add_argument("--out", default="wigner.csv")
    wig_p.set_defaults(func=_cmd_wigner)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CircuitParseError as exc:
        for issue in exc.issues:
            sys.stderr.write(f"parse error: {issue}\n")
        if exc.__cause__ is not None:
            sys.stderr.write(f"parse error: {exc.__cause__}\n")
        return 2
    except PhysicalityError as exc:
        sys.stderr.write(f"physicality violation: {exc}\n")
        return 3
    except ValueError as exc:
        sys.stderr.write(f"physicality violation: {exc}\n")
        return 3
    except NumericalError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 4
    except OSError as exc:
        sys.stderr.write(f"io error: {exc}\n")
        return 1


def console_main():  # pragma: no cover - thin wrapper
    raise SystemExit(main())
