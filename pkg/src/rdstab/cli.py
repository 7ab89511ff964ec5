"""``rdstab`` command-line interface.

    rdstab analyze  --config FILE [--length L] [--modes N] [--json]
    rdstab bounds   --config FILE --u0 MIN:MAX --v0 MIN:MAX [--json]
    rdstab simulate --config FILE [--mode ode|pde] [--L L] [--n N] [--tend T]
                    [--dt-out S] --out DIR [--svg]
    rdstab sweep    --config FILE --axis NAME --values V1,V2,... [--out DIR]

Exit codes: 0 success, 1 configuration error, 2 precondition failure,
3 root or truncation error, 4 blow-up during simulation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .analysis import Interval, SpectrumConfig, check_global_ode, classify_pde_stability, find_equilibrium
from .bounds import check_invariant_rectangle, compute_bounds, decompose
from .config import PRESET_KEYS, RunConfig, load_run_config
from .errors import (BlowupError, ConfigError, DomainError, NonFiniteError,
                     RDStabError, RootError, StepError, SublinearityError, TruncationError)
from .lyapunov import attach_lyapunov, verdict_global
from .model import check_hypotheses
from .sim import Constant, Grid1D, Scenario, SinePerturbed, integrate_ode, integrate_pde_1d, sweep

EXIT_OK, EXIT_CONFIG, EXIT_PRECONDITION, EXIT_ROOT, EXIT_BLOWUP = 0, 1, 2, 3, 4


def exit_code(exc: Exception) -> int:
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, (RootError, TruncationError)):
        return EXIT_ROOT
    if isinstance(exc, (BlowupError, StepError)):
        return EXIT_BLOWUP
    return EXIT_PRECONDITION


def _err(exc: Exception) -> dict:
    return {"error": type(exc).__name__, "message": str(exc)}


def initial_ranges(cfg: RunConfig) -> tuple[tuple[float, float], tuple[float, float]]:
    u0, v0 = cfg.start()
    amp = cfg.scenario["amp"] if cfg.scenario["init"] == "sine" else 0.0
    return (u0 - amp, u0 + amp), (v0 - amp, v0 + amp)


def analyze_document(cfg: RunConfig, length: float | None = None, modes: int | None = None
                     ) -> tuple[dict, int]:
    """Aggregate hypothesis, equilibrium, mode, bounds and global results."""
    spec = cfg.model
    length = cfg.scenario["L"] if length is None else length
    modes = cfg.scenario["modes"] if modes is None else modes
    doc = {"model": dict(preset=spec.name, params=dict(spec.params), delta=spec.delta,
                         d1=spec.d1, d2=spec.d2, sigma=spec.sigma, **{"lambda": spec.lam}),
           "spectrum": dict(length=length, max_modes=modes)}
    code = EXIT_OK
    try:
        eq = find_equilibrium(spec)
    except RDStabError as exc:
        doc["equilibrium"] = _err(exc)
        return doc, exit_code(exc)
    doc["equilibrium"] = eq.as_dict()
    hyp = check_hypotheses(spec, eq.alpha)
    doc["hypotheses"] = hyp.as_dict()
    doc["global_ode"] = check_global_ode(spec)
    doc["global_verdict"] = verdict_global(spec, eq, hyp).value
    doc["invariant_rectangle"] = bool(check_invariant_rectangle(spec))
    try:
        doc["turing"] = classify_pde_stability(spec, eq, SpectrumConfig(Interval(length), modes)).as_dict()
    except RDStabError as exc:
        doc["turing"] = _err(exc)
        code = exit_code(exc)
    try:
        ur, vr = initial_ranges(cfg)
        doc["bounds"] = compute_bounds(spec, decompose(spec, hi=ur[1]), ur, vr).as_dict()
    except (DomainError, SublinearityError, NonFiniteError) as exc:
        doc["bounds"] = _err(exc)
    return doc, code


def cmd_analyze(args) -> int:
    cfg = load_run_config(args.config)
    doc, code = analyze_document(cfg, args.length, args.modes)
    text = io.dumps(doc)
    if args.json or not args.out:
        print(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "analysis.json").write_text(text + "\n", encoding="utf-8")
    if not args.json:
        eq = doc["equilibrium"]
        if "alpha" in eq:
            print(f"# equilibrium ({eq['u_star']:.6g}, {eq['v_star']:.6g}); "
                  f"global verdict {doc['global_verdict']}", file=sys.stderr)
    return code


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(s) for s in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX, got {text!r}") from None
    return lo, hi


def cmd_bounds(args) -> int:
    cfg = load_run_config(args.config)
    spec = cfg.model
    ur, vr = initial_ranges(cfg)
    ur = args.u0 or ur
    vr = args.v0 or vr
    rep = compute_bounds(spec, decompose(spec, hi=ur[1]), ur, vr)
    text = io.dumps(rep.as_dict())
    print(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "bounds.json").write_text(text + "\n", encoding="utf-8")
    return EXIT_OK


def run_simulation(cfg: RunConfig, out: Path, svg: bool = False) -> dict:
    """Run the configured simulation and write trajectory, diagnostics and
    manifest into ``out``. Returns the manifest document."""
    spec = cfg.model
    sc = cfg.scenario
    if not sc["t_end"] > 0:
        raise ConfigError("t_end must be positive")
    if not sc["dt_out"] > 0:
        raise ConfigError("dt_out must be positive")
    eq = find_equilibrium(spec)
    u0, v0 = cfg.start()
    if sc["mode"] == "ode":
        traj = integrate_ode(spec, (u0, v0), sc["t_end"], sc["dt_out"], eq=eq)
    else:
        grid = Grid1D(sc["L"], sc["n"])
        init = SinePerturbed(u0, v0, sc["amp"], sc["wavelen"]) if sc["init"] == "sine" else Constant(u0, v0)
        traj = integrate_pde_1d(spec, grid, init, sc["t_end"], sc["dt_out"], eq)
    try:
        traj = attach_lyapunov(spec, eq, traj)
    except DomainError:
        pass  # fields left (0, delta): V undefined, column stays empty
    out.mkdir(parents=True, exist_ok=True)
    files = ["trajectory.csv", "diagnostics.csv"]
    io.write_trajectory(out / "trajectory.csv", traj)
    io.write_diagnostics(out / "diagnostics.csv", traj)
    if svg:
        if traj.u.ndim == 1:
            series = [("u", traj.times, traj.u, "#1f77b4"), ("v", traj.times, traj.v, "#d62728")]
            svg_text = io.svg_lines(series, f"{spec.name}: kinetics", "t")
        else:
            x = traj.grid.nodes
            series = [("u", x, traj.u[-1], "#1f77b4"), ("v", x, traj.v[-1], "#d62728")]
            svg_text = io.svg_lines(series, f"{spec.name}: profiles at t={traj.times[-1]:g}", "x")
        (out / "plot.svg").write_text(svg_text, encoding="utf-8")
        files.append("plot.svg")
    hyp = check_hypotheses(spec, eq.alpha)
    verdicts = dict(global_verdict=verdict_global(spec, eq, hyp).value,
                    final_dist_sup=float(traj.dist_sup[-1]),
                    max_rect_violation=float(np.max(traj.rect_violation)),
                    warnings=list(traj.warnings))
    try:
        rep = classify_pde_stability(spec, eq, SpectrumConfig(Interval(sc["L"]), sc["modes"]))
        verdicts["turing"] = rep.verdict.value
    except RDStabError as exc:
        verdicts["turing"] = type(exc).__name__
    return io.write_manifest(out / "run.json", cfg, verdicts, files)


def cmd_simulate(args) -> int:
    cfg = load_run_config(args.config)
    overrides = {k: v for k, v in dict(mode=args.mode, L=args.L, n=args.n, t_end=args.tend,
                                       dt_out=args.dt_out).items() if v is not None}
    cfg = RunConfig(cfg.model, cfg.model_items, {**cfg.scenario, **overrides}, cfg.text, cfg.path)
    if not args.out:
        raise ConfigError("simulate needs --out")
    doc = run_simulation(cfg, Path(args.out), args.svg)
    if args.json:
        print(io.dumps(doc))
    return EXIT_OK


SWEEP_HEADER = ["parameter", "value", "d_crit", "verdict", "con6", "final_distance", "status"]


def sweep_rows(cfg: RunConfig, axis: str, values: list[float], simulate: bool = True) -> list[list]:
    preset = cfg.model_items["preset"]
    if axis not in PRESET_KEYS[preset]:
        raise ConfigError(f"axis {axis!r} is not a parameter of {preset}")
    if not values:
        raise ConfigError("sweep needs at least one value")
    sc = cfg.scenario
    rows = []
    specs = []
    for val in values:
        try:
            c = cfg.with_model(**{axis: val})
        except ConfigError as exc:
            rows.append([axis, val, None, None, None, None, f"ConfigError: {exc}"])
            specs.append(None)
            continue
        spec = c.model
        specs.append(spec)
        row = [axis, val, None, None, None, None, "ok"]
        try:
            eq = find_equilibrium(spec)
            row[4] = check_hypotheses(spec, eq.alpha).con6.holds
            rep = classify_pde_stability(spec, eq, SpectrumConfig(Interval(sc["L"]), sc["modes"]))
            row[2], row[3] = rep.d_crit, rep.verdict.value
        except RDStabError as exc:
            row[6] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    if simulate:
        u0, v0 = cfg.start()
        grid = Grid1D(sc["L"], sc["n"])
        init = SinePerturbed(u0, v0, sc["amp"], sc["wavelen"]) if sc["init"] == "sine" else Constant(u0, v0)
        todo = [(j, s) for j, s in enumerate(specs) if s is not None]
        results = sweep([s for _, s in todo], Scenario(grid, init, sc["t_end"], sc["dt_out"], sc["modes"]))
        for (j, _), res in zip(todo, results):
            rows[j][5] = res.final_distance
            if res.status != "ok" and rows[j][6] == "ok":
                rows[j][6] = res.status
    return rows


def cmd_sweep(args) -> int:
    cfg = load_run_config(args.config)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse --values {args.values!r}") from None
    if args.tend is not None:
        cfg = RunConfig(cfg.model, cfg.model_items, {**cfg.scenario, "t_end": args.tend}, cfg.text, cfg.path)
    rows = sweep_rows(cfg, args.axis, values, simulate=not args.no_sim)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        io.write_csv(out / "summary.csv", SWEEP_HEADER, rows)
    else:
        io.write_csv(sys.stdout, SWEEP_HEADER, rows)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors share the configuration exit code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", required=True, help="key = value model/run file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--json", action="store_true", help="print JSON to stdout")
    common.add_argument("--svg", action="store_true", help="also write an SVG plot")

    p = _Parser(prog="rdstab", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="equilibrium and stability report")
    a.add_argument("--length", type=float, help="domain length for the Neumann spectrum")
    a.add_argument("--modes", type=int, help="number of Neumann modes")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("bounds", parents=[common], help="invariant-rectangle bounds")
    b.add_argument("--u0", type=_range, help="initial u range MIN:MAX")
    b.add_argument("--v0", type=_range, help="initial v range MIN:MAX")
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("simulate", parents=[common], help="integrate the ODE or 1-D PDE")
    s.add_argument("--mode", choices=["ode", "pde"])
    s.add_argument("--L", type=float)
    s.add_argument("--n", type=int)
    s.add_argument("--tend", type=float)
    s.add_argument("--dt-out", dest="dt_out", type=float)
    s.set_defaults(func=cmd_simulate)

    w = sub.add_parser("sweep", parents=[common], help="parameter sweep summary CSV")
    w.add_argument("--axis", required=True)
    w.add_argument("--values", required=True, help="comma-separated values")
    w.add_argument("--tend", type=float)
    w.add_argument("--no-sim", action="store_true", help="skip simulations, analysis only")
    w.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RDStabError as exc:
        print(f"rdstab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
