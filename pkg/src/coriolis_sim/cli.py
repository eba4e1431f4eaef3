"""Command-line front end: headless scenario runs, the service, and study tools."""

from __future__ import annotations

import argparse
import os
import sys

from . import core, haptics, scenarios, study
from .scenarios import ScenarioConfig, ScenarioKind, Vantage
from .vec import Vec3, ZERO


def _vec3(text: str) -> Vec3:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected X,Y,Z, got {text!r}")
    try:
        return Vec3(*(float(p) for p in parts))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _load_config_file(path: str) -> dict[str, str]:
    """Flat key=value file mirroring the simulate flags."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coriolis")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario headless and export the trace")
    sim.add_argument("--scenario", choices=[k.value for k in ScenarioKind], required=True)
    sim.add_argument("--omega", type=float, default=0.5, help="spin rate, rad/s")
    sim.add_argument("--mu-k", type=float, default=0.0)
    sim.add_argument("--mu-s", type=float, default=0.0)
    sim.add_argument("--mass", type=float, default=0.5)
    sim.add_argument("--dt", type=float, default=core.DEFAULT_DT)
    sim.add_argument("--duration", type=float, default=10.0)
    sim.add_argument("--impulse", type=_vec3, default=ZERO, metavar="X,Y,Z")
    sim.add_argument("--vantage", choices=[v.value for v in Vantage])
    sim.add_argument("--stride", type=int, default=10, help="record every Nth step")
    sim.add_argument("--export", metavar="PATH")
    sim.add_argument("--device-script", metavar="PATH", help="tick,x,y,z CSV driving a scripted device")
    sim.add_argument("--config", metavar="PATH", help="key=value file supplying flag defaults")

    srv = sub.add_parser("serve", help="run the streaming session service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=None, help="defaults to $PORT or 8000")

    bal = sub.add_parser("balance", help="split a roster into GPA-balanced groups")
    bal.add_argument("--roster", required=True, metavar="CSV", help="id,gpa[,quiz_score]")
    bal.add_argument("-k", type=int, default=4, help="number of groups")

    rep = sub.add_parser("report", help="balance a roster and print the paired quiz report")
    rep.add_argument("--roster", required=True, metavar="CSV", help="id,gpa,quiz_score")
    rep.add_argument("--pairs", required=True, metavar="FILE",
                     help="pair_id,control,experimental,independent_variable per line")
    rep.add_argument("-k", type=int, default=4)
    rep.add_argument("--csv", metavar="PATH", help="also write the report rows as CSV")

    return parser


def _apply_config_file(args: argparse.Namespace, argv: list[str]) -> None:
    if not args.config:
        return
    values = _load_config_file(args.config)
    explicit = {a.lstrip("-").replace("-", "_").split("=")[0] for a in argv if a.startswith("--")}
    casts = {
        "scenario": str, "omega": float, "mu_k": float, "mu_s": float, "mass": float,
        "dt": float, "duration": float, "impulse": _vec3, "vantage": str,
        "stride": int, "export": str, "device_script": str,
    }
    for key, raw in values.items():
        if key not in casts:
            raise ValueError(f"unknown config key {key!r}")
        if key in explicit:
            continue  # explicit flags win
        setattr(args, key, casts[key](raw))


def cmd_simulate(args: argparse.Namespace, argv: list[str]) -> int:
    try:
        _apply_config_file(args, argv)
        mu_k = args.mu_k
        mu_s = max(args.mu_s, mu_k)
        config = ScenarioConfig(
            kind=ScenarioKind(args.scenario),
            mass=args.mass,
            friction=core.FrictionParams(mu_s=mu_s, mu_k=mu_k),
            omega0=args.omega,
            vantage=Vantage(args.vantage) if args.vantage else None,
            dt=args.dt,
            record_stride=args.stride,
        )
        session = scenarios.launch(config, args.impulse)
        if args.device_script:
            device = haptics.load_device_script(args.device_script)
            spec = haptics.DeviceSpec(tick=args.dt)
            coupling = haptics.CouplingParams()
            n_steps = round(args.duration / args.dt)
            samples = []
            for i in range(n_steps):
                haptics.haptic_tick(device.read(i), session, spec, coupling)
                if (i + 1) % args.stride == 0:
                    samples.append(session.sample())
            trace = scenarios.Trace(config=config, samples=tuple(samples))
        else:
            trace = scenarios.run(session, args.duration)

        vantage = config.effective_vantage
        try:
            curvature = scenarios.curvature_sign(trace, vantage).value
        except scenarios.UndefinedCurvatureError:
            curvature = "undefined"
        if args.export:
            scenarios.export_csv(trace, args.export)
        print(
            f"scenario={config.kind.value} duration={args.duration:g} "
            f"samples={len(trace.samples)} vantage={vantage.value} curvature={curvature}"
            + (f" export={args.export}" if args.export else "")
        )
        return 0
    except (scenarios.ExportError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (core.SimulationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    port = args.port if args.port is not None else int(os.environ.get("PORT", "8000"))
    uvicorn.run(app, host=args.host, port=port)
    return 0


def cmd_balance(args: argparse.Namespace) -> int:
    try:
        roster = study.load_roster(args.roster)
        assignment = study.balance_groups(roster, args.k)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except study.StudyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"objective J = {assignment.objective:.6g} ({assignment.method})")
    for name, group in study.assignment_groups(assignment).items():
        gpas = [s.gpa for s in group]
        print(
            f"{name}: mean={study.mean(gpas):.4f} var={study.pop_variance(gpas):.4f} "
            f"members={','.join(s.id for s in group)}"
        )
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    try:
        roster = study.load_roster(args.roster)
        pairs = study.load_pairs(args.pairs)
        assignment = study.balance_groups(roster, args.k)
        rep = study.report(study.assignment_groups(assignment), pairs)
        if args.csv:
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write(rep.to_csv())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except study.StudyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(rep.to_text(), end="")
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    if args.command == "simulate":
        return cmd_simulate(args, argv)
    if args.command == "serve":
        return cmd_serve(args)
    if args.command == "balance":
        return cmd_balance(args)
    if args.command == "report":
        return cmd_report(args)
    return 2


if __name__ == "__main__":
    sys.exit(main())
