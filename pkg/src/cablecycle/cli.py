"""Command-line pipeline: enumerate and rank cycles, build and verify plans,
run simulations and cycle sweeps, and emit CSV/JSON artifacts.

Exit codes: 0 ok, 2 input error, 3 verification failure, 4 simulation
divergence. Every file-writing command drops a manifest.json (config hash,
seed, outputs) next to its outputs so runs can be reproduced exactly.
The default output directory is $CABLECYCLE_OUT or the working directory.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from . import plan as plan_mod
from . import sim as sim_mod
from . import verify as verify_mod
from .errors import InadmissibleCycleError, PlannerError, SimulationDivergenceError
from .graph import HamiltonianCycle, color_edges, enumerate_cycles
from .statics import (
    LoadModel,
    check_admissibility,
    equilibrium_offset,
    grasp_matrix,
    nullspace_basis,
)

OUT_ENV = "CABLECYCLE_OUT"


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUT_ENV, "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _atomic_write_text(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(path: Path, data) -> None:
    _atomic_write_text(path, json.dumps(data, indent=2, sort_keys=True) + "\n")


def write_manifest(out_dir: Path, command: str, config: dict, outputs: list[str]) -> Path:
    blob = json.dumps(config, sort_keys=True)
    manifest = {
        "tool": "cablecycle",
        "version": __version__,
        "command": command,
        "config": config,
        "config_sha256": hashlib.sha256(blob.encode()).hexdigest(),
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "outputs": sorted(outputs),
    }
    path = out_dir / "manifest.json"
    _write_json(path, manifest)
    return path


def _load_model(args) -> LoadModel:
    if not args.load:
        raise ValueError("a load config is required (--load path/to/load.json)")
    return LoadModel.from_json(args.load)


def _rank_cycles(load: LoadModel):
    """(cycle, report) pairs sorted by descending score, ties by tour."""
    g = grasp_matrix(load)
    _, f0_per = equilibrium_offset(g, load)
    rows = []
    for cycle in enumerate_cycles(load.n):
        report = check_admissibility(nullspace_basis(cycle, load), f0_per)
        rows.append((cycle, report))
    rows.sort(key=lambda cr: (-cr[1].score, cr[0].tour))
    return rows


def _select_cycle(load: LoadModel, selector: str) -> HamiltonianCycle:
    if selector == "auto":
        ranked = _rank_cycles(load)
        for cycle, report in ranked:
            if report.admissible:
                return cycle
        raise InadmissibleCycleError("no admissible Hamiltonian cycle for this load")
    tour = tuple(int(tok) for tok in selector.split(","))
    if len(tour) != load.n:
        raise ValueError(
            f"cycle {list(tour)} does not tour the load's {load.n} attachment points"
        )
    return HamiltonianCycle(tour)


def _build_plan(load: LoadModel, args) -> plan_mod.ForcePlan:
    cycle = _select_cycle(load, args.cycle)
    coloring = color_edges(cycle, args.library)
    return plan_mod.build_plan(
        load,
        cycle,
        coloring,
        amplitude=args.amplitude,
        xi=args.xi,
        lengths=args.cable_length,
    )


def _plan_config(args, plan) -> dict:
    return {
        "load": str(args.load),
        "cycle": list(plan.cycle.tour),
        "library": args.library,
        "amplitude_n": args.amplitude,
        "xi_rad_s": args.xi,
        "cable_length_m": args.cable_length,
    }


def _sim_config(args) -> sim_mod.SimConfig:
    return sim_mod.SimConfig(
        carrier_mass=args.carrier_mass,
        kp=args.kp,
        kd=args.kd,
        noise_pos_std=args.noise_pos,
        noise_vel_std=args.noise_vel,
        load_linear_damping=args.load_damping,
        load_angular_damping=args.load_damping,
        cable_stiffness=args.cable_stiffness,
        cable_damping=args.cable_damping,
        dt=args.dt,
        duration=args.duration,
        seed=args.seed,
        reference_trim=not args.no_trim,
        cable_reaction_on_carriers=not args.no_carrier_reaction,
        bilateral_springs=args.bilateral_springs,
        record_every=args.record_every,
    )


def cmd_cycles(args) -> int:
    if args.load:
        load = _load_model(args)
        if args.n and args.n != load.n:
            raise ValueError(f"--n {args.n} conflicts with the load's {load.n} attachments")
        for cycle, report in _rank_cycles(load):
            flags = "admissible" if report.admissible else "inadmissible"
            print(f"{cycle.to_json()}  score={report.score:.6f}  {flags}")
    else:
        if args.n is None:
            raise ValueError("provide --n or --load")
        for cycle in enumerate_cycles(args.n):
            print(cycle.to_json())
    return 0


def cmd_plan(args) -> int:
    load = _load_model(args)
    plan = _build_plan(load, args)
    duration = args.duration if args.duration is not None else plan.period
    dt = args.dt if args.dt is not None else plan.period / 1000.0
    out = _out_dir(args)

    samples = plan_mod.sample_trajectory(plan, 0.0, duration, dt)
    plan_mod.write_trajectory_csv(out / "trajectory.csv", samples)
    bounds = plan_mod.compute_bounds(plan)
    _write_json(out / "bounds.json", bounds.to_dict())
    report = verify_mod.verify_plan(plan)
    _write_json(out / "verification.json", report.to_dict())

    config = _plan_config(args, plan) | {"duration_s": duration, "dt_s": dt}
    write_manifest(out, "plan", config,
                   ["trajectory.csv", "bounds.json", "verification.json"])
    if not report.passed:
        print("plan verification FAILED", file=sys.stderr)
        return 3
    print(f"plan ok: cycle {list(plan.cycle.tour)}, outputs in {out}")
    return 0


def cmd_simulate(args) -> int:
    load = _load_model(args)
    plan = _build_plan(load, args)
    cfg = _sim_config(args)
    out = _out_dir(args)
    metrics, series = sim_mod.run(load, plan, cfg)
    sim_mod.write_series_csv(out / "series.csv", series)
    _write_json(out / "metrics.json", metrics.to_dict())
    config = _plan_config(args, plan) | {
        "sim": {k: getattr(cfg, k) for k in (
            "carrier_mass", "kp", "kd", "noise_pos_std", "noise_vel_std",
            "load_linear_damping", "load_angular_damping", "cable_stiffness",
            "cable_damping", "dt", "duration", "reference_trim",
            "bilateral_springs", "record_every",
        )},
        "seed": args.seed,
    }
    write_manifest(out, "simulate", config, ["series.csv", "metrics.json"])
    print(
        f"simulate ok: max e_pL {metrics.max_e_pl:.4f} m, "
        f"max e_RL {np.degrees(metrics.max_e_rl):.3f} deg, outputs in {out}"
    )
    return 0


def cmd_sweep(args) -> int:
    load = _load_model(args)
    if load.n > 8 and not args.tour:
        raise ValueError(
            f"n = {load.n} has too many cycles to enumerate; pass explicit --tour lists"
        )
    cfg = _sim_config(args)
    cycles = None
    if args.tour:
        cycles = [HamiltonianCycle(tuple(int(v) for v in t.split(","))) for t in args.tour]
    rows = sim_mod.run_sweep(
        load,
        cfg,
        mode=args.library,
        amplitude=args.amplitude,
        xi=args.xi,
        lengths=args.cable_length,
        cycles=cycles,
        jobs=args.jobs,
    )
    out = _out_dir(args)

    kept = [r for r in rows if r.admissible]
    skipped = [list(r.tour) for r in rows if not r.admissible]
    with open(out / "sweep.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("cycle,score,max_e_pl_m,max_e_rl_deg,min_speed_mps,min_tension_n\n")
        for r in kept:
            m = r.metrics
            fh.write(
                f"\"{json.dumps(list(r.tour))}\",{r.score:.17g},"
                f"{m['max_e_pl_m']:.17g},{m['max_e_rl_deg']:.17g},"
                f"{min(m['min_speed_mps']):.17g},{min(m['min_tension_n']):.17g}\n"
            )

    def quartiles(values):
        q = np.percentile(np.asarray(values, dtype=float), [0, 25, 50, 75, 100])
        return {"min": q[0], "q1": q[1], "median": q[2], "q3": q[3], "max": q[4]}

    summary = {
        "runs": len(kept),
        "max_e_pl_m": quartiles([r.metrics["max_e_pl_m"] for r in kept]) if kept else None,
        "max_e_rl_deg": quartiles([r.metrics["max_e_rl_deg"] for r in kept]) if kept else None,
        "min_speed_mps": quartiles([min(r.metrics["min_speed_mps"]) for r in kept]) if kept else None,
    }
    _write_json(out / "sweep_summary.json", summary)
    config = {
        "load": str(args.load),
        "library": args.library,
        "amplitude_n": args.amplitude,
        "xi_rad_s": args.xi,
        "cable_length_m": args.cable_length,
        "seed": args.seed,
        "duration_s": args.duration,
        "dt_s": args.dt,
        "jobs": args.jobs,
        "skipped_cycles": skipped,
    }
    write_manifest(out, "sweep", config, ["sweep.csv", "sweep_summary.json"])
    print(f"sweep ok: {len(kept)} runs, {len(skipped)} inadmissible cycles skipped")
    return 0


def cmd_verify(args) -> int:
    load = _load_model(args)
    plan = _build_plan(load, args)
    report = verify_mod.verify_plan(plan, samples_per_period=args.samples_per_period)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return 0 if report.passed else 3


def _add_plan_args(parser):
    parser.add_argument("--load", required=False, help="load config JSON")
    parser.add_argument("--cycle", default="auto",
                        help="'auto' (best score) or a comma-separated tour like 1,3,4,2")
    parser.add_argument("--library", default="minimal", choices=["minimal", "universal"],
                        help="edge-coloring / function-library mode")
    parser.add_argument("--amplitude", type=float, default=plan_mod.DEFAULT_AMPLITUDE,
                        help="coefficient amplitude A [N]")
    parser.add_argument("--xi", type=float, default=plan_mod.DEFAULT_XI,
                        help="angular frequency xi [rad/s]")
    parser.add_argument("--cable-length", type=float, default=plan_mod.DEFAULT_CABLE_LENGTH,
                        help="cable length [m]")


def _add_sim_args(parser):
    parser.add_argument("--duration", type=float, default=30.0, help="simulated time [s]")
    parser.add_argument("--dt", type=float, default=1e-3, help="integrator step [s]")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--carrier-mass", type=float, default=0.1)
    parser.add_argument("--kp", type=float, default=100.0)
    parser.add_argument("--kd", type=float, default=10.0)
    parser.add_argument("--noise-pos", type=float, default=0.005)
    parser.add_argument("--noise-vel", type=float, default=0.01)
    parser.add_argument("--load-damping", type=float, default=0.1)
    parser.add_argument("--cable-stiffness", type=float, default=500.0)
    parser.add_argument("--cable-damping", type=float, default=1.0)
    parser.add_argument("--no-trim", action="store_true",
                        help="disable the elastic reference trim (literal paper setup)")
    parser.add_argument("--no-carrier-reaction", action="store_true",
                        help="carriers do not feel cable forces (pure tracking integrators)")
    parser.add_argument("--bilateral-springs", action="store_true",
                        help="let slack cables push (literal linear springs)")
    parser.add_argument("--record-every", type=int, default=1,
                        help="CSV decimation factor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cablecycle",
        description="Non-stop carrier trajectories holding a cable-suspended load",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cycles", help="enumerate Hamiltonian cycles, optionally ranked")
    p.add_argument("--n", type=int, default=None, help="number of carriers")
    p.add_argument("--load", default=None, help="load config JSON to rank against")
    p.set_defaults(func=cmd_cycles)

    p = sub.add_parser("plan", help="build, verify, and export a trajectory plan")
    _add_plan_args(p)
    p.add_argument("--duration", type=float, default=None, help="CSV span [s], default one period")
    p.add_argument("--dt", type=float, default=None, help="CSV step [s], default period/1000")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="closed-loop simulation of a plan")
    _add_plan_args(p)
    _add_sim_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="one simulation per admissible cycle")
    _add_plan_args(p)
    _add_sim_args(p)
    p.set_defaults(library="universal")  # one assignment valid for every cycle
    p.add_argument("--tour", action="append", default=None,
                   help="explicit tour (repeatable); required for n > 8")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="verify a plan and print the report")
    _add_plan_args(p)
    p.add_argument("--samples-per-period", type=int, default=10_000)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SimulationDivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, KeyError, OSError, json.JSONDecodeError, PlannerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
