"""Command line front end.

Four subcommands share one JSON config format: `dimension` estimates the
scaling exponent and tabulates measure against depth, `staircase` samples
the integral staircase, `simulate` integrates a flow in intrinsic time
and subordinates it to one or more alpha values, `check` runs the
algebraic verification suites.

Exit codes: 0 success, 1 a check suite failed, 2 configuration rejected,
3 numerical failure. All files are written atomically and a manifest
with content hashes is emitted alongside them.
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .cantor import (
    IllConditionedError,
    NonConvergenceError,
    Staircase,
    build_cantor,
    coarse_measure,
    estimate_dimension,
)
from .config import ConfigError, RunConfig, parse_config
from .dynamics import (
    IntegrationBlowupError,
    TimeModel,
    conservation_report,
    integrate_s_time,
    subordinate,
    trajectory_to_csv,
)
from .systems import build_system
from .verify import run_check_suites

__all__ = ["build_parser", "entrypoint", "main"]

_OUT_ENV = "FRACNAMBU_OUT"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracnambu",
        description="fractal time calculus and Nambu mechanics toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = [
        ("dimension", "estimate the scaling exponent and tabulate measure by depth"),
        ("staircase", "sample the integral staircase of the configured set"),
        ("simulate", "integrate a system and subordinate it to fractal time"),
        ("check", "run the bracket and conservation verification suites"),
    ]
    for name, help_text in specs:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument(
            "--config", required=True, metavar="PATH", help="JSON config file"
        )
        cmd.add_argument(
            "--out", metavar="DIR", default=None, help="output directory"
        )
        cmd.add_argument(
            "--paper-faithful",
            action="store_true",
            help="use the conventions of the original derivation where they differ",
        )
        cmd.add_argument(
            "--depth", type=int, default=None, metavar="N",
            help="override the refinement depth",
        )
        cmd.add_argument(
            "--seed", type=int, default=None, metavar="N",
            help="override the seed list with a single seed",
        )
    return parser


def _write_atomic(path: str, data: bytes) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode("ascii")


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _csv_bytes(header: str, rows) -> bytes:
    lines = [header]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return ("\n".join(lines) + "\n").encode("ascii")


def _resolve_out_dir(cfg: RunConfig, cli_out: str | None) -> str:
    out = cli_out or cfg.out_path or os.environ.get(_OUT_ENV) or "."
    os.makedirs(out, exist_ok=True)
    return out


def _emit(out_dir: str, outputs: dict, cfg: RunConfig) -> None:
    """Write output files plus a manifest naming their hashes."""
    recorded = {}
    for name in sorted(outputs):
        data = outputs[name]
        _write_atomic(os.path.join(out_dir, name), data)
        recorded[name] = {
            "sha256": hashlib.sha256(data).hexdigest(),
            "bytes": len(data),
        }
        print(f"wrote {os.path.join(out_dir, name)}")
    manifest = {
        "command": cfg.command,
        "settings": cfg.settings_dict(),
        "outputs": recorded,
        "tool": {"name": "fracnambu", "version": __version__},
    }
    _write_atomic(os.path.join(out_dir, "manifest.json"), _json_bytes(manifest))
    print(f"wrote {os.path.join(out_dir, 'manifest.json')}")


def _alpha_tag(alpha: float) -> str:
    return format(alpha, "g")


def _run_dimension(cfg: RunConfig) -> dict:
    alpha_est = estimate_dimension(cfg.cantor, max_depth=cfg.max_depth, tol=cfg.tol)
    print(f"alpha_estimate = {_fmt(alpha_est)}")

    sweep = []
    for shift in (-0.05, 0.0, 0.05):
        a = alpha_est + shift
        if 0.0 < a <= 1.0:
            sweep.append(a)
    rows = []
    for alpha in sorted(sweep):
        for depth in range(cfg.max_depth + 1):
            approx = build_cantor(cfg.cantor, depth)
            mu = coarse_measure(approx, alpha, approx.interval_length)
            rows.append((depth, alpha, mu))
    rows.sort(key=lambda r: (r[1], r[0]))

    outputs = {"dimension.csv": _csv_bytes("depth,alpha,mu", rows)}
    if cfg.figures:
        from .plotting import render_measure_decay

        outputs["figure_measure.png"] = render_measure_decay(rows)
    return outputs


def _run_staircase(cfg: RunConfig) -> dict:
    outputs: dict = {}
    single = len(cfg.alphas) == 1
    for alpha in cfg.alphas:
        stair = Staircase(cfg.cantor, alpha, depth=cfg.depth)
        xs = np.linspace(cfg.cantor.c1, cfg.cantor.c2, cfg.samples)
        values = stair.eval(xs)
        print(f"alpha={_alpha_tag(alpha)} total_measure = {_fmt(stair.total_measure)}")
        suffix = "" if single else f"_alpha{_alpha_tag(alpha)}"
        outputs[f"staircase{suffix}.csv"] = _csv_bytes(
            "x,S", zip(xs.tolist(), values.tolist())
        )
        if cfg.figures:
            from .plotting import render_staircase

            outputs[f"figure_staircase{suffix}.png"] = render_staircase(stair)
    return outputs


def _time_model(cfg: RunConfig, alpha: float, staircases: dict) -> TimeModel:
    if cfg.time_kind == "exact-staircase":
        return TimeModel("exact-staircase", stair=staircases[alpha], alpha=alpha)
    if cfg.time_kind == "power-law":
        return TimeModel("power-law", alpha=alpha)
    return TimeModel("classical", alpha=1.0)


def _run_simulate(cfg: RunConfig) -> dict:
    try:
        system = build_system(
            cfg.system_name,
            parameters=cfg.system_parameters,
            paper_faithful=cfg.paper_faithful,
        )
    except ValueError as exc:
        raise ConfigError(f"system: {exc}") from exc

    n = system.n
    if cfg.x0 is None:
        x0 = np.ones(n)
    else:
        if len(cfg.x0) != n:
            raise ConfigError(
                f"x0: expected {n} components for system {cfg.system_name!r}"
            )
        x0 = np.asarray(cfg.x0, dtype=float)

    staircases: dict = {}
    if cfg.time_kind == "exact-staircase":
        for alpha in cfg.alphas:
            staircases[alpha] = Staircase(cfg.cantor, alpha, depth=cfg.depth)

    models = {a: _time_model(cfg, a, staircases) for a in cfg.alphas}
    if cfg.s_max is not None:
        s_max = cfg.s_max
    else:
        s_max = max(float(models[a].s_of(cfg.t_max)) for a in cfg.alphas)
    if not s_max > 0.0:
        raise ConfigError("integrator.s_max: resolved horizon must be positive")

    # one s-time integration serves the whole alpha sweep
    path = integrate_s_time(system, x0, s_max, cfg.step)
    t_grid = np.linspace(cfg.t_min, cfg.t_max, cfg.samples)

    def build_entry(alpha: float):
        traj = subordinate(path, models[alpha], t_grid)
        return alpha, traj, trajectory_to_csv(traj).encode("ascii")

    with ThreadPoolExecutor(max_workers=min(4, len(cfg.alphas))) as pool:
        entries = list(pool.map(build_entry, cfg.alphas))

    outputs: dict = {}
    trajectories = []
    for alpha, traj, csv_data in entries:
        report = conservation_report(traj, system)
        print(f"alpha={_alpha_tag(alpha)} max_drift = {report.max_drift:.3e}")
        outputs[f"trajectory_alpha{_alpha_tag(alpha)}.csv"] = csv_data
        trajectories.append((f"alpha={_alpha_tag(alpha)}", traj))

    if cfg.figures:
        from .plotting import render_component_curves

        for i in range(n):
            outputs[f"figure_x{i + 1}.png"] = render_component_curves(
                trajectories, i, f"{cfg.system_name}: x{i + 1}(t)"
            )
    return outputs


def _run_check(cfg: RunConfig) -> tuple:
    results = []
    for seed in cfg.seeds:
        results.extend(run_check_suites(seed))
    all_pass = all(r.passed for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(
            f"{r.suite}[seed={r.seed}]: {status} "
            f"max_residual={r.max_residual:.3e} tol={r.tolerance:g}"
        )
    report = {
        "pass": all_pass,
        "seeds": list(cfg.seeds),
        "results": [r.as_dict() for r in results],
    }
    outputs = {"check_report.json": _json_bytes(report)}
    return outputs, (0 if all_pass else 1)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        cfg = parse_config(text)
        if cfg.command != args.command:
            raise ConfigError(
                f"command: config file says {cfg.command!r} but the "
                f"{args.command!r} subcommand was invoked"
            )
        cfg = cfg.with_overrides(
            out_path=args.out,
            depth=args.depth,
            seed=args.seed,
            paper_faithful=args.paper_faithful,
        )
        out_dir = _resolve_out_dir(cfg, args.out)

        code = 0
        if cfg.command == "dimension":
            outputs = _run_dimension(cfg)
        elif cfg.command == "staircase":
            outputs = _run_staircase(cfg)
        elif cfg.command == "simulate":
            outputs = _run_simulate(cfg)
        else:
            outputs, code = _run_check(cfg)
        _emit(out_dir, outputs, cfg)
        return code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (
        NonConvergenceError,
        IllConditionedError,
        IntegrationBlowupError,
        ValueError,
    ) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())
