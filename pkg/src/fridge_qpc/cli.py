"""Command line interface.

Subcommands::

    fridge-qpc point       --config cfg.yaml [--out out.csv] [--format csv|json]
    fridge-qpc sweep       --config cfg.yaml [--out out.csv] [--threads N]
    fridge-qpc noise       --config cfg.yaml [--out out.csv]   (qpc model only)
    fridge-qpc local-check --config cfg.yaml [--out out.csv]
    fridge-qpc fig2        [--out DIR] [--points N] [--grid N1xN2] [--threads N]
    fridge-qpc fig3        [--out DIR] [--grid N1xN2] [--threads N]

Exit codes: 0 success, 2 configuration error, 3 numerical failure (or more
than 1% of grid points failing).
"""

from __future__ import annotations

import argparse
import contextlib
import os
import pathlib
import sys

from .config import (
    RunConfig,
    expand_preset,
    parse_config,
    preset_fig2a,
    preset_fig2bc,
    preset_fig3,
)
from .errors import ConfigError, FridgeQpcError, NumericalFailure
from .local import local_flows_analytic, local_flows_numeric
from .qpc import QpcParams
from .runner import (
    format_number,
    run_point,
    run_sweep,
    success_fraction,
    write_csv,
    write_json,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
MIN_SUCCESS_FRACTION = 0.99
THREADS_ENV_VAR = "FRIDGE_QPC_THREADS"


def _thread_count(flag_value: int | None) -> int:
    if flag_value is not None:
        return max(1, flag_value)
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(THREADS_ENV_VAR, f"must be an integer, got {env!r}") from exc
    return 1


def _load_config(path: str) -> RunConfig:
    try:
        text = pathlib.Path(path).read_text()
    except OSError as exc:
        raise ConfigError("--config", str(exc)) from exc
    return parse_config(text)


@contextlib.contextmanager
def _open_out(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit(cfg: RunConfig, rows, out: str | None, fmt: str | None) -> None:
    fmt = fmt or cfg.output.format
    path = out if out is not None else cfg.output.path
    with _open_out(path) as fh:
        if fmt == "json":
            write_json(cfg, rows, fh)
        else:
            write_csv(cfg, rows, fh)


def _cmd_point(args) -> int:
    cfg = _load_config(args.config)
    if cfg.sweep:
        raise ConfigError("sweep", "point mode takes a configuration without sweep axes")
    row = run_point(cfg)
    if row.status != "ok":
        print(f"numerical failure ({row.status}) at {cfg.describe()}", file=sys.stderr)
        return EXIT_NUMERICAL
    _emit(cfg, [row], args.out, args.format)
    return EXIT_OK


def _cmd_noise(args) -> int:
    cfg = _load_config(args.config)
    if not cfg.is_qpc:
        raise ConfigError("measurement.kind",
                          "noise figures need the qpc measurement model")
    return _cmd_point(args)


def _cmd_sweep(args, cfg: RunConfig | None = None) -> int:
    cfg = cfg or _load_config(args.config)
    if not cfg.sweep:
        raise ConfigError("sweep", "sweep mode needs at least one sweep axis")
    rows = run_sweep(cfg, threads=_thread_count(args.threads))
    _emit(cfg, rows, args.out, args.format)
    if success_fraction(rows) < MIN_SUCCESS_FRACTION:
        failed = [r for r in rows if r.status != "ok"]
        print(f"{len(failed)} of {len(rows)} grid points failed "
              f"(first: {failed[0].status} at {failed[0].axis_values})",
              file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_fig2(args) -> int:
    outdir = pathlib.Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    threads = _thread_count(args.threads)
    n1, n2 = _parse_grid(args.grid, default=(40, 40))
    jobs = [(preset_fig2a(points=args.points), outdir / "fig2a.csv"),
            (preset_fig2bc(points_gamma_m=n1, points_t_r=n2), outdir / "fig2bc.csv")]
    return _run_jobs(jobs, threads)


def _cmd_fig3(args) -> int:
    outdir = pathlib.Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    n1, n2 = _parse_grid(args.grid, default=(50, 50))
    jobs = [(preset_fig3(points_mu_m=n1, points_t_m=n2), outdir / "fig3.csv")]
    return _run_jobs(jobs, _thread_count(args.threads))


def _run_jobs(jobs, threads: int) -> int:
    status = EXIT_OK
    for cfg, path in jobs:
        rows = run_sweep(cfg, threads=threads)
        with open(path, "w", newline="") as fh:
            write_csv(cfg, rows, fh)
        print(f"wrote {path} ({len(rows)} rows)")
        if success_fraction(rows) < MIN_SUCCESS_FRACTION:
            status = EXIT_NUMERICAL
    return status


def _parse_grid(spec: str | None, default: tuple[int, int]) -> tuple[int, int]:
    if spec is None:
        return default
    try:
        n1, n2 = spec.lower().split("x")
        n1, n2 = int(n1), int(n2)
    except ValueError as exc:
        raise ConfigError("--grid", f"expected N1xN2, got {spec!r}") from exc
    if n1 < 2 or n2 < 2:
        raise ConfigError("--grid", "grid axes need at least 2 points")
    return n1, n2


def _cmd_local_check(args) -> int:
    cfg = _load_config(args.config)
    if cfg.is_qpc:
        raise ConfigError("measurement.kind",
                          "local-check compares against the ideal monitor; "
                          "use kind: ideal")
    gamma_m = cfg.measurement.gamma_m
    analytic = local_flows_analytic(cfg.dot, cfg.lead_l, cfg.lead_r, gamma_m)
    numeric = local_flows_numeric(cfg.dot, cfg.lead_l, cfg.lead_r, gamma_m)
    header = ["epsilon", "delta", "g", "mu", "t_l", "t_r", "gamma", "gamma_m",
              "j_l_analytic", "j_l_numeric", "error_scale", "gamma_m_threshold"]
    cells = [cfg.dot.epsilon, cfg.dot.delta, cfg.dot.g, cfg.lead_l.mu,
             cfg.lead_l.temperature, cfg.lead_r.temperature, cfg.lead_l.gamma,
             gamma_m, analytic.j_l, numeric.j_l, analytic.error_scale,
             analytic.gamma_m_threshold]
    with _open_out(args.out) as fh:
        fh.write(",".join(header) + "\n")
        fh.write(",".join(format_number(float(c)) if c is not None else ""
                          for c in cells) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fridge-qpc",
        description="Steady-state thermodynamics of a continuously monitored "
                    "double-dot refrigerator")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, config_required=True):
        if config_required:
            sp.add_argument("--config", required=True, help="YAML run configuration")
        sp.add_argument("--out", help="output path (default: stdout / current dir)")
        sp.add_argument("--threads", type=int, default=None,
                        help=f"worker threads (default: ${THREADS_ENV_VAR} or 1)")
        sp.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output format (default: config or csv)")

    add_common(sub.add_parser("point", help="single parameter point"))
    add_common(sub.add_parser("sweep", help="1D or 2D parameter sweep"))
    add_common(sub.add_parser("noise", help="single-point detector noise figures"))
    add_common(sub.add_parser("local-check",
                              help="closed-form vs numeric local-regime flows"))
    fig2 = sub.add_parser("fig2", help="measurement-strength sweep + "
                                       "(gamma_m, T_R) grid presets")
    add_common(fig2, config_required=False)
    fig2.add_argument("--points", type=int, default=200,
                      help="points of the 1D measurement-strength sweep")
    fig2.add_argument("--grid", help="N1xN2 grid override for fig2bc")
    fig3 = sub.add_parser("fig3", help="(mu_M, T_M) detector grid preset")
    add_common(fig3, config_required=False)
    fig3.add_argument("--grid", help="N1xN2 grid override")
    return parser


_COMMANDS = {
    "point": _cmd_point,
    "sweep": _cmd_sweep,
    "noise": _cmd_noise,
    "local-check": _cmd_local_check,
    "fig2": _cmd_fig2,
    "fig3": _cmd_fig3,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FridgeQpcError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
