"""Command-line front end.

Exit codes: 0 success, 1 configuration or I/O error, 2 numerical failure,
3 invariance-suite failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .config import load_config, parse_value
from .dynamics import (SweepConfig, detect_balance_points, detect_esd, emit_csv, emit_plot_script,
                       invariance_suite, run_sweep)
from .exceptions import ConfigError, ToeplitzDynamicsError
from .hamiltonian import ToeplitzParams, build_hamiltonian
from .lanczos import lanczos_tridiagonalize
from .linalg import hermitian_eigvalsh

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_INVARIANCE = 0, 1, 2, 3


_FLAG_KEYS = {
    "state": "state", "gamma": "gamma", "a": "a", "b": "b", "n": "n", "t_max": "t_max",
    "t_steps": "t_steps", "seed": "seed", "out": "out", "workers": "workers", "periods": "periods",
    "samples": "samples",
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--state", help="werner or mems")
    p.add_argument("--gamma", help="state parameter(s), comma separated")
    p.add_argument("--a", help="main-diagonal base (default 1)")
    p.add_argument("--b", help="off-diagonal base; 'e' allowed")
    p.add_argument("--n", help="exponent(s), comma separated")
    p.add_argument("--t-max", dest="t_max", help="end time (default: one period 2 pi / b^n)")
    p.add_argument("--periods", help="normalised periods to cover when --t-max is absent")
    p.add_argument("--t-steps", dest="t_steps", help="samples per trace (default 2000)")
    p.add_argument("--seed", help="random seed")
    p.add_argument("--workers", help="parallel worker processes for sweeps")
    p.add_argument("--out", help="output directory or file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toeplitz-dynamics",
                                     description="Quantum correlation dynamics under tridiagonal Toeplitz Hamiltonians.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [("sweep", "write concurrence/discord traces as CSV"),
                        ("esd", "report entanglement sudden death intervals"),
                        ("balance", "report concurrence/discord crossings"),
                        ("invariance", "run the randomised invariance checks"),
                        ("lanczos-demo", "tridiagonalise a Toeplitz Hamiltonian with Lanczos")]:
        p = sub.add_parser(name, help=help_)
        _common(p)
        if name == "invariance":
            p.add_argument("--samples", help="random parameter tuples (default 50)")
            p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
        if name == "lanczos-demo":
            p.add_argument("--m", type=int, default=4, help="matrix dimension (default 4)")
    return parser


def gather_settings(args: argparse.Namespace) -> dict:
    settings = load_config(args.config) if args.config else {}
    for attr, key in _FLAG_KEYS.items():
        raw = getattr(args, attr, None)
        if raw is not None:
            settings[key] = parse_value(key, str(raw))
    return settings


def sweep_config(settings: dict) -> SweepConfig:
    missing = [k for k in ("state", "gamma", "b") if k not in settings]
    if missing:
        raise ConfigError(f"missing required field(s): {', '.join(missing)}")
    kwargs = {k: settings[k] for k in ("state", "gamma", "b", "n", "a", "t_max", "t_steps",
                                       "normalize_time", "periods", "seed", "workers") if k in settings}
    return SweepConfig(**kwargs)


def _label(tr) -> str:
    p = tr.params
    return f"{p.state} gamma={p.gamma:g} a={p.a:g} b={p.b:g} n={p.n:g}"


def cmd_sweep(settings: dict) -> int:
    cfg = sweep_config(settings)
    traces = run_sweep(cfg)
    out = Path(settings.get("out", "."))
    files = emit_csv(traces, out)
    script = emit_plot_script(traces, (out if out.suffix != ".csv" else out.parent) / f"plot_{cfg.state}.py")
    for f in files:
        print(f)
    print(script)
    return EXIT_OK


def cmd_esd(settings: dict) -> int:
    cfg = sweep_config(settings)
    traces = run_sweep(cfg)
    for tr in traces:
        rep = detect_esd(tr)
        spans = rep.zero_intervals_norm if cfg.normalize_time else rep.zero_intervals
        unit = "t/T" if cfg.normalize_time else "t"
        print(f"{_label(tr)}: {rep.count} ESD interval(s)")
        for (s, e), dmax in zip(spans, rep.max_discord_in_zones):
            print(f"  {unit} in [{s:.4f}, {e:.4f}]  max discord inside = {dmax:.4f}")
    if "out" in settings:
        emit_csv(traces, settings["out"])
    return EXIT_OK


def cmd_balance(settings: dict) -> int:
    cfg = sweep_config(settings)
    traces = run_sweep(cfg)
    for tr in traces:
        rep = detect_balance_points(tr)
        pts = rep.crossings_norm if cfg.normalize_time else rep.crossings
        print(f"{_label(tr)}: {rep.count} balancing point(s)")
        for x in pts:
            print(f"  {'t/T' if cfg.normalize_time else 't'} = {x:.4f}")
    if "out" in settings:
        emit_csv(traces, settings["out"])
    return EXIT_OK


def cmd_invariance(settings: dict, inject_fault: bool) -> int:
    report = invariance_suite(seed=settings.get("seed", 0), samples=settings.get("samples", 50),
                              fault="asymmetric_diagonal" if inject_fault else None)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_INVARIANCE


def cmd_lanczos(settings: dict, m: int) -> int:
    p = ToeplitzParams(settings.get("a", 1.0), settings.get("b", 1.0), settings.get("n", [1.0])[0], m)
    H = build_hamiltonian(p).real
    rng = np.random.default_rng(settings.get("seed", 0))
    e1 = np.zeros(m)
    e1[0] = 1.0
    ref = hermitian_eigvalsh(H)
    print(f"H: {m}x{m}, diagonal {p.diagonal:.6g}, off-diagonal {p.off_diagonal:.6g}")
    for name, start in [("e1", e1), ("random", rng.normal(size=m))]:
        out = lanczos_tridiagonalize(H, start)
        T = out.tridiagonal()
        err = float(np.max(np.abs(np.sort(hermitian_eigvalsh(T)) - ref[:out.k]))) if out.k == m else float("nan")
        print(f"start={name}: k={out.k} early={out.terminated_early} toeplitz={out.is_toeplitz} "
              f"orthogonality_loss={out.orthogonality_loss:.2e} eig_error={err:.2e}")
        print("  alphas:", np.array2string(out.alphas, precision=6))
        print("  betas: ", np.array2string(out.betas, precision=6))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        settings = gather_settings(args)
        if args.command == "sweep":
            return cmd_sweep(settings)
        if args.command == "esd":
            return cmd_esd(settings)
        if args.command == "balance":
            return cmd_balance(settings)
        if args.command == "invariance":
            return cmd_invariance(settings, args.inject_fault)
        return cmd_lanczos(settings, args.m)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ToeplitzDynamicsError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
