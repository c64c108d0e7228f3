"""Command-line runner: spectrum / quench / sweep.

Each subcommand resolves a config (per-model defaults <- JSON file <-
``--override`` assignments <- flags), runs the corresponding pipeline
and writes plain data files.  Outputs are deterministic: identical
configs give byte-identical files — fixed reduction orders, no wall
clock anywhere, and the fully resolved config embedded in every header.

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 initial
state in the broken phase (the analytic exceptional point is printed).
"""

import argparse
import json
import os
import sys

import numpy as np

from .analysis import sweep
from .errors import BrokenPhaseError, ParameterError
from .exact import loschmidt_echo, prepare_quench, spectrum_reality
from .linalg import eig_complex
from .models import Model, analytic_ep, build_hamiltonian
from .momentum import rate_function
from .runconfig import ResolvedConfig, load_config_file, resolve_config

#: data units stated in every file header
UNITS = "time in 1/J, fields in units of J"


def _fmt(x):
    """Fixed-width scientific notation for data cells (nan for failures)."""
    return f"{x:.12e}" if np.isfinite(x) else "nan"


def _jsonable(x):
    """Floats for JSON output: non-finite values become null."""
    x = float(x)
    return x if np.isfinite(x) else None


def _write_text(path, lines):
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _csv_header(command, rc, extra=()):
    lines = [f"# rtquench {command}", f"# config: {rc.header_json()}",
             f"# units: {UNITS}"]
    lines.extend(extra)
    return lines


def _resolve(args):
    file_cfg = load_config_file(args.config) if args.config else {}
    if args.model:
        file_cfg.setdefault("model", args.model)
    cfg = resolve_config(file_cfg, overrides=args.override or (),
                         out_dir=args.out, out_format=args.format,
                         threads=args.threads)
    rc = ResolvedConfig(cfg)
    os.makedirs(rc.out_dir, exist_ok=True)
    return rc


def cmd_spectrum(rc):
    """Eigenvalue table + phase classification of the pre-quench chain."""
    params = rc.params
    if params.n_sites > rc.max_sites:
        raise ParameterError(
            f"n_sites={params.n_sites} exceeds max_sites={rc.max_sites}; the "
            f"spectrum command diagonalises the full 2**N matrix"
        )
    ham = build_hamiltonian(params)
    w = np.linalg.eigvals(ham)
    w = w[np.lexsort((w.imag, w.real))]
    label, max_im = spectrum_reality(ham, tol=rc.reality_tol, eigenvalues=w)
    h_ep = analytic_ep(params)

    if rc.out_format == "csv":
        lines = _csv_header("spectrum", rc, (
            f"# analytic_ep: {_fmt(h_ep)}",
            f"# classification: {label}",
            f"# max_imag_eigenvalue: {_fmt(max_im)}",
            "# columns: re,im",
        ))
        lines.extend(f"{_fmt(v.real)},{_fmt(v.imag)}" for v in w)
        _write_text(os.path.join(rc.out_dir, "spectrum.csv"), lines)
    else:
        _write_json(os.path.join(rc.out_dir, "spectrum.json"), {
            "command": "spectrum", "config": rc.raw, "units": UNITS,
            "analytic_ep": h_ep, "classification": label,
            "max_imag_eigenvalue": max_im,
            "eigenvalues": {"re": [_jsonable(v) for v in w.real],
                            "im": [_jsonable(v) for v in w.imag]},
        })
    print(f"classification: {label} (max |Im| = {max_im:.3e}, "
          f"analytic h_ep = {h_ep:.6f})")
    return 0


def _quench_series(rc, h1, spec0=None):
    """One echo trajectory; momentum solver where available, else exact."""
    params, h0 = rc.params, rc.h0
    use_momentum = rc.solver == "momentum" or (
        rc.solver == "auto" and params.model in (Model.IXY, Model.IATXY))
    if use_momentum:
        return rate_function(params, h0, h1, rc.t_grid, n_modes=rc.n_modes), spec0
    setup = prepare_quench(params, h0, h1, rc.t_grid,
                           evolution=rc.evolution, spec0=spec0)
    return loschmidt_echo(setup), setup.spec0


def cmd_quench(rc):
    """Echo / rate time series, one output file per post-quench field."""
    h1_values = rc.h1_values if rc.h1_values is not None else [rc.h1]
    spec0 = None
    for h1 in h1_values:
        series, spec0 = _quench_series(rc, h1, spec0)
        lam = series.rate()
        stem = f"quench_h1_{h1:g}"
        if rc.out_format == "csv":
            lines = _csv_header("quench", rc, (
                f"# h1: {_fmt(h1)}",
                "# columns: t,L,lnL,lambda",
            ))
            lines.extend(
                f"{_fmt(t)},{_fmt(l)},{_fmt(ln)},{_fmt(lm)}"
                for t, l, ln, lm in zip(series.t, series.echo,
                                        series.log_echo, lam)
            )
            _write_text(os.path.join(rc.out_dir, stem + ".csv"), lines)
        else:
            _write_json(os.path.join(rc.out_dir, stem + ".json"), {
                "command": "quench", "config": rc.raw, "units": UNITS,
                "h1": h1,
                "columns": {"t": [_jsonable(v) for v in series.t],
                            "L": [_jsonable(v) for v in series.echo],
                            "lnL": [_jsonable(v) for v in series.log_echo],
                            "lambda": [_jsonable(v) for v in lam]},
            })
        print(f"h1={h1:g}: {len(series.t)} samples, "
              f"final lambda = {lam[-1]:.6f}")
    return 0


def cmd_sweep(rc):
    """Sweep h1, average the rate, locate the exceptional point."""
    solver = None if rc.solver == "auto" else rc.solver
    result = sweep(rc.params, rc.h0, rc.h1_grid, rc.window, solver=solver,
                   dt=rc.dt, n_modes=rc.n_modes, evolution=rc.evolution,
                   threads=rc.threads)

    est = result.detected
    summary = {
        "detected_ep": est.kink if est else None,
        "method": f"{result.detection_quantity} second-difference kink",
        "confidence": _jsonable(est.confidence) if est else None,
        "curvature_flip": est.curvature_flip if est else None,
        "conclusive": est.conclusive if est else False,
        "analytic_ep": result.analytic_ep,
    }
    n = len(result.h1_grid)
    deta = np.full(n, np.nan)
    if result.deta_dh.size:
        deta[1:-1] = result.deta_dh

    if rc.out_format == "csv":
        lines = _csv_header("sweep", rc, (
            f"# summary: {json.dumps(summary, sort_keys=True)}",
            "# columns: h1,eta_t,eta_s,deta_dh1",
        ))
        lines.extend(
            f"{_fmt(h)},{_fmt(et)},{_fmt(es)},{_fmt(dd)}"
            for h, et, es, dd in zip(result.h1_grid, result.eta_t,
                                     result.eta_s, deta)
        )
        _write_text(os.path.join(rc.out_dir, "sweep.csv"), lines)
    else:
        _write_json(os.path.join(rc.out_dir, "sweep.json"), {
            "command": "sweep", "config": rc.raw, "units": UNITS,
            "columns": {"h1": [_jsonable(v) for v in result.h1_grid],
                        "eta_t": [_jsonable(v) for v in result.eta_t],
                        "eta_s": [_jsonable(v) for v in result.eta_s],
                        "deta_dh1": [_jsonable(v) for v in deta]},
            "summary": summary,
        })
    _write_json(os.path.join(rc.out_dir, "sweep_errors.json"), {
        "failures": [{"h1": h, "error": msg} for h, msg in result.failures],
    })

    ok = n - len(result.failures)
    print(f"sweep: {ok}/{n} points ok; detected_ep = "
          f"{summary['detected_ep']}, analytic_ep = {result.analytic_ep:.6f}")
    if ok < 0.9 * n:
        print(f"error: only {ok}/{n} sweep points succeeded", file=sys.stderr)
        return 3
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rtquench",
        description="Quench dynamics and exceptional-point detection for "
                    "RT-symmetric non-Hermitian spin chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("spectrum", "eigenvalue table and phase classification"),
        ("quench", "Loschmidt echo / rate-function time series"),
        ("sweep", "field sweep with exceptional-point detection"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--model", choices=[m.value for m in Model],
                       help="model defaults to start from (alternative to "
                            "naming it in the config file)")
        p.add_argument("--out", help="output directory (default: config value)")
        p.add_argument("--format", choices=["csv", "json"],
                       help="output file format (default: config value)")
        p.add_argument("--threads", type=int,
                       help="worker threads across sweep points")
        p.add_argument("--override", action="append", metavar="KEY=VALUE",
                       help="dot-path config override, value parsed as JSON "
                            "(repeatable)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = {"spectrum": cmd_spectrum, "quench": cmd_quench,
               "sweep": cmd_sweep}[args.command]
    try:
        rc = _resolve(args)
        return handler(rc)
    except ParameterError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BrokenPhaseError as exc:
        h_ep = None
        try:
            h_ep = analytic_ep(rc.params)
        except Exception:
            pass
        print(f"broken-phase initial state: {exc}", file=sys.stderr)
        if h_ep is not None:
            print(f"analytic exceptional point: h_ep = {h_ep:.6f} "
                  f"(h0 must exceed it)", file=sys.stderr)
        return 4
    except (OverflowError, RuntimeError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
