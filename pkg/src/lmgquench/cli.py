"""Command-line front end.

Every command validates its parameters, dispatches to the compute
modules, and writes a CSV payload plus a JSON metadata sidecar into the
output directory (``--outdir``, or the ``LMG_OUTDIR`` environment
variable, or the working directory).  ``--plot`` additionally renders an
SVG from the written data.  Runs are seedless and deterministic: the same
configuration produces byte-identical CSV regardless of ``--workers``.

Exit codes: 0 success, 2 usage or validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import multiprocessing
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .model import ModelParams, build_hamiltonian, diagonalize, eigenvalues
from .quench import (QuenchSpec, extrapolate_critical_field, fidelity_series,
                     orthogonality_field, overlap_distribution,
                     scan_minimum_fidelity)
from .spectral import DEFAULT_ETA, DEFAULT_POINTS, spectral_function
from .thermo import thermo_sweep
from .output import ResultBundle, write_csv, write_json

__all__ = ["main", "parse_and_dispatch"]


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}")


def _grid(start: float, stop: float, step: float, name: str) -> np.ndarray:
    if step <= 0:
        raise ValueError(f"{name} step must be positive")
    n = int(round(abs(stop - start) / step))
    if n < 1:
        raise ValueError(f"{name} range is narrower than one step")
    sign = 1.0 if stop >= start else -1.0
    return start + sign * step * np.arange(n + 1)


def _pmap(fn, items, workers: int):
    """Map fn over items, optionally in a process pool; order preserved."""
    if workers > 1 and len(items) > 1:
        with multiprocessing.get_context().Pool(workers) as pool:
            return pool.map(fn, items)
    return [fn(item) for item in items]


# ---------------------------------------------------------------------------
# top-level point workers (picklable for multiprocessing)

def _gap_point(args):
    N, gamma, h, K = args
    w = eigenvalues(ModelParams(N, h, gamma))
    return (w[1:K + 1] - w[0]).tolist()


def _ground_energy_per_site(args):
    N, gamma, h = args
    return float(eigenvalues(ModelParams(N, h, gamma))[0]) / N


def _lmin_point(args):
    N, gamma, h_i, h_f, window, grid_points = args
    lm, tm = scan_minimum_fidelity(N, gamma, h_i, [h_f], window, grid_points)
    return float(lm[0]), float(tm[0])


def _h0_point(args):
    N, gamma, h_i, scan, window, threshold, grid_points = args
    primary = orthogonality_field(N, gamma, h_i, scan, window, threshold,
                                  grid_points)
    alt = orthogonality_field(N, gamma, h_i, scan, window, threshold / 10.0,
                              grid_points)
    return primary, alt


# ---------------------------------------------------------------------------
# result emission

def _outdir(args) -> Path:
    path = Path(args.outdir or os.environ.get("LMG_OUTDIR") or ".")
    path.mkdir(parents=True, exist_ok=True)
    return path


def _emit(args, bundle: ResultBundle, started: float,
          extra_outputs: list[str] | None = None) -> int:
    outdir = _outdir(args)
    tag = args.tag or bundle.command
    csv_path = outdir / f"{tag}.csv"
    meta_path = outdir / f"{tag}.meta.json"
    write_csv(csv_path, bundle.columns, bundle.rows)
    outputs = [csv_path.name] + list(extra_outputs or [])
    if bundle.sidecar is not None:
        sidecar_path = outdir / f"{tag}.{bundle.sidecar_name}.json"
        write_json(sidecar_path, bundle.sidecar)
        outputs.append(sidecar_path.name)
    if args.plot:
        from .plotting import emit_figure
        fig_path = outdir / f"{tag}.svg"
        emit_figure(bundle, fig_path)
        outputs.append(fig_path.name)
    meta = {
        "tool": "lmgquench",
        "version": __version__,
        "command": bundle.command,
        "config": bundle.meta,
        "outputs": outputs,
        "wall_time_s": time.perf_counter() - started,
    }
    write_json(meta_path, meta)
    for name in outputs + [meta_path.name]:
        print(outdir / name)
    return 0


def _config_echo(args, **extra) -> dict:
    skip = {"func", "plot", "tag", "outdir"}
    echo = {k: v for k, v in vars(args).items() if k not in skip}
    echo.update(extra)
    echo["deterministic"] = True
    return echo


# ---------------------------------------------------------------------------
# commands

def cmd_spectrum(args) -> int:
    started = time.perf_counter()
    H = build_hamiltonian(ModelParams(args.N, args.h, args.gamma))
    dec = diagonalize(H)
    rows = [(k, dec.energies[k], int(dec.parity[k])) for k in range(len(dec.energies))]
    bundle = ResultBundle("spectrum", ["k", "E_k", "parity"], rows,
                          meta=_config_echo(args))
    extra = []
    if args.dump_matrix:
        tag = args.tag or "spectrum"
        dump = f"{tag}.hamiltonian.csv"
        write_csv(_outdir(args) / dump,
                  [f"c{j}" for j in range(H.entries.shape[1])], H.entries.tolist())
        extra.append(dump)
    return _emit(args, bundle, started, extra_outputs=extra)


def cmd_gap(args) -> int:
    started = time.perf_counter()
    if args.h_max <= args.h_min:
        raise ValueError("need --h-max > --h-min")
    if not 0 <= args.levels <= args.N:
        raise ValueError(f"need 0 <= --levels <= N, got {args.levels}")
    h = _grid(args.h_min, args.h_max, args.h_step, "field")
    points = [(args.N, args.gamma, float(hv), args.levels) for hv in h]
    gaps = _pmap(_gap_point, points, args.workers)
    columns = ["h"] + [f"gap_{k}" for k in range(1, args.levels + 1)]
    rows = [(hv, *g) for hv, g in zip(h, gaps)]
    return _emit(args, ResultBundle("gap", columns, rows, meta=_config_echo(args)),
                 started)


def cmd_curvature(args) -> int:
    started = time.perf_counter()
    if args.h_max <= args.h_min:
        raise ValueError("need --h-max > --h-min")
    h = _grid(args.h_min, args.h_max, args.h_step, "field")
    if h.size < 3:
        raise ValueError("need at least 3 field points")
    points = [(args.N, args.gamma, float(hv)) for hv in h]
    e0 = np.array(_pmap(_ground_energy_per_site, points, args.workers))
    d2e = (e0[2:] - 2.0 * e0[1:-1] + e0[:-2]) / args.h_step**2
    rows = list(zip(h[1:-1], d2e))
    return _emit(args, ResultBundle("curvature", ["h", "d2e"], rows,
                                    meta=_config_echo(args)), started)


def cmd_tdf(args) -> int:
    started = time.perf_counter()
    if args.tmax <= args.tmin:
        raise ValueError("need --tmax > --tmin")
    if args.tpoints < 2:
        raise ValueError("need --tpoints >= 2")
    times = np.linspace(args.tmin, args.tmax, args.tpoints)
    columns = ["t"]
    series = []
    for hf in args.hf:
        d = overlap_distribution(QuenchSpec(args.N, args.gamma, args.hi, hf))
        series.append(fidelity_series(d, times).values)
        columns.append(f"L(hf={hf:g})")
    rows = [(t, *(s[i] for s in series)) for i, t in enumerate(times)]
    return _emit(args, ResultBundle("tdf", columns, rows, meta=_config_echo(args)),
                 started)


def cmd_lmin_scan(args) -> int:
    started = time.perf_counter()
    h_f = _grid(args.hf_start, args.hf_end, args.hf_step, "scan")
    window = (args.tmin, args.tmax)
    points = [(args.N, args.gamma, args.hi, float(hf), window, args.grid_points)
              for hf in h_f]
    results = _pmap(_lmin_point, points, args.workers)
    rows = [(hf, lm, tm) for hf, (lm, tm) in zip(h_f, results)]
    return _emit(args, ResultBundle("lmin-scan", ["h_f", "L_min", "t_at_min"],
                                    rows, meta=_config_echo(args)), started)


def cmd_h0_scaling(args) -> int:
    started = time.perf_counter()
    if len(args.N) < 3:
        raise ValueError("need at least 3 system sizes for the quadratic fit")
    scan = (args.scan_start, args.scan_end, args.scan_step)
    window = (args.tmin, args.tmax)
    points = [(n, args.gamma, args.hi, scan, window, args.threshold,
               args.grid_points) for n in args.N]
    results = _pmap(_h0_point, points, args.workers)
    missing = [n for n, (h0, _) in zip(args.N, results) if h0 is None]
    if missing:
        raise RuntimeError(
            f"no h_f along the scan reached the threshold for N in {missing}")
    samples = [(n, h0) for n, (h0, _) in zip(args.N, results)]
    fit = extrapolate_critical_field(samples)
    a, b, c = fit.coefficients
    alt = {str(n): h0_alt for n, (_, h0_alt) in zip(args.N, results)}
    shifts = [abs(h0 - h0_alt) for (_, h0), (_, h0_alt)
              in zip(samples, results) if h0_alt is not None]
    sidecar = {
        "fit": {"a": a, "b": b, "c": c, "variable": "1/N"},
        "extrapolated": fit.extrapolated,
        "residuals": fit.residuals.tolist(),
        "threshold": args.threshold,
        "sensitivity": {
            "threshold_alt": args.threshold / 10.0,
            "h0_alt": alt,
            "max_shift": max(shifts) if shifts else None,
        },
    }
    rows = [(n, h0) for n, h0 in samples]
    return _emit(args, ResultBundle("h0-scaling", ["N", "h0"], rows,
                                    meta=_config_echo(args), sidecar=sidecar,
                                    sidecar_name="fit"),
                 started)


def cmd_work_sweep(args) -> int:
    started = time.perf_counter()
    h_f = _grid(args.hf_min, args.hf_max, args.hf_step, "sweep")
    sweep = thermo_sweep(args.N, args.gamma, args.hi, h_f)
    pad = [None]
    dW = pad + list(sweep.d_mean_work) + pad
    ddF = pad + list(sweep.d_delta_f) + pad
    dWirr = pad + list(sweep.d_irreversible_work) + pad
    rows = [
        (h_f[i], sweep.mean_work[i], sweep.delta_f[i], sweep.irreversible_work[i],
         dW[i], ddF[i], dWirr[i])
        for i in range(h_f.size)
    ]
    columns = ["h_f", "W", "dF", "W_irr", "dW/dh", "ddF/dh", "dWirr/dh"]
    return _emit(args, ResultBundle("work-sweep", columns, rows,
                                    meta=_config_echo(args)), started)


def cmd_spectral(args) -> int:
    started = time.perf_counter()
    if args.omega_points < 2:
        raise ValueError("need --omega-points >= 2")
    dists = [overlap_distribution(QuenchSpec(args.N, args.gamma, args.hi, hf))
             for hf in args.hf]
    lo = min(float(d.energies.min()) for d in dists) - args.pad
    hi = max(float(d.energies.max()) for d in dists) + args.pad
    omega = np.linspace(lo, hi, args.omega_points)
    columns = ["omega"]
    curves = []
    levels = {}
    for hf, d in zip(args.hf, dists):
        curves.append(spectral_function(d, omega, args.eta).values)
        columns.append(f"A(hf={hf:g})")
        levels[f"{hf:g}"] = [
            {"E": float(e), "p": float(p), "parity": int(par)}
            for e, p, par in zip(d.energies, d.weights, d.parity)
        ]
    rows = [(w, *(c[i] for c in curves)) for i, w in enumerate(omega)]
    sidecar = {"eta": args.eta, "levels": levels}
    return _emit(args, ResultBundle("spectral", columns, rows,
                                    meta=_config_echo(args), sidecar=sidecar),
                 started)


# ---------------------------------------------------------------------------
# parser

def _add_common(sub, workers: bool = True) -> None:
    sub.add_argument("--gamma", type=float, default=0.0, help="anisotropy, 0 <= gamma < 1")
    sub.add_argument("--outdir", default=None, help="output directory (default: $LMG_OUTDIR or .)")
    sub.add_argument("--tag", default=None, help="output file basename (default: command name)")
    sub.add_argument("--plot", action="store_true", help="also write an SVG figure")
    if workers:
        sub.add_argument("--workers", type=int, default=1,
                         help="process count for independent parameter points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmg",
        description="Exact LMG model statics, quench dynamics, work statistics "
                    "and spectral functions.")
    parser.add_argument("--version", action="version", version=f"lmg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="full spectrum with parity labels")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--dump-matrix", action="store_true",
                   help="also dump the Hamiltonian matrix (row-major CSV)")
    _add_common(p, workers=False)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("gap", help="gaps to the first K excited states vs h")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--h-min", type=float, default=0.0)
    p.add_argument("--h-max", type=float, default=2.0)
    p.add_argument("--h-step", type=float, default=0.01)
    p.add_argument("--levels", type=int, default=5, help="number of gaps K")
    _add_common(p)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("curvature", help="second derivative of E_0/N vs h")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--h-min", type=float, default=0.5)
    p.add_argument("--h-max", type=float, default=1.5)
    p.add_argument("--h-step", type=float, default=0.01)
    _add_common(p)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("tdf", help="time-dependent fidelity L(t) after a quench")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--hi", type=float, required=True, help="pre-quench field")
    p.add_argument("--hf", type=_float_list, required=True,
                   help="post-quench field(s), comma separated")
    p.add_argument("--tmin", type=float, default=0.0)
    p.add_argument("--tmax", type=float, default=10.0)
    p.add_argument("--tpoints", type=int, default=2001)
    _add_common(p, workers=False)
    p.set_defaults(func=cmd_tdf)

    p = sub.add_parser("lmin-scan", help="minimum of L(t) against h_f")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--hf-start", type=float, required=True)
    p.add_argument("--hf-end", type=float, required=True)
    p.add_argument("--hf-step", type=float, default=0.005)
    p.add_argument("--tmin", type=float, default=0.0)
    p.add_argument("--tmax", type=float, default=10.0)
    p.add_argument("--grid-points", type=int, default=4000)
    _add_common(p)
    p.set_defaults(func=cmd_lmin_scan)

    p = sub.add_parser("h0-scaling",
                       help="orthogonality onset h0 per N and N->inf extrapolation")
    p.add_argument("--N", type=_int_list, required=True,
                   help="system sizes, comma separated (at least 3)")
    p.add_argument("--hi", type=float, default=1.5)
    p.add_argument("--scan-start", type=float, default=1.4)
    p.add_argument("--scan-end", type=float, default=0.5)
    p.add_argument("--scan-step", type=float, default=0.005)
    p.add_argument("--tmin", type=float, default=0.0)
    p.add_argument("--tmax", type=float, default=10.0)
    p.add_argument("--threshold", type=float, default=1e-3,
                   help="L_min value counted as dynamically orthogonal")
    p.add_argument("--grid-points", type=int, default=4000)
    _add_common(p)
    p.set_defaults(func=cmd_h0_scaling)

    p = sub.add_parser("work-sweep",
                       help="work, free energy and irreversible work vs h_f")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--hf-min", type=float, default=0.5)
    p.add_argument("--hf-max", type=float, default=1.5)
    p.add_argument("--hf-step", type=float, default=0.01)
    _add_common(p, workers=False)
    p.set_defaults(func=cmd_work_sweep)

    p = sub.add_parser("spectral", help="spectral function A(omega) after a quench")
    p.add_argument("--N", type=int, default=50)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--hf", type=_float_list, required=True,
                   help="post-quench field(s), comma separated")
    p.add_argument("--eta", type=float, default=DEFAULT_ETA,
                   help="Lorentzian broadening half-width")
    p.add_argument("--omega-points", type=int, default=DEFAULT_POINTS)
    p.add_argument("--pad", type=float, default=1.0,
                   help="grid margin beyond the spectrum edges")
    _add_common(p, workers=False)
    p.set_defaults(func=cmd_spectral)

    return parser


def parse_and_dispatch(argv=None) -> int:
    """Parse arguments, run the command, and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the diagnostic
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"lmg: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"lmg: numerical failure: {exc}", file=sys.stderr)
        return 3


def main(argv=None) -> int:
    return parse_and_dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
