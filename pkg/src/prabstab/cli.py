"""Command-line front end.

Subcommands: eval, region, classify, solve, repro.  Exit codes: 0 success,
2 validation error, 3 numerical failure.  All numeric output is written with
17 significant digits; outputs are deterministic (a version-stamp comment on
the first line is suppressed by --no-header so files are byte-stable across
releases).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .asymptotics import large_time_expansion, small_time_series
from .cq import MAX_STEPS, brusselator_system, build_scheme, linear_system, solve
from .errors import (
    BranchCutError,
    DomainError,
    InvalidParam,
    OutOfRange,
    PrabstabError,
)
from .params import PrabhakarParams
from .special import kernel_e, prabhakar_eval
from .spectra import eigenvalues, eigenvalues_2x2
from .stability import Status, classify, classify_spectrum, critical_omega, curve_sample

_VALIDATION_ERRORS = (InvalidParam, DomainError, BranchCutError, OutOfRange)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise InvalidParam(f"cannot parse complex value from {text!r}")


def _parse_complex_list(text: str):
    return [_parse_complex(item) for item in text.split(";") if item.strip()]


def _parse_matrix(text: str) -> np.ndarray:
    rows = [[float(v) for v in row.split(",")] for row in text.split(";") if row.strip()]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InvalidParam(f"matrix rows of unequal length in {text!r}")
    return np.array(rows)


def _write_lines(path, lines):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _csv_lines(header_cols, rows, no_header: bool):
    lines = []
    if not no_header:
        lines.append(f"# prabstab {__version__}")
    lines.append(",".join(header_cols))
    for row in rows:
        lines.append(",".join(row))
    return lines


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _params_from_args(args) -> PrabhakarParams:
    return PrabhakarParams(args.alpha, args.beta, args.gamma, args.omega)


def _add_param_flags(p, need_omega=True):
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--omega", type=float, required=need_omega)


def _cmd_eval(args) -> int:
    if args.kernel:
        if args.omega is None:
            raise InvalidParam("--kernel needs --omega")
        if args.t is None:
            raise InvalidParam("--kernel needs --t")
        params = PrabhakarParams(args.alpha, args.beta, args.gamma, args.omega)
        value = kernel_e(params, args.t)
        record = {
            "kind": "kernel",
            "t": args.t,
            "value": value,
        }
        print(f"value = {_fmt(value)}")
    else:
        if args.z is None:
            raise InvalidParam("eval needs --z (or --kernel with --t)")
        z = _parse_complex(args.z)
        res = prabhakar_eval(args.alpha, args.beta, args.gamma, z, tol=args.tol)
        record = {
            "kind": "value",
            "z": [z.real, z.imag],
            "value": [res.value.real, res.value.imag],
            "branch": res.branch.value,
            "terms_used": res.terms_used,
            "truncation_estimate": res.truncation_estimate,
        }
        if res.value.imag == 0.0:
            print(f"value = {_fmt(res.value.real)}")
        else:
            print(f"value = {_fmt(res.value.real)} {res.value.imag:+.17g}i")
        print(f"branch = {res.branch.value}")
        print(f"terms_used = {res.terms_used}")
        print(f"truncation_estimate = {_fmt(res.truncation_estimate)}")
    if args.output:
        _write_json(args.output, record)
    return 0


def _cmd_region(args) -> int:
    params = _params_from_args(args)
    curve = curve_sample(params, n=args.samples, modulus_cap=args.modulus_cap)
    rows = []
    for th, pt in zip(curve.thetas, curve.points):
        rows.append(("curve", _fmt(th), _fmt(pt.real), _fmt(pt.imag), ""))
    for th, pt in zip(curve.thetas, curve.points):
        rows.append(("curve_conj", _fmt(th), _fmt(pt.real), _fmt(-pt.imag), ""))
    if args.eigenvalues:
        for lam in _parse_complex_list(args.eigenvalues):
            v = classify(params, lam, tol=args.tol)
            rows.append(("eigenvalue", "", _fmt(lam.real), _fmt(lam.imag), v.status.value))
    lines = _csv_lines(("kind", "theta", "re", "im", "verdict"),
                       [list(r) for r in rows], args.no_header)
    if args.output:
        _write_lines(args.output, lines)
    else:
        print("\n".join(lines))
    return 0


def _verdict_record(lam, v):
    rec = {
        "re": lam.real,
        "im": lam.imag,
        "status": v.status.value,
    }
    if v.boundary_modulus is not None:
        rec["boundary_modulus"] = v.boundary_modulus
    if v.margin is not None:
        rec["margin"] = v.margin
    if v.note:
        rec["note"] = v.note
    return rec


def _cmd_classify(args) -> int:
    params = _params_from_args(args)
    if args.matrix:
        m = _parse_matrix(args.matrix)
        if m.shape == (2, 2):
            lams = list(eigenvalues_2x2(m))
        else:
            lams = eigenvalues(m)
    elif args.eigenvalues:
        lams = _parse_complex_list(args.eigenvalues)
    else:
        raise InvalidParam("classify needs --matrix or --eigenvalues")
    overall, per = classify_spectrum(params, lams, tol=args.tol)
    unstable = sum(1 for v in per if v.status is Status.UNSTABLE)
    report = {
        "params": {"alpha": params.alpha, "beta": params.beta,
                   "gamma": params.gamma, "omega": params.omega},
        "eigenvalues": [_verdict_record(l, v) for l, v in zip(lams, per)],
        "overall": overall.status.value,
        "unstable_count": unstable,
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.output:
        _write_json(args.output, report)
    else:
        print(text)
    return 0


def _traj_csv(traj, no_header):
    dim = traj.states.shape[1]
    complex_out = np.iscomplexobj(traj.states)
    cols = ["t"]
    for i in range(dim):
        if complex_out:
            cols += [f"y{i + 1}_re", f"y{i + 1}_im"]
        else:
            cols.append(f"y{i + 1}")
    rows = []
    for k, t in enumerate(traj.times):
        row = [_fmt(t)]
        for i in range(dim):
            v = traj.states[k, i]
            if complex_out:
                row += [_fmt(v.real), _fmt(v.imag)]
            else:
                row.append(_fmt(float(v.real)))
        rows.append(row)
    return _csv_lines(cols, rows, no_header)


def _build_problem(args):
    if args.problem == "linear-scalar":
        if args.A is None:
            raise InvalidParam("linear-scalar needs --A")
        y0 = _parse_complex(args.y0) if args.y0 else 1.0 + 0.0j
        return linear_system(np.array([[_parse_complex(args.A)]]), np.array([y0]))
    if args.problem == "linear-system":
        if args.matrix is None:
            raise InvalidParam("linear-system needs --matrix")
        m = _parse_matrix(args.matrix)
        if args.y0 is None:
            raise InvalidParam("linear-system needs --y0")
        y0 = np.array([c.real for c in _parse_complex_list(args.y0.replace(",", ";"))])
        if len(y0) != m.shape[0]:
            raise InvalidParam("y0 length does not match the matrix")
        return linear_system(m, y0)
    if args.problem == "brusselator":
        y0 = [float(v) for v in (args.y0 or "1.2,1.6").split(",")]
        if len(y0) != 2:
            raise InvalidParam("brusselator needs a 2-component y0")
        return brusselator_system(args.brusselator_a, args.brusselator_b, y0)
    raise InvalidParam(f"unknown problem {args.problem!r}")


def _load_config(args):
    if not args.config:
        return args
    with open(args.config, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    for key, val in cfg.items():
        attr = key.replace("-", "_")
        if getattr(args, attr, None) in (None, False):
            setattr(args, attr, val)
    return args


def _cmd_solve(args) -> int:
    args = _load_config(args)
    for required in ("alpha", "beta", "gamma", "omega", "h", "horizon", "problem"):
        if getattr(args, required, None) is None:
            raise InvalidParam(f"solve needs --{required.replace('_', '-')}")
    params = PrabhakarParams(args.alpha, args.beta, args.gamma, args.omega)
    ratio = args.horizon / args.h
    N = round(ratio)
    if N < 1 or abs(ratio - N) > 1e-9 * max(1.0, abs(ratio)):
        raise InvalidParam(
            f"step h={args.h} must divide the horizon {args.horizon} exactly"
        )
    if N > MAX_STEPS:
        raise InvalidParam(f"horizon/h = {N} exceeds the step cap {MAX_STEPS}")
    system = _build_problem(args)
    traj = solve(system, params, args.h, N,
                 newton={"tol": args.newton_tol, "max_iter": args.newton_max_iter})
    lines = _traj_csv(traj, args.no_header)
    if args.output:
        _write_lines(args.output, lines)
        _write_json(args.output + ".meta.json", {"params": {
            "alpha": params.alpha, "beta": params.beta,
            "gamma": params.gamma, "omega": params.omega,
        }, **traj.meta})
        print(args.output)
    else:
        print("\n".join(lines))
    return 0


def _window_max(traj, lo, hi):
    mask = (traj.times >= lo) & (traj.times <= hi)
    return float(np.abs(traj.states[mask]).max())


def _window_max_dev(traj, lo, hi, ref):
    mask = (traj.times >= lo) & (traj.times <= hi)
    dev = traj.states[mask] - np.asarray(ref)[None, :]
    return float(np.linalg.norm(dev, axis=1).max())


_A_POINTS = {
    "a1-stable": complex(0.866, 1.171),
    "a2-border": complex(0.901, 1.161),
    "a3-unstable": complex(0.936, 1.151),
}


def _repro_region_sweep(outdir, vary, values, no_header):
    files = []
    for v in values:
        if vary == "gamma":
            params = PrabhakarParams(0.8, 0.9, v, -1.0)
            tag = f"gamma_{v:g}"
        else:
            params = PrabhakarParams(0.8, 0.9, 0.8, v)
            tag = f"omega_{v:g}"
        curve = curve_sample(params, n=400, modulus_cap=50.0)
        rows = [["curve", _fmt(t), _fmt(p.real), _fmt(p.imag), ""]
                for t, p in zip(curve.thetas, curve.points)]
        rows += [["curve_conj", _fmt(t), _fmt(p.real), _fmt(-p.imag), ""]
                 for t, p in zip(curve.thetas, curve.points)]
        path = f"{outdir}/region_{tag}.csv"
        _write_lines(path, _csv_lines(("kind", "theta", "re", "im", "verdict"), rows, no_header))
        files.append(path)
    return files


def _repro_scalar_point(outdir, which, no_header):
    params = PrabhakarParams(0.8, 0.9, 0.8, -1.0)
    A = _A_POINTS[which]
    N = 8192
    h = 50.0 / N
    traj = solve(linear_system(np.array([[A]]), np.array([1.0 + 0.0j])), params, h, N)
    path = f"{outdir}/{which}.csv"
    _write_lines(path, _traj_csv(traj, no_header))
    tol = 5e-3 if which == "a2-border" else 1e-9
    verdict = classify(params, A, tol=tol)
    summary = {
        "A": [A.real, A.imag],
        "verdict": verdict.status.value,
        "classify_tol": tol,
        "amplitude_early_max": _window_max(traj, 0.0, 10.0),
        "amplitude_mid_max": _window_max(traj, 20.0, 30.0),
        "amplitude_late_max": _window_max(traj, 40.0, 50.0),
        "file": path,
    }
    if verdict.margin is not None:
        summary["margin"] = verdict.margin
    return summary


def _repro_brusselator(outdir, omega, no_header):
    params = PrabhakarParams(0.9, 0.95, 0.8, omega)
    a_coef, b_coef = 10.0, 14.0
    system = brusselator_system(a_coef, b_coef, [1.2, 1.6])
    N = 8192
    h = 50.0 / N
    traj = solve(system, params, h, N)
    lam1, lam2 = eigenvalues_2x2(np.array([[b_coef - 1.0, a_coef], [-b_coef, -a_coef]]))
    overall, per = classify_spectrum(params, [lam1, lam2])
    tag = "stable" if overall.status is Status.STABLE else "unstable"
    path = f"{outdir}/brusselator_{tag}.csv"
    _write_lines(path, _traj_csv(traj, no_header))
    eq = np.array([1.0, b_coef / a_coef])
    return {
        "omega": omega,
        "eigenvalues": [[lam1.real, lam1.imag], [lam2.real, lam2.imag]],
        "overall": overall.status.value,
        "deviation_early_max": _window_max_dev(traj, 0.0, 10.0, eq),
        "deviation_mid_max": _window_max_dev(traj, 20.0, 30.0, eq),
        "deviation_late_max": _window_max_dev(traj, 40.0, 50.0, eq),
        "final_state": [float(v) for v in traj.states[-1].real],
        "equilibrium": [float(v) for v in eq],
        "file": path,
    }


def _cmd_repro(args) -> int:
    outdir = args.outdir.rstrip("/") or "."
    fig = args.figure
    no_header = args.no_header
    summary: dict = {"figure": fig}
    if fig == "region-gamma-sweep":
        summary["files"] = _repro_region_sweep(outdir, "gamma", [0.2, 0.5, 0.8, 1.125], no_header)
    elif fig == "region-omega-sweep":
        summary["files"] = _repro_region_sweep(outdir, "omega", [-0.5, -1.0, -2.0, -4.0], no_header)
    elif fig == "region-a-points":
        params = PrabhakarParams(0.8, 0.9, 0.8, -1.0)
        curve = curve_sample(params, n=400, modulus_cap=50.0)
        rows = [["curve", _fmt(t), _fmt(p.real), _fmt(p.imag), ""]
                for t, p in zip(curve.thetas, curve.points)]
        rows += [["curve_conj", _fmt(t), _fmt(p.real), _fmt(-p.imag), ""]
                 for t, p in zip(curve.thetas, curve.points)]
        verdicts = {}
        for name, lam in _A_POINTS.items():
            tol = 5e-3 if name == "a2-border" else 1e-9
            v = classify(params, lam, tol=tol)
            rows.append(["eigenvalue", "", _fmt(lam.real), _fmt(lam.imag), v.status.value])
            verdicts[name] = v.status.value
        path = f"{outdir}/region_a_points.csv"
        _write_lines(path, _csv_lines(("kind", "theta", "re", "im", "verdict"), rows, no_header))
        summary["files"] = [path]
        summary["verdicts"] = verdicts
    elif fig in _A_POINTS:
        summary.update(_repro_scalar_point(outdir, fig, no_header))
    elif fig == "brusselator-stable":
        summary.update(_repro_brusselator(outdir, -4.0, no_header))
    elif fig == "brusselator-unstable":
        summary.update(_repro_brusselator(outdir, -0.5, no_header))
    elif fig == "omega-star":
        lam = complex(1.5, 2.7839)
        omega_star, theta_star = critical_omega(0.9, 0.95, 0.8, lam)
        params = PrabhakarParams(0.9, 0.95, 0.8, omega_star)
        check = classify(params, lam, tol=1e-6)
        curve = curve_sample(params, n=400, modulus_cap=50.0)
        rows = [["curve", _fmt(t), _fmt(p.real), _fmt(p.imag), ""]
                for t, p in zip(curve.thetas, curve.points)]
        path = f"{outdir}/region_omega_star.csv"
        _write_lines(path, _csv_lines(("kind", "theta", "re", "im", "verdict"), rows, no_header))
        summary.update({
            "lambda": [lam.real, lam.imag],
            "omega_star": omega_star,
            "theta_star": theta_star,
            "on_boundary_verdict": check.status.value,
            "files": [path],
        })
    else:
        raise InvalidParam(f"unknown figure id {fig!r}")
    path = f"{outdir}/{fig}.summary.json"
    _write_json(path, summary)
    print(path)
    return 0


_REPRO_CHOICES = [
    "region-gamma-sweep", "region-omega-sweep", "region-a-points",
    "a1-stable", "a2-border", "a3-unstable",
    "brusselator-stable", "brusselator-unstable", "omega-star",
]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="prabstab",
        description="Prabhakar-type fractional systems: special function, "
                    "stability region, and numerical solver",
    )
    ap.add_argument("--version", action="version", version=f"prabstab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate the function or the kernel")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--omega", type=float)
    p.add_argument("--z", type=str, help="argument, 're' or 're,im'")
    p.add_argument("--kernel", action="store_true", help="evaluate the kernel at --t")
    p.add_argument("--t", type=float)
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--output", type=str)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("region", help="sample the stability-region boundary")
    _add_param_flags(p)
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--modulus-cap", type=float, default=1e3)
    p.add_argument("--eigenvalues", type=str, help="semicolon-separated 're,im' points")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--output", type=str)
    p.add_argument("--no-header", action="store_true")
    p.set_defaults(func=_cmd_region)

    p = sub.add_parser("classify", help="classify a matrix or explicit eigenvalues")
    _add_param_flags(p)
    p.add_argument("--matrix", type=str, help="rows 'a,b;c,d'")
    p.add_argument("--eigenvalues", type=str)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--output", type=str)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("solve", help="integrate a problem with the quadrature scheme")
    p.add_argument("--config", type=str, help="JSON file; explicit flags override")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--problem", choices=["linear-scalar", "linear-system", "brusselator"])
    p.add_argument("--A", type=str, help="coefficient for linear-scalar, 're' or 're,im'")
    p.add_argument("--matrix", type=str)
    p.add_argument("--brusselator-a", type=float, default=10.0)
    p.add_argument("--brusselator-b", type=float, default=14.0)
    p.add_argument("--y0", type=str)
    p.add_argument("--h", type=float)
    p.add_argument("--horizon", type=float)
    p.add_argument("--newton-tol", type=float, default=1e-12)
    p.add_argument("--newton-max-iter", type=int, default=50)
    p.add_argument("--output", type=str)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--no-header", action="store_true")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("repro", help="regenerate the built-in experiment data sets")
    p.add_argument("figure", choices=_REPRO_CHOICES)
    p.add_argument("--outdir", type=str, default=".")
    p.add_argument("--no-header", action="store_true")
    p.set_defaults(func=_cmd_repro)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PrabstabError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
