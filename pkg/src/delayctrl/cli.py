"""Command-line interface.

Exit codes: 0 success with a true verdict, 3 success with a false verdict,
1 runtime error, 2 usage error.  Reports are JSON on stdout; trajectories
are CSV.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys as _sys
import time
from fractions import Fraction

import numpy as np

from . import sysio
from .controllability import (
    RankBackend,
    ck_rank_condition,
    is_relatively_controllable,
    minimal_controllability_time,
    reduced_generator_check,
    transfer_controllability,
)
from .delays import commensurable_surrogate, epsilon0, preorder_leq
from .errors import DelayCtrlError
from .synthesis import (
    solve_explicit,
    synthesize_point_control,
    synthesize_tracking_control,
)

EXIT_TRUE = 0
EXIT_FALSE = 3
EXIT_ERROR = 1


def _parse_time(text: str):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        return float(text)


def _digest(payload: dict) -> str:
    canon = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _emit(report: dict, started: float, out=None):
    report["timings"] = {"seconds": round(time.perf_counter() - started, 6)}
    text = json.dumps(report, indent=2, default=str)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load(path: str, time_arg=None, extra: dict | None = None):
    sys_spec, lam, signals = sysio.parse_system(path)
    inputs = {"system": sysio.system_to_json(sys_spec, lam),
              "time": str(time_arg), **(extra or {})}
    return sys_spec, lam, signals, _digest(inputs)


def _stamp_json(ts):
    if ts is None:
        return None
    return {"coeffs": list(ts.coeffs), "numeric": ts.numeric,
            "exact": str(ts.exact) if ts.exact is not None else None}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="delayctrl",
        description="Relative controllability analysis of delay difference equations")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("system", help="path to the JSON system file")
        sp.add_argument("--output", help="write the JSON report to this file")
        return sp

    sp = add("check", "controllability verdict at a given time")
    sp.add_argument("--time", required=True)
    sp = add("ck-check", "strict-window (smooth-data) verdict at a given time")
    sp.add_argument("--time", required=True)
    add("mintime", "minimal controllability time")
    sp = add("synthesize", "steering or tracking control synthesis")
    sp.add_argument("--time", required=True)
    sp.add_argument("--target", help="comma-separated target state for point steering")
    sp.add_argument("--track", action="store_true",
                    help="track the x1 signal from the system file")
    sp.add_argument("--eps", type=float, help="tracking window width")
    sp = add("simulate", "evaluate the solution on a time grid, CSV output")
    sp.add_argument("--until", required=True)
    sp.add_argument("--samples", type=int, default=101)
    sp.add_argument("--csv", help="write CSV here instead of stdout")
    sp = add("compare", "preorder comparison and controllability transfer")
    sp.add_argument("--other", required=True)
    sp.add_argument("--time")
    sp = add("reduce", "reduced generator controllability-in-some-time test")
    sp.add_argument("--other", required=True)
    sp = add("surrogate", "commensurable surrogate delay vector")
    sp.add_argument("--time", required=True)
    sp.add_argument("--eps", type=float, required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        return _dispatch(args, started)
    except DelayCtrlError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_ERROR


def _dispatch(args, started) -> int:
    cmd = args.command
    if cmd in ("check", "ck-check"):
        t = _parse_time(args.time)
        sys_spec, lam, _, digest = _load(args.system, t)
        fn = is_relatively_controllable if cmd == "check" else ck_rank_condition
        report = fn(sys_spec, lam, t, RankBackend.for_system(sys_spec))
        _emit({"command": cmd, "digest": digest, "time": str(t),
               **report.to_json()}, started, args.output)
        return EXIT_TRUE if report.controllable else EXIT_FALSE

    if cmd == "mintime":
        sys_spec, lam, _, digest = _load(args.system)
        tmin = minimal_controllability_time(sys_spec, lam,
                                            RankBackend.for_system(sys_spec))
        _emit({"command": cmd, "digest": digest,
               "controllable": tmin is not None,
               "minimal_time": _stamp_json(tmin)}, started, args.output)
        return EXIT_TRUE if tmin is not None else EXIT_FALSE

    if cmd == "synthesize":
        return _cmd_synthesize(args, started)

    if cmd == "simulate":
        return _cmd_simulate(args, started)

    if cmd == "compare":
        t = _parse_time(args.time) if args.time else None
        sys_spec, lam, _, digest = _load(args.system, t, {"other": args.other})
        _, other, _ = sysio.parse_system(args.other)
        leq = preorder_leq(lam, other)
        geq = preorder_leq(other, lam)
        report = {"command": cmd, "digest": digest,
                  "lambda_leq_other": leq, "other_leq_lambda": geq}
        verdict = leq
        if t is not None and leq:
            result = transfer_controllability(sys_spec, lam, other, t)
            report["kappa"] = float(result.kappa)
            report["other_controllable_at_T"] = result.surrogate_report.controllable
            report["lambda_controllable_at_kappa_T"] = result.report.controllable
            verdict = result.report.controllable
        _emit(report, started, args.output)
        return EXIT_TRUE if verdict else EXIT_FALSE

    if cmd == "reduce":
        sys_spec, lam, _, digest = _load(args.system, extra={"other": args.other})
        _, other, _ = sysio.parse_system(args.other)
        ok = reduced_generator_check(sys_spec, lam, other,
                                     RankBackend.for_system(sys_spec))
        _emit({"command": cmd, "digest": digest, "controllable_some_time": ok},
              started, args.output)
        return EXIT_TRUE if ok else EXIT_FALSE

    if cmd == "surrogate":
        t = _parse_time(args.time)
        _, lam, _, digest = _load(args.system, t, {"eps": args.eps})
        surro = commensurable_surrogate(lam, t, args.eps)
        _emit({"command": cmd, "digest": digest,
               "delays": sysio.delays_to_json(surro),
               "numeric_delays": list(surro.delays)}, started, args.output)
        return EXIT_TRUE

    raise AssertionError(f"unhandled command {cmd}")


def _cmd_synthesize(args, started) -> int:
    t = _parse_time(args.time)
    sys_spec, lam, signals, digest = _load(args.system, t,
                                           {"target": args.target,
                                            "track": args.track})
    backend = RankBackend.for_system(sys_spec)
    x0 = signals.get("x0")
    if args.track:
        x1 = signals.get("x1")
        if x1 is None:
            print("error: --track requires an x1 signal in the system file",
                  file=_sys.stderr)
            return EXIT_ERROR
        eps = args.eps if args.eps is not None else epsilon0(lam, t) / 2
        plan = synthesize_tracking_control(sys_spec, lam, x0, x1, t, eps, backend)
        grid = np.linspace(0.0, float(plan.epsilon), 11)
        residual = max(
            float(np.max(np.abs(
                np.asarray(solve_explicit(sys_spec, lam, x0, plan, float(t) + s)
                           ).astype(complex)
                - np.asarray(x1(s)).astype(complex))))
            for s in grid)
    else:
        if not args.target:
            print("error: synthesize needs --target or --track", file=_sys.stderr)
            return EXIT_ERROR
        x1 = np.array([complex(_parse_time(v)) for v in args.target.split(",")])
        if sys_spec.is_exact:
            from .scalars import QC
            x1 = np.array([QC(Fraction(_parse_time(v)))
                           for v in args.target.split(",")], dtype=object)
        plan = synthesize_point_control(sys_spec, lam, x0, x1, t, backend)
        reached = solve_explicit(sys_spec, lam, x0, plan, t)
        residual = float(np.max(np.abs(
            np.asarray(reached).astype(complex) - np.asarray(x1).astype(complex))))
    _emit({"command": "synthesize", "digest": digest, "time": str(t),
           "verification_residual": residual, "plan": plan.to_json()},
          started, args.output)
    return EXIT_TRUE


def _cmd_simulate(args, started) -> int:
    t_end = float(_parse_time(args.until))
    sys_spec, lam, signals, _ = _load(args.system, t_end,
                                      {"samples": args.samples})
    x0 = signals.get("x0")
    u = signals.get("u")
    grid = np.linspace(0.0, t_end, args.samples)
    buf = io.StringIO()
    writer = csv.writer(buf)
    header = ["t"]
    for i in range(sys_spec.d):
        header += [f"re_x{i + 1}", f"im_x{i + 1}"]
    writer.writerow(header)
    for t in grid:
        x = np.asarray(solve_explicit(sys_spec, lam, x0, u, float(t))
                       ).astype(complex)
        row = [f"{t:.12g}"]
        for z in x:
            row += [f"{z.real:.12g}", f"{z.imag:.12g}"]
        writer.writerow(row)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(buf.getvalue())
    else:
        print(buf.getvalue(), end="")
    return EXIT_TRUE


if __name__ == "__main__":
    raise SystemExit(main())
