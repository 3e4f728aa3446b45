"""Command-line front end.

Exit codes: 0 success, 1 verification or --check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import correlations as corr
from . import sweeps
from .decoherence import DephasingParams, apply_dephasing
from .errors import QDeficitError
from .states import TwoParamState, build_two_param_state
from .verify import FAULTS, format_report, run_verify, SEED

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CHECK_TOL = 1e-8


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _sweep_common(p: argparse.ArgumentParser, steps: int):
    p.add_argument("--x", type=float, default=0.8, help="weak measurement strength")
    p.add_argument("--start", type=float, default=None)
    p.add_argument("--stop", type=float, default=None)
    p.add_argument("--steps", type=int, default=steps)
    p.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    p.add_argument("--check", action="store_true",
                   help="recompute every row numerically and fail on deviation > 1e-8")
    p.add_argument("--grid-n", type=int, default=64)
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdeficit",
        description="One-way quantum deficit, weak deficit and negativity for 2 x d states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p1 = sub.add_parser("fig1", help="sweep t at fixed s (no noise)")
    p1.add_argument("--s", type=float, default=0.15)
    p1.add_argument("--d", type=int, default=3)
    _sweep_common(p1, steps=56)

    p2 = sub.add_parser("fig2", help="sweep gamma_a = gamma_b at fixed (r, t)")
    p2.add_argument("--r", type=float, default=0.03)
    p2.add_argument("--t", type=float, default=0.58)
    _sweep_common(p2, steps=101)

    pp = sub.add_parser("point", help="all measures for one state, closed form and numerical")
    group = pp.add_mutually_exclusive_group()
    group.add_argument("--r", type=float)
    group.add_argument("--s", type=float)
    pp.add_argument("--t", type=float, required=True)
    pp.add_argument("--d", type=int, default=3)
    pp.add_argument("--x", type=float, default=0.8)
    pp.add_argument("--gamma-a", type=float)
    pp.add_argument("--gamma-b", type=float)
    pp.add_argument("--grid-n", type=int, default=64)

    pv = sub.add_parser("verify", help="run the property and oracle-equivalence suite")
    pv.add_argument("--grid-n", type=int, default=64)
    pv.add_argument("--seed", type=int, default=SEED)
    pv.add_argument("--inject-fault", action="append", default=[], choices=sorted(FAULTS),
                    help="swap in a deliberately broken closed form (repeatable)")
    pv.add_argument("--out", default="-", help="report path, '-' for stdout")
    return parser


def _run_sweep(spec: sweeps.SweepSpec, args) -> int:
    if args.jobs < 1:
        raise sweeps.UsageError(f"--jobs must be >= 1, got {args.jobs}")
    if args.check:
        rows, dev = sweeps.check_sweep(spec, jobs=args.jobs)
    else:
        rows, dev = sweeps.run_sweep(spec, jobs=args.jobs), 0.0
    _write(sweeps.to_csv(rows), args.out)
    if args.check:
        ok = dev < CHECK_TOL
        print(f"check: {len(rows)} rows, max deviation {dev:.3e} "
              f"(tol {CHECK_TOL:.0e}) {'PASS' if ok else 'FAIL'}", file=sys.stderr)
        return EXIT_OK if ok else EXIT_FAIL
    return EXIT_OK


def cmd_fig1(args) -> int:
    kw = {k: v for k, v in (("start", args.start), ("stop", args.stop)) if v is not None}
    spec = sweeps.fig1_spec(s=args.s, steps=args.steps, x=args.x, d=args.d, grid_n=args.grid_n, **kw)
    return _run_sweep(spec, args)


def cmd_fig2(args) -> int:
    kw = {k: v for k, v in (("start", args.start), ("stop", args.stop)) if v is not None}
    spec = sweeps.fig2_spec(r=args.r, t=args.t, steps=args.steps, x=args.x, grid_n=args.grid_n, **kw)
    return _run_sweep(spec, args)


def cmd_point(args) -> int:
    if args.s is not None:
        st = TwoParamState.from_s_t(args.s, args.t, args.d)
    else:
        st = TwoParamState(0.0 if args.r is None else args.r, args.t, args.d)
    dephased = args.gamma_a is not None or args.gamma_b is not None
    p = DephasingParams(args.gamma_a or 0.0, args.gamma_b or 0.0) if dephased else None
    if args.x < 0:
        raise sweeps.UsageError(f"x must be >= 0, got {args.x}")

    closed = corr.closed_form_point(st, args.x, p)
    rho = build_two_param_state(st.r, st.t, st.d)
    if p is not None:
        rho = apply_dephasing(rho, p)
    res = corr.deficit_numerical(rho, grid_n=args.grid_n)
    numerical = {
        "deficit_bits": res.value,
        "weak_deficit_bits": corr.weak_deficit(rho, args.x),
        "negativity": corr.negativity(rho),
        "argmin_theta": res.argmin_basis.theta,
        "argmin_phi": res.argmin_basis.phi,
        "objective_spread": res.spread,
    }
    closed_vals = {
        "deficit_bits": closed.deficit,
        "weak_deficit_bits": closed.weak_deficit,
        "negativity": None if closed.negativity != closed.negativity else closed.negativity,
    }
    report = {
        "state": {"r": st.r, "s": st.s, "t": st.t, "d": st.d},
        "x": args.x,
        "gamma_a": None if p is None else p.gamma_a,
        "gamma_b": None if p is None else p.gamma_b,
        "closed_form": closed_vals,
        "numerical": numerical,
    }
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_verify(args.inject_fault, grid_n=args.grid_n, seed=args.seed)
    _write(format_report(results), args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


COMMANDS = {"fig1": cmd_fig1, "fig2": cmd_fig2, "point": cmd_point, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (sweeps.UsageError, QDeficitError) as exc:
        print(f"qdeficit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
