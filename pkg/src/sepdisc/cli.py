"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 the pair is not distinguishable
(or identical), 4 a verification failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import serialize
from .cone import NotPerfectError, PatternError, verify_eqH2
from .discrimination import (
    NotDistinguishableError,
    capacity_family,
    construct_measurement,
    decide_sep,
    extend_to_full,
    min_copies,
    multicopy_alpha,
    multicopy_measurement,
    multicopy_states,
    verify_family,
    verify_perfect,
)
from .states import (
    ProductMixedState,
    PureProductState,
    canonical_state,
    canonicalize,
    density,
    mixed_density,
    overlap,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NEGATIVE = 3
EXIT_VERIFY = 4


class InputError(Exception):
    pass


@dataclass(frozen=True)
class SweepRow:
    alpha1: float
    alpha2: float
    gamma: float
    sep_ok: bool
    qt_ok: bool
    trace_overlap: float


def _load_json(arg: str, what: str):
    text = arg
    if not arg.lstrip().startswith(("{", "[")):
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {what} from {arg!r}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON for {what}: {exc}") from exc


def _load_state(arg, what):
    try:
        return serialize.state_from_json(_load_json(arg, what))
    except serialize.FormatError as exc:
        raise InputError(f"{what}: {exc}") from exc


def _pure_pair(args) -> tuple[PureProductState, PureProductState]:
    s1 = _load_state(args.state1, "state1")
    if args.state2 is None:
        raise InputError("--state2 is required")
    s2 = _load_state(args.state2, "state2")
    if not isinstance(s1, PureProductState) or not isinstance(s2, PureProductState):
        raise InputError("this command takes pure product states")
    if s1.dims != s2.dims:
        raise InputError(f"dimension mismatch: {s1.dims} vs {s2.dims}")
    if min(s1.dims) < 2:
        raise InputError("both local dimensions must be at least 2")
    return s1, s2


def _emit(obj):
    sys.stdout.write(serialize.dumps(obj))


def _report_json(report) -> dict:
    return {
        "probability_matrix": report.probability_matrix,
        "completeness_residual": report.completeness_residual,
        "max_deviation": report.max_deviation,
        "cone_results": [
            {"member": r.member, "method": r.method, "min_product_value": r.min_product_value}
            for r in report.cone_results
        ],
        "perfect": report.perfect,
    }


def cmd_decide(args) -> int:
    s1, s2 = _pure_pair(args)
    v = decide_sep(s1, s2)
    c = canonicalize(s1, s2)
    _emit(
        {
            "sep_distinguishable": v.sep_distinguishable,
            "qt_distinguishable": v.qt_distinguishable,
            "lhs_sep": v.lhs_sep,
            "lhs_qt": v.lhs_qt,
            "alpha1": c.alpha1,
            "alpha2": c.alpha2,
        }
    )
    return EXIT_OK if v.sep_distinguishable else EXIT_NEGATIVE


def cmd_construct(args) -> int:
    s1, s2 = _pure_pair(args)
    if not decide_sep(s1, s2).sep_distinguishable:
        print("states are not perfectly distinguishable", file=sys.stderr)
        return EXIT_NEGATIVE
    c = canonicalize(s1, s2)
    try:
        m = extend_to_full(construct_measurement(c), c)
    except NotDistinguishableError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NEGATIVE
    report = verify_perfect(density(s1), density(s2), m, args.tol, seed=args.seed)
    try:
        Path(args.out).write_text(serialize.dumps(serialize.measurement_to_json(m)))
    except OSError as exc:
        raise InputError(f"cannot write {args.out}: {exc}") from exc
    summary = _report_json(report)
    summary.update({"alpha1": c.alpha1, "alpha2": c.alpha2, "out": str(args.out)})
    _emit(summary)
    return EXIT_OK if report.perfect else EXIT_VERIFY


def _canonical_mixed(s1, s2) -> ProductMixedState | None:
    """The pair as a p1 = p2 = 0 mixed record when it is already in canonical layout."""
    if s1.dims != (2, 2):
        return None
    c = canonicalize(s1, s2)
    if np.linalg.norm(c.frame_a - np.eye(2)) > 1e-12 or np.linalg.norm(c.frame_b - np.eye(2)) > 1e-12:
        return None
    return ProductMixedState.from_canonical(c)


def cmd_verify(args) -> int:
    if args.measurement is None:
        raise InputError("--measurement is required")
    s1 = _load_state(args.state1, "state1")
    if isinstance(s1, ProductMixedState):
        mixed = s1
        rho1, rho2 = mixed_density(s1)
    else:
        s1, s2 = _pure_pair(args)
        mixed = _canonical_mixed(s1, s2)
        rho1, rho2 = density(s1), density(s2)
    try:
        m = serialize.measurement_from_json(_load_json(args.measurement, "measurement"))
    except serialize.FormatError as exc:
        raise InputError(f"measurement: {exc}") from exc
    if m.dim != rho1.dim:
        raise InputError(f"measurement acts on dimension {m.dim}, states on {rho1.dim}")
    report = verify_perfect(rho1, rho2, m, args.tol, seed=args.seed)
    out = _report_json(report)
    out["eqH2_residual"] = None
    if mixed is not None and report.perfect and m.dim == 4 and all(e.certificate for e in m.effects):
        try:
            out["eqH2_residual"] = verify_eqH2(mixed, m, args.tol)
        except (PatternError, NotPerfectError, ValueError):
            pass
    _emit(out)
    return EXIT_OK if report.perfect else EXIT_VERIFY


def cmd_multicopy(args) -> int:
    s1, s2 = _pure_pair(args)
    f = overlap(s1.a, s2.a) * overlap(s1.b, s2.b)
    if f >= 1 - 1e-12:
        print("identical states are never distinguishable", file=sys.stderr)
        return EXIT_NEGATIVE
    n = min_copies(f)
    out = {"f": f, "n": n, "total_copies": 2 * n, "alpha_per_side": multicopy_alpha(f, n)}
    code = EXIT_OK
    if args.materialize:
        try:
            m = multicopy_measurement(s1, s2, n, args.dim_cap)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        m1, m2 = multicopy_states(s1, s2, n)
        report = verify_perfect(density(m1), density(m2), m, args.tol, seed=args.seed)
        out["materialized"] = {"dim": m.dim, **_report_json(report)}
        code = EXIT_OK if report.perfect else EXIT_VERIFY
    _emit(out)
    return code


def cmd_capacity(args) -> int:
    if args.dA < 1 or args.dB < 1:
        raise InputError("dimensions must be positive")
    states, m = capacity_family(args.dA, args.dB)
    report = verify_family([density(s) for s in states], m, args.tol)
    _emit(
        {
            "dA": args.dA,
            "dB": args.dB,
            "N": len(states),
            "max_deviation": report.max_deviation,
            "verified": report.perfect,
        }
    )
    return EXIT_OK if report.perfect else EXIT_VERIFY


def sweep_rows(step: float) -> list[SweepRow]:
    """Decide every canonical pair on the grid ``{k * step} x {k * step}`` in ``[0, 1]``."""
    if not 0 < step <= 0.5:
        raise ValueError("grid step must lie in (0, 0.5]")
    count = int(math.floor(1 / step + 1e-9))
    grid = [min(k * step, 1.0) for k in range(count + 1)]
    reference = canonical_state(0.0, 0.0)
    rows = []
    for a1 in grid:
        for a2 in grid:
            v = decide_sep(reference, canonical_state(a1, a2))
            rows.append(SweepRow(a1, a2, a1 + a2, v.sep_distinguishable, v.qt_distinguishable, (1 - a1) * (1 - a2)))
    return rows


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha1", "alpha2", "gamma", "sep_ok", "qt_ok", "trace_overlap"])
    for r in rows:
        w.writerow(
            [
                serialize.format_float(r.alpha1),
                serialize.format_float(r.alpha2),
                serialize.format_float(r.gamma),
                str(r.sep_ok).lower(),
                str(r.qt_ok).lower(),
                serialize.format_float(r.trace_overlap),
            ]
        )
    return buf.getvalue()


def cmd_sweep(args) -> int:
    try:
        rows = sweep_rows(args.grid_step)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    text = sweep_csv(rows)
    if args.out is None:
        sys.stdout.write(text)
    else:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc}") from exc
    return EXIT_OK


REFERENCE_STATE = '{"canonical": {"alpha1": 0, "alpha2": 0}}'


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sepdisc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def pair(p, state2_required=True):
        p.add_argument("--state1", default=REFERENCE_STATE, help="path or inline JSON (default |0>⊗|0>)")
        p.add_argument("--state2", required=state2_required, help="path or inline JSON")
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("decide", help="decide perfect distinguishability")
    pair(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("construct", help="build a perfect measurement and write it as JSON")
    pair(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a measurement against a pair of states")
    pair(p, state2_required=False)
    p.add_argument("--measurement", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("multicopy", help="copies needed for perfect discrimination")
    pair(p)
    p.add_argument("--materialize", action="store_true")
    p.add_argument("--dim-cap", type=int, default=2**12)
    p.set_defaults(func=cmd_multicopy)

    p = sub.add_parser("capacity", help="verify the product-basis family")
    p.add_argument("dA", type=int)
    p.add_argument("dB", type=int)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("sweep", help="decide the (alpha1, alpha2) grid and write CSV")
    p.add_argument("--grid-step", type=float, default=0.05)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
