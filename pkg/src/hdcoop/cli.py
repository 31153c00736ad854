"""Command-line front end.

Every command prints a short human-readable report by default.  ``--format``
switches to CSV or JSON, and ``--out`` sends that table to a file while the
report still goes to stdout.  Output never depends on the clock.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .analysis import (
    SCHEMA_VERSION,
    CogGrid,
    SymGrid,
    emit_figure_data,
    format_value,
    grid_from_spec,
    load_sweep,
    rows_to_csv,
    verify_gaps,
)
from .ldm import INFINITY, LdmCogParams, LdmSymParams

EXIT_OK = 0
EXIT_CONTRACT = 1
EXIT_USAGE = 2


class ContractViolation(RuntimeError):
    """Something that must hold did not."""


class _Out:
    """Collects report lines plus an optional table for --format/--out."""

    def __init__(self, command: str):
        self.command = command
        self.lines: list[str] = []
        self.header: tuple = ()
        self.rows: list = []
        self.extra: dict = {}

    def say(self, text: str = "") -> None:
        self.lines.append(text)

    def table(self, header, rows) -> None:
        self.header = tuple(header)
        self.rows = [tuple(r) for r in rows]

    def render(self, fmt: str | None) -> str:
        if fmt == "csv":
            return rows_to_csv(self.header, self.rows)
        if fmt == "json":
            doc = {
                "schema_version": SCHEMA_VERSION,
                "command": self.command,
                "columns": list(self.header),
                "rows": [[_jsonable(v) for v in r] for r in self.rows],
                **{k: _jsonable(v) for k, v in self.extra.items()},
            }
            return json.dumps(doc, indent=2, sort_keys=True) + "\n"
        return "\n".join(self.lines) + "\n"


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if v is INFINITY or isinstance(v, Fraction):
        return format_value(v)
    if isinstance(v, float):
        return "inf" if math.isinf(v) else float(format_value(v))
    return v


def _fmt_delta(d) -> str:
    return format_value(d if not isinstance(d, (int,)) else Fraction(d))


def _rational(text: str):
    t = text.strip().lower()
    if t in ("inf", "infinity", "∞"):
        return INFINITY
    try:
        v = Fraction(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected p/q or inf, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("delta must be nonnegative")
    return v


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive finite number, got {text!r}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("bit counts must be nonnegative")
    return v


_SUM_NAMES = ("l1", "l2", "l3", "l4")


# ---------------------------------------------------------------------------
# commands


def cmd_ldm_sum(args, out: _Out) -> int:
    from .capacity.ldm import ldm_sum_capacity

    res = ldm_sum_capacity(LdmSymParams(args.n_d, args.n_i, args.n_c))
    val = format_value(res.value)
    where = "δ*: any" if res.delta_any else f"δ*={_fmt_delta(res.delta_star)}"
    out.say(f"{val} ({where})")
    if not res.delta_any:
        out.say("active bounds: " + ", ".join(_SUM_NAMES[i] for i in res.active))
    out.table(("n_d", "n_i", "n_c", "c_sum", "delta_star", "delta_any"),
              [(args.n_d, args.n_i, args.n_c, res.value, res.delta_star, res.delta_any)])
    return EXIT_OK


def cmd_ldm_cog(args, out: _Out) -> int:
    from .capacity.ldm import ldm_cog_capacity

    p = LdmCogParams(args.n1, args.n2, args.a1, args.a2, args.beta)
    res = ldm_cog_capacity(p)
    out.say(f"{format_value(res.value)} (δ*={_fmt_delta(res.delta_star)})")
    out.say(f"without cooperation: {format_value(res.c_ifc)}")
    out.say(f"after listening: {format_value(res.c_z)}")
    if res.interesting:
        out.say(f"listening time δ0: {format_value(res.delta0)}")
    else:
        out.say("cooperation cannot raise the rate here")
    out.table(("n1", "n2", "a1", "a2", "beta", "c_cog", "delta_star", "c_ifc", "c_z"),
              [(p.n1, p.n2, p.a1, p.a2, p.beta, res.value, res.delta_star, res.c_ifc, res.c_z)])
    return EXIT_OK


def _margin_lines(out: _Out, margins: dict) -> None:
    for k, v in margins.items():
        out.say(f"  {k}: {format_value(v)}")


def cmd_gauss_sum(args, out: _Out) -> int:
    from .capacity.gauss import GaussSymParams, gaussian_sum_inner_outer

    if args.theta is None:
        out.say("note: --theta not given, using 0")
        theta = 0.0
    else:
        theta = args.theta
    res = gaussian_sum_inner_outer(GaussSymParams(args.snr, args.inr, args.cnr, theta), args.grid_density)
    m = res.margins()
    out.say(f"region: {res.region}")
    out.say(f"cooperation: {'on' if res.cooperation else 'off'}")
    for k in ("c_bar", "c_bar_ldm", "achievable", "outer"):
        out.say(f"{k}: {format_value(getattr(res, k))}")
    out.say(f"δ* (c_bar): {_fmt_delta(_as_exact(res.delta_c_bar))}")
    out.say(f"δ* (achievable): {_fmt_delta(_as_exact(res.delta_achievable))}")
    out.say("margins:")
    _margin_lines(out, m)
    cols = ("snr", "inr", "cnr", "theta", "region", "cooperation", "c_bar", "c_bar_ldm", "achievable", "outer", *m)
    out.table(cols, [(args.snr, args.inr, args.cnr, theta, res.region, res.cooperation,
                      res.c_bar, res.c_bar_ldm, res.achievable, res.outer, *m.values())])
    return EXIT_OK


def _as_exact(d):
    return d if d is INFINITY or isinstance(d, Fraction) else float(d)


def cmd_cog(args, out: _Out) -> int:
    from .capacity.gauss_cog import R0_THRESHOLD, GaussCogParams, gaussian_cog_bounds

    theta = 0.0 if args.theta is None else args.theta
    if args.theta is None:
        out.say("note: --theta not given, using 0")
    p = GaussCogParams(args.snr1, args.snr2, args.inr1, args.inr2, args.cnr, theta, args.r0)
    res = gaussian_cog_bounds(p)
    m = res.margins()
    out.say(f"c_bar_r0: {format_value(res.c_bar_r0)} (δ*={_fmt_delta(_as_exact(res.delta_c_bar))})")
    out.say(f"ldm_link: {format_value(res.ldm_link)}")
    out.say(f"outer: {format_value(res.outer)}")
    if res.lower_asserted:
        how = "with cooperation" if res.cooperative else "without cooperation"
        out.say(f"lower: {format_value(res.lower)} ({how}, δ*={_fmt_delta(_as_exact(res.delta_lower))})")
    else:
        out.say(f"lower: not asserted (R0<{format_value(R0_THRESHOLD)})")
    out.say("margins:")
    _margin_lines(out, m)
    cols = ("snr1", "snr2", "inr1", "inr2", "cnr", "theta", "r0", "c_bar_r0", "ldm_link", "outer", "lower", *m)
    out.table(cols, [(p.snr1, p.snr2, p.inr1, p.inr2, p.cnr, theta, p.r0, res.c_bar_r0, res.ldm_link,
                      res.outer, res.lower, *m.values())])
    return EXIT_OK


def cmd_codec_sim(args, out: _Out) -> int:
    from .capacity.ldm import ldm_cog_capacity, ldm_sum_capacity
    from .codec.alloc import optimal_allocation, optimal_cog_allocation
    from .codec.sim import run_halfduplex_sim

    if len(args.exponents) == 3:
        p = LdmSymParams(*args.exponents)
        target = ldm_sum_capacity(p).value
        sch, alloc, nominal = optimal_allocation(p, args.delta)
        label = "sum rate"
    elif len(args.exponents) == 5:
        p = LdmCogParams(*args.exponents)
        if args.delta is not None:
            raise ContractViolation("the cognitive scheme picks its own listening time; drop --delta")
        target = ldm_cog_capacity(p).value
        sch, alloc, nominal = optimal_cog_allocation(p)
        label = "secondary rate"
    else:
        raise argparse.ArgumentTypeError("codec-sim takes 3 (n_d n_i n_c) or 5 (n1 n2 a1 a2 beta) exponents")
    seed = 0 if args.seed is None else args.seed
    if args.seed is not None:
        out.say(f"seed: {seed}")
    trace = open(args.trace, "w") if args.trace else None
    try:
        r = run_halfduplex_sim(p, sch, alloc, args.blocks, trials=args.trials, seed=seed, trace=trace)
    finally:
        if trace:
            trace.close()
    achieved = r.sum_rate if isinstance(p, LdmSymParams) else r.rate2
    out.say(f"schedule: A={sch.l_a} B={sch.l_b} C={sch.l_c} (δ={_fmt_delta(sch.delta)}), blocks={args.blocks}")
    out.say(f"code: {r.code_kind}")
    out.say(f"capacity: {format_value(target)}")
    out.say(f"scheme {label}: {format_value(nominal)}")
    out.say(f"achieved {label}: {format_value(achieved)}")
    if isinstance(p, LdmSymParams):
        out.say(f"relay deficit: {sum(r.deficit_bits)} bits over {r.slots} slots")
        out.say(f"with deficit restored: {format_value(r.steady_sum)}")
    out.say(f"decode errors: {r.errors} over {r.trials} trials")
    out.table(("blocks", "slots", "trials", "errors", "rate1", "rate2", "capacity"),
              [(r.blocks, r.slots, r.trials, r.errors, r.rate1, r.rate2, target)])
    if r.errors:
        raise ContractViolation(f"{r.errors} decoding errors")
    return EXIT_OK


def cmd_fm_check(args, out: _Out) -> int:
    from .rate_region import (
        SYM_VARS,
        closed_form_cog_virtual,
        closed_form_sum_virtual,
        fm_max_weighted_rate,
        max_weighted_rate,
        tie_symmetric,
        virtual_constraints_cog,
        virtual_constraints_sym,
        LinIneq,
    )

    n = args.max
    pipes = [Fraction(k, 2) for k in range(2 * n + 1)]
    rows, bad = [], 0
    for nd, ni in itertools.product(range(n + 1), repeat=2):
        if nd == ni:
            continue
        for ss, sd in itertools.product(pipes, pipes):
            poly = virtual_constraints_sym(LdmSymParams(nd, ni, 0), ss, sd)
            if args.method == "fm":
                tied = tie_symmetric(poly)
                got = 2 * fm_max_weighted_rate(tied, {v: 1 for v in tied.variables}, guard=args.fm_guard)
            else:
                got = max_weighted_rate(poly, {v: 1 for v in SYM_VARS})
            want = closed_form_sum_virtual(nd, ni, ss, sd)
            ok = got == want
            bad += not ok
            rows.append(("sym", f"{nd} {ni}", ss, sd, got, want, ok))
    for n1, n2, a1, a2 in itertools.product(range(n + 1), repeat=4):
        p = LdmCogParams(n1, n2, a1, a2)
        for bp in range(n + 1):
            poly = virtual_constraints_cog(p, bp).with_ineqs([
                LinIneq.make({"R_W1": 1, "R_U1": 1, "R_V1": 1}, n1),
                LinIneq.make({"R_W1": -1, "R_U1": -1, "R_V1": -1}, -n1),
            ])
            w = {"R_W2": 1, "R_U2": 1}
            if args.method == "fm":
                got = fm_max_weighted_rate(poly, w, guard=args.fm_guard)
            else:
                got = max_weighted_rate(poly, w)
            want = closed_form_cog_virtual(p, bp)
            ok = got == want
            bad += not ok
            rows.append(("cog", f"{n1} {n2} {a1} {a2}", Fraction(bp), Fraction(0), got, want, ok))
    out.table(("family", "exponents", "pipe1", "pipe2", "polytope", "closed_form", "match"), rows)
    if bad:
        for r in rows:
            if not r[-1]:
                out.say("mismatch: " + ", ".join(format_value(v) if not isinstance(v, str) else v for v in r[:-1]))
        out.say(f"{bad} of {len(rows)} cases disagree")
        raise ContractViolation("closed form disagrees with the polytope")
    out.say(f"all closed-form identities hold ({len(rows)} cases)")
    return EXIT_OK


def cmd_gdof(args, out: _Out) -> int:
    sweep = load_sweep(args.sweep) if args.sweep else {}
    if args.aligned:
        sweep["aligned"] = True
    kind = {"sum": "sum_gdof", "cog": "cog_gdof"}[args.kind]
    header, rows = emit_figure_data(kind, sweep)
    out.table(header, rows)
    out.lines = rows_to_csv(header, rows).rstrip("\n").split("\n")
    return EXIT_OK


def cmd_verify_gaps(args, out: _Out) -> int:
    if args.grid:
        grids = [grid_from_spec(load_sweep(args.grid))]
    else:
        grids = [SymGrid(), CogGrid()]
    total_viol = 0
    records, violations = [], []
    header: tuple = ()
    for g in grids:
        rep = verify_gaps(g, density=args.grid_density)
        total_viol += len(rep.violations)
        out.say(f"{g.kind} grid: {len(rep.records)} points, {len(rep.violations)} violations, "
                f"largest c_bar-to-lower gap {format_value(rep.max_gap)}")
        for v in rep.violations:
            out.say(f"  violation at {v['point']}: {v['failed']}")
        if len(grids) == 1:
            header = tuple(rep.columns())
            records = rep.records
        violations += rep.violations
        out.extra.setdefault("reports", []).append(json.loads(rep.to_json()))
    if header:
        out.table(header, [tuple(r[c] for c in header) for r in records])
    else:
        rows = []
        for g, rep in zip(grids, out.extra["reports"]):
            rows += [(g.kind, json.dumps(r, sort_keys=True)) for r in rep["records"]]
        out.table(("kind", "record"), rows)
    out.say("violations: none" if not total_viol else f"violations: {total_viol}")
    if total_viol and args.strict:
        return EXIT_CONTRACT
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the table (csv or json) to this file")
    common.add_argument("--format", choices=("csv", "json"), help="table format instead of the text report")
    common.add_argument("--grid-density", type=int, default=512, help="δ grid points for Gaussian optimizations")
    common.add_argument("--fm-guard", type=int, default=20000, help="inequality cap during elimination")
    common.add_argument("--strict", action="store_true", help="exit nonzero when a gap check fails")
    common.add_argument("--seed", type=int, help="message RNG seed (printed when given)")

    ap = argparse.ArgumentParser(prog="hdcoop", description="Half-duplex cooperative interference channel toolkit.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ldm-sum", parents=[common], help="deterministic-model sum capacity")
    for n in ("n_d", "n_i", "n_c"):
        s.add_argument(n, type=_nonneg_int)
    s.set_defaults(func=cmd_ldm_sum)

    s = sub.add_parser("ldm-cog", parents=[common], help="deterministic-model cognitive capacity")
    for n in ("n1", "n2", "a1", "a2", "beta"):
        s.add_argument(n, type=_nonneg_int)
    s.set_defaults(func=cmd_ldm_cog)

    s = sub.add_parser("gauss-sum", parents=[common], help="Gaussian sum-rate bounds and margins")
    for n in ("snr", "inr", "cnr"):
        s.add_argument(n, type=_positive)
    s.add_argument("--theta", type=float, help="phase mismatch in radians (default 0)")
    s.set_defaults(func=cmd_gauss_sum)

    s = sub.add_parser("cog", parents=[common], help="Gaussian cognitive bounds and margins")
    for n in ("snr1", "snr2", "inr1", "inr2", "cnr"):
        s.add_argument(n, type=_positive)
    s.add_argument("--theta", type=float)
    s.add_argument("--r0", type=float, default=7.0, help="primary back-off in bits (default 7)")
    s.set_defaults(func=cmd_cog)

    s = sub.add_parser("codec-sim", parents=[common], help="bit-level simulation of the scheme")
    s.add_argument("exponents", type=_nonneg_int, nargs="+", help="n_d n_i n_c, or n1 n2 a1 a2 beta")
    s.add_argument("--delta", type=_rational, help="scheduling ratio p/q or inf (default: optimal)")
    s.add_argument("--blocks", type=int, default=8)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--trace", help="write a per-slot transmission trace here")
    s.set_defaults(func=cmd_codec_sim)

    s = sub.add_parser("fm-check", parents=[common], help="closed forms against the exact polytopes")
    s.add_argument("--max", type=_nonneg_int, default=5, help="largest exponent")
    s.add_argument("--method", choices=("lp", "fm"), default="lp", help="exact LP or projection")
    s.set_defaults(func=cmd_fm_check)

    s = sub.add_parser("gdof", parents=[common], help="degrees-of-freedom curves as CSV")
    s.add_argument("kind", choices=("sum", "cog"))
    s.add_argument("sweep", nargs="?", help="key = values file (alpha/alpha1, beta, n2, alpha2)")
    s.add_argument("--aligned", action="store_true", help="phase-aligned gains at alpha = 1")
    s.set_defaults(func=cmd_gdof)

    s = sub.add_parser("verify-gaps", parents=[common], help="certify the constant gaps on a grid")
    s.add_argument("grid", nargs="?", help="key = values grid file (default: both built-in grids)")
    s.set_defaults(func=cmd_verify_gaps)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    out = _Out(args.command)
    try:
        code = args.func(args, out)
    except ContractViolation as exc:
        sys.stdout.write(out.render(None))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (ValueError, OSError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        Path(args.out).write_text(out.render(args.format or "csv"))
        sys.stdout.write(out.render(None))
    else:
        sys.stdout.write(out.render(args.format))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
