"""Degrees-of-freedom curves, constant-gap certification sweeps and figure tables."""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .capacity.delta import LinFrac, maxmin_linfrac
from .capacity.ldm import cog_v_values, pos
from .ldm import INFINITY

__all__ = [
    "SCHEMA_VERSION",
    "AlignmentRequired",
    "gdof_sum",
    "gdof_sum_bounds",
    "gdof_cog",
    "GapConstants",
    "SymGrid",
    "CogGrid",
    "GapReport",
    "verify_gaps",
    "gap_arithmetic_maxima",
    "emit_figure_data",
    "FIGURE_HEADERS",
    "parse_sweep_spec",
    "grid_from_spec",
    "format_value",
]

SCHEMA_VERSION = 1


class AlignmentRequired(ValueError):
    """α = 1 gives two different answers depending on phase alignment; say which."""


def _exp(v):
    """Exact exponent: Fractions pass through, floats are read from their decimal text."""
    if v is INFINITY or (isinstance(v, float) and math.isinf(v)):
        return INFINITY
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return INFINITY if v.strip().lower() in ("inf", "infinity", "∞") else Fraction(v)
    return Fraction(repr(float(v)))


# ---------------------------------------------------------------------------
# GDoF


def gdof_sum_bounds(alpha, beta, aligned: bool | None = None) -> list[LinFrac]:
    """Normalized sum bounds over (2 + δ); the ones carrying β vanish when β = ∞."""
    a = _exp(alpha)
    b = _exp(beta)
    if a is INFINITY or a < 0:
        raise ValueError("alpha must be a finite nonnegative exponent")
    if b is not INFINITY and b < 0:
        raise ValueError("beta must be nonnegative or infinite")
    if a == 1 and aligned is None:
        raise AlignmentRequired("alpha = 1 needs an explicit aligned flag")
    one = Fraction(1)
    top_a = max(one, a)
    quad = one if (a == 1 and aligned) else 2 * top_a
    fourth = LinFrac(quad, 2 * top_a)
    if b is INFINITY:
        return [fourth]
    top = max(one, a, b)
    return [
        LinFrac(Fraction(2), 2 * max(one, b)),
        LinFrac(top_a + pos(1 - a), 1 + top),
        LinFrac(2 * max(a, 1 - a), 2 * top),
        fourth,
    ]


def gdof_sum(alpha, beta, aligned: bool | None = None) -> Fraction:
    """Sum-capacity degrees of freedom at INR = SNR^α, CNR = SNR^β (exact)."""
    return maxmin_linfrac(gdof_sum_bounds(alpha, beta, aligned)).value


def gdof_cog(n2, alpha1, alpha2, beta) -> Fraction:
    """Secondary-rate degrees of freedom with the primary link as reference (n1 = 1)."""
    n2, a1, a2 = _exp(n2), _exp(alpha1), _exp(alpha2)
    b = _exp(beta)
    if any(v is INFINITY or v < 0 for v in (n2, a1, a2)):
        raise ValueError("n2, alpha1, alpha2 must be finite and nonnegative")
    one = Fraction(1)
    v1, v2, v3, v4 = cog_v_values(one, n2, a1, a2)
    if b is INFINITY:
        # listening costs nothing in the limit, so only the δ-free bounds remain
        return min(v1, v3)
    if b < 0:
        raise ValueError("beta must be nonnegative or infinite")
    gain = max(b, a2, one) - one
    bounds = [
        LinFrac(Fraction(0), v1, 1, 1),
        LinFrac(gain, v2, 1, 1),
        LinFrac(Fraction(0), v3, 1, 1),
        LinFrac(gain, v4, 1, 1),
    ]
    return maxmin_linfrac(bounds).value


# ---------------------------------------------------------------------------
# gap sweeps


@dataclass(frozen=True)
class GapConstants:
    """Constant gaps asserted by the sandwich theorems, in bits."""

    sum_lower: float = 17.0
    sum_upper: float = 7.0
    sum_ldm_link: float = 10.0
    sum_ldm_achievable: float = 7.0
    cog_lower: float = 23.0
    cog_ldm_link: float = 13.0
    tolerance: float = 1e-6


def _decades(lo: int, hi: int, step: int = 1) -> tuple[float, ...]:
    return tuple(10.0**k for k in range(lo, hi + 1, step))


@dataclass(frozen=True)
class SymGrid:
    snr: tuple = _decades(0, 8)
    inr: tuple = _decades(0, 8)
    cnr: tuple = _decades(0, 8)
    theta: tuple = (0.0, math.pi / 4, math.pi / 2, math.pi)

    kind = "sym"

    def points(self):
        return itertools.product(self.snr, self.inr, self.cnr, self.theta)

    def describe(self) -> dict:
        return {"kind": self.kind, **{k: list(getattr(self, k)) for k in ("snr", "inr", "cnr", "theta")}}


@dataclass(frozen=True)
class CogGrid:
    snr1: tuple = _decades(0, 6, 2)
    snr2: tuple = _decades(0, 6, 2)
    inr1: tuple = _decades(0, 6, 2)
    inr2: tuple = _decades(0, 6, 2)
    cnr: tuple = _decades(0, 6, 2)
    theta: tuple = (0.0,)
    r0: tuple = (7.0, 10.0)

    kind = "cog"
    _keys = ("snr1", "snr2", "inr1", "inr2", "cnr", "theta", "r0")

    def points(self):
        return itertools.product(*(getattr(self, k) for k in self._keys))

    def describe(self) -> dict:
        return {"kind": self.kind, **{k: list(getattr(self, k)) for k in self._keys}}


@dataclass
class GapReport:
    grid: dict
    records: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    max_gap: float = 0.0
    schema_version: int = SCHEMA_VERSION

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, default=_json_default)

    def columns(self) -> list[str]:
        return list(self.records[0]) if self.records else []


def _json_default(o):
    if o is INFINITY:
        return "inf"
    if isinstance(o, Fraction):
        return format_value(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def _finite_or_inf(v):
    if v is INFINITY:
        return "inf"
    if isinstance(v, Fraction):
        return format_value(v)
    return v


def verify_gaps(grid: SymGrid | CogGrid | None = None, *, gaps: GapConstants | None = None, density: int = 512) -> GapReport:
    """Evaluate every grid point and collect margins; a margin below −tolerance is a violation."""
    from .capacity.gauss import GaussSymParams, gaussian_sum_inner_outer
    from .capacity.gauss_cog import GaussCogParams, gaussian_cog_bounds

    grid = grid if grid is not None else SymGrid()
    gaps = gaps or GapConstants()
    report = GapReport(grid=grid.describe())
    worst = -math.inf
    for pt in grid.points():
        if grid.kind == "sym":
            snr, inr, cnr, theta = pt
            res = gaussian_sum_inner_outer(GaussSymParams(snr, inr, cnr, theta), density)
            rec = {
                "snr": snr, "inr": inr, "cnr": cnr, "theta": theta,
                "region": res.region,
                "cooperation": res.cooperation,
                "c_bar": res.c_bar, "c_bar_ldm": res.c_bar_ldm,
                "achievable": res.achievable, "outer": res.outer,
            }
            margins = res.margins(gaps)
            worst = max(worst, res.c_bar - res.achievable)
        else:
            snr1, snr2, inr1, inr2, cnr, theta, r0 = pt
            res = gaussian_cog_bounds(GaussCogParams(snr1, snr2, inr1, inr2, cnr, theta, r0))
            rec = {
                "snr1": snr1, "snr2": snr2, "inr1": inr1, "inr2": inr2, "cnr": cnr,
                "theta": theta, "r0": r0,
                "c_bar_r0": res.c_bar_r0, "ldm_link": res.ldm_link, "outer": res.outer,
                "lower": res.lower, "lower_asserted": res.lower_asserted,
                "cooperative": res.cooperative,
            }
            margins = res.margins(gaps)
            if res.lower_asserted:
                worst = max(worst, res.c_bar_r0 - res.lower)
        rec.update(margins)
        report.records.append(rec)
        bad = {k: v for k, v in margins.items() if v < -gaps.tolerance}
        if bad:
            report.violations.append({"point": {k: rec[k] for k in rec if k not in margins}, "failed": bad})
    report.max_gap = worst if math.isfinite(worst) else 0.0
    return report


def gap_arithmetic_maxima(lo: float = 1e-6, hi: float = 1e6, density: int = 4096) -> tuple[float, float]:
    """Numeric maxima over [lo, hi] of the two slot-weighted power-gain penalties."""

    def share(d):
        return d / (2 + d) * math.log2((2 + d) / d)

    def spread(d):
        return math.log2(2 + d) / (2 + d)

    out = []
    grid = np.geomspace(lo, hi, density)
    for fn in (share, spread):
        vals = [fn(d) for d in grid]
        k = int(np.argmax(vals))
        a, b = math.log(grid[max(k - 1, 0)]), math.log(grid[min(k + 1, density - 1)])
        r = minimize_scalar(lambda t: -fn(math.exp(t)), bounds=(a, b), method="bounded", options={"xatol": 1e-12})
        out.append(max(vals[k], -r.fun))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# figure data and sweep specs


FIGURE_HEADERS = {
    "sum_gdof": ("alpha", "beta", "d"),
    "cog_gdof": ("alpha1", "beta", "d"),
}


def format_value(v) -> str:
    """p/q for exact rationals, 9 significant digits for reals, 'inf' for the infinite exponent."""
    if v is INFINITY or (isinstance(v, float) and math.isinf(v)):
        return "inf"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool) or v is None:
        return str(v).lower() if isinstance(v, bool) else ""
    if isinstance(v, int):
        return str(v)
    return f"{v:.9g}"


def _single(v, name: str):
    # sweep files give every key as a list; fixed exponents must have one entry
    if isinstance(v, (list, tuple)):
        if len(v) != 1:
            raise ValueError(f"{name} takes a single value")
        return v[0]
    return v


def emit_figure_data(kind: str, sweep: dict | None = None) -> tuple[tuple[str, ...], list[tuple]]:
    """Header and rows of a plot-ready table, ordered beta-major then by the swept exponent."""
    sweep = dict(sweep or {})
    if kind == "sum_gdof":
        alphas = sweep.get("alpha", [Fraction(k, 100) for k in range(301)])
        betas = sweep.get("beta", [Fraction(0), Fraction(1), Fraction(16, 5), INFINITY])
        aligned = bool(sweep.get("aligned", False))
        rows = [(a, b, gdof_sum(a, b, aligned)) for b in betas for a in alphas]
        return FIGURE_HEADERS[kind], rows
    if kind == "cog_gdof":
        alphas = sweep.get("alpha1", [Fraction(k, 100) for k in range(301)])
        betas = sweep.get("beta", [Fraction(0), Fraction(1), Fraction(2), INFINITY])
        n2 = _single(sweep.get("n2", Fraction(3, 2)), "n2")
        a2 = _single(sweep.get("alpha2", Fraction(1, 2)), "alpha2")
        rows = [(a, b, gdof_cog(n2, a, a2, b)) for b in betas for a in alphas]
        return FIGURE_HEADERS[kind], rows
    if kind == "gap_margins":
        grid = sweep.get("grid") or SymGrid()
        report = verify_gaps(grid, gaps=sweep.get("gaps"), density=int(sweep.get("density", 512)))
        cols = tuple(report.columns())
        return cols, [tuple(r[c] for c in cols) for r in report.records]
    raise ValueError(f"unknown figure kind {kind!r}; expected sum_gdof, cog_gdof or gap_margins")


_LOGSPACE = re.compile(r"^logspace\(\s*([-+\d.eE]+)\s*,\s*([-+\d.eE]+)\s*,\s*(\d+)\s*\)$")
_RANGE = re.compile(r"^([^:]+):([^:]+):([^:]+)$")


def _parse_values(text: str) -> list:
    text = text.strip()
    m = _LOGSPACE.match(text)
    if m:
        lo, hi, n = float(m.group(1)), float(m.group(2)), int(m.group(3))
        return [10.0**e for e in np.linspace(lo, hi, n)] if n > 1 else [10.0**lo]
    m = _RANGE.match(text)
    if m:
        start, stop, step = (_exp(g) for g in m.groups())
        if step <= 0:
            raise ValueError(f"range step must be positive: {text!r}")
        out, v = [], start
        while v <= stop:
            out.append(v)
            v += step
        return out
    vals = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok.lower() in ("pi", "π"):
            vals.append(math.pi)
        elif re.fullmatch(r"pi/\d+", tok.lower()):
            vals.append(math.pi / int(tok.split("/")[1]))
        elif tok.lower() in ("inf", "infinity", "∞"):
            vals.append(INFINITY)
        elif re.fullmatch(r"-?\d+(/\d+)?", tok):
            vals.append(Fraction(tok))
        else:
            vals.append(float(tok))
    return vals


def parse_sweep_spec(text: str) -> dict:
    """Parse ``key = values`` lines.

    Values are a comma list (``1, 10, pi/2, inf, 3/2``), ``logspace(a, b, n)``
    for n decades-spaced points from 10^a to 10^b, or ``start:stop:step`` for
    an inclusive exact-rational range.  ``kind`` takes a bare word.  ``#``
    starts a comment.
    """
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key in ("kind", "aligned"):
            out[key] = val.lower() if key == "kind" else val.lower() in ("1", "true", "yes")
        else:
            out[key] = _parse_values(val)
    return out


def grid_from_spec(spec: dict) -> SymGrid | CogGrid:
    kind = spec.get("kind", "sym")
    cls = {"sym": SymGrid, "cog": CogGrid}.get(kind)
    if cls is None:
        raise ValueError(f"unknown grid kind {kind!r}")
    keys = ("snr", "inr", "cnr", "theta") if cls is SymGrid else CogGrid._keys
    unknown = set(spec) - set(keys) - {"kind"}
    if unknown:
        raise ValueError(f"unknown keys for a {kind} grid: {sorted(unknown)}")
    kwargs = {k: tuple(float(v) for v in spec[k]) for k in keys if k in spec}
    return cls(**kwargs)


def load_sweep(path: str | Path) -> dict:
    return parse_sweep_spec(Path(path).read_text())


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    lines += [",".join(format_value(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"
