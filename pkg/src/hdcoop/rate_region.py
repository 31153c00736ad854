"""Exact rate-region polytopes for the virtual interference channel.

Mutual informations on the deterministic model are ranks: every auxiliary
signal is a linear image of independent uniform bits, so
H(Y | C) = rank[G_Y; G_C] - rank G_C.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import gf2
from .capacity.ldm import cog_v_values, pos
from .exactlp import Infeasible, Unbounded, lp_max
from .codec.geometry import realizable_k
from .ldm import LdmCogParams, LdmSymParams

__all__ = [
    "LinIneq",
    "Polytope",
    "AuxSpec",
    "FMBlowup",
    "UnboundedRate",
    "ldm_mutual_info",
    "sym_aux_spec",
    "virtual_constraints_sym",
    "virtual_constraints_cog",
    "fourier_motzkin",
    "max_weighted_rate",
    "fm_max_weighted_rate",
    "argmax_weighted_rate",
    "closed_form_sum_virtual",
    "closed_form_cog_virtual",
    "tie_symmetric",
    "implies",
    "same_polytope",
    "SYM_VARS",
    "COG_VARS",
    "DEFAULT_FM_GUARD",
]

SYM_VARS = ("R_W1", "R_U1", "R_V1", "R_V1p", "R_W2", "R_U2", "R_V2", "R_V2p")
COG_VARS = ("R_W1", "R_U1", "R_V1", "R_W2", "R_U2")
DEFAULT_FM_GUARD = 20000


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class LinIneq:
    """sum(coeffs[v] * v) <= rhs."""

    coeffs: tuple  # sorted (name, Fraction) pairs with nonzero coefficients
    rhs: Fraction

    @classmethod
    def make(cls, coeffs: Mapping[str, object], rhs) -> "LinIneq":
        items = tuple(sorted((k, _frac(v)) for k, v in coeffs.items() if v != 0))
        return cls(items, _frac(rhs))

    @property
    def coef(self) -> dict:
        return dict(self.coeffs)

    @property
    def tautology(self) -> bool:
        return not self.coeffs and self.rhs >= 0

    def value(self, point: Mapping[str, object]) -> Fraction:
        return sum((c * _frac(point.get(k, 0)) for k, c in self.coeffs), Fraction(0))

    def holds(self, point: Mapping[str, object]) -> bool:
        return self.value(point) <= self.rhs

    def normalized(self) -> "LinIneq":
        """Scale so the largest |coefficient| is 1."""
        if not self.coeffs:
            return self
        m = max(abs(c) for _, c in self.coeffs)
        return LinIneq(tuple((k, c / m) for k, c in self.coeffs), self.rhs / m)

    def __str__(self) -> str:
        if not self.coeffs:
            return f"0 <= {_fmt(self.rhs)}"
        parts = []
        for i, (k, c) in enumerate(self.coeffs):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            term = k if mag == 1 else f"{_fmt(mag)}*{k}"
            if i == 0:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"{sign} {term}")
        return f"{' '.join(parts)} <= {_fmt(self.rhs)}"


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


_TERM = re.compile(r"([+-]?)\s*(?:([0-9]+(?:/[0-9]+)?)\*)?([A-Za-z_][A-Za-z0-9_]*)")


@dataclass(frozen=True)
class Polytope:
    """Inequality system over named rates; every variable is implicitly >= 0."""

    variables: tuple
    ineqs: tuple = ()

    def __post_init__(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        known = set(self.variables)
        for q in self.ineqs:
            for k, _ in q.coeffs:
                if k not in known:
                    raise ValueError(f"inequality uses unknown variable {k}")

    def contains(self, point: Mapping[str, object]) -> bool:
        if any(_frac(point.get(v, 0)) < 0 for v in self.variables):
            return False
        return all(q.holds(point) for q in self.ineqs)

    def with_ineqs(self, extra: Iterable[LinIneq]) -> "Polytope":
        return Polytope(self.variables, tuple(self.ineqs) + tuple(extra))

    def substitute(self, fixed: Mapping[str, object]) -> "Polytope":
        """Pin variables to values and drop them."""
        keep = tuple(v for v in self.variables if v not in fixed)
        out = []
        for q in self.ineqs:
            rhs = q.rhs
            co = {}
            for k, c in q.coeffs:
                if k in fixed:
                    rhs -= c * _frac(fixed[k])
                else:
                    co[k] = c
            out.append(LinIneq.make(co, rhs))
        return Polytope(keep, tuple(out))

    def to_text(self) -> str:
        lines = ["# variables: " + " ".join(self.variables)]
        lines += [str(q) for q in self.ineqs]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Polytope":
        variables: tuple = ()
        ineqs = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("variables:"):
                    variables = tuple(body.split(":", 1)[1].split())
                continue
            lhs, rhs = line.split("<=")
            co: dict = {}
            lhs = lhs.strip()
            if lhs != "0":
                pos_ = 0
                for m in _TERM.finditer(lhs):
                    if lhs[pos_:m.start()].strip():
                        raise ValueError(f"cannot parse {raw!r}")
                    pos_ = m.end()
                    sign = -1 if m.group(1) == "-" else 1
                    mag = Fraction(m.group(2)) if m.group(2) else Fraction(1)
                    co[m.group(3)] = co.get(m.group(3), 0) + sign * mag
                if lhs[pos_:].strip():
                    raise ValueError(f"cannot parse {raw!r}")
            ineqs.append(LinIneq.make(co, Fraction(rhs.strip())))
        return cls(variables, tuple(ineqs))


# ---------------------------------------------------------------- mutual info


@dataclass(frozen=True)
class AuxSpec:
    """Signals as linear maps of independent uniform base bits.

    ``signals[name]`` is a matrix with one column per base bit; all matrices
    share the same number of columns.
    """

    signals: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        widths = {np.asarray(g).shape[1] for g in self.signals.values()}
        if len(widths) > 1:
            raise ValueError("all signals must be maps from the same base bits")


def _stack(spec: AuxSpec, names: Iterable[str]) -> np.ndarray:
    mats = []
    for name in names:
        if name not in spec.signals:
            raise KeyError(f"unknown variable {name!r}")
        mats.append(np.asarray(spec.signals[name], dtype=np.uint8))
    if not mats:
        return np.zeros((0, 0), dtype=np.uint8)
    return np.concatenate(mats, axis=0)


def _entropy(spec: AuxSpec, names: Sequence[str]) -> int:
    return gf2.rank(_stack(spec, names)) if names else 0


def ldm_mutual_info(spec: AuxSpec, targets: Sequence[str], conditioning: Sequence[str] = (), output: str = "Y") -> int:
    """I(targets; output | conditioning) in bits, via ranks."""
    targets, conditioning = list(targets), list(conditioning)
    h_y_c = _entropy(spec, [output] + conditioning) - _entropy(spec, conditioning)
    tc = targets + conditioning
    h_y_tc = _entropy(spec, [output] + tc) - _entropy(spec, tc)
    return h_y_c - h_y_tc


def sym_aux_spec(nd: int, ni: int) -> AuxSpec:
    """Auxiliary layout of the symmetric scheme, observed at destinations 3 and 4.

    Base bits per source: V' (n), W (n), U (bottom (nd - ni)+ levels), V (n).
    X_V' = V', X_W = V' + W, X_U = V' + W + U; the cooperative private signal
    reaches its own destination unchanged and cancels at the other.
    """
    n = max(nd, ni)
    npriv = pos(nd - ni)
    blocks = {}
    col = 0
    for s in (1, 2):
        for name, width in (("Vp", n), ("W", n), ("U", npriv), ("V", n)):
            blocks[f"{name}{s}"] = (col, width)
            col += width
    total = col

    def embed(name: str, mat: np.ndarray) -> np.ndarray:
        start, width = blocks[name]
        out = np.zeros((mat.shape[0], total), dtype=np.uint8)
        out[:, start:start + width] = mat
        return out

    ident = gf2.identity(n)
    u_gen = np.zeros((n, npriv), dtype=np.uint8)
    for j in range(npriv):
        u_gen[n - npriv + j, j] = 1
    sig = {}
    for s in (1, 2):
        vp = embed(f"Vp{s}", ident)
        w = vp ^ embed(f"W{s}", ident)
        u = w ^ embed(f"U{s}", u_gen)
        sig[f"X_V{s}p"] = vp
        sig[f"X_W{s}"] = w
        sig[f"X_U{s}"] = u
        sig[f"V{s}"] = embed(f"V{s}", ident)
    d = gf2.shift_matrix(n, n - nd)
    c = gf2.shift_matrix(n, n - ni)
    sig["Y3"] = gf2.matmul(d, sig["X_U1"]) ^ gf2.matmul(c, sig["X_U2"]) ^ sig["V1"]
    sig["Y4"] = gf2.matmul(d, sig["X_U2"]) ^ gf2.matmul(c, sig["X_U1"]) ^ sig["V2"]
    return AuxSpec(sig)


# Destination-3 constraint family: (rate terms, targets, conditioning), written
# for (own, other) = (1, 2).
_DEST_TERMS = [
    (("U",), ("X_U",), ("X_W", "V", "X_Vp", "oX_W", "oX_Vp")),
    (("W", "U"), ("X_W", "X_U"), ("V", "X_Vp", "oX_W", "oX_Vp")),
    (("Vp", "W", "U"), ("X_W", "X_U", "X_Vp"), ("V", "oX_W", "oX_Vp")),
    (("V",), ("V",), ("X_W", "X_U", "X_Vp", "oX_W", "oX_Vp")),
    (("V", "U"), ("X_U", "V"), ("X_W", "X_Vp", "oX_W", "oX_Vp")),
    (("V", "W", "U"), ("X_W", "X_U", "V"), ("X_Vp", "oX_W", "oX_Vp")),
    (("V", "Vp", "W", "U"), ("X_W", "X_U", "V", "X_Vp"), ("oX_W", "oX_Vp")),
    (("oW", "U"), ("oX_W", "X_U"), ("X_W", "V", "X_Vp", "oX_Vp")),
    (("oW", "W", "U"), ("oX_W", "X_W", "X_U"), ("V", "X_Vp", "oX_Vp")),
    (("oW", "Vp", "W", "U"), ("oX_W", "X_W", "X_U", "X_Vp"), ("V", "oX_Vp")),
    (("oW", "V"), ("oX_W", "V"), ("X_W", "X_U", "X_Vp", "oX_Vp")),
    (("oW", "V", "U"), ("oX_W", "X_U", "V"), ("X_W", "X_Vp", "oX_Vp")),
    (("oW", "V", "W", "U"), ("oX_W", "X_W", "X_U", "V"), ("X_Vp", "oX_Vp")),
    (("oW", "V", "Vp", "W", "U"), ("X_W", "X_U", "X_Vp", "V", "oX_W"), ("oX_Vp",)),
]


def _signal_name(tag: str, own: int, other: int) -> str:
    src = other if tag.startswith("o") else own
    tag = tag[1:] if tag.startswith("o") else tag
    if tag == "V":
        return f"V{src}"
    if tag == "X_Vp":
        return f"X_V{src}p"
    return f"{tag}{src}"


def _rate_name(tag: str, own: int, other: int) -> str:
    src = other if tag.startswith("o") else own
    tag = tag[1:] if tag.startswith("o") else tag
    return f"R_{tag}{src}" if tag != "Vp" else f"R_V{src}p"


@lru_cache(maxsize=None)
def _sym_mi_table(nd: int, ni: int) -> tuple:
    spec = sym_aux_spec(nd, ni)
    rows = []
    for own, other, dest in ((1, 2, "Y3"), (2, 1, "Y4")):
        for rates, targets, cond in _DEST_TERMS:
            names = [_rate_name(t, own, other) for t in rates]
            t = [_signal_name(x, own, other) for x in targets]
            c = [_signal_name(x, own, other) for x in cond]
            rows.append((tuple(names), ldm_mutual_info(spec, t, c, output=dest)))
    return tuple(rows)


def virtual_constraints_sym(params: LdmSymParams, bp_ss=0, bp_sd=0, preshared: bool | None = None) -> Polytope:
    """Full virtual-channel system with every mutual information evaluated by rank.

    With weak interference (n_i < n_d) the scheme sends nothing across in the
    listening modes, so the pre-shared pipe is closed unless ``preshared`` is
    forced on.
    """
    nd, ni = params.n_d, params.n_i
    if preshared is None:
        preshared = ni >= nd
    if not preshared:
        bp_sd = 0
    ineqs = [
        LinIneq.make({"R_V1p": 1}, bp_sd),  # pipe 1 -> 4
        LinIneq.make({"R_V2p": 1}, bp_sd),  # pipe 2 -> 3
    ]
    for names, value in _sym_mi_table(nd, ni):
        ineqs.append(LinIneq.make({k: 1 for k in names}, value))
    ineqs += [LinIneq.make({"R_V1": 1}, bp_ss), LinIneq.make({"R_V2": 1}, bp_ss)]
    if nd == ni:
        # singular cross-coupled matrix: zero forcing impossible, no cooperative private message
        ineqs += [LinIneq.make({"R_V1": 1}, 0), LinIneq.make({"R_V2": 1}, 0)]
    return Polytope(SYM_VARS, tuple(ineqs))


def virtual_constraints_cog(params: LdmCogParams, bp_12=0) -> Polytope:
    n1, n2, a1, a2 = params.n1, params.n2, params.a1, params.a2
    k = realizable_k(params)
    rows = [
        ({"R_W1": 1, "R_U1": 1, "R_W2": 1, "R_V1": 1}, max(a1, n1)),
        ({"R_U1": 1, "R_W2": 1, "R_V1": 1}, max(a1, k)),
        ({"R_W1": 1, "R_U1": 1, "R_V1": 1}, max(n1, k)),
        ({"R_W1": 1, "R_U1": 1}, n1),
        ({"R_U1": 1, "R_W2": 1}, max(n1 - a2, a1)),
        ({"R_U1": 1, "R_V1": 1}, k),
        ({"R_U1": 1}, pos(n1 - a2)),
        ({"R_V1": 1}, bp_12),
        ({"R_W1": 1, "R_W2": 1, "R_U2": 1}, max(a2, n2)),
        ({"R_W1": 1, "R_U2": 1}, max(n2 - a1, a2)),
        ({"R_W2": 1, "R_U2": 1}, n2),
        ({"R_U2": 1}, pos(n2 - a1)),
    ]
    return Polytope(COG_VARS, tuple(LinIneq.make(c, r) for c, r in rows))


def tie_symmetric(p: Polytope) -> Polytope:
    """Impose R_X1 = R_X2 for every message type by substitution."""
    rename = {}
    for v in p.variables:
        m = re.fullmatch(r"R_([A-Z])([12])(p?)", v)
        rename[v] = f"R_{m.group(1)}{m.group(3)}" if m else v
    new_vars = tuple(dict.fromkeys(rename[v] for v in p.variables))
    ineqs = []
    for q in p.ineqs:
        co: dict = {}
        for k, c in q.coeffs:
            co[rename[k]] = co.get(rename[k], 0) + c
        ineqs.append(LinIneq.make(co, q.rhs))
    return Polytope(new_vars, tuple(ineqs))


# ---------------------------------------------------------------- elimination


class FMBlowup(RuntimeError):
    """The inequality count exceeded the configured guard."""


class UnboundedRate(ValueError):
    """The weighted rate is unbounded over the polytope."""


def _lp_rows(p: Polytope, skip: int | None = None):
    idx = {v: i for i, v in enumerate(p.variables)}
    a, b = [], []
    for j, q in enumerate(p.ineqs):
        if j == skip:
            continue
        row = [Fraction(0)] * len(p.variables)
        for k, c in q.coeffs:
            row[idx[k]] = c
        a.append(row)
        b.append(q.rhs)
    return a, b


def max_weighted_rate(p: Polytope, weights: Mapping[str, object]) -> Fraction:
    """Exact maximum of sum(weights[v] * v) over the polytope."""
    return argmax_weighted_rate(p, weights)[0]


def argmax_weighted_rate(p: Polytope, weights: Mapping[str, object]) -> tuple[Fraction, dict]:
    c = [_frac(weights.get(v, 0)) for v in p.variables]
    a, b = _lp_rows(p)
    try:
        val, x = lp_max(c, a, b)
    except Unbounded as exc:
        raise UnboundedRate(str(exc)) from exc
    return val, dict(zip(p.variables, x))


def _prune(p: Polytope) -> Polytope:
    # exact duplicates and scaled copies: keep the tightest right-hand side
    best: dict = {}
    infeasible = False
    for q in p.ineqs:
        if not q.coeffs:
            if q.rhs < 0:
                infeasible = True
            continue
        nq = q.normalized()
        if nq.coeffs not in best or nq.rhs < best[nq.coeffs].rhs:
            best[nq.coeffs] = nq
    if infeasible:
        return Polytope(p.variables, (LinIneq.make({}, -1),))
    # with x >= 0, r: a'x <= b' implies q: ax <= b whenever a' >= a and b' <= b
    items = list(best.values())
    keep = []
    for i, q in enumerate(items):
        qc = q.coef
        dominated = False
        for j, r in enumerate(items):
            if i == j:
                continue
            rc = r.coef
            names = set(qc) | set(rc)
            if r.rhs <= q.rhs and all(rc.get(k, 0) >= qc.get(k, 0) for k in names):
                dominated = True
                break
        if not dominated:
            keep.append(q)
    out = Polytope(p.variables, tuple(keep))
    # exact LP redundancy: drop an inequality whose left side cannot exceed its bound without it
    ineqs = list(out.ineqs)
    i = 0
    while i < len(ineqs):
        cur = Polytope(p.variables, tuple(ineqs))
        q = ineqs[i]
        a, b = _lp_rows(cur, skip=i)
        idx = {v: j for j, v in enumerate(p.variables)}
        c = [Fraction(0)] * len(p.variables)
        for k, v in q.coeffs:
            c[idx[k]] = v
        try:
            val, _ = lp_max(c, a, b)
            redundant = val <= q.rhs
        except Unbounded:
            redundant = False
        except Infeasible:
            return Polytope(p.variables, (LinIneq.make({}, -1),))
        if redundant:
            ineqs.pop(i)
        else:
            i += 1
    return Polytope(p.variables, tuple(ineqs))


def fourier_motzkin(p: Polytope, eliminate: Sequence[str], guard: int = DEFAULT_FM_GUARD, prune: bool = True) -> Polytope:
    """Project out ``eliminate`` (each implicitly >= 0) exactly."""
    for v in eliminate:
        if v not in p.variables:
            raise KeyError(f"unknown variable {v!r}")
    if not eliminate:
        return p
    cur = p
    for v in eliminate:
        upper, lower, rest = [], [], []
        for q in cur.ineqs + (LinIneq.make({v: -1}, 0),):
            c = q.coef.get(v, 0)
            (upper if c > 0 else lower if c < 0 else rest).append(q)
        new = list(rest)
        for u in upper:
            cu = u.coef[v]
            for l in lower:
                cl = -l.coef[v]
                co: dict = {}
                for k, c in u.coeffs:
                    co[k] = co.get(k, 0) + c * cl
                for k, c in l.coeffs:
                    co[k] = co.get(k, 0) + c * cu
                co.pop(v, None)
                new.append(LinIneq.make(co, u.rhs * cl + l.rhs * cu))
                if len(new) > guard:
                    raise FMBlowup(f"more than {guard} inequalities while eliminating {v}")
        cur = Polytope(tuple(x for x in cur.variables if x != v), tuple(new))
        if prune:
            cur = _prune(cur)
    return cur


def fm_max_weighted_rate(p: Polytope, weights: Mapping[str, object], guard: int = DEFAULT_FM_GUARD) -> Fraction:
    """Maximum of sum(weights[v] * v) by projecting the polytope onto that sum."""
    name = "S"
    while name in p.variables:
        name += "_"
    ws = {v: _frac(weights.get(v, 0)) for v in p.variables}
    if any(w < 0 for w in ws.values()):
        raise ValueError("weights must be nonnegative")
    link = {k: -w for k, w in ws.items() if w}
    ext = Polytope(p.variables + (name,), p.ineqs).with_ineqs(
        [LinIneq.make({name: 1, **link}, 0), LinIneq.make({name: -1, **{k: -c for k, c in link.items()}}, 0)]
    )
    proj = fourier_motzkin(ext, list(p.variables), guard=guard)
    best = None
    for q in proj.ineqs:
        c = q.coef.get(name, 0)
        if c > 0:
            val = q.rhs / c
            best = val if best is None else min(best, val)
        elif c == 0 and q.rhs < 0:
            raise UnboundedRate("polytope is empty")
    if best is None:
        raise UnboundedRate("weighted rate is unbounded")
    return best


def implies(p: Polytope, q: LinIneq) -> bool:
    """True if every point of p satisfies q."""
    idx = {v: j for j, v in enumerate(p.variables)}
    c = [Fraction(0)] * len(p.variables)
    for k, v in q.coeffs:
        if k not in idx:
            raise KeyError(k)
        c[idx[k]] = v
    a, b = _lp_rows(p)
    try:
        val, _ = lp_max(c, a, b)
    except Unbounded:
        return False
    except Infeasible:
        return True
    return val <= q.rhs


def same_polytope(p: Polytope, q: Polytope) -> bool:
    """Set equality via mutual implication (variables must match as sets)."""
    if set(p.variables) != set(q.variables):
        return False
    q2 = Polytope(p.variables, q.ineqs)
    return all(implies(p, r) for r in q2.ineqs) and all(implies(q2, r) for r in p.ineqs)


# ---------------------------------------------------------------- closed forms


def closed_form_sum_virtual(nd: int, ni: int, bp_ss, bp_sd=0) -> Fraction:
    """Eliminated symmetric sum rate of the virtual channel (nd != ni)."""
    if nd == ni:
        raise ValueError("closed form needs n_d != n_i")
    ss, sd = _frac(bp_ss), _frac(bp_sd)
    if ni < nd:
        return 2 * min(Fraction(nd), nd - Fraction(ni, 2) + ss / 2, max(ni, nd - ni) + ss)
    return 2 * min(nd + ss, (ni + ss + sd) / 2, Fraction(ni))


def closed_form_cog_virtual(params: LdmCogParams, bp_12) -> Fraction:
    v1, v2, v3, v4 = cog_v_values(params.n1, params.n2, params.a1, params.a2)
    b = _frac(bp_12)
    return min(Fraction(v1), v2 + b, Fraction(v3), v4 + b)


def enumerate_vertices(p: Polytope) -> list[dict]:
    """All vertices by brute force over active sets; for small test oracles only."""
    nvar = len(p.variables)
    rows = [(q.coef, q.rhs) for q in p.ineqs]
    rows += [({v: Fraction(-1)}, Fraction(0)) for v in p.variables]
    verts = []
    for combo in itertools.combinations(range(len(rows)), nvar):
        mat = [[_frac(rows[i][0].get(v, 0)) for v in p.variables] + [rows[i][1]] for i in combo]
        sol = _solve_exact(mat, nvar)
        if sol is None:
            continue
        pt = dict(zip(p.variables, sol))
        if p.contains(pt) and pt not in verts:
            verts.append(pt)
    return verts


def _solve_exact(mat, n):
    m = [row[:] for row in mat]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]
