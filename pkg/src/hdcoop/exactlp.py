"""Exact rational linear programs.

HiGHS (through scipy) finds a candidate primal/dual pair in floating point.
Both are rounded to nearby rationals and the optimality certificate
(primal feasibility, dual feasibility, equal objectives) is then checked in
exact arithmetic.  If the certificate fails, the problem is re-solved with
sympy's exact simplex.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

__all__ = ["LPError", "Unbounded", "Infeasible", "lp_max"]


class LPError(ValueError):
    pass


class Unbounded(LPError):
    pass


class Infeasible(LPError):
    pass


def _rat(x: float, limit: int = 10**6) -> Fraction:
    return Fraction(float(x)).limit_denominator(limit)


def _dot(row, x) -> Fraction:
    return sum((a * b for a, b in zip(row, x) if a), Fraction(0))


def lp_max(
    c: Sequence,
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> tuple[Fraction, list[Fraction]]:
    """Maximize c·x subject to a_ub x <= b_ub, a_eq x = b_eq, x >= 0, exactly."""
    c = [Fraction(v) for v in c]
    a_ub = [[Fraction(v) for v in row] for row in a_ub]
    b_ub = [Fraction(v) for v in b_ub]
    a_eq = [[Fraction(v) for v in row] for row in a_eq]
    b_eq = [Fraction(v) for v in b_eq]
    nvar = len(c)
    if nvar == 0:
        if any(b < 0 for b in b_ub) or any(b != 0 for b in b_eq):
            raise Infeasible("empty feasible set")
        return Fraction(0), []
    res = linprog(
        -np.array(c, dtype=float),
        A_ub=np.array(a_ub, dtype=float).reshape(len(a_ub), nvar) if a_ub else None,
        b_ub=np.array(b_ub, dtype=float) if b_ub else None,
        A_eq=np.array(a_eq, dtype=float).reshape(len(a_eq), nvar) if a_eq else None,
        b_eq=np.array(b_eq, dtype=float) if b_eq else None,
        bounds=[(0, None)] * nvar,
        method="highs",
    )
    if res.status == 3:
        raise Unbounded("objective is unbounded")
    if res.status == 2:
        raise Infeasible("empty feasible set")
    if res.status == 0:
        cert = _certify(c, a_ub, b_ub, a_eq, b_eq, res)
        if cert is not None:
            return cert
    return _sympy_max(c, a_ub, b_ub, a_eq, b_eq)


def _certify(c, a_ub, b_ub, a_eq, b_eq, res):
    x = [_rat(v) for v in res.x]
    if any(v < 0 for v in x):
        return None
    if any(_dot(row, x) > b for row, b in zip(a_ub, b_ub)):
        return None
    if any(_dot(row, x) != b for row, b in zip(a_eq, b_eq)):
        return None
    # scipy reports marginals of the minimization of -c; duals of the max are their negatives
    y = [-_rat(v) for v in res.ineqlin.marginals] if a_ub else []
    z = [-_rat(v) for v in res.eqlin.marginals] if a_eq else []
    if any(v < 0 for v in y):
        return None
    for j in range(len(c)):
        col = sum((a_ub[i][j] * y[i] for i in range(len(y))), Fraction(0))
        col += sum((a_eq[i][j] * z[i] for i in range(len(z))), Fraction(0))
        if col < c[j]:
            return None
    primal = _dot(c, x)
    dual = _dot(b_ub, y) + _dot(b_eq, z)
    if primal != dual:
        return None
    return primal, x


def _sympy_max(c, a_ub, b_ub, a_eq, b_eq):
    from sympy import Rational
    from sympy.solvers.simplex import InfeasibleLPError, UnboundedLPError, linprog as slp

    def conv(rows):
        return [[Rational(v.numerator, v.denominator) for v in row] for row in rows] or None

    def convv(vals):
        return [Rational(v.numerator, v.denominator) for v in vals] or None

    try:
        val, x = slp(
            [-Rational(v.numerator, v.denominator) for v in c],
            A=conv(a_ub),
            b=convv(b_ub),
            A_eq=conv(a_eq),
            b_eq=convv(b_eq),
        )
    except UnboundedLPError as exc:
        raise Unbounded(str(exc)) from exc
    except InfeasibleLPError as exc:
        raise Infeasible(str(exc)) from exc
    return -Fraction(str(val)), [Fraction(str(v)) for v in x]
