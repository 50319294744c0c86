"""Valuations, Newton polygons and periodic-point bounds over F_p((t)).

Valuations are additive (v(t) = 1), so a norm lower bound |x| >= r reads
v(x) <= -log r.  Root valuations come from Newton polygon slopes: a segment of
slope s and length L certifies L roots of valuation -s.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .coeffring import LaurentField, PrecisionZero, PrimeField, t_valuation
from .errors import (
    EmptyRange,
    NotDivisible,
    NotIntegral,
    OutOfRange,
    PrecisionLoss,
    ZeroDivisor,
)
from .index import resit
from .series import PowerSeries, iterate_levels, mul, mul_inverse


@dataclass(frozen=True)
class InfiniteWithinPrecision:
    """The reduction vanishes through z^prec."""

    prec: int


def _laurent(F: PowerSeries) -> LaurentField:
    if not isinstance(F.field, LaurentField):
        raise OutOfRange("series must have coefficients in F_p((t))")
    return F.field


def _residue(c, i: int) -> int:
    if c.unit:
        if c.val < 0:
            raise NotIntegral(f"coefficient of z^{i} has valuation {c.val}")
        return c.unit[0] if c.val == 0 else 0
    if c.absprec is not None and c.absprec < 1:
        raise PrecisionLoss(f"coefficient of z^{i} is unknown mod t")
    return 0


def reduce(F: PowerSeries) -> PowerSeries:
    """Coefficientwise reduction modulo the maximal ideal."""
    K = _laurent(F)
    k = PrimeField(K.p)
    vals = [_residue(c, i) for i, c in enumerate(F.coeff_list())]
    return PowerSeries._raw(k, k.vec(vals), F.prec, F.exact)


def weierstrass_degree(F: PowerSeries):
    r = reduce(F).ord()
    return r if isinstance(r, int) else InfiniteWithinPrecision(F.prec)


@dataclass(frozen=True)
class NewtonPolygon:
    start: int
    stop: int
    vertices: tuple[tuple[int, int], ...]
    segments: tuple[tuple[Fraction, int], ...]  # (slope, horizontal length)

    def root_valuations(self) -> list[tuple[Fraction, int]]:
        return [(-s, L) for s, L in self.segments]

    @property
    def min_root_valuation(self) -> Fraction | None:
        return -self.segments[-1][0] if self.segments else None

    @property
    def max_root_valuation(self) -> Fraction | None:
        return -self.segments[0][0] if self.segments else None

    @property
    def width(self) -> int:
        return sum(L for _, L in self.segments)


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    hull: list[tuple[int, int]] = []
    for pt in sorted(points):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return hull


def _hull_value(hull, x: int) -> Fraction:
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        if x0 <= x <= x1:
            return Fraction(y0) + Fraction(y1 - y0, x1 - x0) * (x - x0)
    raise ValueError("outside hull")


def newton_polygon(F: PowerSeries, start: int, stop: int | None = None) -> NewtonPolygon:
    """Lower convex hull of (i, v(c_i)) over start <= i <= stop.

    A coefficient known only to vanish mod t^N may sit inside the range as long
    as (i, N) lies on or above the hull of the known points; otherwise it could
    change the hull and PrecisionLoss is raised.
    """
    _laurent(F)
    stop = F.prec if stop is None else stop
    if stop > F.prec:
        raise PrecisionLoss(f"range end {stop} exceeds the known precision {F.prec}")
    if start > stop:
        raise EmptyRange(f"empty range [{start}, {stop}]")
    points, fuzzy = [], []
    for i in range(start, stop + 1):
        c = F[i]
        if c.unit:
            points.append((i, c.val))
        elif c.absprec is not None:
            fuzzy.append((i, c.absprec))
    if not points:
        raise EmptyRange(f"no nonzero coefficient in [{start}, {stop}]")
    lo, hi = points[0][0], points[-1][0]
    hull = lower_hull(points)
    for i, N in fuzzy:
        if lo <= i <= hi and N < _hull_value(hull, i):
            raise PrecisionLoss(f"coefficient of z^{i} is only known mod t^{N}; raise tprec")
    segs = tuple(
        (Fraction(y1 - y0, x1 - x0), x1 - x0) for (x0, y0), (x1, y1) in zip(hull, hull[1:])
    )
    return NewtonPolygon(lo, hi, tuple(hull), segs)


def series_quotient(F: PowerSeries, G: PowerSeries) -> PowerSeries:
    """F / G, for G with ord(G) <= ord(F)."""
    k = G.ord()
    if not isinstance(k, int):
        raise ZeroDivisor("divisor vanishes to the available precision")
    K = F.field
    for i in range(min(k, F.prec + 1)):
        c = F[i]
        zeroish = not c.unit if K.kind == "laurent" else K.is_zero(c)
        if not zeroish:
            raise NotDivisible(f"ord(F) < ord(G) = {k}")
    W = min(F.prec, G.prec) - k
    if W < 0:
        raise NotDivisible("nothing is known about the quotient")
    num = PowerSeries._raw(K, K.vec_shift(F.coeffs, -k, W + 1), W, False)
    den = PowerSeries._raw(K, K.vec_shift(G.coeffs, -k, W + 1), W, False)
    return mul(num, mul_inverse(den))


def _val(x):
    v = t_valuation(x)
    if isinstance(v, PrecisionZero):
        raise PrecisionLoss(f"value is only known mod t^{v.absprec}")
    return v


@dataclass(frozen=True)
class PeriodicLevel:
    n: int
    i_n: int
    v_delta: int
    ratio_bound: Fraction  # v(delta_n / delta_{n-1}) / p^n, or v(delta_0) at n = 0
    wideg: Any
    wideg_expected: int
    equality: bool
    polygon: NewtonPolygon | None
    min_root_valuation: Fraction | None
    max_root_valuation: Fraction | None


@dataclass(frozen=True)
class PeriodicBoundReport:
    p: int
    q: int
    v_a: int
    v_resit: Any  # int or math.inf
    bound: Fraction | None  # v(a) + v(resit)/p, None when vacuous
    vacuous: bool
    levels: tuple[PeriodicLevel, ...]


def _check_integral(f: PowerSeries) -> None:
    for i, c in enumerate(f.coeff_list()):
        if c.unit and c.val < 0:
            raise NotIntegral(f"coefficient of z^{i} has valuation {c.val}")


def _level_polygon(Q: PowerSeries, lo: int):
    wd = weierstrass_degree(Q)
    if not isinstance(wd, int):
        return wd, None
    if wd == lo:
        return wd, None
    return wd, newton_polygon(Q, lo, wd)


def periodic_bound_report(f: PowerSeries, n_max: int = 1) -> PeriodicBoundReport:
    """Compare periodic-point norms read from Newton polygons with the resit bound."""
    K = _laurent(f)
    p = K.p
    if p == 2:
        raise OutOfRange("needs an odd characteristic")
    _check_integral(f)
    if not K.is_zero(f[0]) or not K.eq(f[1], K.one):
        raise OutOfRange("f must be z + higher order terms")
    m = f.mult()
    if not isinstance(m, int):
        raise OutOfRange("multiplicity is not resolved")
    q = m - 1
    if not 1 <= q <= p - 1:
        raise OutOfRange(f"needs 1 <= q <= p-1, got q={q}, p={p}")
    a = f[q + 1]
    v_a = _val(a)
    r = resit(f)
    vacuous = K.is_zero(r)
    v_r = math.inf if vacuous else _val(r)
    bound = None if vacuous else Fraction(v_a) + Fraction(v_r, p)

    z = PowerSeries.identity(K, f.prec)
    iters = iterate_levels(f, p, n_max)
    diffs = [g - z for g in iters]
    levels = []
    prev_i = prev_v = None
    for n, D in enumerate(diffs):
        i_n = D.ord()
        if not isinstance(i_n, int):
            raise PrecisionLoss(f"f^(p^{n}) - z vanishes to precision {f.prec}; raise the precision")
        i_n -= 1
        v_delta = _val(D[i_n + 1])
        if n == 0:
            Q = D.shift_down(i_n + 1)
            ratio = Fraction(v_delta)
            expected = i_n + 2
            wd, poly = _level_polygon(Q, 0)
            wideg_full = wd + i_n + 1 if isinstance(wd, int) else wd
        else:
            Q = series_quotient(D, diffs[n - 1])
            ratio = Fraction(v_delta - prev_v, p**n)
            expected = i_n - prev_i + p**n
            lo = i_n - prev_i
            wd, poly = _level_polygon(Q, lo)
            wideg_full = wd
        levels.append(
            PeriodicLevel(
                n=n,
                i_n=i_n,
                v_delta=v_delta,
                ratio_bound=ratio,
                wideg=wideg_full,
                wideg_expected=expected,
                equality=wideg_full == expected,
                polygon=poly,
                min_root_valuation=poly.min_root_valuation if poly else None,
                max_root_valuation=poly.max_root_valuation if poly else None,
            )
        )
        prev_i, prev_v = i_n, v_delta
    return PeriodicBoundReport(p, q, v_a, v_r, bound, vacuous, tuple(levels))


def delta_valuation_formula(v_a: int, v_resit: int, p: int, n: int) -> Fraction:
    """v(delta_n) predicted from v(a) and v(resit)."""
    return Fraction((p ** (n + 1) - 1) // (p - 1) * v_a + (p**n - 1) // (p - 1) * v_resit)
