"""Ramification of wildly ramified series and the normal-form pipeline."""
from __future__ import annotations

import contextvars
import math
from contextlib import contextmanager
from dataclasses import dataclass, field as dc_field
from typing import Any

from .coeffring import ExtensionField, Field, PrimeField, multiplicative_order, q_th_root
from .errors import (
    InsufficientPrecision,
    NoQthRoot,
    NotAFixedPoint,
    NotFiniteOrder,
    NotTangentToIdentity,
    ObstructedTerm,
    OutOfRange,
    ZeroInversion,
)
from .index import index, resit
from .series import (
    PowerSeries,
    Unresolved,
    compose,
    conjugate,
    iterate,
    iterate_levels,
    make_series,
)

EQUALITY = "equality-at-all-computed-levels"
NOT_RAMIFIED = "no"
CRITERION_ONLY = "criterion-only"


def delta_sequence(f: PowerSeries, m_max: int) -> list[PowerSeries]:
    """Delta_0 = z and Delta_m = Delta_{m-1} o f - Delta_{m-1}."""
    if not f.field.is_zero(f[0]):
        raise NotAFixedPoint("f(0) != 0")
    d = PowerSeries.identity(f.field, f.prec)
    out = [d]
    for _ in range(m_max):
        d = compose(d, f) - d
        out.append(d)
    return out


def sen_lower_bound(q: int, p: int, n: int) -> int:
    return q * (p ** (n + 1) - 1) // (p - 1)


def required_precision(q: int, p: int, n: int) -> int:
    """Precision at which i_n is resolved whenever it attains its lower bound."""
    return sen_lower_bound(q, p, n) + q + 1


@dataclass(frozen=True)
class RamificationLevel:
    n: int
    i: Any  # int, or Unresolved carrying "i_n > above"
    delta: Any = None

    @property
    def resolved(self) -> bool:
        return isinstance(self.i, int)


@dataclass(frozen=True)
class RamificationReport:
    p: int
    q: Any
    levels: tuple[RamificationLevel, ...]
    sen_congruence: tuple  # per level n >= 1: True/False, None when undecided
    sen_bound: tuple  # per level: True/False, None when undecided or q > p-1
    verdict: str
    resit: Any = None
    notes: tuple[str, ...] = dc_field(default_factory=tuple)

    @property
    def i(self) -> list:
        return [lv.i for lv in self.levels]


_OBSERVERS: contextvars.ContextVar[tuple] = contextvars.ContextVar("ramification_observers", default=())


@contextmanager
def observe_reports(callback):
    """Call ``callback(report)`` for every report built inside the block."""
    token = _OBSERVERS.set(_OBSERVERS.get() + (callback,))
    try:
        yield
    finally:
        _OBSERVERS.reset(token)


def sen_violations(report: RamificationReport) -> list[str]:
    """Sen's congruence and lower bound, recomputed from the levels."""
    p, q = report.p, report.q
    out = []
    lv = report.levels
    for n in range(1, len(lv)):
        if lv[n].resolved and lv[n - 1].resolved and (lv[n].i - lv[n - 1].i) % p**n:
            out.append(f"i_{n}={lv[n].i} and i_{n - 1}={lv[n - 1].i} differ mod p^{n}")
    if q is not None and q <= p - 1:
        for n, level in enumerate(lv):
            if level.resolved and level.i < sen_lower_bound(q, p, n):
                out.append(f"i_{n}={level.i} < {sen_lower_bound(q, p, n)}")
    return out


def _tangent_check(f: PowerSeries) -> None:
    F = f.field
    if not F.is_zero(f[0]):
        raise NotAFixedPoint("f(0) != 0")
    if not F.eq(f[1], F.one):
        raise NotTangentToIdentity("f'(0) != 1")


def _level(n: int, g: PowerSeries) -> RamificationLevel:
    m = g.mult()
    if isinstance(m, int):
        return RamificationLevel(n, m - 1, g[m])
    if m == math.inf:
        return RamificationLevel(n, math.inf, None)
    return RamificationLevel(n, Unresolved(m.above - 1), None)


def lower_ramification(f: PowerSeries, n_max: int) -> RamificationReport:
    """i_n(f) = mult(f^(p^n)) - 1 and delta_n for n = 0 .. n_max."""
    p = f.field.characteristic
    if p == 0:
        raise OutOfRange("lower ramification numbers need positive characteristic")
    _tangent_check(f)
    levels = tuple(_level(n, g) for n, g in enumerate(iterate_levels(f, p, n_max)))
    q = levels[0].i if levels[0].resolved else None

    congr, bound, notes = [], [], []
    for n, lv in enumerate(levels):
        if n >= 1:
            prev = levels[n - 1]
            congr.append((lv.i - prev.i) % p**n == 0 if lv.resolved and prev.resolved else None)
        if q is None or q > p - 1:
            bound.append(None)
        elif lv.resolved:
            bound.append(lv.i >= sen_lower_bound(q, p, n))
        elif isinstance(lv.i, Unresolved):
            bound.append(True if lv.i.above >= sen_lower_bound(q, p, n) - 1 else None)
        else:
            bound.append(True)

    verdict = EQUALITY
    if q is None:
        verdict = CRITERION_ONLY
        notes.append("i_0 is not resolved at this precision")
    else:
        for n, lv in enumerate(levels):
            target = sen_lower_bound(q, p, n)
            if lv.resolved:
                if lv.i != target:
                    verdict = NOT_RAMIFIED
                    break
            elif lv.i == math.inf or lv.i.above >= target:
                verdict = NOT_RAMIFIED
                break
            else:
                verdict = CRITERION_ONLY
                notes.append(
                    f"level {n} unresolved; precision >= {required_precision(q, p, n)} resolves it"
                )
                break

    r = None
    if p != 2 and q is not None and (f.exact or f.prec >= 2 * q + 1):
        r = resit(f)
    report = RamificationReport(p, q, levels, tuple(congr), tuple(bound), verdict, r, tuple(notes))
    for callback in _OBSERVERS.get():
        callback(report)
    return report


def is_q_ramified(f: PowerSeries, mode: str = "criterion", n_max: int = 2) -> bool:
    """Whether i_n(f) = q(1 + p + ... + p^n) for every n.

    ``criterion`` tests resit(f) != 0; ``direct`` computes i_0 .. i_n_max.
    """
    p = f.field.characteristic
    _tangent_check(f)
    m = f.mult()
    if not isinstance(m, int):
        raise InsufficientPrecision("multiplicity is not resolved")
    q = m - 1
    if mode == "criterion":
        if p == 2 or p == 0:
            raise OutOfRange("criterion needs an odd characteristic")
        if q >= p or q % p == 0:
            raise OutOfRange(f"criterion needs 1 <= q <= p-1, got q={q}, p={p}")
        return not f.field.is_zero(resit(f))
    if mode != "direct":
        raise ValueError(f"unknown mode {mode!r}")
    need = required_precision(q, p, n_max)
    if f.prec < need:
        if not f.exact:
            raise InsufficientPrecision(f"direct mode needs precision >= {need}, have {f.prec}")
        f = f.with_prec(need)
    rep = lower_ramification(f, n_max)
    if rep.verdict == CRITERION_ONLY:
        raise InsufficientPrecision("; ".join(rep.notes))
    return rep.verdict == EQUALITY


@dataclass(frozen=True)
class Inapplicable:
    reason: str


def laubie_saine_predict(i0: int, i1: int, p: int, n: int):
    """i_n = i_0 + (1 + p + ... + p^(n-1)) (i_1 - i_0) when p does not divide i_0 and i_1 < (p^2-p+1) i_0."""
    if i0 % p == 0:
        return Inapplicable(f"p={p} divides i_0={i0}")
    if not i1 < (p * p - p + 1) * i0:
        return Inapplicable(f"i_1={i1} >= (p^2-p+1) i_0 = {(p * p - p + 1) * i0}")
    if n == 0:
        return i0
    return i0 + (p**n - 1) // (p - 1) * (i1 - i0)


def _short_form(f: PowerSeries):
    F = f.field
    p = F.characteristic
    if p in (0, 2):
        raise OutOfRange("needs an odd characteristic")
    _tangent_check(f)
    m = f.mult()
    if not isinstance(m, int):
        raise InsufficientPrecision("multiplicity is not resolved")
    q = m - 1
    if not 1 <= q <= p - 1:
        raise OutOfRange(f"needs 1 <= q <= p-1, got q={q}, p={p}")
    if not f.exact and f.prec < 3 * q + 1:
        raise InsufficientPrecision(f"need precision >= {3 * q + 1} to read the coefficients")
    for j in list(range(q + 2, 2 * q + 1)) + list(range(2 * q + 2, 3 * q + 2)):
        if not F.is_zero(f[j]):
            raise OutOfRange(f"f is not z(1 + a0 z^q + a1 z^2q) mod z^{3 * q + 2} (z^{j} term)")
    return F, p, q, f[q + 1], f[2 * q + 1]


def chi_psi(f: PowerSeries, n: int):
    """The two leading coefficients of f^(p^n) - z for f = z(1 + a0 z^q + a1 z^2q + ...)."""
    F, p, q, a0, a1 = _short_form(f)
    if n == 0:
        return a0, a1
    r = F.sub(F.mul(F.from_int(q + 1), F.inv(F.from_int(2))), F.div(a1, F.mul(a0, a0)))
    d = (p ** (n + 1) - 1) // (p - 1)
    e = (p**n - 1) // (p - 1)
    chi = F.mul(F.pow(a0, d), F.pow(r, e))
    psi = F.neg(F.mul(F.pow(a0, d + 1), F.pow(r, e + 1)))
    return chi, psi


def chi_psi_exponents(q: int, p: int, n: int) -> tuple[int, int]:
    d = (p ** (n + 1) - 1) // (p - 1)
    return q * d + 1, q * d + q + 1


def _split(f: PowerSeries):
    F = f.field
    if not F.is_zero(f[0]):
        raise NotAFixedPoint("f(0) != 0")
    m = f.mult()
    if not isinstance(m, int):
        raise InsufficientPrecision("multiplicity is not resolved")
    return F, m - 1


def remove_term(f: PowerSeries, k: int):
    """Conjugate by z(1 + c z^k) to kill the z^(q+k+1) coefficient; returns (phi, g)."""
    F, q = _split(f)
    if k < 1:
        raise ValueError("k must be >= 1")
    kq = F.from_int(k - q)
    if F.is_zero(kq):
        raise ObstructedTerm(f"k={k} equals q={q} in the coefficient field")
    a_q = f[q + 1]
    if F.is_zero(a_q):
        raise OutOfRange("leading coefficient vanishes")
    c = F.neg(F.div(f[q + k + 1], F.mul(a_q, kq)))
    phi = make_series([0, 1] + [0] * (k - 1) + [c], max(f.prec, k + 1), exact=True, field=F)
    if F.is_zero(c):
        return phi, f
    return phi, conjugate(phi, f)


@dataclass(frozen=True)
class NormalForm:
    conjugacy: PowerSeries
    g: PowerSeries
    ind: Any
    ind_after_first_stage: Any
    valid_below: int  # g matches the normal form mod z^valid_below


def _root_extension_degree(a, q: int, F: Field, bound: int = 64) -> int | None:
    """Least k such that a has a q-th root in the degree-k extension of F."""
    size = F.size()
    for k in range(1, bound + 1):
        order = size**k - 1
        g = math.gcd(q, order)
        if F.eq(F.pow(a, order // g), F.one):
            return k
    return None


def normal_form(f: PowerSeries) -> NormalForm:
    """Conjugate f to z(1 + z^q + ind(f) z^2q) mod z^(2q+p+1)."""
    F, q = _split(f)
    p = F.characteristic
    if not isinstance(F, (PrimeField, ExtensionField)):
        raise OutOfRange("normal form searches q-th roots in a finite field")
    if not 1 <= q <= p - 1:
        raise OutOfRange(f"needs 1 <= q <= p-1, got q={q}, p={p}")
    top = 2 * q + p + 1
    if f.prec < top:
        if not f.exact:
            raise InsufficientPrecision(f"need precision >= {top}, have {f.prec}")
        f = f.with_prec(top)
    W = f.prec
    a = f[q + 1]
    target = F.inv(a)
    gamma = q_th_root(target, q, F)
    if gamma is None:
        k = _root_extension_degree(target, q, F)
        hint = f"; one exists in the degree-{k} extension" if k else ""
        raise NoQthRoot(
            f"1/a_q = {F.fmt(target)} has no q-th root (q={q}) in {F.descriptor()}{hint}",
            extension_degree=k,
        )
    phi = make_series([0, F.inv(gamma)], W, exact=True, field=F)
    g = conjugate(phi, f)
    total = phi
    for k in range(1, q):
        step, g = remove_term(g, k)
        total = compose(step, total)
    ind_first = g[2 * q + 1]
    for k in range(q + 1, q + p):
        step, g = remove_term(g, k)
        total = compose(step, total)
    return NormalForm(total, g, index(f), ind_first, top)


def normal_form_model(F: Field, q: int, ind, prec: int) -> PowerSeries:
    """z(1 + z^q + ind z^2q)."""
    coeffs = [F.zero] * (2 * q + 2)
    coeffs[1] = F.one
    coeffs[q + 1] = F.add(coeffs[q + 1], F.one)
    coeffs[2 * q + 1] = F.add(coeffs[2 * q + 1], ind)
    return make_series(coeffs, prec, exact=True, field=F)


@dataclass(frozen=True)
class MultiplierReduction:
    order: int
    g: PowerSeries
    q_prime: Any
    resit: Any
    verdict: str


def multiplier_order_reduce(f: PowerSeries, bound: int = 10**6) -> MultiplierReduction:
    """For f'(0) a root of unity of order q: study g = f^q, which is tangent to the identity."""
    F = f.field
    if not F.is_zero(f[0]):
        raise NotAFixedPoint("f(0) != 0")
    q = multiplicative_order(f[1], F, bound)
    if q is None:
        raise NotFiniteOrder(f"f'(0) = {F.fmt(f[1])} has no order <= {bound}")
    g = iterate(f, q)
    m = g.mult()
    if not isinstance(m, int):
        return MultiplierReduction(q, g, m, None, "unresolved")
    qp = m - 1
    p = F.characteristic
    r = None
    if p != 2 and (g.exact or g.prec >= 2 * qp + 1):
        try:
            r = resit(g)
        except ZeroInversion:
            r = None
    if p in (0, 2) or not 1 <= qp <= p - 1 or r is None:
        verdict = "criterion-inapplicable"
    else:
        verdict = f"{qp}-ramified" if not F.is_zero(r) else f"not {qp}-ramified"
    return MultiplierReduction(q, g, qp, r, verdict)
