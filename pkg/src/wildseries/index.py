"""Residue fixed point index and iterative residue.

Two independent routes to ``ind(f)``: reading the 1/z coefficient of
``1/(z - f(z))`` directly, and a closed polynomial in the coefficients
``a_q .. a_2q`` summed over the integer partitions of q.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

from .errors import (
    CharTwo,
    IdentitySeries,
    InsufficientPrecision,
    NotMultiple,
    PartsMismatch,
)
from .series import PowerSeries, mul_inverse


@dataclass(frozen=True)
class MultiIndex:
    """(iota_0, ..., iota_q); admissible ones have weight q and degree q."""

    entries: tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.entries) - 1

    @property
    def weight(self) -> int:
        return sum(self.entries)

    @property
    def degree(self) -> int:
        return sum(j * e for j, e in enumerate(self.entries))


def _partitions(n: int, largest: int):
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


@lru_cache(maxsize=None)
def enumerate_multi_indices(q: int) -> tuple[MultiIndex, ...]:
    """One index per partition of q: iota_j counts the parts equal to j."""
    if q < 1:
        raise ValueError("q must be >= 1")
    out = []
    for parts in _partitions(q, q):
        entries = [0] * (q + 1)
        for k in parts:
            entries[k] += 1
        entries[0] = q - len(parts)
        out.append(MultiIndex(tuple(entries)))
    return tuple(out)


def multinomial(n: int, parts) -> int:
    parts = list(parts)
    if any(k < 0 for k in parts) or sum(parts) != n:
        raise PartsMismatch(f"parts {parts} do not sum to {n}")
    out = math.factorial(n)
    for k in parts:
        out //= math.factorial(k)
    return out


def _multiplicity(f: PowerSeries) -> int:
    m = f.mult()
    if not isinstance(m, int):
        raise IdentitySeries("f agrees with z to the available precision")
    return m


def laurent_index(f: PowerSeries):
    """Coefficient of 1/z in 1/(z - f(z))."""
    F = f.field
    m = _multiplicity(f)
    if not f.exact and f.prec < 2 * m - 1:
        raise InsufficientPrecision(f"need precision >= {2 * m - 1} for multiplicity {m}, have {f.prec}")
    z = PowerSeries.identity(F, f.prec)
    w = (z - f).shift_down(m)
    if w.prec < m - 1:
        w = w.with_prec(m - 1)
    return mul_inverse(w)[m - 1]


def index_coefficients(f: PowerSeries) -> list:
    """a_q .. a_2q where f = z(1 + sum a_j z^j) and q = mult(f) - 1."""
    m = _multiplicity(f)
    q = m - 1
    if q < 1:
        raise NotMultiple("closed formula needs mult(f) >= 2")
    if not f.exact and f.prec < 2 * q + 1:
        raise InsufficientPrecision(f"need precision >= {2 * q + 1}, have {f.prec}")
    return [f[j + 1] for j in range(q, 2 * q + 1)]


def closed_polynomial(field, a: list):
    """The closed formula evaluated at (a_q, ..., a_2q)."""
    q = len(a) - 1
    total = field.zero
    for iota in enumerate_multi_indices(q):
        i0 = iota.entries[0]
        coeff = multinomial(q - i0, iota.entries[1:])
        if (q - i0) % 2:
            coeff = -coeff
        term = field.from_int(coeff)
        for j, e in enumerate(iota.entries):
            if e:
                term = field.mul(term, field.pow(a[j], e))
        total = field.add(total, term)
    return field.neg(field.mul(field.pow(field.inv(a[0]), q + 1), total))


def closed_index(f: PowerSeries):
    return closed_polynomial(f.field, index_coefficients(f))


def index(f: PowerSeries):
    """ind(f), by the closed formula when mult(f) >= 2 and by direct expansion otherwise."""
    m = _multiplicity(f)
    return closed_index(f) if m >= 2 else laurent_index(f)


def half_multiplicity(field, m: int):
    if field.characteristic == 2:
        raise CharTwo("the iterative residue needs 1/2")
    return field.mul(field.from_int(m), field.inv(field.from_int(2)))


def resit(f: PowerSeries):
    """mult(f)/2 - ind(f)."""
    F = f.field
    if F.characteristic == 2:
        raise CharTwo("the iterative residue needs 1/2")
    m = _multiplicity(f)
    return F.sub(half_multiplicity(F, m), index(f))


@dataclass(frozen=True)
class IndexReport:
    multiplicity: int
    q: int
    ind: Any
    resit: Any  # None in characteristic 2
    algorithm: str  # "laurent" | "closed" | "both-agree"


def index_report(f: PowerSeries) -> IndexReport:
    F = f.field
    m = _multiplicity(f)
    ind_l = laurent_index(f)
    algo = "laurent"
    if m >= 2:
        ind_c = closed_index(f)
        if not F.eq(ind_l, ind_c):
            raise AssertionError(f"index algorithms disagree: {F.fmt(ind_l)} vs {F.fmt(ind_c)}")
        algo = "both-agree"
    r = None if F.characteristic == 2 else F.sub(half_multiplicity(F, m), ind_l)
    return IndexReport(m, m - 1, ind_l, r, algo)
