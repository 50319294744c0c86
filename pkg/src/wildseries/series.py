"""Truncated power series in one variable z.

A :class:`PowerSeries` of precision ``W`` is known modulo ``z^(W+1)``.  The
``exact`` flag marks a polynomial whose omitted coefficients are all zero; exact
operands never limit the precision of a result.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from .coeffring import Field
from .errors import (
    CompositionDomain,
    EmptyInput,
    FieldMismatch,
    NonUnitConstantTerm,
    NotAFixedPoint,
    NotInvertible,
    PrecisionTooSmall,
    ZeroInversion,
)


@dataclass(frozen=True)
class Unresolved:
    """An order that exceeds the stored precision: the true value is > ``above``."""

    above: int

    def __str__(self) -> str:
        return f">{self.above}"


OrderValue = Any  # int | float("inf") | Unresolved


def is_resolved(v: OrderValue) -> bool:
    return isinstance(v, int)


def _freeze(v):
    if isinstance(v, np.ndarray):
        v.setflags(write=False)
    return v


@dataclass(frozen=True, eq=False)
class PowerSeries:
    field: Field
    coeffs: Any
    prec: int
    exact: bool

    # -- construction -----------------------------------------------------
    @classmethod
    def _raw(cls, field: Field, coeffs, prec: int, exact: bool) -> "PowerSeries":
        return cls(field, _freeze(coeffs), prec, exact)

    def __post_init__(self):
        if self.field.vec_len(self.coeffs) != self.prec + 1:
            raise ValueError("coefficient vector length must be prec + 1")

    @classmethod
    def identity(cls, field: Field, prec: int) -> "PowerSeries":
        return make_series([0, 1], prec, exact=True, field=field)

    @classmethod
    def constant(cls, field: Field, c, prec: int) -> "PowerSeries":
        return make_series([c], prec, exact=True, field=field)

    @classmethod
    def monomial(cls, field: Field, c, k: int, prec: int) -> "PowerSeries":
        return make_series([field.zero] * k + [c], prec, exact=True, field=field)

    # -- access -----------------------------------------------------------
    def __getitem__(self, i: int):
        if i < 0:
            raise IndexError(i)
        if i > self.prec:
            if self.exact:
                return self.field.zero
            raise PrecisionTooSmall(f"coefficient of z^{i} is beyond the known precision z^{self.prec + 1}")
        return self.field.vec_get(self.coeffs, i)

    def coeff_list(self) -> list:
        return self.field.vec_list(self.coeffs)

    def degree(self) -> int:
        """Index of the last coefficient that is not an exact zero (-1 for none)."""
        lst = self.coeff_list()
        for i in range(len(lst) - 1, -1, -1):
            if not self.field._exact_zero(lst[i]):
                return i
        return -1

    def truncate(self, prec: int) -> "PowerSeries":
        if prec < 0:
            raise PrecisionTooSmall("precision must be >= 0")
        if prec > self.prec and not self.exact:
            raise PrecisionTooSmall(f"cannot extend an inexact series from z^{self.prec + 1} to z^{prec + 1}")
        exact = self.exact and self.degree() <= prec
        return PowerSeries._raw(self.field, self.field.vec_resize(self.coeffs, prec + 1), prec, exact)

    def with_prec(self, prec: int) -> "PowerSeries":
        """Resize to ``prec``; extension is allowed only for exact series."""
        return self if prec == self.prec else self.truncate(prec)

    # -- predicates -------------------------------------------------------
    def ord(self) -> OrderValue:
        F = self.field
        for i, c in enumerate(self.coeff_list()):
            if not F.is_zero(c):
                return i
        return math.inf if self.exact else Unresolved(self.prec)

    def mult(self) -> OrderValue:
        if not self.field.is_zero(self[0]):
            raise NotAFixedPoint("f(0) != 0")
        return (self - PowerSeries.identity(self.field, self.prec)).ord()

    def is_identity(self) -> bool:
        m = self.mult()
        return not isinstance(m, int)

    def eq_mod(self, other: "PowerSeries", n: int) -> bool:
        """Equality of the coefficients of z^0 .. z^(n-1)."""
        F = self.field
        F.check_same(other.field)
        return all(F.eq(self[i], other[i]) for i in range(n))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        if self.field != other.field or self.prec != other.prec or self.exact != other.exact:
            return False
        return self.eq_mod(other, self.prec + 1)

    __hash__ = None  # type: ignore[assignment]

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        return add(self, _lift(self, other))

    def __radd__(self, other):
        return add(_lift(self, other), self)

    def __sub__(self, other):
        return sub(self, _lift(self, other))

    def __rsub__(self, other):
        return sub(_lift(self, other), self)

    def __neg__(self):
        return PowerSeries._raw(self.field, self.field.vec_neg(self.coeffs), self.prec, self.exact)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return mul(self, other)
        return scalar_mul(self.field.coerce(other), self)

    def __rmul__(self, other):
        return scalar_mul(self.field.coerce(other), self)

    def __pow__(self, e: int):
        if e < 0:
            return mul_inverse(self) ** (-e)
        result = PowerSeries.constant(self.field, self.field.one, self.prec)
        base = self
        while e:
            if e & 1:
                result = mul(result, base)
            e >>= 1
            if e:
                base = mul(base, base)
        return result

    def __call__(self, g: "PowerSeries") -> "PowerSeries":
        return compose(self, g)

    def shift_down(self, k: int) -> "PowerSeries":
        """Divide by z^k; the first k coefficients must be zero."""
        F = self.field
        for i in range(min(k, self.prec + 1)):
            if not F.is_zero(self[i]):
                raise ValueError(f"series is not divisible by z^{k}")
        if k > self.prec and not self.exact:
            raise PrecisionTooSmall(f"nothing is known after dividing by z^{k}")
        prec = self.prec - k if not self.exact else max(self.prec - k, 0)
        return PowerSeries._raw(F, F.vec_shift(self.coeffs, -k, prec + 1), prec, self.exact)

    def shift_up(self, k: int) -> "PowerSeries":
        """Multiply by z^k, keeping the absolute precision."""
        F = self.field
        exact = self.exact and self.degree() + k <= self.prec
        return PowerSeries._raw(F, F.vec_shift(self.coeffs, k, self.prec + 1), self.prec, exact)

    def derivative(self) -> "PowerSeries":
        F = self.field
        d = F.vec_derivative(self.coeffs)
        prec = max(self.prec - 1, 0)
        return PowerSeries._raw(F, F.vec_resize(d, prec + 1), prec, self.exact)

    def map_coeffs(self, fn, field: Field | None = None) -> "PowerSeries":
        target = field or self.field
        return PowerSeries._raw(target, target.vec([fn(c) for c in self.coeff_list()]), self.prec, self.exact)

    # -- text -------------------------------------------------------------
    def fmt(self, var: str = "z") -> str:
        F = self.field
        parts = []
        for i, c in enumerate(self.coeff_list()):
            if F._exact_zero(c):
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            s = F.fmt(c)
            if not mono:
                parts.append(s)
            elif s == "1":
                parts.append(mono)
            else:
                if "+" in s or "-" in s:
                    s = f"({s})"
                parts.append(f"{s}*{mono}")
        body = "+".join(parts) if parts else "0"
        if not self.exact:
            body += f"+O({var}^{self.prec + 1})"
        return body

    def to_expr(self) -> str:
        """Render in the input grammar so that parsing reproduces this series."""
        F = self.field
        parts = []
        for i, c in enumerate(self.coeff_list()):
            if F._exact_zero(c):
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            s = F.expr(c)
            if not mono:
                parts.append(s)
            elif s == "1":
                parts.append(mono)
            else:
                parts.append(f"{s}*{mono}")
        body = " + ".join(parts) if parts else "0"
        if not self.exact:
            body += f" + O(z^{self.prec + 1})"
        return body

    def __str__(self) -> str:
        return self.fmt()

    def __repr__(self) -> str:
        return f"PowerSeries({self.fmt()}, prec={self.prec}, field={self.field.descriptor()})"


# --------------------------------------------------------------------------


def make_series(coeffs: Sequence | Iterable, W: int, exact: bool = True, field: Field | None = None) -> PowerSeries:
    """Series with the given coefficients known modulo z^(W+1)."""
    if field is None:
        raise TypeError("field is required")
    coeffs = list(coeffs)
    if not coeffs:
        raise EmptyInput("coefficient list is empty")
    if W < 1:
        raise PrecisionTooSmall("working precision W must be >= 1")
    vals = [field.coerce(c) for c in coeffs]
    if len(vals) > W + 1:
        if exact and any(not field._exact_zero(c) for c in vals[W + 1 :]):
            exact = False
        vals = vals[: W + 1]
    vals += [field.zero] * (W + 1 - len(vals))
    return PowerSeries._raw(field, field.vec(vals), W, exact)


def _lift(f: PowerSeries, x) -> PowerSeries:
    if isinstance(x, PowerSeries):
        return x
    return PowerSeries.constant(f.field, f.field.coerce(x), f.prec)


def _common(f: PowerSeries, g: PowerSeries) -> int:
    if f.field != g.field:
        raise FieldMismatch(f"{f.field.descriptor()} vs {g.field.descriptor()}")
    if f.exact and g.exact:
        return max(f.prec, g.prec)
    if f.exact:
        return g.prec
    if g.exact:
        return f.prec
    return min(f.prec, g.prec)


def _padded(f: PowerSeries, W: int):
    return f.field.vec_resize(f.coeffs, W + 1)


def order(f: PowerSeries) -> OrderValue:
    return f.ord()


def mult(f: PowerSeries) -> OrderValue:
    return f.mult()


def add(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    W = _common(f, g)
    F = f.field
    exact = f.exact and g.exact and max(f.degree(), g.degree()) <= W
    return PowerSeries._raw(F, F.vec_add(_padded(f, W), _padded(g, W)), W, exact)


def sub(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    W = _common(f, g)
    F = f.field
    exact = f.exact and g.exact and max(f.degree(), g.degree()) <= W
    return PowerSeries._raw(F, F.vec_sub(_padded(f, W), _padded(g, W)), W, exact)


def mul(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    W = _common(f, g)
    F = f.field
    exact = f.exact and g.exact and f.degree() + g.degree() <= W
    return PowerSeries._raw(F, F.vec_mul(_padded(f, W), _padded(g, W), W + 1), W, exact)


def scalar_mul(c, f: PowerSeries) -> PowerSeries:
    F = f.field
    return PowerSeries._raw(F, F.vec_scale(F.coerce(c), f.coeffs), f.prec, f.exact)


def compose(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """f(g(z)) modulo z^(W+1); requires g(0) = 0."""
    F = f.field
    if not F.is_zero(g[0]):
        raise CompositionDomain("inner series must vanish at 0")
    W = _common(f, g)
    df, dg = f.degree(), g.degree()
    exact = f.exact and g.exact and max(df, 0) * max(dg, 0) <= W
    fc = F.vec_resize(f.coeffs, min(W, max(df, 0)) + 1)
    out = F.vec_compose(fc, _padded(g, W), W + 1)
    return PowerSeries._raw(F, out, W, exact)


def mul_inverse(u: PowerSeries) -> PowerSeries:
    F = u.field
    try:
        inv = F.vec_inverse(u.coeffs, u.prec + 1)
    except ZeroInversion as exc:
        raise NonUnitConstantTerm("constant term is not invertible") from exc
    exact = u.exact and u.degree() <= 0
    return PowerSeries._raw(F, inv, u.prec, exact)


def comp_inverse(phi: PowerSeries) -> PowerSeries:
    """Compositional inverse by Newton iteration psi <- psi - (phi(psi) - z) / phi'(psi)."""
    F = phi.field
    if not F.is_zero(phi[0]):
        raise NotInvertible("phi(0) != 0")
    try:
        lead_inv = F.inv(phi[1])
    except ZeroInversion as exc:
        raise NotInvertible("phi'(0) is not invertible") from exc
    W = phi.prec
    z = PowerSeries.identity(F, W)
    if phi.exact and phi.degree() == 1:
        return scalar_mul(lead_inv, z)
    psi = scalar_mul(lead_inv, z).with_prec(W)
    psi = PowerSeries._raw(F, psi.coeffs, W, False)
    dphi = phi.derivative().with_prec(W) if phi.exact else _pad_inexact(phi.derivative(), W)
    # each Newton step doubles the number of correct coefficients
    for _ in range((W + 1).bit_length() + 1):
        err = compose(phi, psi) - z
        step = mul(err, mul_inverse(compose(dphi, psi)))
        psi = psi - step
    return psi


def _pad_inexact(f: PowerSeries, W: int) -> PowerSeries:
    # derivative of a series known mod z^(W+1) is known mod z^W; pad for Newton steps
    F = f.field
    return PowerSeries._raw(F, F.vec_resize(f.coeffs, W + 1), W, False)


def _check_fixed(f: PowerSeries) -> None:
    if not f.field.is_zero(f[0]):
        raise NotAFixedPoint("f(0) != 0")


def _short(f: PowerSeries) -> int | None:
    d = f.degree()
    return d if f.exact or d < f.prec else None


def iterate(f: PowerSeries, n: int) -> PowerSeries:
    """n-fold self-composition."""
    _check_fixed(f)
    if n < 0:
        raise ValueError("n must be >= 0")
    W = f.prec
    if n == 0:
        return PowerSeries.identity(f.field, W)
    d = f.degree()
    # repeated application of a short polynomial vs binary powering of full series
    if n * max(d, 1) <= 2 * max(n.bit_length(), 1) * (W + 1):
        g = f
        for _ in range(n - 1):
            g = compose(f, g)
        return g
    result = None
    base = f
    while n:
        if n & 1:
            result = base if result is None else compose(base, result)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def iterate_levels(f: PowerSeries, p: int, n_max: int) -> list[PowerSeries]:
    """[f, f^p, f^(p^2), ..., f^(p^n_max)], each level built from the previous one."""
    _check_fixed(f)
    levels = [f]
    d = f.degree()
    W = f.prec
    for n in range(1, n_max + 1):
        prev = levels[-1]
        # p more applications of the previous level, or p^n - p^(n-1) of f itself
        extra = p**n - p ** (n - 1)
        if extra * max(d, 1) <= (p - 1) * (W + 1):
            g = prev
            for _ in range(extra):
                g = compose(f, g)
        else:
            g = prev
            for _ in range(p - 1):
                g = compose(prev, g)
        levels.append(g)
    return levels


def conjugate(phi: PowerSeries, f: PowerSeries) -> PowerSeries:
    """phi o f o phi^(-1)."""
    _check_fixed(f)
    W = _common(phi, f)
    phi = phi.with_prec(W) if phi.exact else phi
    return compose(phi, compose(f, comp_inverse(phi.with_prec(W))))


def identity_like(f: PowerSeries) -> PowerSeries:
    return PowerSeries.identity(f.field, f.prec)
