"""Exact coefficient arithmetic.

Elements are plain Python values interpreted by a field object:

* :class:`PrimeField` -- ``int`` in ``range(p)``
* :class:`ExtensionField` -- ``tuple`` of ``deg`` residues (low degree first)
* :class:`RationalField` -- :class:`fractions.Fraction`
* :class:`LaurentField` -- :class:`LaurentElement` (truncated F_p((t)))
* :class:`BivariateRing` -- :class:`BivariatePolynomial` over F_p

Every field also carries the coefficient-vector operations used by
:mod:`wildseries.series`.  The generic versions work on tuples; the prime field
overrides them with the int64 kernels from :mod:`wildseries.kernels`.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import (
    FieldMismatch,
    InvalidDescriptor,
    PrecisionLoss,
    UnsupportedField,
    ZeroInversion,
)

DEFAULT_TPREC = 64
MAX_ENUM = 10**6


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for sp in small:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Base class: element arithmetic plus tuple-backed vector operations."""

    kind = "abstract"
    is_field = True
    characteristic = 0

    # -- identity ---------------------------------------------------------
    def _key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.descriptor()}>"

    def descriptor(self) -> str:
        raise NotImplementedError

    def check_same(self, other: "Field") -> None:
        if self != other:
            raise FieldMismatch(f"{self.descriptor()} vs {other.descriptor()}")

    # -- elements ---------------------------------------------------------
    zero: Any
    one: Any

    def from_int(self, n: int):
        raise NotImplementedError

    def coerce(self, x):
        if isinstance(x, (int, np.integer)):
            return self.from_int(int(x))
        return x

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def is_zero(self, a) -> bool:
        return a == self.zero

    def eq(self, a, b) -> bool:
        return self.is_zero(self.sub(a, b))

    def _exact_zero(self, a) -> bool:
        """Zero test that never raises; used only to skip work."""
        return self.is_zero(a)

    def fmt(self, a) -> str:
        return str(a)

    def expr(self, a) -> str:
        """Render ``a`` in the series-expression grammar (parenthesised if needed)."""
        return self.fmt(a)

    # -- vectors (tuples) -------------------------------------------------
    def vec(self, seq: Iterable) -> Any:
        return tuple(self.coerce(c) for c in seq)

    def vec_zeros(self, n: int):
        return (self.zero,) * n

    def vec_len(self, v) -> int:
        return len(v)

    def vec_get(self, v, i: int):
        return v[i]

    def vec_list(self, v) -> list:
        return list(v)

    def vec_resize(self, v, n: int):
        if len(v) >= n:
            return tuple(v[:n])
        return tuple(v) + (self.zero,) * (n - len(v))

    def vec_set(self, v, i: int, c):
        lst = list(v)
        lst[i] = c
        return tuple(lst)

    def vec_add(self, a, b):
        return tuple(self.add(x, y) for x, y in zip(a, b))

    def vec_sub(self, a, b):
        return tuple(self.sub(x, y) for x, y in zip(a, b))

    def vec_neg(self, a):
        return tuple(self.neg(x) for x in a)

    def vec_scale(self, c, a):
        return tuple(self.mul(c, x) for x in a)

    def vec_shift(self, a, k: int, n: int):
        """Multiply by z^k (k may be negative to divide) and resize to n."""
        if k >= 0:
            return self.vec_resize((self.zero,) * k + tuple(a), n)
        return self.vec_resize(tuple(a[-k:]), n)

    def vec_mul(self, a, b, n: int):
        out = [self.zero] * n
        a = a[:n]
        b = b[:n]
        add, mul = self.add, self.mul
        for i, ai in enumerate(a):
            if self._exact_zero(ai):
                continue
            for j in range(min(len(b), n - i)):
                out[i + j] = add(out[i + j], mul(ai, b[j]))
        return tuple(out)

    def vec_compose(self, f, g, n: int):
        f = list(f[:n])
        while len(f) > 1 and self._exact_zero(f[-1]):
            f.pop()
        if not f:
            return self.vec_zeros(n)
        d = len(f) - 1
        acc: tuple = (f[d],)
        for k in range(d - 1, -1, -1):
            m = n - k
            acc = self.vec_mul(acc, g[:m], m)
            acc = (self.add(acc[0], f[k]),) + acc[1:]
        return self.vec_resize(acc, n)

    def vec_inverse(self, u, n: int):
        inv0 = self.inv(u[0])
        out = [inv0]
        for k in range(1, n):
            s = self.zero
            for j in range(1, min(k, len(u) - 1) + 1):
                if not self._exact_zero(u[j]):
                    s = self.add(s, self.mul(u[j], out[k - j]))
            out.append(self.neg(self.mul(s, inv0)))
        return tuple(out)

    def vec_derivative(self, a):
        return tuple(self.mul(self.from_int(i), a[i]) for i in range(1, len(a)))

    # -- finite fields ----------------------------------------------------
    def size(self) -> int | None:
        return None

    def elements(self) -> Iterator:
        raise UnsupportedField(f"{self.descriptor()} is not a finite field")

    def random_element(self, rng: np.random.Generator):
        raise NotImplementedError


# --------------------------------------------------------------------------
# F_p


class PrimeField(Field):
    kind = "prime"

    def __init__(self, p: int):
        if not is_prime(p):
            raise InvalidDescriptor(f"p={p} is not prime")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1
        self.fast = p < 2**31

    def _key(self):
        return ("prime", self.p)

    def descriptor(self) -> str:
        return f"p={self.p}"

    def from_int(self, n: int) -> int:
        return int(n) % self.p

    def coerce(self, x):
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroInversion("inverse of 0")
        return pow(int(a), self.p - 2, self.p)

    def pow(self, a, e: int):
        if e < 0:
            return pow(int(self.inv(a)), -e, self.p)
        return pow(int(a), e, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def eq(self, a, b) -> bool:
        return (a - b) % self.p == 0

    def size(self) -> int:
        return self.p

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def random_element(self, rng):
        return int(rng.integers(0, self.p))

    # -- int64 vectors ----------------------------------------------------
    def vec(self, seq):
        if not self.fast:
            return super().vec(seq)
        return np.array([int(c) % self.p for c in seq], dtype=np.int64)

    def vec_zeros(self, n):
        return np.zeros(n, np.int64) if self.fast else super().vec_zeros(n)

    def vec_get(self, v, i):
        return int(v[i])

    def vec_list(self, v):
        return [int(c) for c in v]

    def vec_resize(self, v, n):
        if not self.fast:
            return super().vec_resize(v, n)
        out = np.zeros(n, np.int64)
        m = min(n, len(v))
        out[:m] = v[:m]
        return out

    def vec_set(self, v, i, c):
        if not self.fast:
            return super().vec_set(v, i, c)
        out = v.copy()
        out[i] = int(c) % self.p
        return out

    def vec_add(self, a, b):
        return (a + b) % self.p if self.fast else super().vec_add(a, b)

    def vec_sub(self, a, b):
        return (a - b) % self.p if self.fast else super().vec_sub(a, b)

    def vec_neg(self, a):
        return (-a) % self.p if self.fast else super().vec_neg(a)

    def vec_scale(self, c, a):
        if not self.fast:
            return super().vec_scale(c, a)
        return (a * (int(c) % self.p)) % self.p

    def vec_shift(self, a, k, n):
        if not self.fast:
            return super().vec_shift(a, k, n)
        out = np.zeros(n, np.int64)
        if k >= 0:
            m = max(0, min(len(a), n - k))
            out[k : k + m] = a[:m]
        else:
            src = a[-k:]
            m = min(len(src), n)
            out[:m] = src[:m]
        return out

    def vec_mul(self, a, b, n):
        if not self.fast:
            return super().vec_mul(a, b, n)
        return kernels.ACTIVE.mul_trunc(a, b, n, self.p)

    def vec_compose(self, f, g, n):
        if not self.fast:
            return super().vec_compose(f, g, n)
        return kernels.ACTIVE.compose(f, g, n, self.p)

    def vec_inverse(self, u, n):
        if not self.fast:
            return super().vec_inverse(u, n)
        if u[0] % self.p == 0:
            raise ZeroInversion("constant term is 0")
        return kernels.ACTIVE.inverse(u, n, self.p)

    def vec_derivative(self, a):
        if not self.fast:
            return super().vec_derivative(a)
        idx = np.arange(1, len(a), dtype=np.int64) % self.p
        return (a[1:] * idx) % self.p


# --------------------------------------------------------------------------
# F_p[x]/(m)


def _poly_divmod_mod_p(num: list[int], den: list[int], p: int) -> tuple[list[int], list[int]]:
    num = list(num)
    while den and den[-1] % p == 0:
        den = den[:-1]
    if not den:
        raise ZeroInversion("division by the zero polynomial")
    inv_lead = pow(den[-1], p - 2, p)
    dd = len(den) - 1
    quot = [0] * max(len(num) - dd, 1)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] % p
        if c == 0:
            continue
        c = c * inv_lead % p
        quot[i - dd] = c
        for j in range(dd + 1):
            num[i - dd + j] = (num[i - dd + j] - c * den[j]) % p
    return quot, [c % p for c in num[:dd]]


class ExtensionField(Field):
    """F_p[x]/(m) for a monic irreducible modulus m (coefficients low to high)."""

    kind = "extension"

    def __init__(self, p: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise InvalidDescriptor(f"p={p} is not prime")
        mod = [int(c) % p for c in modulus]
        while mod and mod[-1] == 0:
            mod.pop()
        if len(mod) < 2 or mod[-1] != 1:
            raise InvalidDescriptor("extension modulus must be monic of degree >= 1")
        self.p = p
        self.modulus = tuple(mod)
        self.deg = len(mod) - 1
        if p**self.deg > MAX_ENUM:
            raise InvalidDescriptor(f"p^deg = {p}^{self.deg} exceeds {MAX_ENUM}")
        if not self._irreducible():
            raise InvalidDescriptor(f"modulus {self._poly_str(self.modulus, 'x')} is reducible over F_{p}")
        self.characteristic = p
        self.zero = (0,) * self.deg
        self.one = (1,) + (0,) * (self.deg - 1)

    def _irreducible(self) -> bool:
        p, d = self.p, self.deg
        for k in range(1, d // 2 + 1):
            for tail in itertools.product(range(p), repeat=k):
                _, rem = _poly_divmod_mod_p(list(self.modulus), list(tail) + [1], p)
                if not any(rem):
                    return False
        return True

    def _key(self):
        return ("extension", self.p, self.modulus)

    @staticmethod
    def _poly_str(coeffs, var: str) -> str:
        parts = []
        for i in range(len(coeffs) - 1, -1, -1):
            c = coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return "+".join(parts) if parts else "0"

    def descriptor(self) -> str:
        return f"p={self.p};ext={self._poly_str(self.modulus, 'x')}"

    def gen(self) -> tuple:
        if self.deg == 1:
            return ((-self.modulus[0]) % self.p,)
        return (0, 1) + (0,) * (self.deg - 2)

    def from_int(self, n: int):
        return (int(n) % self.p,) + (0,) * (self.deg - 1)

    def coerce(self, x):
        if isinstance(x, (int, np.integer)):
            return self.from_int(int(x))
        x = tuple(int(c) % self.p for c in x)
        if len(x) != self.deg:
            _, rem = _poly_divmod_mod_p(list(x), list(self.modulus), self.p)
            x = tuple(rem) + (0,) * (self.deg - len(rem))
        return x

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        p, d = self.p, self.deg
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        mod = self.modulus
        for i in range(len(prod) - 1, d - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(d):
                    prod[i - d + j] -= c * mod[j]
        return tuple(c % p for c in prod[:d])

    def inv(self, a):
        if not any(a):
            raise ZeroInversion("inverse of 0")
        return self.pow(a, self.p**self.deg - 2)

    def is_zero(self, a) -> bool:
        return not any(c % self.p for c in a)

    def eq(self, a, b) -> bool:
        return all((x - y) % self.p == 0 for x, y in zip(a, b))

    def fmt(self, a) -> str:
        return self._poly_str(a, "x")

    def expr(self, a) -> str:
        s = self.fmt(a)
        return f"({s})" if "+" in s else s

    def size(self) -> int:
        return self.p**self.deg

    def elements(self):
        return (tuple(c) for c in itertools.product(range(self.p), repeat=self.deg))

    def random_element(self, rng):
        return tuple(int(c) for c in rng.integers(0, self.p, size=self.deg))


# --------------------------------------------------------------------------
# Q


class RationalField(Field):
    kind = "rational"

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def _key(self):
        return ("rational",)

    def descriptor(self) -> str:
        return "rational"

    def from_int(self, n):
        return Fraction(int(n))

    def coerce(self, x):
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroInversion("inverse of 0")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def expr(self, a) -> str:
        return str(a) if a.denominator == 1 and a >= 0 else f"({a})"

    def random_element(self, rng, height: int = 5):
        num = int(rng.integers(-height, height + 1))
        den = int(rng.integers(1, height + 1))
        return Fraction(num, den)


# --------------------------------------------------------------------------
# F_p((t)) with capped relative precision


class LaurentElement:
    """t^val * (unit[0] + unit[1] t + ...), known modulo t^absprec.

    ``absprec is None`` marks an exact value.  An empty ``unit`` is zero: the
    exact zero when ``absprec is None``, otherwise a precision-zero known only
    to lie in t^absprec F_p[[t]].
    """

    __slots__ = ("val", "unit", "absprec")

    def __init__(self, val: int, unit: tuple, absprec: int | None):
        self.val = val
        self.unit = unit
        self.absprec = absprec

    @property
    def is_exact_zero(self) -> bool:
        return not self.unit and self.absprec is None

    @property
    def is_precision_zero(self) -> bool:
        return not self.unit and self.absprec is not None

    def __repr__(self) -> str:
        return f"LaurentElement({self.val}, {self.unit}, {self.absprec})"


@dataclass(frozen=True)
class PrecisionZero:
    """Valuation marker: the element is 0 modulo t^absprec, nothing more is known."""

    absprec: int


class LaurentField(Field):
    """F_p((t)) with every element truncated to ``tprec`` digits past its valuation."""

    kind = "laurent"

    def __init__(self, p: int, tprec: int = DEFAULT_TPREC):
        if not is_prime(p):
            raise InvalidDescriptor(f"p={p} is not prime")
        if tprec < 1:
            raise InvalidDescriptor("tprec must be >= 1")
        self.p = p
        self.tprec = tprec
        self.characteristic = p
        self.zero = LaurentElement(0, (), None)
        self.one = LaurentElement(0, (1,), None)

    def _key(self):
        return ("laurent", self.p, self.tprec)

    def descriptor(self) -> str:
        return f"p={self.p};laurent=t;tprec={self.tprec}"

    def residue_field(self) -> PrimeField:
        return PrimeField(self.p)

    def t(self) -> LaurentElement:
        return LaurentElement(1, (1,), None)

    def monomial(self, c: int, k: int) -> LaurentElement:
        return self.make(k, [c], None)

    def make(self, val: int, coeffs: Sequence[int], absprec: int | None) -> LaurentElement:
        p, M = self.p, self.tprec
        coeffs = [int(c) % p for c in coeffs]
        if absprec is not None and absprec - val < len(coeffs):
            coeffs = coeffs[: max(absprec - val, 0)]
        i = 0
        while i < len(coeffs) and coeffs[i] == 0:
            i += 1
        if i == len(coeffs):
            return self.zero if absprec is None else LaurentElement(0, (), absprec)
        val += i
        coeffs = coeffs[i:]
        while coeffs[-1] == 0:
            coeffs.pop()
        if absprec is None:
            if len(coeffs) > M:
                coeffs = coeffs[:M]
                absprec = val + M
        else:
            absprec = min(absprec, val + M)
            coeffs = coeffs[: absprec - val]
            while coeffs[-1] == 0:
                coeffs.pop()
        return LaurentElement(val, tuple(coeffs), absprec)

    def from_int(self, n):
        n = int(n) % self.p
        return self.zero if n == 0 else LaurentElement(0, (n,), None)

    def coerce(self, x):
        if isinstance(x, LaurentElement):
            return x
        return self.from_int(x)

    @staticmethod
    def _lowest(x: LaurentElement) -> int:
        """A lower bound for the valuation (the valuation itself when nonzero)."""
        return x.val if x.unit else x.absprec

    def add(self, a, b):
        if a.is_exact_zero:
            return b
        if b.is_exact_zero:
            return a
        ap = _min_prec(a.absprec, b.absprec)
        if not a.unit and not b.unit:
            return LaurentElement(0, (), ap)
        nz = [x for x in (a, b) if x.unit]
        lo = min(x.val for x in nz)
        hi = max(x.val + len(x.unit) for x in nz)
        if ap is not None:
            hi = min(hi, ap)
        if hi <= lo:
            return LaurentElement(0, (), ap)
        coeffs = [0] * (hi - lo)
        for x in nz:
            off = x.val - lo
            # a term starting at or past hi lies entirely below the known precision
            for i, c in enumerate(x.unit[: max(hi - x.val, 0)]):
                coeffs[off + i] += c
        return self.make(lo, coeffs, ap)

    def neg(self, a):
        if not a.unit:
            return a
        p = self.p
        return LaurentElement(a.val, tuple((-c) % p for c in a.unit), a.absprec)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a.is_exact_zero or b.is_exact_zero:
            return self.zero
        if not a.unit or not b.unit:
            return LaurentElement(0, (), self._lowest(a) + self._lowest(b))
        val = a.val + b.val
        rel = _min_prec(None if a.absprec is None else a.absprec - a.val,
                        None if b.absprec is None else b.absprec - b.val)
        ua, ub = a.unit, b.unit
        if rel is not None:
            ua, ub = ua[:rel], ub[:rel]
        coeffs = _convolve_mod(ua, ub, self.p, rel)
        return self.make(val, coeffs, None if rel is None else val + rel)

    def inv(self, a):
        if not a.unit:
            raise ZeroInversion("inverse of an element indistinguishable from 0")
        p = self.p
        if a.absprec is None and len(a.unit) == 1:
            return LaurentElement(-a.val, (pow(a.unit[0], p - 2, p),), None)
        rel = self.tprec if a.absprec is None else a.absprec - a.val
        u = np.array(a.unit[:rel], dtype=np.int64)
        if p < 2**31:
            inv = kernels.ACTIVE.inverse(u, rel, p)
        else:
            inv = PrimeField(p).vec_inverse(tuple(int(c) for c in u), rel)
        return self.make(-a.val, [int(c) for c in inv], -a.val + rel)

    def is_zero(self, a) -> bool:
        if a.unit:
            return False
        if a.absprec is None:
            return True
        raise PrecisionLoss(f"value is only known to be 0 mod t^{a.absprec}; raise tprec")

    def _exact_zero(self, a) -> bool:
        return a.is_exact_zero

    def eq(self, a, b) -> bool:
        return not self.sub(a, b).unit

    def valuation(self, a):
        if a.unit:
            return a.val
        if a.absprec is None:
            return math.inf
        return PrecisionZero(a.absprec)

    def fmt(self, a) -> str:
        if not a.unit:
            return "0" if a.absprec is None else f"O(t^{a.absprec})"
        parts = []
        for i, c in enumerate(a.unit):
            if c == 0:
                continue
            k = a.val + i
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        if a.absprec is not None:
            parts.append(f"O(t^{a.absprec})")
        return "+".join(parts)

    def expr(self, a) -> str:
        if a.absprec is not None or (a.unit and a.val < 0):
            raise UnsupportedField("only exact polynomials in t have an expression form")
        s = self.fmt(a)
        return f"({s})" if "+" in s else s

    def random_element(self, rng, vmin: int = 0, length: int = 4):
        coeffs = [int(c) for c in rng.integers(0, self.p, size=length)]
        return self.make(vmin, coeffs, None)


def _min_prec(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _convolve_mod(a: Sequence[int], b: Sequence[int], p: int, n: int | None) -> list[int]:
    la, lb = len(a), len(b)
    if la * lb > 64 and p < 2**31 and min(la, lb) < kernels._acc_limit(p):
        c = np.convolve(np.asarray(a, np.int64), np.asarray(b, np.int64)) % p
        out = c.tolist()
    else:
        out = [0] * (la + lb - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
    if n is not None:
        out = out[:n]
    return out


def t_valuation(x) -> int | float | PrecisionZero:
    """Valuation of a truncated Laurent element: ``inf`` for exact zero."""
    if not isinstance(x, LaurentElement):
        raise UnsupportedField("t_valuation needs an element of F_p((t))")
    if x.unit:
        return x.val
    return math.inf if x.absprec is None else PrecisionZero(x.absprec)


# --------------------------------------------------------------------------
# F_p[x0, x1]


class BivariatePolynomial:
    """Sparse polynomial in x0, x1 over F_p; ``terms`` maps (i, j) to a nonzero residue."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: dict | None = None):
        self.p = p
        self.terms = {k: c % p for k, c in (terms or {}).items() if c % p}

    @classmethod
    def const(cls, p: int, c: int) -> "BivariatePolynomial":
        return cls(p, {(0, 0): c})

    @classmethod
    def x0(cls, p: int) -> "BivariatePolynomial":
        return cls(p, {(1, 0): 1})

    @classmethod
    def x1(cls, p: int) -> "BivariatePolynomial":
        return cls(p, {(0, 1): 1})

    @classmethod
    def monomial(cls, p: int, c: int, i: int, j: int) -> "BivariatePolynomial":
        return cls(p, {(i, j): c})

    @classmethod
    def from_rational(cls, p: int, terms: dict) -> "BivariatePolynomial":
        """Reduce a polynomial with Fraction coefficients into F_p; denominators must be prime to p."""
        out = {}
        for k, c in terms.items():
            c = Fraction(c)
            if c.denominator % p == 0:
                raise ZeroInversion(f"denominator {c.denominator} is divisible by {p}")
            out[k] = c.numerator * pow(c.denominator, p - 2, p)
        return cls(p, out)

    def _check(self, other) -> "BivariatePolynomial":
        if isinstance(other, int):
            return BivariatePolynomial.const(self.p, other)
        if other.p != self.p:
            raise FieldMismatch(f"F_{self.p}[x0,x1] vs F_{other.p}[x0,x1]")
        return other

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return BivariatePolynomial(self.p, terms)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePolynomial(self.p, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        terms: dict = {}
        for (i, j), c in self.terms.items():
            for (k, l), d in other.terms.items():
                key = (i + k, j + l)
                terms[key] = terms.get(key, 0) + c * d
        return BivariatePolynomial(self.p, terms)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = BivariatePolynomial.const(self.p, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = BivariatePolynomial.const(self.p, other)
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def substitute(self, x0: int, x1: int) -> int:
        p = self.p
        return sum(c * pow(x0, i, p) * pow(x1, j, p) for (i, j), c in self.terms.items()) % p

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, reverse=True):
            c = self.terms[(i, j)]
            mono = "*".join(
                s for s in (
                    "" if i == 0 else ("x0" if i == 1 else f"x0^{i}"),
                    "" if j == 0 else ("x1" if j == 1 else f"x1^{j}"),
                ) if s
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return "+".join(parts)

    __repr__ = __str__


class BivariateRing(Field):
    """F_p[x0, x1] as a coefficient ring for series (no division beyond units of F_p)."""

    kind = "bivariate"
    is_field = False

    def __init__(self, p: int):
        if not is_prime(p):
            raise InvalidDescriptor(f"p={p} is not prime")
        self.p = p
        self.characteristic = p
        self.zero = BivariatePolynomial(p)
        self.one = BivariatePolynomial.const(p, 1)

    def _key(self):
        return ("bivariate", self.p)

    def descriptor(self) -> str:
        return f"p={self.p}[x0,x1]"

    def from_int(self, n):
        return BivariatePolynomial.const(self.p, int(n))

    def coerce(self, x):
        if isinstance(x, BivariatePolynomial):
            return x
        return self.from_int(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if set(a.terms) == {(0, 0)}:
            return BivariatePolynomial.const(self.p, pow(a.terms[(0, 0)], self.p - 2, self.p))
        raise ZeroInversion(f"{a} is not a unit of F_{self.p}[x0,x1]")

    def is_zero(self, a):
        return not a.terms

    def eq(self, a, b):
        return a == b


# --------------------------------------------------------------------------
# descriptors and the named operations


_TERM = re.compile(r"^(?:(\d+)\*?)?(x(?:\^(\d+))?)?$")


def _parse_poly_x(text: str, p: int) -> list[int]:
    src = text.replace(" ", "")
    if not src:
        raise InvalidDescriptor("empty modulus")
    coeffs: dict[int, int] = {}
    for sign, body in re.findall(r"([+-]?)([^+-]+)", src):
        m = _TERM.match(body)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise InvalidDescriptor(f"cannot parse term {body!r} of modulus {text!r}")
        c = int(m.group(1)) if m.group(1) else 1
        if m.group(2) is None:
            k = 0
        else:
            k = int(m.group(3)) if m.group(3) else 1
        if sign == "-":
            c = -c
        coeffs[k] = coeffs.get(k, 0) + c
    deg = max(coeffs)
    return [coeffs.get(i, 0) % p for i in range(deg + 1)]


def parse_field(text: str, tprec: int | None = None) -> Field:
    """Parse ``p=5``, ``p=5;ext=x^2+x+1``, ``p=5;laurent=t;tprec=64`` or ``rational``.

    ``tprec`` overrides any ``tprec=`` in the text for laurent descriptors.
    """
    src = text.strip().replace(" ", "")
    if src.lower() in ("rational", "q", "rationals"):
        return RationalField()
    opts: dict[str, str] = {}
    for part in filter(None, src.split(";")):
        if "=" not in part:
            raise InvalidDescriptor(f"bad descriptor component {part!r}")
        k, v = part.split("=", 1)
        opts[k.lower()] = v
    if "p" not in opts:
        raise InvalidDescriptor(f"descriptor {text!r} lacks p=")
    try:
        p = int(opts.pop("p"))
    except ValueError as exc:
        raise InvalidDescriptor(f"bad prime in {text!r}") from exc
    if "ext" in opts:
        ext = opts.pop("ext")
        if opts:
            raise InvalidDescriptor(f"unexpected options {sorted(opts)}")
        return ExtensionField(p, _parse_poly_x(ext, p))
    if "laurent" in opts:
        if opts.pop("laurent") != "t":
            raise InvalidDescriptor("laurent variable must be t")
        M = int(opts.pop("tprec", DEFAULT_TPREC))
        if opts:
            raise InvalidDescriptor(f"unexpected options {sorted(opts)}")
        return LaurentField(p, tprec if tprec is not None else M)
    if opts:
        raise InvalidDescriptor(f"unexpected options {sorted(opts)}")
    return PrimeField(p)


def int_embed(n: int, field: Field):
    return field.from_int(n)


def invert(x, field: Field):
    return field.inv(x)


def q_th_root(a, q: int, field: Field):
    """Some gamma with gamma**q == a found by exhaustive search, or None."""
    if not isinstance(field, (PrimeField, ExtensionField)):
        raise UnsupportedField(f"q-th roots are searched only in finite fields, not {field.descriptor()}")
    if field.size() > MAX_ENUM:
        raise UnsupportedField(f"field of size {field.size()} is too large to search")
    if q < 1:
        raise ValueError("q must be positive")
    if field.eq(a, field.one):
        return field.one
    for g in field.elements():
        if field.eq(field.pow(g, q), a):
            return g
    return None


def multiplicative_order(a, field: Field, bound: int = MAX_ENUM) -> int | None:
    if field.is_zero(a):
        return None
    x = a
    for k in range(1, bound + 1):
        if field.eq(x, field.one):
            return k
        x = field.mul(x, a)
    return None
