"""Symbolic and randomized checks of the iteration identities.

Recursions for the leading coefficients of Delta_m run in F_p[x0, x1]; integer
factors such as qm+1 and binomials are formed in Python ints before reduction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod
from typing import Any, Sequence

from .coeffring import BivariatePolynomial as BP
from .coeffring import BivariateRing, Field, PrimeField, RationalField, is_prime
from .dynamics import delta_sequence
from .errors import BadParameters, CharDividesN, NotTangentToIdentity, ZeroSlope
from .index import index, laurent_index, resit
from .series import PowerSeries, iterate, make_series


@dataclass(frozen=True)
class RecursionTriple:
    m: int
    alpha: BP
    beta: BP
    gamma: BP


@dataclass(frozen=True)
class CongruenceVerdict:
    claim: str
    computed: Any
    expected: Any
    equal: bool

    def __bool__(self) -> bool:
        return self.equal


def _check_prime(p: int) -> None:
    if p < 3 or not is_prime(p):
        raise BadParameters(f"p={p} must be an odd prime")


def _c(p: int, n: int) -> BP:
    return BP.const(p, n)


def case1_recursions(p: int, q: int, m_max: int) -> list[RecursionTriple]:
    """(alpha_m, beta_m, gamma_m) for m = 1 .. m_max."""
    _check_prime(p)
    if q < 1:
        raise BadParameters("q must be >= 1")
    x0, x1 = BP.x0(p), BP.x1(p)
    a, b, g = x0, x1, BP(p)
    out = [RecursionTriple(1, a, b, g)]
    for m in range(1, m_max):
        u, v = q * m + 1, q * (m + 1) + 1
        na = x0 * _c(p, u) * a
        nb = (x0**2 * _c(p, comb(u, 2)) + x1 * _c(p, u)) * a + x0 * _c(p, v) * b
        ng = (
            (x0**3 * _c(p, comb(u, 3)) + x0 * x1 * _c(p, q * m * u)) * a
            + (x0**2 * _c(p, comb(v, 2)) + x1 * _c(p, v)) * b
            + x0 * _c(p, q * (m + 2) + 1) * g
        )
        a, b, g = na, nb, ng
        out.append(RecursionTriple(m + 1, a, b, g))
    return out


def _h(p: int, q: int, s: int) -> BP:
    return BP.from_rational(p, {(2, 0): Fraction(q * s, 2), (0, 1): 1})


def case1_closed_forms(p: int, q: int, m: int) -> tuple[BP, BP, BP | None]:
    """Closed forms of alpha_m, beta_m and (for p >= 5) gamma_m."""
    _check_prime(p)
    if m < 1:
        raise BadParameters("m must be >= 1")
    x0 = BP.x0(p)
    w = {j: q * j + 1 for j in range(1, m + 2)}
    alpha = x0**m * _c(p, prod(w[j] for j in range(1, m)))
    beta = BP(p)
    for r in range(1, m + 1):
        beta = beta + _h(p, q, r - 1) * _c(p, prod(w[j] for j in range(1, m + 1) if j != r))
    beta = x0 ** (m - 1) * beta
    gamma = None
    if p >= 5 and m >= 2:
        gamma = BP(p)
        for s in range(1, m):
            lead = BP.from_rational(p, {(4, 0): Fraction(q * s * (q * s - 1), 6), (2, 1): q * s})
            term = lead * _c(p, prod(w[j] for j in range(1, m + 2) if j not in (s + 1, s + 2)))
            inner = BP(p)
            for r in range(1, s + 1):
                inner = inner + _h(p, q, r - 1) * _c(
                    p, prod(w[j] for j in range(1, m + 2) if j not in (r, s + 2))
                )
            gamma = gamma + term + _h(p, q, s + 1) * inner
        gamma = x0 ** (m - 2) * gamma
    elif p >= 5:
        gamma = BP(p)
    return alpha, beta, gamma


def _case2_gate(p: int, q: int, ell: int) -> None:
    _check_prime(p)
    if q % p == 0 or q < p + 1:
        raise BadParameters(f"needs q >= p+1 and p not dividing q, got q={q}, p={p}")
    if ell < 1 or (ell - q) % p:
        raise BadParameters(f"needs l >= 1 and l = q mod p, got l={ell}")
    if not (ell <= p - 1 or 2 * ell + 1 <= q):
        raise BadParameters(f"needs l <= p-1 or 2l+1 <= q, got l={ell}, q={q}")


def case2_recursions(p: int, q: int, ell: int, m_max: int) -> list[RecursionTriple]:
    _case2_gate(p, q, ell)
    x0, x1 = BP.x0(p), BP.x1(p)
    a, b, g = x0, x1, BP(p)
    out = [RecursionTriple(1, a, b, g)]
    for m in range(1, m_max):
        na = x0 * _c(p, q * m + 1) * a
        nb = x1 * _c(p, q * m + 1) * a + x0 * _c(p, q * m + ell + 1) * b
        ng = x1 * _c(p, q * m + ell + 1) * b + x0 * _c(p, q * m + 2 * ell + 1) * g
        a, b, g = na, nb, ng
        out.append(RecursionTriple(m + 1, a, b, g))
    return out


def expected_beta_gamma(p: int, q: int) -> tuple[BP, BP]:
    """The leading coefficients of the p-th iterate of the generic series, mod p."""
    x0, x1 = BP.x0(p), BP.x1(p)
    if q <= p - 1:
        r = x0**2 * BP.from_rational(p, {(0, 0): Fraction(q + 1, 2)}) - x1
        return x0 ** (p - 1) * r, -(x0 ** (p - 2)) * r**2
    return -(x0 ** (p - 1)) * x1, -(x0 ** (p - 2)) * x1**2


def main_lemma_check(p: int, q: int, ell: int | None = None) -> list[CongruenceVerdict]:
    """alpha_p = 0 and (beta_p, gamma_p) as predicted, from the recursions."""
    if q <= p - 1:
        if ell not in (None, q):
            raise BadParameters("for q <= p-1 the shift l equals q")
        trip = case1_recursions(p, q, p)[-1]
        tag = f"case1 p={p} q={q}"
    else:
        if ell is None:
            ell = q % p
        trip = case2_recursions(p, q, ell, p)[-1]
        tag = f"case2 p={p} q={q} l={ell}"
    eb, eg = expected_beta_gamma(p, q)
    zero = BP(p)
    return [
        CongruenceVerdict(f"{tag}: alpha_p", trip.alpha, zero, trip.alpha == zero),
        CongruenceVerdict(f"{tag}: beta_p", trip.beta, eb, trip.beta == eb),
        CongruenceVerdict(f"{tag}: gamma_p", trip.gamma, eg, trip.gamma == eg),
    ]


def closed_form_check(p: int, q: int) -> list[CongruenceVerdict]:
    """Recursion equals closed form for every m <= p."""
    out = []
    for trip in case1_recursions(p, q, p):
        a, b, g = case1_closed_forms(p, q, trip.m)
        tag = f"closed p={p} q={q} m={trip.m}"
        out.append(CongruenceVerdict(f"{tag}: alpha", trip.alpha, a, trip.alpha == a))
        out.append(CongruenceVerdict(f"{tag}: beta", trip.beta, b, trip.beta == b))
        if g is not None:
            out.append(CongruenceVerdict(f"{tag}: gamma", trip.gamma, g, trip.gamma == g))
    return out


def generic_series(field: Field, q: int, ell: int, xs: Sequence, prec: int) -> PowerSeries:
    """z(1 + x0 z^q + x1 z^(q+l) + z^(q+2l) sum_{i>=1} x_(i+1) z^i)."""
    coeffs = [field.zero] * (prec + 1)
    coeffs[1] = field.one

    def put(k, c):
        if k <= prec:
            coeffs[k] = field.add(coeffs[k], field.coerce(c))

    put(q + 1, xs[0])
    put(q + ell + 1, xs[1])
    for i, x in enumerate(xs[2:], start=1):
        put(q + 2 * ell + 1 + i, x)
    return make_series(coeffs, prec, exact=len(xs) - 2 + q + 2 * ell + 1 <= prec, field=field)


def generic_iterate_check(p: int, q: int, ell: int, xs: Sequence[int]) -> CongruenceVerdict:
    """Iterate an instantiated generic series p times and compare with the predicted pattern."""
    if q <= p - 1:
        if ell != q:
            raise BadParameters("for q <= p-1 the shift l equals q")
    else:
        _case2_gate(p, q, ell)
    if len(xs) < 2 or xs[0] % p == 0:
        raise BadParameters("needs x0 != 0 and a value for x1")
    F = PrimeField(p)
    W = q * p + 2 * ell + 2
    f = generic_series(F, q, ell, xs, W)
    g = iterate(f, p)
    eb, eg = expected_beta_gamma(p, q)
    beta, gamma = eb.substitute(xs[0], xs[1]), eg.substitute(xs[0], xs[1])
    got = [g[k] for k in range(W + 1)]
    want = [0] * (W + 1)
    want[1] = 1
    want[q * p + ell + 1] = beta
    want[q * p + 2 * ell + 1] = (want[q * p + 2 * ell + 1] + gamma) % p
    top = q * p + 2 * ell + 2
    ok = got[:top] == want[:top]
    return CongruenceVerdict(f"generic p={p} q={q} l={ell} x={list(xs)}", got[:top], want[:top], ok)


def delta_expansion_check(p: int, q: int, ell: int | None = None) -> list[CongruenceVerdict]:
    """Delta_m of the bivariate generic series against the recursion triples, m <= p."""
    ell = q if ell is None else ell
    R = BivariateRing(p)
    if q <= p - 1:
        trips = case1_recursions(p, q, p)
        exps = lambda m: (q * m + 1, q * (m + 1) + 1, q * (m + 2) + 1)  # noqa: E731
    else:
        trips = case2_recursions(p, q, ell, p)
        exps = lambda m: (q * m + 1, q * m + ell + 1, q * m + 2 * ell + 1)  # noqa: E731
    W = exps(p)[2]
    f = generic_series(R, q, ell, [BP.x0(p), BP.x1(p)], W)
    deltas = delta_sequence(f, p)
    out = []
    for trip in trips:
        m = trip.m
        D = deltas[m]
        e0, e1, e2 = exps(m)
        want = {e0: trip.alpha, e1: trip.beta, e2: trip.gamma}
        got_all = [D[k] for k in range(e2 + 1)]
        ok = all(got_all[k] == want.get(k, BP(p)) for k in range(e2 + 1))
        out.append(CongruenceVerdict(f"delta p={p} q={q} l={ell} m={m}", got_all, want, ok))
    return out


def wilson_products(p: int, a: int, b: int) -> tuple[int, int]:
    """Product of w(s) = as + b and sum of 1/w(s) over s in F_p with w(s) != 0."""
    F = PrimeField(p)
    if a % p == 0:
        raise ZeroSlope("a must be nonzero mod p")
    root = (-b * F.inv(a)) % p
    vals = [(a * s + b) % p for s in range(p) if s != root]
    product = 1
    for v in vals:
        product = product * v % p
    inv_sum = sum(F.inv(v) for v in vals) % p
    return product, inv_sum


def _split_q(f: PowerSeries) -> tuple[int, Any]:
    m = f.mult()
    if not isinstance(m, int):
        raise BadParameters("multiplicity is not resolved")
    if not f.field.eq(f[1], f.field.one):
        raise NotTangentToIdentity("f'(0) != 1")
    return m - 1, f[m]


def fniter_check(f: PowerSeries, n: int) -> CongruenceVerdict:
    """f^n - z = n(f - z) + C(n,2)(q+1) a^2 z^(2q+1) mod z^(2q+2)."""
    F = f.field
    q, a = _split_q(f)
    top = 2 * q + 2
    g = iterate(f, n)
    z = PowerSeries.identity(F, f.prec)
    lhs = g - z
    rhs = (f - z) * F.from_int(n)
    extra = F.mul(F.from_int(comb(n, 2) * (q + 1)), F.mul(a, a))
    got = [lhs[k] for k in range(top)]
    want = [rhs[k] for k in range(top)]
    want[2 * q + 1] = F.add(want[2 * q + 1], extra)
    ok = all(F.eq(x, y) for x, y in zip(got, want))
    return CongruenceVerdict(f"iterate-expansion n={n}", got, want, ok)


def resit_iteration_check(f: PowerSeries, n: int) -> CongruenceVerdict:
    """resit(f^n) = resit(f) / n."""
    F = f.field
    if F.characteristic and n % F.characteristic == 0:
        raise CharDividesN(f"characteristic {F.characteristic} divides n={n}")
    _split_q(f)
    got = resit(iterate(f, n))
    want = F.div(resit(f), F.from_int(n))
    return CongruenceVerdict(f"resit-iteration n={n}", got, want, F.eq(got, want))


def index_iteration_check(f: PowerSeries, n: int) -> CongruenceVerdict:
    """ind(f^n) = (1/n)[ind(f) + (1/n) C(n,2)(q+1)]."""
    F = f.field
    if F.characteristic and n % F.characteristic == 0:
        raise CharDividesN(f"characteristic {F.characteristic} divides n={n}")
    q, _ = _split_q(f)
    n_inv = F.inv(F.from_int(n))
    want = F.mul(n_inv, F.add(index(f), F.mul(n_inv, F.from_int(comb(n, 2) * (q + 1)))))
    got = index(iterate(f, n))
    return CongruenceVerdict(f"index-iteration n={n}", got, want, F.eq(got, want))


def index_iteration_char2_check(f: PowerSeries, n: int) -> CongruenceVerdict:
    """Over characteristic 2 with n odd: the index shifts by 1 exactly when q is even and n = 3 mod 4."""
    F = f.field
    if F.characteristic != 2:
        raise BadParameters("needs characteristic 2")
    if n % 2 == 0:
        raise CharDividesN("n must be odd")
    q, _ = _split_q(f)
    base = laurent_index(f)
    want = F.add(base, F.one) if q % 2 == 0 and n % 4 == 3 else base
    got = laurent_index(iterate(f, n))
    return CongruenceVerdict(f"char2-index q={q} n={n}", got, want, F.eq(got, want))


def appendix_random_checks(p: int, trials: int, rng, n_values=None) -> list[CongruenceVerdict]:
    """Random series over F_p: resit law, iterate expansion; over Q: index law."""
    F = PrimeField(p)
    out = []
    for _ in range(trials):
        q = int(rng.integers(1, p))
        W = 3 * q + 4
        coeffs = [0, 1] + [0] * (q - 1) + [int(rng.integers(1, p))]
        coeffs += [int(c) for c in rng.integers(0, p, size=W + 1 - len(coeffs))]
        f = make_series(coeffs, W, exact=True, field=F)
        for n in n_values or range(2, p):
            if p > 2 and n % p:
                out.append(resit_iteration_check(f, n))
            out.append(fniter_check(f, n))
    return out


def random_rational_series(rng, q: int, W: int, height: int = 5) -> PowerSeries:
    Q = RationalField()
    lead = 0
    while lead == 0:
        lead = int(rng.integers(-height, height + 1))
    coeffs = [0, 1] + [0] * (q - 1) + [lead]
    coeffs += [Fraction(int(rng.integers(-height, height + 1)), int(rng.integers(1, height + 1)))
               for _ in range(W + 1 - len(coeffs))]
    return make_series(coeffs, W, exact=True, field=Q)
