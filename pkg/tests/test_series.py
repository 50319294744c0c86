import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wildseries.coeffring import ExtensionField, LaurentField, PrimeField, RationalField
from wildseries.errors import (
    CompositionDomain,
    EmptyInput,
    FieldMismatch,
    NonUnitConstantTerm,
    NotAFixedPoint,
    NotInvertible,
    PrecisionTooSmall,
)
from wildseries.series import (
    PowerSeries,
    Unresolved,
    comp_inverse,
    compose,
    conjugate,
    iterate,
    iterate_levels,
    make_series,
    mul_inverse,
    scalar_mul,
)

Q = RationalField()
F3, F5, F7 = PrimeField(3), PrimeField(5), PrimeField(7)
FIELDS = [F3, F7, ExtensionField(5, [2, 0, 1]), Q]


def coeffs(f):
    return [f[i] for i in range(f.prec + 1)]


def random_series(rng, F, W, order=1, unit=False):
    c = [F.random_element(rng) for _ in range(W + 1)]
    for i in range(order):
        c[i] = F.zero
    if unit:
        while F.is_zero(c[order]):
            c[order] = F.random_element(rng)
    return make_series(c, W, exact=False, field=F)


# -- construction --------------------------------------------------------------
def test_make_series_examples():
    f = make_series([0, 1, 1], 5, field=Q)
    assert f.prec == 5 and f.exact and coeffs(f) == [0, 1, 1, 0, 0, 0]
    with pytest.raises(PrecisionTooSmall):
        make_series([0, 1], 0, field=Q)
    with pytest.raises(EmptyInput):
        make_series([], 3, field=Q)
    assert make_series([1, 1], 3, field=Q).to_expr() == "1 + z"


def test_order_and_mult_examples():
    assert make_series([0, 0, 1, 1], 8, field=Q).ord() == 2
    assert make_series([0] * 11, 10, exact=False, field=Q).ord() == Unresolved(10)
    assert make_series([0], 10, field=Q).ord() == math.inf
    assert make_series([0, 1, 0, 1], 8, field=Q).mult() == 3
    assert make_series([0, 2], 8, field=Q).mult() == 1
    assert make_series([0, 1], 19, exact=False, field=Q).mult() == Unresolved(19)
    with pytest.raises(NotAFixedPoint):
        make_series([1, 1], 4, field=Q).mult()


# -- arithmetic ------------------------------------------------------------------
def test_arithmetic_examples():
    a = make_series([0, 1, 1], 4, field=Q)
    b = make_series([0, 1, -1], 4, field=Q)
    assert coeffs(a * b) == [0, 0, 1, 0, -1]
    assert (a + PowerSeries.constant(Q, 0, 4)) == a
    assert make_series([0, 1, 1], 4, field=F3) * 3 == make_series([0], 4, field=F3)
    assert scalar_mul(3, make_series([0, 1, 1], 4, field=F3)).ord() == math.inf
    with pytest.raises(FieldMismatch):
        make_series([0, 1], 3, field=F3) + make_series([0, 1], 3, field=F5)


def test_compose_examples():
    f = make_series([0, 1, 1], 6, field=Q)
    assert coeffs(compose(f, make_series([0, 0, 1], 6, field=Q))) == [0, 0, 1, 0, 1, 0, 0]
    assert compose(f, PowerSeries.identity(Q, 6)) == f
    g = make_series([0, 1, 1], 3, field=F3)
    assert coeffs(compose(g, g)) == [0, 1, 2, 2]
    with pytest.raises(CompositionDomain):
        compose(f, make_series([1, 1], 6, field=Q))


def test_mul_inverse_examples():
    assert coeffs(mul_inverse(make_series([1, -1], 3, field=Q))) == [1, 1, 1, 1]
    assert coeffs(mul_inverse(PowerSeries.constant(Q, 1, 3))) == [1, 0, 0, 0]
    assert mul_inverse(PowerSeries.constant(F5, 2, 3))[0] == 3
    with pytest.raises(NonUnitConstantTerm):
        mul_inverse(make_series([0, 1], 3, field=Q))


def test_comp_inverse_examples():
    z = PowerSeries.identity(Q, 6)
    assert comp_inverse(z) == z
    assert coeffs(comp_inverse(make_series([0, 1, 1], 4, field=Q))) == [0, 1, -1, 2, -5]
    assert coeffs(comp_inverse(make_series([0, 2], 4, field=F5))) == [0, 3, 0, 0, 0]
    with pytest.raises(NotInvertible):
        comp_inverse(make_series([0, 0, 1], 4, field=Q))


def test_iterate_examples():
    f = make_series([0, 1, 0, 1], 27, field=F3)
    assert iterate(f, 0) == PowerSeries.identity(F3, 27)
    assert iterate(f, 3).to_expr() == "z + z^27"
    g = make_series([0, 1, 1], 6, field=F3)
    assert iterate(g, 3).truncate(6).to_expr() == "z + z^5 + 2*z^6 + O(z^7)"
    with pytest.raises(NotAFixedPoint):
        iterate(make_series([1, 1], 4, field=Q), 2)


def test_conjugate_examples():
    f = make_series([0, 1, 1], 6, field=Q)
    assert conjugate(PowerSeries.identity(Q, 6), f) == f
    g = conjugate(make_series([0, 2], 6, field=Q), f)
    assert coeffs(g)[:3] == [0, 1, Fraction(1, 2)]
    h = conjugate(make_series([0, 1, 1], 8, field=F5), make_series([0, 1, 1], 8, field=F5))
    assert h.mult() == 2


# -- precision -------------------------------------------------------------------
def test_precision_rules():
    exact = make_series([0, 1, 1], 10, field=Q)
    rough = make_series([0, 1, 2, 3], 5, exact=False, field=Q)
    assert (exact + rough).prec == 5 and not (exact + rough).exact
    assert (exact * exact).exact
    other = make_series([0, 1], 3, exact=False, field=Q)
    assert (rough + other).prec == 3


def test_inexact_read_beyond_precision_fails():
    from wildseries.errors import PrecisionTooSmall

    f = make_series([0, 1, 1], 3, exact=False, field=Q)
    with pytest.raises(PrecisionTooSmall):
        f[4]
    assert make_series([0, 1, 1], 3, field=Q)[9] == 0


def test_to_expr_marks_inexact():
    f = make_series([0, 1, 0, 1], 27, exact=False, field=F3)
    assert f.to_expr() == "z + z^3 + O(z^28)"


# -- invariants ------------------------------------------------------------------
@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.descriptor())
def test_compose_associative(F):
    rng = np.random.default_rng(10)
    for _ in range(200):
        W = int(rng.integers(2, 9))
        f, g, h = (random_series(rng, F, W) for _ in range(3))
        assert compose(compose(f, g), h).eq_mod(compose(f, compose(g, h)), W + 1)


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.descriptor())
def test_comp_inverse_two_sided(F):
    rng = np.random.default_rng(11)
    for _ in range(200):
        W = int(rng.integers(1, 10))
        phi = random_series(rng, F, W, unit=True)
        psi = comp_inverse(phi)
        z = PowerSeries.identity(F, W)
        assert compose(phi, psi).eq_mod(z, W + 1)
        assert compose(psi, phi).eq_mod(z, W + 1)


@pytest.mark.parametrize("F", [F3, F5, Q], ids=lambda F: F.descriptor())
def test_iterate_additive(F):
    rng = np.random.default_rng(12)
    for _ in range(40):
        W = int(rng.integers(2, 12))
        c = [F.random_element(rng) for _ in range(W + 1)]
        c[0], c[1] = F.zero, F.one
        f = make_series(c, W, exact=False, field=F)
        m, n = (int(x) for x in rng.integers(0, 7, size=2))
        assert iterate(f, m + n).eq_mod(compose(iterate(f, m), iterate(f, n)), W + 1)


def test_iterate_strategies_agree():
    # long iterates take the binary-powering branch, short ones repeated application
    rng = np.random.default_rng(13)
    for _ in range(10):
        c = [0, 1] + [int(x) for x in rng.integers(0, 7, size=8)]
        f = make_series(c, 12, exact=False, field=F7)
        step = f
        for _ in range(48):
            step = compose(f, step)
        assert iterate(f, 49).eq_mod(step, 13)


def test_iterate_levels_matches_iterate():
    f = make_series([0, 1, 1, 2], 40, field=F3)
    levels = iterate_levels(f, 3, 2)
    assert [g.eq_mod(iterate(f, 3**n), 41) for n, g in enumerate(levels)] == [True] * 3


@pytest.mark.parametrize("F", [F5, F7, Q], ids=lambda F: F.descriptor())
def test_mult_is_conjugacy_invariant(F):
    rng = np.random.default_rng(14)
    for _ in range(50):
        W = 12
        m = int(rng.integers(2, 5))
        c = [F.random_element(rng) for _ in range(W + 1)]
        c[0], c[1] = F.zero, F.one
        for j in range(2, m):
            c[j] = F.zero
        while F.is_zero(c[m]):
            c[m] = F.random_element(rng)
        f = make_series(c, W, exact=False, field=F)
        phi = random_series(rng, F, W, unit=True)
        assert conjugate(phi, f).mult() == f.mult() == m


@pytest.mark.parametrize("F", [PrimeField(13), Q], ids=lambda F: F.descriptor())
def test_derivative_over_power_has_no_residue(F):
    # the 1/z coefficient of phi'/phi^(N+1) vanishes
    rng = np.random.default_rng(15)
    for _ in range(100):
        N = int(rng.integers(1, 11))
        phi = random_series(rng, F, N + 1, unit=True)
        u = mul_inverse(phi.shift_down(1)) ** (N + 1)
        assert F.is_zero((phi.derivative() * u)[N])


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=10), st.integers(1, 12))
def test_expr_round_trip_rational(cs, W):
    f = make_series(cs, W, exact=False, field=Q)
    from wildseries.expr import parse_series

    g = parse_series(f.to_expr(), Q, W)
    assert g == f


def test_laurent_coefficients():
    K = LaurentField(5, 16)
    t = K.t()
    f = make_series([K.zero, K.one, t], 6, field=K)
    g = iterate(f, 2)
    want = [K.zero, K.one, K.mul(K.from_int(2), t), K.mul(K.from_int(2), K.mul(t, t)), K.mul(t, K.mul(t, t))]
    assert all(K.eq(g[i], w) for i, w in enumerate(want))
    assert K.is_zero(g[5])
