from fractions import Fraction

import numpy as np
import pytest

from wildseries.coeffring import LaurentField, PrimeField
from wildseries.errors import EmptyRange, NotDivisible, NotIntegral, OutOfRange, PrecisionLoss, ZeroDivisor
from wildseries.series import PowerSeries, compose, make_series
from wildseries.ultrametric import (
    InfiniteWithinPrecision,
    delta_valuation_formula,
    newton_polygon,
    periodic_bound_report,
    reduce,
    series_quotient,
    weierstrass_degree,
)

K = LaurentField(5, 32)
t = K.t()


def ser(cs, W=12, exact=True):
    return make_series([K.coerce(c) if isinstance(c, int) else c for c in cs], W, exact=exact, field=K)


def tp(k):
    return K.monomial(1, k)


def test_reduce_examples():
    assert reduce(ser([0, t, 1])).to_expr() == "z^2"
    assert reduce(ser([0, t, tp(2)])).ord() == float("inf")
    assert reduce(ser([0, K.add(K.one, t)])).to_expr() == "z"
    with pytest.raises(NotIntegral):
        reduce(ser([0, K.inv(t)]))


def test_weierstrass_degree_examples():
    assert weierstrass_degree(ser([0, t, 1])) == 2
    f = ser([0, 1, t, 1])
    assert weierstrass_degree(f - PowerSeries.identity(K, 12)) == 3
    assert isinstance(weierstrass_degree(ser([0, t, t])), InfiniteWithinPrecision)


def test_newton_polygon_examples():
    poly = newton_polygon(ser([0, 0, t, 1]), 2)
    assert poly.segments == ((Fraction(-1), 1),)
    assert poly.root_valuations() == [(Fraction(1), 1)]
    poly = newton_polygon(ser([0, tp(2), 0, 0, 0, 1]), 1)
    assert poly.segments == ((Fraction(-1, 2), 4),)
    with pytest.raises(EmptyRange):
        newton_polygon(ser([0, 1]), 3, 5)


def test_newton_polygon_precision_zero():
    # a coefficient known only mod t^1 sits below a hull at height 2: undecidable
    F = ser([0, tp(4), K.make(0, [], 1), 1], exact=False)
    with pytest.raises(PrecisionLoss):
        newton_polygon(F, 1, 3)
    G = ser([0, tp(4), K.make(0, [], 9), 1], exact=False)
    assert newton_polygon(G, 1, 3).segments == ((Fraction(-2), 2),)


def test_newton_polygon_consistency():
    rng = np.random.default_rng(6)
    for _ in range(500):
        n = int(rng.integers(2, 12))
        cs = [K.zero] * (n + 1)
        for i in range(n + 1):
            if rng.random() < 0.7:
                cs[i] = K.make(int(rng.integers(0, 6)), [int(rng.integers(1, 5))], None)
        if sum(1 for c in cs if c.unit) < 1:
            cs[0] = K.one
        F = make_series(cs, n, field=K)
        poly = newton_polygon(F, 0, n)
        slopes = [s for s, _ in poly.segments]
        assert poly.width == poly.stop - poly.start
        assert all(a < b for a, b in zip(slopes, slopes[1:]))
        x0, y0 = poly.vertices[0]
        for i, c in enumerate(cs):
            if not c.unit:
                continue
            # height of the hull at i
            for (a, ya), (b, yb) in zip(poly.vertices, poly.vertices[1:]):
                if a <= i <= b:
                    assert c.val >= ya + Fraction(yb - ya, b - a) * (i - a)


def test_series_quotient_examples():
    q = series_quotient(ser([0, 0, 0, 1, 1]), ser([0, 1]))
    assert [K.fmt(q[i]) for i in range(3)] == ["0", "0", "1"] and K.eq(q[3], K.one)
    f = ser([0, 1, t, 1])
    q = series_quotient(f - PowerSeries.identity(K, 12), ser([0, 0, 1]))
    assert K.eq(q[0], t) and K.eq(q[1], K.one)
    F = ser([0, t, 1, 3])
    one = series_quotient(F, F)
    assert K.eq(one[0], K.one) and all(K.is_zero(one[i]) for i in range(1, one.prec + 1))
    with pytest.raises(NotDivisible):
        series_quotient(ser([0, 1]), ser([0, 0, 1]))
    with pytest.raises(ZeroDivisor):
        series_quotient(ser([0, 1]), make_series([K.zero], 6, exact=False, field=K))


@pytest.mark.parametrize("q", [1, 2])
def test_periodic_bound_optimality(q):
    cs = [K.zero] * (q + 3)
    cs[1], cs[q + 1], cs[q + 2] = K.one, t, K.one
    rep = periodic_bound_report(make_series(cs, 64, field=K), 1)
    assert rep.bound == 1 - Fraction(q + 1, 5) and not rep.vacuous
    lv0, lv1 = rep.levels
    assert lv0.equality and lv0.v_delta == 1 and lv0.wideg == lv0.i_n + 2
    assert lv0.polygon.root_valuations() == [(Fraction(1), 1)]
    assert lv1.min_root_valuation == rep.bound
    assert lv1.equality and lv1.ratio_bound == rep.bound
    for lv in rep.levels:
        assert lv.v_delta == delta_valuation_formula(rep.v_a, rep.v_resit, 5, lv.n)


def test_periodic_bound_vacuous():
    # q=1: resit = 1 - a_2/a_1^2 vanishes for a_2 = a_1^2
    f = ser([0, 1, t, tp(2)], W=40)
    rep = periodic_bound_report(f, 1)
    assert rep.vacuous and rep.bound is None


def test_periodic_bound_random_instances():
    K3 = LaurentField(3, 24)
    rng = np.random.default_rng(8)
    tested = 0
    for _ in range(30):
        q = 1
        cs = [K3.zero, K3.one, K3.make(int(rng.integers(0, 3)), [int(rng.integers(1, 3))], None)]
        cs += [K3.make(int(rng.integers(0, 3)), [int(rng.integers(0, 3))], None) for _ in range(3)]
        f = make_series(cs, 48, field=K3)
        try:
            rep = periodic_bound_report(f, 2)
        except PrecisionLoss:
            continue
        if rep.vacuous:
            continue
        tested += 1
        for lv in rep.levels:
            assert lv.v_delta == delta_valuation_formula(rep.v_a, rep.v_resit, 3, lv.n)
            if lv.n >= 1 and lv.polygon is not None:
                assert lv.max_root_valuation <= rep.bound
    assert tested >= 10


def test_reduce_commutes_with_composition():
    rng = np.random.default_rng(9)
    for _ in range(100):
        f = make_series([K.zero] + [K.random_element(rng, vmin=int(rng.integers(0, 2))) for _ in range(6)], 6, field=K)
        g = make_series([K.zero] + [K.random_element(rng, vmin=int(rng.integers(0, 2))) for _ in range(6)], 6, field=K)
        assert reduce(compose(f, g)).eq_mod(compose(reduce(f), reduce(g)), 7)


def test_periodic_bound_errors():
    with pytest.raises(OutOfRange):
        periodic_bound_report(make_series([0, 1, 1], 8, field=PrimeField(5)))
    with pytest.raises(OutOfRange):
        periodic_bound_report(ser([0, 1, 0, 0, 0, 0, 0, t]))
    with pytest.raises(NotIntegral):
        periodic_bound_report(ser([0, 1, K.inv(t)]))
