import numpy as np
import pytest

from wildseries.coeffring import ExtensionField, PrimeField, RationalField
from wildseries.dynamics import (
    CRITERION_ONLY,
    EQUALITY,
    NOT_RAMIFIED,
    Inapplicable,
    chi_psi,
    delta_sequence,
    is_q_ramified,
    laubie_saine_predict,
    lower_ramification,
    multiplier_order_reduce,
    normal_form,
    normal_form_model,
    remove_term,
    sen_lower_bound,
    sen_violations,
)
from wildseries.errors import (
    InsufficientPrecision,
    NoQthRoot,
    NotAFixedPoint,
    NotFiniteOrder,
    NotTangentToIdentity,
    ObstructedTerm,
    OutOfRange,
)
from wildseries.index import laurent_index
from wildseries.series import PowerSeries, conjugate, iterate, make_series

F3, F5, F7 = PrimeField(3), PrimeField(5), PrimeField(7)


def short(F, q, a0, a1, W):
    c = [0] * (2 * q + 2)
    c[1], c[q + 1] = 1, a0
    c[2 * q + 1] += a1
    return make_series(c, W, field=F)


def random_wild(rng, p, W, q=None):
    q = q or int(rng.integers(1, p))
    c = [0, 1] + [0] * (q - 1) + [int(rng.integers(1, p))]
    c += [int(x) for x in rng.integers(0, p, size=W + 1 - len(c))]
    return make_series(c, W, exact=False, field=PrimeField(p))


# -- delta sequence ------------------------------------------------------------
def test_delta_sequence_examples():
    f = make_series([0, 1, 1], 12, field=F3)
    d = delta_sequence(f, 3)
    assert d[1] == f - PowerSeries.identity(F3, 12)
    assert [d[m].ord() for m in (1, 2, 3)] == [2, 3, 5]
    z = PowerSeries.identity(F3, 12)
    assert all(x.ord() == float("inf") for x in delta_sequence(z, 3)[1:])
    with pytest.raises(NotAFixedPoint):
        delta_sequence(make_series([1, 1], 4, field=F3), 1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_delta_order_gaps_and_top_term(p):
    rng = np.random.default_rng(p)
    z = None
    for _ in range(200):
        f = random_wild(rng, p, 3 * p)
        z = z or PowerSeries.identity(f.field, f.prec)
        d = delta_sequence(f, p)
        step = d[1].ord() - 1
        for m in range(2, p + 1):
            a, b = d[m].ord(), d[m - 1].ord()
            if isinstance(a, int) and isinstance(b, int):
                assert a - b >= step
        assert d[p].eq_mod(iterate(f, p) - z, f.prec + 1)


# -- ramification ---------------------------------------------------------------
def test_lower_ramification_examples():
    rep = lower_ramification(make_series([0, 1, 0, 1], 30, field=F3), 1)
    assert rep.i == [2, 26]
    rep = lower_ramification(make_series([0, 1, 0, 0, 0, 1, 1, 0, 0, 1], 16, field=F3), 1)
    assert rep.i == [4, 13] and rep.verdict == NOT_RAMIFIED and rep.sen_congruence == (True,)
    assert rep.sen_bound == (None, None)
    rep = lower_ramification(make_series([0, 1, 1], 8, field=F3), 1)
    assert rep.i == [1, 4] and rep.levels[1].delta == 1 and rep.verdict == EQUALITY


def test_lower_ramification_unresolved_level():
    rep = lower_ramification(make_series([0, 1, 1], 10, exact=False, field=F3), 2)
    assert rep.i[:2] == [1, 4] and not rep.levels[2].resolved
    assert rep.verdict == CRITERION_ONLY and "precision >= 15" in rep.notes[0]


def test_lower_ramification_errors():
    with pytest.raises(NotTangentToIdentity):
        lower_ramification(make_series([0, 2, 1], 8, field=F3), 1)
    with pytest.raises(OutOfRange):
        lower_ramification(make_series([0, 1, 1], 8, field=RationalField()), 1)


def test_sen_lower_bound():
    assert sen_lower_bound(1, 3, 1) == 4
    assert sen_lower_bound(4, 3, 1) == 16
    assert sen_lower_bound(2, 5, 2) == 62


def test_sen_violations_detects_bad_reports():
    from dataclasses import replace

    rep = lower_ramification(make_series([0, 1, 1], 8, field=F3), 1)
    bad = replace(rep, levels=(rep.levels[0], replace(rep.levels[1], i=3)))
    assert len(sen_violations(bad)) == 2


def test_is_q_ramified_examples():
    f = make_series([0, 1, 1], 8, field=F3)
    assert is_q_ramified(f) is True
    assert is_q_ramified(f, "direct", n_max=2) is True
    for p in (3, 5, 7):
        c = [0] * (p + 1)
        c[1] = c[p] = 1
        g = make_series(c, 2 * p, field=PrimeField(p))
        assert is_q_ramified(g) is False
        assert is_q_ramified(g, "direct", n_max=1) is False
    h = make_series([0, 1, 1, 1], 8, field=F3)
    assert is_q_ramified(h) is False
    assert is_q_ramified(h, "direct", n_max=1) is False


def test_is_q_ramified_errors():
    with pytest.raises(OutOfRange):
        is_q_ramified(make_series([0, 1, 0, 0, 0, 1], 12, field=F3))
    with pytest.raises(OutOfRange):
        is_q_ramified(make_series([0, 1, 0, 0, 1], 12, field=F3))
    with pytest.raises(InsufficientPrecision):
        is_q_ramified(make_series([0, 1, 1], 6, exact=False, field=F3), "direct", n_max=2)


def test_laubie_saine():
    assert laubie_saine_predict(1, 4, 3, 2) == 13
    assert lower_ramification(make_series([0, 1, 1], 16, field=F3), 2).i[2] == 13
    assert laubie_saine_predict(4, 13, 3, 2) == 40
    assert laubie_saine_predict(4, 13, 3, 3) == 121
    assert isinstance(laubie_saine_predict(3, 12, 3, 1), Inapplicable)
    assert isinstance(laubie_saine_predict(1, 8, 3, 1), Inapplicable)


def test_laubie_saine_against_direct_iteration():
    P = make_series([0, 1, 0, 0, 0, 1, 1, 0, 0, 1], 123, field=F3)
    rep = lower_ramification(P, 3)
    assert rep.i == [4, 13, 40, 121]


# -- leading coefficients of iterates ------------------------------------------
def test_chi_psi_examples():
    f = make_series([0, 1, 1], 16, field=F3)
    assert chi_psi(f, 0) == (1, 0)
    assert chi_psi(f, 1) == (1, 2)
    assert iterate(f, 3).truncate(6).to_expr() == "z + z^5 + 2*z^6 + O(z^7)"
    assert chi_psi(f, 2) == (1, 2)
    assert iterate(f, 9).truncate(15).to_expr() == "z + z^14 + 2*z^15 + O(z^16)"


def test_chi_psi_errors():
    with pytest.raises(OutOfRange):
        chi_psi(make_series([0, 1, 1, 1, 1], 10, field=F3), 1)
    with pytest.raises(InsufficientPrecision):
        chi_psi(make_series([0, 1, 0, 1], 5, exact=False, field=F3), 1)


# -- normal forms -----------------------------------------------------------------
def test_remove_term_examples():
    f = make_series([0, 1, 1, 0, 1], 10, field=F5)
    phi, g = remove_term(f, 2)
    assert phi[3] == 4 and g[4] == 0
    assert conjugate(phi, f) == g
    with pytest.raises(ObstructedTerm):
        remove_term(f, 1)
    h = make_series([0, 1, 1], 10, field=F5)
    assert remove_term(h, 2)[1] is h


def test_remove_term_preserves_invariants():
    rng = np.random.default_rng(4)
    for _ in range(100):
        f = random_wild(rng, 7, 16)
        q = f.mult() - 1
        k = int(rng.integers(1, 6))
        if k == q:
            continue
        _, g = remove_term(f, k)
        assert g.mult() == f.mult()
        assert laurent_index(g) == laurent_index(f)


def test_normal_form_examples():
    nf = normal_form(make_series([0, 1, 1], 8, field=F3))
    assert nf.ind == 0 and nf.g.eq_mod(make_series([0, 1, 1], 8, field=F3), 6)
    nf = normal_form(make_series([0, 1, 2], 8, field=F5))
    assert nf.conjugacy[1] == 2 and nf.g[2] == 1
    nf = normal_form(make_series([0, 1, 0, 1], 10, field=F3))
    assert nf.ind == 0 and nf.g.eq_mod(make_series([0, 1, 0, 1], 10, field=F3), 8)


def test_normal_form_no_root_hint():
    with pytest.raises(NoQthRoot) as err:
        normal_form(make_series([0, 1, 0, 2], 12, field=F5))
    assert err.value.extension_degree == 2
    F25 = ExtensionField(5, [2, 0, 1])
    nf = normal_form(make_series([0, 1, 0, 2], 12, field=F25))
    assert nf.g.eq_mod(normal_form_model(F25, 2, nf.ind, 10), 10)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_normal_form_invariants(p):
    F = PrimeField(p)
    rng = np.random.default_rng(p + 100)
    for q in range(1, p):
        top = 2 * q + p + 1
        for _ in range(15):
            c = [0, 1] + [0] * (q - 1) + [F.inv(F.pow(int(rng.integers(1, p)), q))]
            c += [int(x) for x in rng.integers(0, p, size=top - len(c))]
            f = make_series(c, top - 1, field=F)
            nf = normal_form(f)
            assert conjugate(nf.conjugacy, f).eq_mod(nf.g, top)
            assert laurent_index(nf.g) == laurent_index(f)
            assert nf.ind_after_first_stage == nf.ind


def test_normal_form_range():
    with pytest.raises(OutOfRange):
        normal_form(make_series([0, 1, 0, 0, 1], 12, field=F3))
    with pytest.raises(OutOfRange):
        normal_form(make_series([0, 1, 1], 12, field=RationalField()))


# -- multipliers -------------------------------------------------------------------
def test_multiplier_order_reduce():
    red = multiplier_order_reduce(make_series([0, 2, 1], 13, field=F7))
    assert red.order == 3 and red.q_prime == 6 and red.verdict == "6-ramified"
    assert red.g.truncate(12).eq_mod(make_series([0, 1, 0, 0, 0, 0, 0, 1, 1], 12, field=F7), 13)
    f = make_series([0, 1, 1], 8, field=F7)
    red = multiplier_order_reduce(f)
    assert red.order == 1 and red.g == f
    with pytest.raises(NotFiniteOrder):
        multiplier_order_reduce(make_series([0, 2, 1], 8, field=RationalField()), bound=50)
