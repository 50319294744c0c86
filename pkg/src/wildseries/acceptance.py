"""The acceptance suite: twelve end-to-end checks with time limits.

Each check returns ``(passed, detail)``; :func:`run_criterion` times it.  All
randomness comes from a seeded numpy generator so runs are reproducible.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import kernels
from .coeffring import ExtensionField, LaurentField, PrimeField, RationalField, q_th_root
from .dynamics import (
    EQUALITY,
    CRITERION_ONLY,
    chi_psi,
    chi_psi_exponents,
    is_q_ramified,
    lower_ramification,
    multiplier_order_reduce,
    normal_form,
    normal_form_model,
    observe_reports,
    sen_violations,
)
from .index import closed_index, laurent_index, resit
from .series import PowerSeries, conjugate, iterate, make_series
from .ultrametric import delta_valuation_formula, periodic_bound_report
from .verify import (
    appendix_random_checks,
    closed_form_check,
    delta_expansion_check,
    fniter_check,
    generic_iterate_check,
    index_iteration_char2_check,
    index_iteration_check,
    main_lemma_check,
    random_rational_series,
)


@dataclass
class SenCollector:
    """Checks every ramification report built while it is installed."""

    reports: int = 0
    violations: list[str] = dc_field(default_factory=list)

    def __call__(self, report) -> None:
        self.reports += 1
        for msg in sen_violations(report):
            self.violations.append(f"p={report.p} q={report.q} i={report.i}: {msg}")


@dataclass
class Context:
    quick: bool = False
    seed: int = 0
    sen: SenCollector = dc_field(default_factory=SenCollector)

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    elapsed: float
    limit: float | None
    detail: str

    @property
    def within_limit(self) -> bool:
        return self.limit is None or self.elapsed <= self.limit

    @property
    def ok(self) -> bool:
        return self.passed and self.within_limit

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        limit = "global" if self.limit is None else f"{self.limit:g}s"
        return f"[{tag}] {self.number:2d} {self.title}: {self.elapsed:.2f}s / {limit}; {self.detail}"


def _rand_nonzero(rng, F):
    while True:
        x = F.random_element(rng)
        if not F.is_zero(x):
            return x


def _short_series(F, q: int, a0, a1, W: int) -> PowerSeries:
    coeffs = [F.zero] * (2 * q + 2)
    coeffs[1] = F.one
    coeffs[q + 1] = a0
    coeffs[2 * q + 1] = F.add(coeffs[2 * q + 1], a1)
    return make_series(coeffs, W, exact=True, field=F)


# 1 ------------------------------------------------------------------------
def closed_vs_oracle(ctx: Context):
    rng = ctx.rng(1)
    trials = 100 if ctx.quick else 1000
    checked = 0
    for p in (3, 5, 7, 11, 13):
        F = PrimeField(p)
        for q in range(1, p):
            W = 2 * q + 1
            for _ in range(trials):
                coeffs = np.zeros(W + 1, dtype=np.int64)
                coeffs[1] = 1
                coeffs[q + 1] = rng.integers(1, p)
                coeffs[q + 2:] = rng.integers(0, p, size=W - q - 1)
                f = make_series(coeffs, W, exact=False, field=F)
                if closed_index(f) != laurent_index(f):
                    return False, f"mismatch at p={p} q={q}: {f.to_expr()}"
                checked += 1
    for k in range(20 if ctx.quick else 200):
        q = 1 + k % 6
        f = random_rational_series(rng, q, 2 * q + 1)
        if closed_index(f) != laurent_index(f):
            return False, f"mismatch over the rationals: {f.to_expr()}"
        checked += 1
    return True, f"{checked} series agree"


# 2 ------------------------------------------------------------------------
def conjugacy_invariance(ctx: Context):
    rng = ctx.rng(2)
    trials = 40 if ctx.quick else 200
    fields = [PrimeField(3), PrimeField(5), PrimeField(7), ExtensionField(3, [1, 0, 1]), RationalField()]
    for F in fields:
        for k in range(trials):
            m = 1 + k % 3
            W = 2 * m + 3
            coeffs = [F.random_element(rng) for _ in range(W + 1)]
            coeffs[0] = F.zero
            if m == 1:
                while F.eq(coeffs[1], F.one):
                    coeffs[1] = F.random_element(rng)
            else:
                coeffs[1] = F.one
                for j in range(2, m):
                    coeffs[j] = F.zero
                coeffs[m] = _rand_nonzero(rng, F)
            f = make_series(coeffs, W, exact=False, field=F)
            phi_c = [F.random_element(rng) for _ in range(W + 1)]
            phi_c[0] = F.zero
            phi_c[1] = _rand_nonzero(rng, F)
            phi = make_series(phi_c, W, exact=True, field=F)
            g = conjugate(phi, f)
            a, b = laurent_index(f), laurent_index(g)
            if not F.eq(a, b):
                return False, f"{F.descriptor()}: ind {F.fmt(a)} -> {F.fmt(b)} for {f.to_expr()}"
    return True, f"{trials} pairs on each of {len(fields)} fields"


# 3 ------------------------------------------------------------------------
def criterion_vs_direct(ctx: Context):
    primes = (3, 5) if ctx.quick else (3, 5, 7)
    count = 0
    for p in primes:
        F = PrimeField(p)
        for q in range(1, p):
            W = q * (1 + p + p * p) + q + 1
            for a0 in range(1, p):
                for a1 in range(p):
                    f = _short_series(F, q, a0, a1, W)
                    crit = is_q_ramified(f, "criterion")
                    rep = lower_ramification(f, 2)
                    if rep.verdict == CRITERION_ONLY:
                        return False, f"unresolved at p={p} q={q} a=({a0},{a1})"
                    if crit != (rep.verdict == EQUALITY):
                        return False, f"p={p} q={q} a=({a0},{a1}): criterion {crit}, i={rep.i}"
                    count += 1
    return True, f"{count} series, verdicts agree"


# 4 ------------------------------------------------------------------------
def example_not_p_plus_1(ctx: Context):
    F = PrimeField(3)
    P = make_series([0, 1, 0, 0, 0, 1, 1, 0, 0, 1], 16, field=F)
    rep = lower_ramification(P, 1)
    r = resit(P)
    ok = r == 1 and rep.i == [4, 13] and rep.verdict != EQUALITY
    return ok, f"resit={r} i={rep.i} verdict={rep.verdict}"


# 5 ------------------------------------------------------------------------
def example_p_minus_1(ctx: Context):
    F = PrimeField(3)
    P = make_series([0, 1, 0, 1], 30, field=F)
    rep = lower_ramification(P, 1)
    cube = iterate(P, 3)
    target = PowerSeries.monomial(F, 1, 1, 30) + PowerSeries.monomial(F, 1, 27, 30)
    r = resit(P)
    ok = rep.i[1] == 26 and cube.eq_mod(target, 31) and r == 0
    return ok, f"i={rep.i} P^3={cube.fmt()} resit={r}"


# 6 ------------------------------------------------------------------------
def chi_psi_forms(ctx: Context):
    rng = ctx.rng(6)
    samples = 3 if ctx.quick else 30
    plan = [(3, 2), (5, 1), (7, 1)]
    count = 0
    for p, n_top in plan:
        F = PrimeField(p)
        for q in range(1, p):
            for n in range(1, n_top + 1):
                e_chi, e_psi = chi_psi_exponents(q, p, n)
                W = e_psi
                for _ in range(samples):
                    a0, a1 = int(rng.integers(1, p)), int(rng.integers(0, p))
                    f = _short_series(F, q, a0, a1, W)
                    g = iterate(f, p**n)
                    chi, psi = chi_psi(f, n)
                    want = [0] * (W + 1)
                    want[1] = 1
                    want[e_chi] = chi
                    want[e_psi] = (want[e_psi] + psi) % p
                    got = [g[k] for k in range(W + 1)]
                    if got != want:
                        return False, f"p={p} q={q} n={n} a=({a0},{a1}): got {got}, want {want}"
                    count += 1
    return True, f"{count} iterates match"


# 7 ------------------------------------------------------------------------
def _admissible_case2(p: int):
    for q in range(p + 1, 3 * p + 1):
        if q % p:
            yield q, q % p


def main_lemma_symbolic(ctx: Context):
    rng = ctx.rng(7)
    verdicts = []
    primes = (3, 5, 7) if ctx.quick else (3, 5, 7, 11)
    for p in primes:
        for q in range(1, p):
            verdicts += main_lemma_check(p, q)
            verdicts += closed_form_check(p, q)
    for p in (3, 5):
        for q, ell in _admissible_case2(p):
            verdicts += main_lemma_check(p, q, ell)
    for p, q, ell in ((3, 10, 4), (3, 11, 5), (3, 13, 4)):
        verdicts += main_lemma_check(p, q, ell)
    for p, q in ((3, 1), (3, 2), (5, 2)):
        verdicts += delta_expansion_check(p, q)
    verdicts += delta_expansion_check(3, 4, 1)
    grid = [(p, q, q) for p in primes for q in range(1, p)]
    grid += [(p, q, ell) for p in (3, 5) for q, ell in _admissible_case2(p)]
    grid += [(3, 10, 4), (3, 11, 5), (3, 13, 4)]
    for p, q, ell in grid:
        for _ in range(10 if ctx.quick else 200):
            xs = [int(rng.integers(1, p))] + [int(x) for x in rng.integers(0, p, size=5)]
            verdicts.append(generic_iterate_check(p, q, ell, xs))
    bad = [v.claim for v in verdicts if not v]
    if bad:
        return False, f"{len(bad)} failed, first: {bad[0]}"
    return True, f"{len(verdicts)} identities hold"


# 8 ------------------------------------------------------------------------
def normal_form_pipeline(ctx: Context):
    rng = ctx.rng(8)
    trials = 20 if ctx.quick else 100
    count = 0
    for p in (3, 5, 7):
        F = PrimeField(p)
        for q in range(1, p):
            top = 2 * q + p + 1
            for _ in range(trials):
                c = int(rng.integers(1, p))
                a = F.inv(F.pow(c, q))
                coeffs = [0, 1] + [0] * (q - 1) + [a]
                coeffs += [int(x) for x in rng.integers(0, p, size=top - len(coeffs))]
                f = make_series(coeffs, top - 1, exact=True, field=F)
                assert q_th_root(F.inv(a), q, F) is not None
                nf = normal_form(f)
                model = normal_form_model(F, q, nf.ind, top)
                if not nf.g.eq_mod(model, top):
                    return False, f"p={p} q={q}: g={nf.g.fmt()} for {f.to_expr()}"
                back = conjugate(nf.conjugacy, f)
                if not back.eq_mod(nf.g, top):
                    return False, f"p={p} q={q}: recomposition differs for {f.to_expr()}"
                count += 1
    return True, f"{count} normal forms"


# 9 ------------------------------------------------------------------------
def periodic_bound(ctx: Context):
    K = LaurentField(5, 32)
    details = []
    ok = True
    for q in (1, 2):
        coeffs = [K.zero] * (q + 3)
        coeffs[1] = K.one
        coeffs[q + 1] = K.t()
        coeffs[q + 2] = K.one
        f = make_series(coeffs, 64, exact=True, field=K)
        rep = periodic_bound_report(f, 1)
        b = rep.bound
        lv0, lv1 = rep.levels
        expect_b = 1 - Fraction(q + 1, 5)
        checks = [
            b == expect_b,
            lv1.min_root_valuation == b,
            lv0.equality and lv0.v_delta == 1 and lv0.wideg == lv0.i_n + 2,
            all(
                delta_valuation_formula(rep.v_a, rep.v_resit, 5, lv.n) == lv.v_delta
                for lv in rep.levels
            ),
        ]
        ok = ok and all(checks)
        details.append(f"q={q}: b={b} min root val={lv1.min_root_valuation} wideg0={lv0.wideg}")
    return ok, "; ".join(details)


# 10 -----------------------------------------------------------------------
def appendix(ctx: Context):
    rng = ctx.rng(10)
    verdicts = []
    trials = 10 if ctx.quick else 50
    for p in (3, 5, 7):
        verdicts += appendix_random_checks(p, trials, rng)
    per = 3 if ctx.quick else 50
    for q in range(1, 5):
        for n in range(1, 7):
            for _ in range(per):
                verdicts.append(index_iteration_check(random_rational_series(rng, q, 2 * q + 1), n))
    F2 = PrimeField(2)
    for q in range(1, 5):
        W = 2 * q + 2
        for n in (3, 5, 7, 9):
            for _ in range(3 if ctx.quick else 10):
                coeffs = [0, 1] + [0] * (q - 1) + [1]
                coeffs += [int(x) for x in rng.integers(0, 2, size=W + 1 - len(coeffs))]
                f = make_series(coeffs, W, exact=True, field=F2)
                verdicts.append(index_iteration_char2_check(f, n))
    lemma_trials = 20 if ctx.quick else 100
    for F in (PrimeField(3), PrimeField(5)):
        p = F.characteristic
        for _ in range(lemma_trials):
            q = int(rng.integers(1, 5))
            W = 2 * q + 2
            coeffs = [0, 1] + [0] * (q - 1) + [int(rng.integers(1, p))]
            coeffs += [int(x) for x in rng.integers(0, p, size=W + 1 - len(coeffs))]
            f = make_series(coeffs, W, exact=True, field=F)
            verdicts.append(fniter_check(f, int(rng.integers(1, 7))))
    for _ in range(lemma_trials):
        q = int(rng.integers(1, 5))
        f = random_rational_series(rng, q, 2 * q + 2)
        verdicts.append(fniter_check(f, int(rng.integers(1, 7))))
    bad = [v.claim for v in verdicts if not v]
    if bad:
        return False, f"{len(bad)} failed, first: {bad[0]}"
    return True, f"{len(verdicts)} identities hold"


# 11 -----------------------------------------------------------------------
def sen_properties(ctx: Context):
    rng = ctx.rng(11)
    samples = 3 if ctx.quick else 10
    plan = [(3, 2, 120), (5, 1, 120), (7, 1, 120)]
    # run_criterion has installed ctx.sen, so these reports are checked too
    for p, n_max, W in plan:
        F = PrimeField(p)
        for q in range(1, 2 * p + 1):
            if q * p + q + 1 > W:
                continue
            for _ in range(samples):
                coeffs = [0, 1] + [0] * (q - 1) + [int(rng.integers(1, p))]
                coeffs += [int(x) for x in rng.integers(0, p, size=W + 1 - len(coeffs))]
                lower_ramification(make_series(coeffs, W, exact=False, field=F), n_max)
    if ctx.sen.violations:
        return False, f"{len(ctx.sen.violations)} violations, first: {ctx.sen.violations[0]}"
    return True, f"{ctx.sen.reports} reports checked"


# 12 -----------------------------------------------------------------------
def multiplier_example(ctx: Context):
    F = PrimeField(7)
    f = make_series([0, 2, 1], 13, field=F)
    g = iterate(f, 3)
    target = make_series([0, 1, 0, 0, 0, 0, 0, 1, 1], 13, field=F)
    red = multiplier_order_reduce(f)
    ok = g.eq_mod(target, 13) and red.order == 3 and red.verdict == "6-ramified" and red.resit != 0
    return ok, f"f^3={g.truncate(12).fmt()} resit={red.resit} verdict={red.verdict}"


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    limit: float | None
    check: Callable[[Context], tuple[bool, str]]


CRITERIA: tuple[Criterion, ...] = (
    Criterion(1, "closed formula vs Laurent oracle", 30, closed_vs_oracle),
    Criterion(2, "conjugacy invariance of the index", 10, conjugacy_invariance),
    Criterion(3, "resit criterion vs direct ramification", 180, criterion_vs_direct),
    Criterion(4, "example that is not (p+1)-ramified", 1, example_not_p_plus_1),
    Criterion(5, "example z+z^3 over F_3", 1, example_p_minus_1),
    Criterion(6, "leading coefficients of p^n-th iterates", 60, chi_psi_forms),
    Criterion(7, "iteration congruences, symbolic", 120, main_lemma_symbolic),
    Criterion(8, "normal form pipeline", 30, normal_form_pipeline),
    Criterion(9, "periodic point bound over F_5((t))", 30, periodic_bound),
    Criterion(10, "iteration identities for resit and index", 60, appendix),
    Criterion(11, "Sen congruence and lower bound", None, sen_properties),
    Criterion(12, "multiplier of order 3 over F_7", 5, multiplier_example),
)


def run_criterion(crit: Criterion, ctx: Context) -> CriterionResult:
    kernels.warmup()
    start = time.perf_counter()
    try:
        with observe_reports(ctx.sen):
            passed, detail = crit.check(ctx)
    except Exception as exc:  # a crash is a failure, reported like one
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    return CriterionResult(crit.number, crit.title, bool(passed), elapsed, crit.limit, detail)


def run_all(quick: bool = False, seed: int = 0, numbers=None) -> list[CriterionResult]:
    """Run the suite; criterion 11 runs last so it sees every earlier report."""
    ctx = Context(quick=quick, seed=seed)
    chosen = [c for c in CRITERIA if numbers is None or c.number in numbers]
    chosen.sort(key=lambda c: c.number == 11)
    results = [run_criterion(c, ctx) for c in chosen]
    return sorted(results, key=lambda r: r.number)
