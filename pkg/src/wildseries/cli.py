"""Command-line front end.

Every command builds a report envelope::

    {"command", "field", "input", "precision", "result", "status", "error"}

and prints it either as sorted-key JSON or as ``key: value`` lines.  Exit code
0 means success, 1 a computation error or a failed check, 2 a usage or parse
error.
"""
from __future__ import annotations

import json
import math
import sys
from fractions import Fraction
from typing import Any

import click
import numpy as np

from . import acceptance
from .coeffring import BivariatePolynomial, Field, parse_field
from .dynamics import lower_ramification, normal_form
from .errors import InvalidDescriptor, NoQthRoot, OutOfRange, ParseError, WildSeriesError
from .expr import parse_series
from .index import index_report
from .index import resit as resit_value
from .series import PowerSeries, Unresolved, iterate as iterate_series
from .ultrametric import NewtonPolygon, periodic_bound_report
from .verify import appendix_random_checks, closed_form_check, main_lemma_check

USAGE_ERRORS = (ParseError, InvalidDescriptor)


class Failure(Exception):
    """A check ran to completion and reported a mismatch."""


# -- rendering ---------------------------------------------------------------
def render(value: Any, field: Field | None = None) -> Any:
    """Turn results into JSON-friendly values; field elements become strings."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, Unresolved):
        return f">{value.above}"
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else str(value.numerator)
    if isinstance(value, PowerSeries):
        return value.to_expr()
    if isinstance(value, BivariatePolynomial):
        return str(value)
    if isinstance(value, NewtonPolygon):
        return {
            "start": value.start,
            "stop": value.stop,
            "vertices": [list(v) for v in value.vertices],
            "segments": [{"slope": render(s), "length": L} for s, L in value.segments],
        }
    if isinstance(value, dict):
        return {str(k): render(v, field) for k, v in value.items()}
    if isinstance(value, (list, tuple)) and not (field is not None and _is_element(value, field)):
        return [render(v, field) for v in value]
    if isinstance(value, (int, np.integer)) and field is None:
        return int(value)
    if field is not None:
        return field.fmt(value)
    return str(value)


def _is_element(value, field: Field) -> bool:
    # extension field elements are tuples of ints
    return field.kind == "extension" and isinstance(value, tuple) and all(isinstance(c, int) for c in value)


class Elem:
    """Marks a value to be rendered as an element of the command's field."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value


def _resolve(value: Any, field: Field | None) -> Any:
    if isinstance(value, Elem):
        return render(value.value, field)
    if isinstance(value, dict):
        return {str(k): _resolve(v, field) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_resolve(v, field) for v in value]
    return render(value)


def _text_lines(obj: Any, indent: str = "") -> list[str]:
    lines = []
    for key in sorted(obj):
        val = obj[key]
        if isinstance(val, dict) and val:
            lines.append(f"{indent}{key}:")
            lines += _text_lines(val, indent + "  ")
        elif isinstance(val, list) and val and all(isinstance(v, dict) for v in val):
            lines.append(f"{indent}{key}:")
            for v in val:
                inner = _text_lines(v, indent + "    ")
                lines.append(f"{indent}  - {inner[0].strip()}")
                lines += inner[1:]
        else:
            shown = json.dumps(val) if isinstance(val, (list, dict)) else val
            lines.append(f"{indent}{key}: {shown}")
    return lines


# -- plumbing ----------------------------------------------------------------
def _apply(fn, opts):
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


_OUTPUT_OPTIONS = [
    click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
                 show_default=True),
    click.option("--seed", default=0, show_default=True, type=int,
                 help="Seed for randomized checks."),
    click.option("--out", "out", type=click.Path(dir_okay=False, writable=True), default=None,
                 help="Write the report to this file instead of stdout."),
]

_SERIES_OPTIONS = [
    click.option("--field", "field_text", default="rational", show_default=True,
                 help='Coefficient field: "p=5", "p=5;ext=x^2+2", "p=5;laurent=t", "rational".'),
    click.option("--prec", "prec", default=64, show_default=True, type=click.IntRange(min=1),
                 help="Working precision W: series are known modulo z^(W+1)."),
    click.option("--tprec", "tprec", default=None, type=click.IntRange(min=1),
                 help="t-adic precision for laurent fields [default: 64]."),
]


def common_options(fn):
    return _apply(fn, _SERIES_OPTIONS + _OUTPUT_OPTIONS)


def output_options(fn):
    return _apply(fn, _OUTPUT_OPTIONS)


class Job:
    def __init__(self, command: str, field_text: str | None, prec, tprec, fmt: str, out):
        self.command = command
        self.field_text = field_text
        self.prec = prec
        self.tprec = tprec
        self.fmt = fmt
        self.out = out
        self.field: Field | None = None
        self.input: str | None = None

    def load_field(self) -> Field:
        self.field = parse_field(self.field_text, self.tprec)
        return self.field

    def load_series(self, text: str) -> PowerSeries:
        F = self.load_field()
        f = parse_series(text, F, self.prec)
        self.input = f.to_expr()
        return f

    def envelope(self, result, status: str, error) -> dict:
        return {
            "command": self.command,
            "field": self.field.descriptor() if self.field is not None else self.field_text,
            "input": self.input,
            "precision": self.prec,
            "result": result,
            "status": status,
            "error": error,
        }

    def emit(self, env: dict, to_err: bool = False) -> None:
        if self.fmt == "json":
            text = json.dumps(env, sort_keys=True, indent=2)
        else:
            lines = [f"{self.command}: {env['status']}"]
            if env["input"] is not None:
                lines.append(f"input: {env['input']}")
            if env["error"]:
                lines.append(f"error: {env['error']['type']}: {env['error']['message']}")
            if isinstance(env["result"], dict):
                lines += _text_lines(env["result"])
            elif isinstance(env["result"], list):
                for row in env["result"]:
                    mark = "ok  " if row.get("equal") else "FAIL"
                    lines.append(f"{mark} {row.get('claim')}")
            text = "\n".join(lines)
        if self.out:
            with open(self.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        else:
            click.echo(text, err=to_err and self.fmt == "text")

    def run(self, body) -> None:
        """Run ``body(job)`` and exit with the matching status."""
        try:
            result = body(self)
        except USAGE_ERRORS as exc:
            self._fail(exc, 2)
        except Failure as exc:
            payload = exc.args[1] if len(exc.args) > 1 else None
            self.emit(self.envelope(_resolve(payload, self.field), "failed",
                                    {"type": "CheckFailed", "message": str(exc.args[0])}))
            sys.exit(1)
        except WildSeriesError as exc:
            self._fail(exc, 1)
        else:
            self.emit(self.envelope(_resolve(result, self.field), "ok", None))

    def _fail(self, exc: Exception, code: int) -> None:
        err = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, NoQthRoot) and exc.extension_degree is not None:
            err["extension_degree"] = exc.extension_degree
        self.emit(self.envelope(None, "error", err), to_err=True)
        sys.exit(code)


def _job(ctx: click.Context, field_text, prec, tprec, fmt, out) -> Job:
    return Job(ctx.info_name, field_text, prec, tprec, fmt, out)


# -- commands ----------------------------------------------------------------
@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Residue fixed point index, iterative residue and ramification of power series."""


@main.command("ind")
@click.argument("expr")
@common_options
@click.pass_context
def ind_cmd(ctx, expr, field_text, prec, tprec, fmt, seed, out):
    """Residue fixed point index, by both algorithms."""

    def body(job: Job):
        rep = index_report(job.load_series(expr))
        return {
            "multiplicity": rep.multiplicity,
            "q": rep.q,
            "ind": Elem(rep.ind),
            "resit": Elem(rep.resit) if rep.resit is not None else None,
            "algorithm": rep.algorithm,
        }

    _job(ctx, field_text, prec, tprec, fmt, out).run(body)


@main.command("resit")
@click.argument("expr")
@common_options
@click.pass_context
def resit_cmd(ctx, expr, field_text, prec, tprec, fmt, seed, out):
    """Iterative residue m/2 - ind."""

    def body(job: Job):
        f = job.load_series(expr)
        return {"resit": Elem(resit_value(f))}

    _job(ctx, field_text, prec, tprec, fmt, out).run(body)


def _criterion(F: Field, q, r) -> str:
    """Verdict of the resit test, where it applies."""
    p = F.characteristic
    if r is None or not isinstance(q, int) or not 1 <= q <= p - 1:
        return "inapplicable"
    return f"{q}-ramified" if not F.is_zero(r) else f"not {q}-ramified"


@main.command("ramify")
@click.argument("expr")
@click.option("--levels", default=2, show_default=True, type=click.IntRange(min=0),
              help="Compute i_0 .. i_levels.")
@common_options
@click.pass_context
def ramify_cmd(ctx, expr, levels, field_text, prec, tprec, fmt, seed, out):
    """Lower ramification numbers i_n = mult(f^(p^n)) - 1."""

    def body(job: Job):
        f = job.load_series(expr)
        rep = lower_ramification(f, levels)
        return {
            "p": rep.p,
            "q": rep.q,
            "i": list(rep.i),
            "delta": [Elem(lv.delta) if lv.delta is not None else None for lv in rep.levels],
            "q_ramified": rep.verdict,
            "criterion": _criterion(f.field, rep.q, rep.resit),
            "resit": Elem(rep.resit) if rep.resit is not None else None,
            "sen_congruence": list(rep.sen_congruence),
            "sen_bound": list(rep.sen_bound),
            "notes": list(rep.notes),
        }

    _job(ctx, field_text, prec, tprec, fmt, out).run(body)


@main.command("normal-form")
@click.argument("expr")
@common_options
@click.pass_context
def normal_form_cmd(ctx, expr, field_text, prec, tprec, fmt, seed, out):
    """Conjugate to z(1 + z^q + ind z^2q) modulo z^(2q+p+1)."""

    def body(job: Job):
        nf = normal_form(job.load_series(expr))
        return {
            "conjugacy": nf.conjugacy,
            "normal_form": nf.g.truncate(nf.valid_below - 1),
            "ind": Elem(nf.ind),
            "ind_after_first_stage": Elem(nf.ind_after_first_stage),
            "valid_below": nf.valid_below,
        }

    _job(ctx, field_text, prec, tprec, fmt, out).run(body)


@main.command("iterate")
@click.argument("expr")
@click.option("-n", "n", required=True, type=click.IntRange(min=0), help="Number of iterations.")
@common_options
@click.pass_context
def iterate_cmd(ctx, expr, n, field_text, prec, tprec, fmt, seed, out):
    """The n-th iterate f o ... o f."""

    def body(job: Job):
        g = iterate_series(job.load_series(expr), n)
        return {"n": n, "series": g, "multiplicity": g.mult()}

    _job(ctx, field_text, prec, tprec, fmt, out).run(body)


@main.command("newton")
@click.argument("expr")
@click.option("--period-level", "level", default=1, show_default=True, type=click.IntRange(min=0),
              help="Study periodic points of period up to p^level.")
@common_options
@click.pass_context
def newton_cmd(ctx, expr, level, field_text, prec, tprec, fmt, seed, out):
    """Periodic-point valuations from Newton polygons, against the resit bound."""

    def body(job: Job):
        rep = periodic_bound_report(job.load_series(expr), level)
        return {
            "p": rep.p,
            "q": rep.q,
            "v_a": rep.v_a,
            "v_resit": rep.v_resit,
            "bound": rep.bound,
            "vacuous": rep.vacuous,
            "levels": [
                {
                    "n": lv.n,
                    "i_n": lv.i_n,
                    "v_delta": lv.v_delta,
                    "ratio_bound": lv.ratio_bound,
                    "wideg": lv.wideg if isinstance(lv.wideg, int) else f">{lv.wideg.prec}",
                    "wideg_expected": lv.wideg_expected,
                    "equality": lv.equality,
                    "polygon": lv.polygon,
                    "min_root_valuation": lv.min_root_valuation,
                    "max_root_valuation": lv.max_root_valuation,
                }
                for lv in rep.levels
            ],
        }

    _job(ctx, field_text, prec, tprec, fmt, out).run(body)


# -- verify ------------------------------------------------------------------
def _verdicts(vs, field: Field | None = None) -> list[dict]:
    out = []
    for v in vs:
        wrap = (lambda x: Elem(x)) if field is not None else (lambda x: x)
        out.append({
            "claim": v.claim,
            "equal": v.equal,
            "computed": wrap(v.computed),
            "expected": wrap(v.expected),
        })
    return out


def _checked(vs, field: Field | None = None) -> list[dict]:
    rows = _verdicts(vs, field)
    bad = sum(not v.equal for v in vs)
    if bad:
        raise Failure(f"{bad} of {len(vs)} checks failed", rows)
    return rows


def _prime_option(fn):
    return click.option("--p", "p", required=True, type=int, help="An odd prime.")(fn)


@main.group("verify")
def verify_group() -> None:
    """Symbolic and randomized identity checks."""


@verify_group.command("main-lemma")
@_prime_option
@click.option("--q", "q", required=True, type=click.IntRange(min=1))
@click.option("--ell", "ell", default=None, type=click.IntRange(min=1))
@output_options
def verify_main_lemma(p, q, ell, fmt, seed, out):
    """Congruences for the p-th iterate of the generic series."""
    job = Job("verify main-lemma", f"p={p}[x0,x1]", None, None, fmt, out)
    job.run(lambda job: _checked(main_lemma_check(p, q, ell)))


@verify_group.command("closed-form")
@_prime_option
@click.option("--q", "q", required=True, type=click.IntRange(min=1))
@output_options
def verify_closed_form(p, q, fmt, seed, out):
    """Recursions against their closed forms for m <= p."""
    job = Job("verify closed-form", f"p={p}[x0,x1]", None, None, fmt, out)

    def body(job: Job):
        if q > p - 1:
            raise OutOfRange(f"closed forms need q <= p-1, got q={q}, p={p}")
        return _checked(closed_form_check(p, q))

    job.run(body)


@verify_group.command("appendix")
@_prime_option
@click.option("--trials", default=20, show_default=True, type=click.IntRange(min=1))
@output_options
def verify_appendix(p, trials, fmt, seed, out):
    """Iteration laws for resit and the low-order expansion, on random series."""
    job = Job("verify appendix", f"p={p}", None, None, fmt, out)

    def body(job: Job):
        F = job.field = parse_field(f"p={p}")
        rng = np.random.default_rng(seed)
        return _checked(appendix_random_checks(p, trials, rng), F)

    job.run(body)


@main.command("selftest")
@click.option("--quick", is_flag=True, help="Smaller sample counts.")
@click.option("--only", "only", multiple=True, type=click.IntRange(1, 12),
              help="Run only these criteria (repeatable).")
@output_options
def selftest_cmd(quick, only, fmt, seed, out):
    """Run the acceptance suite; exits 1 if any criterion fails."""
    results = acceptance.run_all(quick=quick, seed=seed, numbers=set(only) or None)
    failed = [r for r in results if not r.ok]
    if fmt == "text":
        text = "\n".join(r.line() for r in results)
        text += f"\n{len(results) - len(failed)}/{len(results)} criteria passed"
    else:
        # timings are left out so the report is reproducible
        rows = [
            {"number": r.number, "title": r.title, "passed": r.passed,
             "within_limit": r.within_limit, "limit": r.limit, "detail": r.detail}
            for r in results
        ]
        env = {"command": "selftest", "field": None, "input": None, "precision": None,
               "result": rows, "status": "failed" if failed else "ok", "error": None}
        text = json.dumps(env, sort_keys=True, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
