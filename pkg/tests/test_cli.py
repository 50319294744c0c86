import json

import pytest
from click.testing import CliRunner

from wildseries.cli import main
from wildseries.coeffring import parse_field
from wildseries.expr import parse_series


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return invoke


def as_json(result):
    return json.loads(result.output)


def test_ramify_example(run):
    res = run("ramify", "z*(1+z^4+z^5+z^8)", "--field", "p=3", "--prec", "16", "--levels", "1",
              "--format", "json")
    assert res.exit_code == 0
    env = as_json(res)
    assert env["result"]["i"] == [4, 13]
    assert env["result"]["q_ramified"] == "no"
    assert env["result"]["resit"] == "1"
    assert set(env) == {"command", "error", "field", "input", "precision", "result", "status"}


def test_ramify_equality(run):
    env = as_json(run("ramify", "z+z^2", "--field", "p=3", "--prec", "20", "--levels", "2", "--format", "json"))
    assert env["result"]["i"] == [1, 4, 13]
    assert env["result"]["q_ramified"] == "equality-at-all-computed-levels"
    assert env["result"]["criterion"] == "1-ramified"


def test_ind_example(run):
    res = run("ind", "z*(1+z+3*z^2)", "--field", "rational")
    assert res.exit_code == 0
    assert "ind: 3" in res.output.splitlines()
    env = as_json(run("ind", "z*(1+z+3*z^2)", "--format", "json"))
    assert env["result"]["ind"] == "3" and env["result"]["algorithm"] == "both-agree"


def test_resit_and_iterate(run):
    env = as_json(run("resit", "z+z^2+z^3", "--format", "json"))
    assert env["result"]["resit"] == "0"
    env = as_json(run("iterate", "2*z+z^2", "--field", "p=7", "-n", "3", "--prec", "12", "--format", "json"))
    assert env["result"]["series"] == "z + z^7 + z^8"
    assert env["result"]["multiplicity"] == 7


def test_laurent_elements_render(run):
    env = as_json(run("ind", "z + t*z^2 + z^3", "--field", "p=5;laurent=t", "--tprec", "64", "--format", "json"))
    assert env["result"]["ind"] == "1+4*t^-2" or "t^-2" in env["result"]["ind"]
    assert env["field"] == "p=5;laurent=t;tprec=64"


def test_newton(run):
    res = run("newton", "z*(1+t*z+z^2)", "--field", "p=5;laurent=t", "--tprec", "32", "--format", "json")
    env = as_json(res)
    assert env["result"]["bound"] == "3/5"
    lv1 = env["result"]["levels"][1]
    assert lv1["min_root_valuation"] == "3/5"
    assert lv1["polygon"]["segments"] == [{"length": 5, "slope": "-3/5"}]


def test_normal_form(run):
    env = as_json(run("normal-form", "z + 2*z^2 + z^5", "--field", "p=3", "--format", "json"))
    assert env["status"] == "ok"
    assert env["result"]["normal_form"].startswith("z + z^2")
    res = run("normal-form", "z + 2*z^3", "--field", "p=5", "--format", "json")
    assert res.exit_code == 1
    err = as_json(res)["error"]
    assert err["type"] == "NoQthRoot" and err["extension_degree"] == 2


def test_verify_commands(run):
    res = run("verify", "main-lemma", "--p", "3", "--q", "4", "--ell", "1", "--format", "json")
    env = as_json(res)
    assert res.exit_code == 0 and all(v["equal"] for v in env["result"])
    assert env["result"][1]["expected"] == "2*x0^2*x1"
    res = run("verify", "closed-form", "--p", "5", "--q", "2")
    assert res.exit_code == 0 and "FAIL" not in res.output
    res = run("verify", "appendix", "--p", "5", "--trials", "3", "--seed", "7")
    assert res.exit_code == 0
    assert run("verify", "main-lemma", "--p", "3", "--q", "4", "--ell", "2").exit_code == 1


@pytest.mark.parametrize(
    "args,code",
    [
        (["ramify", "1 + z", "--field", "p=3"], 1),
        (["ind", "z*(1+", "--field", "p=3"], 2),
        (["ind", "z+z^2", "--field", "p=4"], 2),
        (["ind", "z+z^2", "--format", "yaml"], 2),
        (["iterate", "z+z^2"], 2),
        (["resit", "z+z^2", "--field", "p=2"], 1),
    ],
)
def test_exit_codes(run, args, code):
    assert run(*args).exit_code == code


def test_error_envelope(run):
    res = run("ramify", "1 + z", "--field", "p=3", "--format", "json")
    env = as_json(res)
    assert env["status"] == "error" and env["error"]["type"] == "NotAFixedPoint"
    assert env["result"] is None


@pytest.mark.parametrize(
    "expr,field",
    [
        ("z*(1+z+3*z^2)", "rational"),
        ("z - z^2/3 + O(z^9)", "rational"),
        ("z + x*z^2 + (1+x)*z^3", "p=3;ext=x^2+1"),
        ("z*(1 + t*z + (1+t^2)*z^2)", "p=5;laurent=t;tprec=8"),
    ],
)
def test_input_echo_round_trips(run, expr, field):
    env = as_json(run("iterate", expr, "--field", field, "--prec", "10", "-n", "1", "--format", "json"))
    F = parse_field(env["field"])
    assert parse_series(env["input"], F, 10) == parse_series(expr, parse_field(field), 10)


def test_deterministic_json(run):
    a = run("verify", "appendix", "--p", "7", "--trials", "4", "--seed", "3", "--format", "json").output
    b = run("verify", "appendix", "--p", "7", "--trials", "4", "--seed", "3", "--format", "json").output
    c = run("verify", "appendix", "--p", "7", "--trials", "4", "--seed", "4", "--format", "json").output
    assert a == b and a != c
    a = run("selftest", "--quick", "--only", "4", "--only", "12", "--format", "json").output
    b = run("selftest", "--quick", "--only", "4", "--only", "12", "--format", "json").output
    assert a == b


def test_out_file(run, tmp_path):
    out = tmp_path / "r.json"
    res = run("ind", "z+z^2", "--format", "json", "--out", str(out))
    assert res.output == "" and json.loads(out.read_text())["result"]["ind"] == "0"


def test_selftest_quick(run):
    res = run("selftest", "--quick")
    assert res.exit_code == 0, res.output
    assert res.output.strip().endswith("12/12 criteria passed")
