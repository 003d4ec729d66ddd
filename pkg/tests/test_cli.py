import json
import logging
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from taf import cli
from taf.checks import Check
from taf.errors import InvalidProfile, ParseError, UnknownCommand

from conftest import profiles

MIN = '{"r":{"preamble":[],"cycle":[2]},"s":{"preamble":[],"cycle":[2]}}'
C23 = '{"r":{"preamble":[],"cycle":[2]},"s":{"preamble":[],"cycle":[3]}}'


@pytest.fixture
def cfg(tmp_path):
    def write(text, name="config.json"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- configs --------------------------------------------------------------------


def test_parse_config_examples():
    c = cli.parse_config(MIN)
    assert (c.r.cycle, c.s.cycle, c.options) == ((2,), (2,), {})
    c = cli.parse_config('{"r":{"preamble":[4,3],"cycle":[5]}, "s":{"preamble":[],"cycle":[6]}}')
    assert c.r.preamble == (4, 3)
    with pytest.raises(InvalidProfile):
        cli.parse_config('{"r":{"preamble":[],"cycle":[]}, "s":{"cycle":[2]}}')
    with pytest.raises(InvalidProfile):
        cli.parse_config('{"r":{"cycle":[1]}, "s":{"cycle":[2]}}')


@pytest.mark.parametrize("text, fragment", [
    ('{"r": {"cycle": [2]},\n "s": }', "line 2"),
    ('[1, 2]', "top level"),
    ('{"r": {"cycle": [2]}}', "'s'"),
    ('{"r": {"cycle": [2], "extra": 1}, "s": {"cycle": [2]}}', "unknown keys"),
    ('{"r": {"cycle": "2"}, "s": {"cycle": [2]}}', "r.cycle"),
    ('{"r": {"cycle": [2.5]}, "s": {"cycle": [2]}}', "r.cycle"),
    ('{"r": {"cycle": [2]}, "s": {"cycle": [2]}, "options": {"level": 0}}', "options.level"),
    ('{"r": {"cycle": [2]}, "s": {"cycle": [2]}, "options": {"search": {"max_q": 1}}}', "options.search"),
])
def test_parse_config_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        cli.parse_config(text)


@given(profiles, profiles, st.integers(1, 5))
def test_config_round_trip(r, s, level):
    config = cli.Config(r, s, {"level": level, "search": {"max_k": 50}})
    assert cli.parse_config(cli.config_to_text(config)) == config


def test_parse_helpers():
    assert cli.parse_rational("3/6") == Fraction(1, 2)
    with pytest.raises(ParseError):
        cli.parse_rational("1/0")
    assert cli.parse_exponents("2:-1,3:2").as_dict() == {2: -1, 3: 2}
    assert cli.parse_exponents('{"2": 1}').as_dict() == {2: 1}
    with pytest.raises(ParseError):
        cli.parse_exponents("2=1")


# -- reports ------------------------------------------------------------------------


def test_analyze_report():
    report = cli.run_command(cli.parse_config(MIN), "analyze")
    assert report.results["d"] == 1
    assert report.results["group"] == "Out ≅ Z^1"
    assert report.results["generators"][0]["scaling"] == Fraction(1, 2)
    data = json.loads(cli.emit_report(report, "json"))
    assert data["results"]["d"] == 1 and data["results"]["primes"] == [2]
    assert data["results"]["generators"][0]["scaling"] == "1/2"
    assert data["status"] == "PASS"


def test_unknown_command():
    with pytest.raises(UnknownCommand):
        cli.run_command(cli.parse_config(MIN), "explode")


def test_empty_verify_report():
    text = cli.emit_report(cli.Report("verify"), "text")
    assert "no checks run" in text
    assert cli.Report("verify").ok


def test_rationals_render_exactly():
    report = cli.Report("point", {"nu": Fraction(1, 4), "whole": Fraction(3)})
    assert "1/4" in cli.emit_report(report, "text")
    data = json.loads(cli.emit_report(report, "json"))
    assert data["results"] == {"nu": "1/4", "whole": "3/1"}


def test_failed_check_report():
    report = cli.Report("verify", checks=[Check("a", True, "fine"), Check("b", False, "broken")])
    assert not report.ok
    text = cli.emit_report(report, "text")
    assert "FAIL  b" in text and text.endswith("status: FAIL")


def test_json_is_deterministic():
    config = cli.parse_config(C23)
    outs = {cli.emit_report(cli.run_command(config, "analyze"), "json") for _ in range(3)}
    assert len(outs) == 1


# -- the command line ---------------------------------------------------------------


def test_main_analyze(capsys, cfg):
    code, out, _ = run(capsys, "analyze", "--config", cfg(MIN))
    assert code == 0
    assert "Out ≅ Z^1" in out and "1/2" in out


def test_main_point_nu(capsys, cfg):
    point = '{"left":[],"right":[2],"right_tail":"ones"}'
    code, out, _ = run(capsys, "point", "nu", "--config", cfg(MIN), "--point", point, "--format", "json")
    assert code == 0
    assert json.loads(out)["results"]["nu"] == "1/2"


def test_main_point_queries(capsys, cfg):
    path = cfg(MIN)
    code, out, _ = run(capsys, "point", "gap", "--config", path, "--point", '{"right_tail":"max"}',
                       "--format", "json")
    data = json.loads(out)["results"]
    assert code == 0 and data["is_gap_point"] and data["successor"]["left"] == [2]
    code, out, _ = run(capsys, "point", "alpha", "--config", path, "--point", '{"right":[2]}',
                       "--exp", "2:-1", "--format", "json")
    data = json.loads(out)["results"]
    assert code == 0 and data["image"]["right"] == [1, 2] and data["image_nu"] == "1/4"
    code, out, _ = run(capsys, "point", "cocycle", "--config", path, "--point", '{"right":[2]}',
                       "--point", '{"right":[1,2]}', "--format", "json")
    assert code == 0 and json.loads(out)["results"]["cocycle"] == "-1/4"


def test_main_warns_on_noncanonical_point(capsys, cfg, caplog):
    with caplog.at_level(logging.WARNING, logger="taf"):
        code, out, _ = run(capsys, "point", "nu", "--config", cfg(MIN), "--point", '{"right":[2,1]}')
    assert code == 0
    assert "canonicalized" in caplog.text


def test_main_compare(capsys, cfg):
    a, b = cfg(MIN, "a.json"), cfg(C23, "b.json")
    code, out, _ = run(capsys, "compare", "--config", a, b, "--format", "json")
    data = json.loads(out)["results"]
    assert code == 0
    assert data["r_finitely_equivalent"] is True and data["s_finitely_equivalent"] is False


def test_main_witness(capsys, cfg, monkeypatch):
    code, out, _ = run(capsys, "witness", "--config", cfg(C23), "--c", "2", "--j", "2", "--format", "json")
    data = json.loads(out)["results"]
    assert code == 0 and data["found"] and data["j"] == 2
    monkeypatch.setenv("TAF_SEARCH_BOUND", "5")
    code, out, _ = run(capsys, "witness", "--config", cfg(MIN), "--c", "2", "--j", "3",
                       "--point", '{"left":[2,2]}', "--format", "json")
    data = json.loads(out)["results"]
    assert code == 0 and not data["found"]
    assert data["bounds"] == {"max_j": 6, "max_k": 5, "max_m": 5}


def test_main_verify(capsys, cfg):
    code, out, _ = run(capsys, "verify", "--level", "2", "--config", cfg(C23))
    assert code == 0
    assert out.count("PASS  ") == 10 and out.endswith("status: PASS\n")


@pytest.mark.parametrize("argv", [
    ["analyze"],
    ["explode", "--config", "x.json"],
    ["point", "nu", "--config", "{config}"],
    ["point", "sideways", "--config", "{config}", "--point", "{{}}"],
    ["analyze", "--config", "{missing}"],
    ["verify", "--level", "0", "--config", "{config}"],
    ["witness", "--config", "{config}"],
    ["witness", "--config", "{config}", "--c", "two"],
    ["point", "nu", "--config", "{config}", "--point", '{{"right":[5]}}'],
])
def test_main_usage_errors_exit_2(capsys, cfg, tmp_path, argv):
    names = {"config": cfg(MIN), "missing": str(tmp_path / "nope.json")}
    code, _, err = run(capsys, *(a.format(**names) for a in argv))
    assert code == 2
    assert err


def test_main_operation_error_exits_1(capsys, cfg):
    code, out, _ = run(capsys, "point", "alpha", "--config", cfg(C23), "--point", "{}", "--exp", "2:1")
    assert code == 1
    assert "InvalidScaling" in out


def test_main_invalid_profile_exits_2(capsys, cfg):
    code, _, err = run(capsys, "analyze", "--config", cfg('{"r":{"cycle":[]},"s":{"cycle":[2]}}'))
    assert code == 2 and "cycle must be non-empty" in err
