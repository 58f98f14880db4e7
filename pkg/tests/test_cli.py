"""Golden-file and exit-code tests for the command-line client."""
import json

import pytest
from click.testing import CliRunner

from entnet.cli import main

from conftest import FIXTURE_DIR, GOLDEN_DIR

REPO_ROOT = FIXTURE_DIR.parent

GOLDEN_CASES = {
    "analyze_chain2.txt": ["analyze", "fixtures/chain2.json"],
    "analyze_ghz_triangle.txt": ["analyze", "fixtures/ghz_triangle.json"],
    "maxflow_example2.txt": ["maxflow", "fixtures/example2.json", "s", "t", "--trace", "--verify"],
    "classify_fig5_trio.txt": [
        "classify", "fixtures/chain2.json", "fixtures/epr_triangle.json",
        "fixtures/ghz_triangle.json",
    ],
    "classify_fig4a_pair.txt": [
        "classify", "fixtures/epr_triangle.json", "fixtures/double_ghz_triangle.json",
        "--discriminators",
    ],
    "classify_fig4b_pair.txt": [
        "classify", "fixtures/four_cycle.json", "fixtures/two_ghz_plus_epr.json",
        "--discriminators",
    ],
    "mutualinfo_four_cycle.txt": ["mutualinfo", "fixtures/four_cycle.json"],
    "analyze_chain2.json": ["--json", "analyze", "fixtures/chain2.json"],
    "maxflow_example2.json": ["--json", "maxflow", "fixtures/example2.json", "s", "t", "--verify"],
}


@pytest.fixture
def runner(monkeypatch):
    monkeypatch.chdir(REPO_ROOT)
    return CliRunner()


@pytest.mark.parametrize("golden", sorted(GOLDEN_CASES), ids=lambda g: g.rsplit(".", 1)[0])
def test_golden_outputs(runner, golden):
    result = runner.invoke(main, GOLDEN_CASES[golden], catch_exceptions=False)
    assert result.exit_code == 0, result.output
    expected = (GOLDEN_DIR / golden).read_text()
    assert result.output == expected


@pytest.mark.parametrize("golden", ["analyze_chain2.txt", "maxflow_example2.json"])
def test_outputs_are_byte_stable_across_runs(runner, golden):
    first = runner.invoke(main, GOLDEN_CASES[golden], catch_exceptions=False).output
    second = runner.invoke(main, GOLDEN_CASES[golden], catch_exceptions=False).output
    assert first == second


def test_json_report_shape(runner):
    result = runner.invoke(main, GOLDEN_CASES["analyze_chain2.json"], catch_exceptions=False)
    doc = json.loads(result.output)
    assert doc["command"] == "analyze"
    assert doc["inputs"] == ["fixtures/chain2.json"]
    assert doc["payload"]["all_hold"] is True


def test_malformed_file_exits_two(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": oops')
    result = runner.invoke(main, ["analyze", str(bad)])
    assert result.exit_code == 2
    assert "syntax error at line" in result.output


def test_missing_file_exits_two(runner):
    result = runner.invoke(main, ["analyze", "fixtures/does_not_exist.json"])
    assert result.exit_code == 2


def test_same_source_sink_usage_error(runner):
    result = runner.invoke(main, ["maxflow", "fixtures/example2.json", "s", "s"])
    assert result.exit_code == 2


def test_unknown_party_exits_two(runner):
    result = runner.invoke(main, ["maxflow", "fixtures/example2.json", "s", "zz"])
    assert result.exit_code == 2


def test_conflicting_functional_flags(runner):
    result = runner.invoke(
        main, ["analyze", "fixtures/chain2.json", "--renyi", "2", "--tsallis", "2"]
    )
    assert result.exit_code == 2


def test_monogamy_violation_exits_one(runner, tmp_path):
    doc = {
        "name": "w6",
        "parties": ["A", "B", "C"],
        "links": [
            {"kind": "w_state", "endpoints": ["A", "B", "C"], "multiplicity": 6},
            {"kind": "gen_ghz", "endpoints": ["A", "B", "C"], "multiplicity": 1},
        ],
    }
    path = tmp_path / "w6.json"
    path.write_text(json.dumps(doc))
    result = runner.invoke(main, ["analyze", str(path)])
    assert result.exit_code == 1
    assert "VIOLATED" in result.output
    assert "outside W hypothesis" in result.output


def test_w_network_with_renyi_exits_two(runner):
    result = runner.invoke(
        main, ["analyze", "fixtures/w_ghz_saturation.json", "--renyi", "2"]
    )
    assert result.exit_code == 2


def test_same_file_twice_is_equivalent(runner):
    result = runner.invoke(
        main, ["classify", "fixtures/epr_triangle.json", "fixtures/epr_triangle.json"],
        catch_exceptions=False,
    )
    assert result.exit_code == 0
    assert "equivalent (label-aligned vectors match)" in result.output


def test_oracle_check_command(runner):
    result = runner.invoke(
        main, ["oracle-check", "fixtures/star3.json", "--renyi", "2"], catch_exceptions=False
    )
    assert result.exit_code == 0
    assert "ok: yes" in result.output


def test_classify_single_file_usage_error(runner):
    result = runner.invoke(main, ["classify", "fixtures/chain2.json"])
    assert result.exit_code == 2
