"""Command line behaviour: exit codes and JSON on stdout."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from cli import cli
from forward import _random_form
from poly import XYZ, absolute_conic, embed, format_polynomial
from services.reconstruction_service import VERSION


@pytest.fixture
def runner():
    return CliRunner()


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert VERSION in result.stdout


def test_parse_error_exits_2(runner):
    result = runner.invoke(cli, ["analyze", "-p", "x^2 + *y"])
    assert result.exit_code == 2
    assert result.stdout == ""
    assert "ParseError" in result.output


def test_missing_input_exits_2(runner):
    result = runner.invoke(cli, ["analyze"])
    assert result.exit_code == 2
    assert "exactly one of" in result.output


def test_both_inputs_exit_2(runner, tmp_path):
    path = tmp_path / "contour.txt"
    path.write_text("x^12\n", encoding="utf-8")
    result = runner.invoke(cli, ["reconstruct", "-i", str(path), "-p", "x^12"])
    assert result.exit_code == 2


def test_not_a_cyclide_contour_exits_2(runner):
    result = runner.invoke(cli, ["analyze", "-p", "x^12 + y^12 + z^12"])
    assert result.exit_code == 2
    assert "InvalidInputError" in result.output


def test_input_file_comments_are_ignored(runner, tmp_path):
    path = tmp_path / "contour.txt"
    path.write_text("# not a contour\nx^12 + y^12\n + z^12\n", encoding="utf-8")
    result = runner.invoke(cli, ["analyze", "-i", str(path)])
    assert result.exit_code == 2
    assert "A divides U exactly 0 times" in result.output


def test_bad_camera_exits_2(runner):
    result = runner.invoke(cli, ["forward", "--camera", "1,2"])
    assert result.exit_code == 2
    result = runner.invoke(cli, ["forward", "--camera", "1,a,2"])
    assert result.exit_code == 2


def test_negative_guess_limit_exits_2(runner):
    result = runner.invoke(cli, ["analyze", "-p", "x^12", "--guess-limit", "0"])
    assert result.exit_code == 2


@pytest.mark.slow
def test_forward_then_analyze(runner, tmp_path):
    contour = tmp_path / "contour.txt"
    result = runner.invoke(cli, ["forward", "--seed", "1", "--camera", "0,0,5",
                                 "--contour-output", str(contour)])
    assert result.exit_code == 0
    document = json.loads(result.stdout)
    assert document["k"] == 2
    assert document["degU"] == 12
    assert document["camera"] == ["0", "0", "5"]
    assert contour.read_text(encoding="utf-8").startswith("# apparent contour")

    result = runner.invoke(cli, ["analyze", "-i", str(contour), "--seed", "1"])
    assert result.exit_code == 0
    analysis = json.loads(result.stdout)
    assert analysis["caseTag"] == "nodal"
    assert analysis["k"] == 2


@pytest.mark.slow
def test_roundtrip_command(runner, tmp_path):
    output = tmp_path / "verdict.json"
    result = runner.invoke(cli, ["roundtrip", "--seed", "1", "-o", str(output)])
    assert result.exit_code == 0
    verdict = json.loads(output.read_text(encoding="utf-8"))
    assert verdict["verdict"] is True
    assert verdict["match"] == "hidden"
    assert verdict["successCount"] >= 1


@pytest.mark.slow
def test_garbage_contour_exits_3(runner, R3):
    octic = embed(_random_form(np.random.default_rng(0), XYZ, 8), R3)
    text = format_polynomial(absolute_conic(R3)**2 * octic)
    result = runner.invoke(cli, ["reconstruct", "-p", text])
    assert result.exit_code == 3
    run = json.loads(result.stdout)
    assert run["solved"] is False
    assert all(report["outcome"] == "fail" for report in run["reports"])
    assert all(report["explanation"]["stage"] != "pipeline" for report in run["reports"])
