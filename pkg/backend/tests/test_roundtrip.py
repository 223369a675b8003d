"""End-to-end reconstruction of seeded cyclides and the service formatting."""

import pytest
from sympy.polys.domains import QQ

from contour import GuessVector
from reconstruct import ReconstructionReport
from schemas import HealthStatus
from services.failure_templates import get_all_templates, get_failure_template
from services.reconstruction_service import ReconstructionService, parse_camera, strip_comments


def test_strip_comments():
    assert strip_comments("# header\nx^2 +\n  # note\ny^2\n") == "x^2 + y^2"


def test_parse_camera():
    assert parse_camera("1, -2/3, 0") == (QQ(1), QQ(-2, 3), QQ(0))
    assert parse_camera(["0", "0", "5"])[2] == 5


def test_failure_templates():
    assert get_failure_template("line14")["line"] == 14
    assert get_failure_template("no-such-label") == get_failure_template("error")
    assert get_failure_template(None)["stage"] == "verification"
    assert set(get_all_templates()) >= {"line14", "line15", "line19", "line24", "verification", "error"}


def test_failure_labels():
    service = ReconstructionService()
    guess = GuessVector(0)
    asserted = ReconstructionReport(guess, "fail", "line19")
    verification = ReconstructionReport(guess, "fail", None, diagnostics={"errorType": "VerificationError"})
    other = ReconstructionReport(guess, "fail", None, diagnostics={"errorType": "GenericityError"})
    assert service._failure_counts([asserted, verification, other, asserted]) == {
        "error": 1, "line19": 2, "verification": 1}


def test_health_status():
    status = ReconstructionService().health()
    assert isinstance(status, HealthStatus)
    assert status.to_json_dict()["settings"]["degreeCap"] >= 7


@pytest.mark.slow
def test_wrong_guesses_fail_with_named_assertions():
    verdict = ReconstructionService().roundtrip(1, "nodal")
    assert verdict.verdict
    assert verdict.failures
    assert set(verdict.failures) <= {"line14", "line15", "line19", "line24"}
    assert sum(verdict.failures.values()) + verdict.success_count == verdict.guess_count


@pytest.mark.slow
@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_nodal_roundtrip(seed):
    verdict = ReconstructionService().roundtrip(seed, "nodal")
    assert verdict.verdict
    assert verdict.match == "hidden"
    assert verdict.instance.k == 2
    assert verdict.success_count >= 1


@pytest.mark.slow
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_cuspidal_roundtrip(seed):
    verdict = ReconstructionService().roundtrip(seed, "cuspidal")
    assert verdict.verdict
    assert verdict.instance.k == 3
