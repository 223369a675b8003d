"""
Predefined explanations for failed reconstruction guesses
"""

from typing import Any, Dict, Optional

FAILURE_TEMPLATES = {
    "line14": {
        "line": 14,
        "stage": "conductor",
        "message": "The conductor has no unique sextic generator",
        "hint": "Some skipped cluster should contribute, or a contributing one is the image of a surface singularity",
    },
    "line15": {
        "line": 15,
        "stage": "conductor",
        "message": "The septic piece of the conductor is not 4-dimensional",
        "hint": "The guess yields the right sextic but a wrong local structure at some cluster",
    },
    "line19": {
        "line": 19,
        "stage": "lift",
        "message": "The lifted contour is not generated by one cubic and one quartic",
        "hint": "The map (xG0 : yG0 : zG0 : G1) does not lift the apparent contour to a space curve on a quartic",
    },
    "line24": {
        "line": 24,
        "stage": "infinity plane",
        "message": "No quartic through the lifted contour becomes a Darboux cyclide",
        "hint": "The ansatz or the plane at infinity has no rational solution for this guess",
    },
    "verification": {
        "line": None,
        "stage": "verification",
        "message": "All assertions passed but the candidate does not reproduce the contour",
        "hint": "Check the input contour; the candidate discriminant differs from it",
    },
    "error": {
        "line": None,
        "stage": "pipeline",
        "message": "The guess was aborted by an error",
        "hint": "See the error diagnostic; resource limits can be raised through the environment",
    },
}


def get_failure_template(label: Optional[str]) -> Dict[str, Any]:
    """
    Get a failure template by label (an assertion line, "verification" or "error")
    """
    return FAILURE_TEMPLATES.get(label or "verification", FAILURE_TEMPLATES["error"])


def get_all_templates() -> Dict[str, Dict[str, Any]]:
    """
    Get all available failure templates
    """
    return FAILURE_TEMPLATES
