"""Tests for the forward oracle: cyclides, cameras, contours and comparisons."""

import numpy as np
import pytest

from contour import CaseTag
from errors import InvalidInputError
from forward import (
    CyclideSpec,
    apparent_contour,
    build_instance,
    case_of,
    equal_up_to_scaling,
    has_no_triple_points,
    invert_at_camera,
    make_cyclide,
    matches_hidden,
    random_instance,
    random_spec,
    torus_spec,
    translate_camera,
)
from poly import absolute_conic, equal_up_to_scalar, substitute, total_degree


@pytest.fixture
def odd(R4):
    """A cyclide with a term of odd degree in w"""
    x, y, _, w = R4.gens
    return make_cyclide(CyclideSpec(x, y**2 + w**2, CaseTag.NODAL))


def test_torus_expansion(torus, R4):
    x, y, _, w = R4.gens
    A = absolute_conic(R4)
    assert torus == (A + 3 * w**2)**2 - 16 * w**2 * (x**2 + y**2)


def test_degenerate_specs_are_rejected(R4):
    x, _, _, w = R4.gens
    A = absolute_conic(R4)
    with pytest.raises(InvalidInputError):
        make_cyclide(CyclideSpec(R4.zero, w**2 - 2 * A, CaseTag.CUSPIDAL))
    with pytest.raises(InvalidInputError):
        make_cyclide(CyclideSpec(x**2, w**2, CaseTag.NODAL))
    with pytest.raises(InvalidInputError):
        make_cyclide(CyclideSpec(w, x**2, CaseTag.NODAL))
    with pytest.raises(InvalidInputError):
        make_cyclide(CyclideSpec(torus_spec().L, torus_spec().Q, CaseTag.CUSPIDAL))


def test_case_of(R4):
    x, y, _, w = R4.gens
    A = absolute_conic(R4)
    assert case_of(x, y**2) == CaseTag.NODAL
    assert case_of(x, x**2 + 2 * A + w * y) == CaseTag.CUSPIDAL


def test_random_cuspidal_spec_is_tagged_consistently():
    rng = np.random.default_rng(9)
    for _ in range(20):
        spec = random_spec(rng, CaseTag.CUSPIDAL)
        assert case_of(spec.L, spec.Q) == CaseTag.CUSPIDAL


def test_camera_translation_is_a_group_action(torus):
    assert translate_camera(torus, (0, 0, 0)) == torus
    step = translate_camera(translate_camera(torus, (1, 0, 2)), (0, -1, 1))
    assert step == translate_camera(torus, (1, -1, 3))


def test_camera_keeps_the_plane_at_infinity(torus):
    moved = translate_camera(torus, (1, 0, 2))
    assert substitute(moved, "w", moved.ring.zero) == substitute(torus, "w", torus.ring.zero)


def test_camera_on_the_surface(torus):
    with pytest.raises(InvalidInputError):
        translate_camera(torus, (1, 0, 0))


def test_torus_seen_from_its_axis():
    instance = build_instance(torus_spec(), (0, 0, 5), check_triple_points=False)
    assert instance.k == 2
    assert total_degree(instance.U) == 12
    document = instance.to_dict()
    assert document["degU1"] == 8
    assert document["camera"] == ["0", "0", "5"]
    assert document["caseTag"] == "nodal"


def test_contour_needs_quartic_in_w(R4):
    x, y, z, w = R4.gens
    with pytest.raises(InvalidInputError):
        apparent_contour(x**4 + y**4 + z**3 * w)


def test_scaling_witness(torus, R4):
    w = R4.gens[3]
    G = substitute(torus, "w", 2 * w).mul_ground(3)
    witness = equal_up_to_scaling(torus, G)
    assert (witness.d, witness.mu) == (2, 3)
    assert equal_up_to_scaling(torus, torus + w**4) is None


def test_scaling_witness_with_sign(odd, R4):
    w = R4.gens[3]
    G = substitute(odd, "w", -w).mul_ground(3)
    witness = equal_up_to_scaling(odd, G)
    assert (witness.d, witness.mu) == (-1, 3)

    H = substitute(G, "w", 2 * w).mul_ground(5)
    composed = equal_up_to_scaling(odd, H)
    assert (composed.d, composed.mu) == (-2, 15)


def test_inversion_is_an_involution(torus, odd):
    for F in (torus, odd):
        assert equal_up_to_scalar(invert_at_camera(invert_at_camera(F)), F)


def test_twin_detection(odd):
    twin = invert_at_camera(odd)
    assert matches_hidden(odd, odd) == "hidden"
    assert matches_hidden(twin, odd) == "twin"
    assert matches_hidden(odd + twin, odd) is None


def test_triple_points(R4):
    x, y, z, w = R4.gens
    assert has_no_triple_points(x**4 + y**4 + z**4 + w**4)
    assert not has_no_triple_points(x**3 * w + y**4 + z**4)


@pytest.mark.slow
def test_random_cuspidal_instance():
    instance = random_instance(1, CaseTag.CUSPIDAL)
    assert instance.k == 3
    assert instance.to_dict()["degU1"] == 6
    assert make_cyclide(instance.spec) == instance.F


@pytest.mark.slow
def test_random_instances_are_reproducible():
    first = random_instance(2, CaseTag.NODAL)
    second = random_instance(2, CaseTag.NODAL)
    assert first.U == second.U
    assert first.attempt == second.attempt
