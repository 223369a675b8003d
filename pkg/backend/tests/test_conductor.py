"""Tests for conductor contributions, localization and assembly."""

from itertools import count

import pytest

import conductor
from conductor import (
    Contribution,
    assemble,
    candidate_contributions,
    conductor_by_quotient,
    cross_contribution,
    localize,
    locally_equal,
    maximal_ideal_contribution,
    mixed_derivative_ideal,
    mixed_jacobian_ideal,
)
from contour import ClusterKind, GuessVector, NodeOnVariant, SpecialPointCluster, strip_absolute
from errors import AssertG0Failed, AssertG1Failed, GenericityError, InvalidInputError
from ideals import Ideal, power
from poly import absolute_conic, partial, polynomial_ring


@pytest.fixture
def nodal_input(R3):
    x, y, z = R3.gens
    return strip_absolute(absolute_conic(R3)**2 * (x**8 + y**8 + z**8))


def _cluster(R3, kind, cid="c1"):
    x, y, _ = R3.gens
    return SpecialPointCluster(cid, kind, y, Ideal([x, y]), 1, 1)


def _contribution(ideal):
    return Contribution("c1", "maximal", ideal, ideal, 1)


def test_mixed_derivative_generators():
    R = polynomial_ring(("x", "y"))
    x, y = R.gens
    I = mixed_derivative_ideal(y - x**2, y, -4, ("x", "y"))
    assert I.generators == (y**2 - x**2 * y, -2 * x * y, 4 * x**2 - 3 * y)
    with pytest.raises(InvalidInputError):
        mixed_derivative_ideal(y - x**2, y, 0, ("x", "y"))


def test_mixed_jacobian_contains_product_terms():
    R = polynomial_ring(("x", "y"))
    x, y = R.gens
    K = Ideal([x, y])
    I = mixed_jacobian_ideal(y - x**2, y, -9, K, ("x", "y"))
    F, G = y - x**2, y
    assert I.contains(F * G * x)
    assert I.contains(F * G)
    with pytest.raises(InvalidInputError):
        mixed_jacobian_ideal(F, G, -9, Ideal([], ring=R), ("x", "y"))


def test_cross_contribution(nodal_input, R3):
    I = cross_contribution(nodal_input)
    assert I.generators == (nodal_input.U1, absolute_conic(R3)**2)


def test_maximal_contribution_kinds(R3):
    cluster = _cluster(R3, ClusterKind.NODE_OFF_CE)
    assert maximal_ideal_contribution(cluster) is cluster.radical
    with pytest.raises(InvalidInputError):
        maximal_ideal_contribution(_cluster(R3, ClusterKind.TRANSVERSAL_CE))


def test_candidate_contributions_follow_the_guess(nodal_input, R3):
    off = _cluster(R3, ClusterKind.NODE_OFF_CE)
    keep = GuessVector(0, (("c1", False),))
    skip = GuessVector(1, (("c1", True),))
    assert [f for f, _ in candidate_contributions(nodal_input, off, keep)] == ["maximal"]
    assert candidate_contributions(nodal_input, off, skip) == []

    on = _cluster(R3, ClusterKind.NODE_ON_CE)
    formulas = {
        variant: [f for f, _ in candidate_contributions(nodal_input, on, GuessVector(0, (), (("c1", variant),)))]
        for variant in NodeOnVariant
    }
    assert formulas[NodeOnVariant.CROSS] == ["cross"]
    assert formulas[NodeOnVariant.CROSS_AND_MAXIMAL] == ["cross", "maximal"]

    tangent = _cluster(R3, ClusterKind.TANGENTIAL_CE)
    assert [f for f, _ in candidate_contributions(nodal_input, tangent, keep)] == ["mixed_derivative"]
    transversal = _cluster(R3, ClusterKind.TRANSVERSAL_CE)
    assert [f for f, _ in candidate_contributions(nodal_input, transversal, keep)] == ["cross"]


def test_localize_at_a_point(R3):
    x, y, z = R3.gens
    cluster = _cluster(R3, ClusterKind.NODE_OFF_CE)
    localized, n = localize(Ideal([x, y**2 * (y - z)]), cluster, degree_cap=8)
    assert n == 2
    assert localized.equals(Ideal([x, y**2]))
    with pytest.raises(InvalidInputError):
        localize(Ideal([x]), cluster, degree_cap=6)


def test_localization_power_bound(R3, monkeypatch):
    x, y, _ = R3.gens
    powers = []
    bracket_power = conductor._bracket_power

    def recording(I, n):
        powers.append(n)
        return bracket_power(I, n)

    changing = count()
    monkeypatch.setattr(conductor, "_bracket_power", recording)
    monkeypatch.setattr(conductor, "graded_dimension", lambda I, d: next(changing))
    with pytest.raises(GenericityError):
        localize(Ideal([x, y]), _cluster(R3, ClusterKind.NODE_OFF_CE), degree_cap=7)
    # N = 9 is the last candidate, compared against the 10th power
    assert powers == list(range(1, 11))


def test_assemble_extracts_g0_and_g1(R3):
    x, y, _ = R3.gens
    pair = assemble([_contribution(Ideal([x**6, y**7]))], R3)
    assert pair.G0 == x**6
    assert pair.G1 == y**7
    assert len(pair.degree7_basis) == 4
    assert pair.to_dict() == {"G0": "x^6", "G1": "y^7"}


def test_assembly_strategies_agree(R3):
    x, y, z = R3.gens
    contributions = [_contribution(Ideal([x**6, y**7])), _contribution(Ideal([x, y]))]
    graded = assemble(contributions, R3, strategy="graded")
    ideal = assemble(contributions, R3, strategy="ideal")
    assert (graded.G0, graded.G1) == (ideal.G0, ideal.G1)
    with pytest.raises(InvalidInputError):
        assemble(contributions, R3, strategy="sparse")


def test_assemble_failures(R3):
    x, _, _ = R3.gens
    with pytest.raises(AssertG1Failed) as info:
        assemble([_contribution(Ideal([x**6]))], R3)
    assert info.value.label == "line15"
    assert info.value.diagnostics["dimDeg7"] == 3

    with pytest.raises(AssertG0Failed) as info:
        assemble([], R3)
    assert info.value.label == "line14"
    assert info.value.diagnostics["dimDeg6"] == 28


def test_conductor_of_a_node():
    R = polynomial_ring(("x", "y", "t"))
    x, y, t = R.gens
    C = conductor_by_quotient(Ideal([t**2 - x - 1, y - t * x]), "t", rank=2)
    x2, y2 = C.ring.gens
    assert C.equals(Ideal([x2, y2]))


def test_conductor_of_a_cusp():
    R = polynomial_ring(("x", "y", "t"))
    x, y, t = R.gens
    C = conductor_by_quotient(Ideal([t**2 - x, y - t**3]), "t", rank=2)
    x2, y2 = C.ring.gens
    assert locally_equal(C, Ideal([x2, y2]))


def test_conductor_of_a_tacnode():
    R = polynomial_ring(("x", "y", "t"))
    x, y, t = R.gens
    C = conductor_by_quotient(Ideal([t**2 - 1, y - t * x**2]), "t", rank=2)
    x2, y2 = C.ring.gens
    assert locally_equal(C, Ideal([x2**2, y2]))
    assert not locally_equal(C, Ideal([x2, y2]))
    with pytest.raises(InvalidInputError):
        conductor_by_quotient(Ideal([t**2 - 1]), "s")


def test_conductor_of_a_crossing_with_a_multiple_component():
    R = polynomial_ring(("x", "y", "t"))
    x, y, t = R.gens
    for k in (2, 3):
        # <y^k, t> and <x, t - 1> are comaximal, so their product is the intersection
        branches = Ideal([x * t, t**2 - t, y**k * (t - 1), x * y**k])
        C = conductor_by_quotient(branches, "t", rank=2)
        x2, y2 = C.ring.gens
        assert C.equals(Ideal([x2, y2**k]))


def test_cuspidal_tangency_matches_the_quotient_conductor():
    R = polynomial_ring(("x", "y", "z"))
    x, y, z = R.gens
    F = z**3 - (y - x * z)**2
    C = conductor_by_quotient(Ideal([F, partial(F, "z")]), "z", rank=3)
    a, b = C.ring.gens
    formula = mixed_jacobian_ideal(4 * a**3 - 27 * b, b, -9, power(Ideal([a, b]), 2), ("x", "y"))
    assert C.equals(formula)
    assert C.contains(b**3)
    assert not C.contains(b**2)
