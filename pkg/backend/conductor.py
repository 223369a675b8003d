#!/usr/bin/env python3
"""
Conductor Ideal
Local conductor contributions per special point cluster, their localization
to homogeneous ideals supported on the cluster, the global assembly in
degrees 6 and 7, and an independent conductor computation by ideal quotients
used to validate the local formulas
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from contour import ClusterKind, ContourInput, GuessVector, NodeOnVariant, SpecialPointCluster
from errors import AssertG0Failed, AssertG1Failed, GenericityError, InvalidInputError
from ideals import (
    Ideal,
    change_ring,
    eliminate,
    graded_dimension,
    graded_piece,
    ideal_product,
    ideal_sum,
    in_span,
    intersect_all,
    power,
    residual,
    saturate_by_variable,
    span_basis,
    subspace_intersection,
)
from poly import (
    XYZ,
    EliminationOrder,
    Polynomial,
    embed,
    format_polynomial,
    gen,
    monomials_of_degree,
    normalize,
    partial,
    polynomial_ring,
    var_names,
)
from utils.config import get_settings

logger = logging.getLogger(__name__)

NODAL_TANGENT_LAMBDA = QQ(-4)
CUSPIDAL_TANGENT_LAMBDA = QQ(-9)


@dataclass
class Contribution:
    cluster_id: str
    formula: str
    candidate: Ideal
    localized: Ideal
    power: int

    def to_dict(self) -> Dict:
        return {
            "clusterId": self.cluster_id,
            "formula": self.formula,
            "power": self.power,
            "localizedGenerators": len(self.localized.generators),
        }


@dataclass
class ConductorPair:
    G0: Polynomial
    G1: Polynomial
    conductor: Ideal
    degree7_basis: List[Polynomial] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {"G0": format_polynomial(self.G0), "G1": format_polynomial(self.G1)}


# ---------------------------------------------------------------------------
# local formulas
# ---------------------------------------------------------------------------

def maximal_ideal_contribution(cluster: SpecialPointCluster) -> Ideal:
    if cluster.kind not in (ClusterKind.CUSP_OFF_CE, ClusterKind.NODE_OFF_CE, ClusterKind.NODE_ON_CE):
        raise InvalidInputError(f"maximal ideal contribution is undefined for {cluster.kind.value} clusters")
    return cluster.radical


def cross_contribution(inp: ContourInput) -> Ideal:
    """<U1> + <A^k>: the ideal of B1 plus the k-th power of the ideal of C_E"""
    return Ideal([inp.U1, inp.A**inp.k], ring=inp.U1.ring)


def mixed_derivative_ideal(F: Polynomial, G: Polynomial, lam, variables: Sequence[str] = XYZ) -> Ideal:
    """<F*G> plus dF/dv * G + lam * F * dG/dv for every variable v"""
    lam = QQ.convert(lam)
    if not lam:
        raise InvalidInputError("mixed derivative ideal needs a nonzero constant")
    gens = [F * G]
    for v in variables:
        gens.append(partial(F, v) * G + F * partial(G, v).mul_ground(lam))
    return Ideal(gens, ring=F.ring)


def jacobian_minor(P: Polynomial, Q: Polynomial, u: str, v: str) -> Polynomial:
    return partial(P, u) * partial(Q, v) - partial(P, v) * partial(Q, u)


def mixed_jacobian_ideal(F: Polynomial, G: Polynomial, lam, K: Ideal, variables: Sequence[str] = XYZ) -> Ideal:
    """
    Mixed jacobian ideal of <F>, <G> with constant lam and auxiliary ideal K.

    Generated by F*G times the jacobian ideal of K, K times the mixed
    derivative ideal, and Jac(F, H)*G + lam*F*Jac(G, H) for H in K and
    every pair of variables.
    """
    lam = QQ.convert(lam)
    if not lam:
        raise InvalidInputError("mixed jacobian ideal needs a nonzero constant")
    if K.is_zero:
        raise InvalidInputError("mixed jacobian ideal needs a nonzero auxiliary ideal")
    ring = F.ring
    hs = [embed(h, ring) for h in K.generators]
    FG = F * G
    gens = [FG * h for h in hs]
    gens += [FG * partial(h, v) for h in hs for v in variables]
    gens += list(ideal_product(Ideal(hs, ring=ring), mixed_derivative_ideal(F, G, lam, variables)).generators)
    for h in hs:
        for u, v in combinations(variables, 2):
            gens.append(jacobian_minor(F, h, u, v) * G + F * jacobian_minor(G, h, u, v).mul_ground(lam))
    return Ideal(gens, ring=ring)


# ---------------------------------------------------------------------------
# localization and assembly
# ---------------------------------------------------------------------------

def _bracket_power(I: Ideal, n: int) -> Ideal:
    """<g^n : g in basis>, between I^(m(n-1)+1) and I^n"""
    return Ideal([g**n for g in I.basis], ring=I.ring)


def localize(candidate: Ideal, cluster: SpecialPointCluster, degree_cap: Optional[int] = None) -> Tuple[Ideal, int]:
    """
    Largest homogeneous ideal agreeing with candidate at the cluster points.

    candidate + rad^N (bracket powers of the cluster radical), saturated by z,
    for the first N after which the pieces in degrees <= degree_cap stop
    shrinking.
    """
    degree_cap = get_settings().degree_cap if degree_cap is None else degree_cap
    if degree_cap < 7:
        raise InvalidInputError("degree cap must be at least 7")
    rad = change_ring(cluster.radical, candidate.ring)

    def attempt(n: int) -> Ideal:
        return saturate_by_variable(ideal_sum(candidate, _bracket_power(rad, n)), "z")

    previous = attempt(1)
    for n in range(2, degree_cap + 4):
        current = attempt(n)
        if all(graded_dimension(current, d) == graded_dimension(previous, d) for d in range(degree_cap + 1)):
            logger.debug(f"cluster {cluster.id}: localization stable at N = {n - 1}")
            return previous, n - 1
        previous = current
    raise GenericityError(f"localization at cluster {cluster.id} did not stabilize below degree {degree_cap}")


def candidate_contributions(inp: ContourInput, cluster: SpecialPointCluster, guess: GuessVector) -> List[Tuple[str, Ideal]]:
    """Formulas contributed by one cluster under a guess (empty when skipped)"""
    kind = cluster.kind
    if kind in (ClusterKind.CUSP_OFF_CE, ClusterKind.NODE_OFF_CE):
        return [] if guess.skips(cluster.id) else [("maximal", maximal_ideal_contribution(cluster))]
    if kind == ClusterKind.NODE_ON_CE:
        variant = guess.variant(cluster.id)
        result = [("cross", cross_contribution(inp))]
        if variant == NodeOnVariant.CROSS_AND_MAXIMAL:
            result.append(("maximal", maximal_ideal_contribution(cluster)))
        return result
    if guess.skips(cluster.id):
        return []
    if kind == ClusterKind.TRANSVERSAL_CE:
        return [("cross", cross_contribution(inp))]
    if inp.k == 2:
        return [("mixed_derivative", mixed_derivative_ideal(inp.U1, inp.A, NODAL_TANGENT_LAMBDA))]
    K = power(cluster.radical, 2)
    return [("mixed_jacobian", mixed_jacobian_ideal(inp.U1, inp.A, CUSPIDAL_TANGENT_LAMBDA, K))]


def contributions_for_guess(inp: ContourInput, clusters: Sequence[SpecialPointCluster], guess: GuessVector,
                            degree_cap: Optional[int] = None) -> List[Contribution]:
    result = []
    for cluster in clusters:
        for formula, candidate in candidate_contributions(inp, cluster, guess):
            localized, n = localize(candidate, cluster, degree_cap)
            result.append(Contribution(cluster.id, formula, candidate, localized, n))
    return result


def _full_space(ring, d: int) -> List[Polynomial]:
    return [ring.from_dict({m: QQ.one}) for m in monomials_of_degree(ring.ngens, d)]


def conductor_piece(contributions: Sequence[Contribution], d: int, ring) -> List[Polynomial]:
    """Degree-d piece of the intersection of the localized ideals"""
    piece = _full_space(ring, d)
    for c in contributions:
        piece = subspace_intersection(piece, graded_piece(c.localized, d), ring)
        if not piece:
            break
    return span_basis(piece, ring)


def assemble(contributions: Sequence[Contribution], ring=None, strategy: str = "graded") -> ConductorPair:
    """
    Intersect the localized contributions and extract G0 (degree 6) and G1 (degree 7).

    Raises AssertG0Failed or AssertG1Failed when the guess was wrong.
    """
    ring = ring or polynomial_ring(XYZ)
    if strategy == "ideal":
        if contributions:
            C = intersect_all([change_ring(c.localized, ring) for c in contributions])
            c6, c7 = graded_piece(C, 6), graded_piece(C, 7)
        else:
            c6, c7 = _full_space(ring, 6), _full_space(ring, 7)
    elif strategy == "graded":
        c6 = conductor_piece(contributions, 6, ring)
        c7 = conductor_piece(contributions, 7, ring) if len(c6) == 1 else []
    else:
        raise InvalidInputError(f"unknown assembly strategy {strategy!r}")

    if len(c6) != 1:
        raise AssertG0Failed(f"conductor has {len(c6)} independent elements in degree 6",
                             {"dimDeg6": len(c6)})
    G0 = normalize(c6[0])
    if len(c7) != 4:
        raise AssertG1Failed(f"conductor has {len(c7)} independent elements in degree 7",
                             {"dimDeg6": 1, "dimDeg7": len(c7)})
    multiples = span_basis([gen(ring, v) * G0 for v in XYZ], ring)
    if not all(in_span(m, c7, ring) for m in multiples):
        raise AssertG1Failed("x*G0, y*G0, z*G0 are not all in the degree 7 piece",
                             {"dimDeg6": 1, "dimDeg7": 4})
    G1 = None
    for v in c7:
        rest = residual(v, multiples, ring)
        if rest:
            G1 = normalize(rest)
            break
    if G1 is None:
        raise AssertG1Failed("no degree 7 element independent of the multiples of G0",
                             {"dimDeg6": 1, "dimDeg7": 4})
    conductor = Ideal([G0] + list(c7), ring=ring)
    logger.info(f"conductor assembled: G0 has {len(G0)} terms, G1 has {len(G1)} terms")
    return ConductorPair(G0, G1, conductor, list(c7))


# ---------------------------------------------------------------------------
# conductor by ideal quotients (local models)
# ---------------------------------------------------------------------------

def conductor_by_quotient(contour_ideal: Ideal, fibre_var: str, rank: int = 3) -> Ideal:
    """
    Conductor of the image ring B in B' = Q[base, fibre]/contour_ideal.

    B' is generated over B by 1, t, ..., t^(rank-1) for the fibre variable t;
    the conductor is the set of b in Q[base] with b*t^i in B + contour_ideal
    for 0 < i < rank.
    """
    names = var_names(contour_ideal.ring)
    if fibre_var not in names:
        raise InvalidInputError(f"unknown fibre variable {fibre_var}")
    base = tuple(n for n in names if n != fibre_var)
    target = polynomial_ring(base)
    pieces = []
    for i in range(1, rank):
        lifted = polynomial_ring((fibre_var, "_s") + base, EliminationOrder(1))
        t, s = lifted.gens[0], lifted.gens[1]
        gens = [embed(g, lifted) for g in contour_ideal.generators] + [s - t**i]
        image = eliminate(Ideal(gens, ring=lifted), [fibre_var])
        graded = change_ring(image, polynomial_ring(("_s",) + base, EliminationOrder(1)))
        members = []
        for g in graded.basis:
            top = max(m[0] for m in g.itermonoms())
            if top == 0:
                members.append(g)
            elif top == 1:
                members.append(g.ring.from_dict({(0,) + m[1:]: c for m, c in g.iterterms() if m[0] == 1}))
        pieces.append(Ideal([embed(g, target) for g in members], ring=target))
    return intersect_all(pieces)


def locally_equal(I: Ideal, J: Ideal, n: int = 8) -> bool:
    """I + m^n == J + m^n for the maximal ideal m at the origin"""
    ring = I.ring
    m_n = [ring.from_dict({e: QQ.one}) for e in monomials_of_degree(ring.ngens, n)]
    left = Ideal(list(I.generators) + m_n, ring=ring)
    right = Ideal([embed(g, ring) for g in J.generators] + m_n, ring=ring)
    return left.equals(right)
