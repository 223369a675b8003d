#!/usr/bin/env python3
"""
Apparent Contour Analysis
Strips the absolute conic from the input discriminant, brings the contour
into generic coordinates with rational rotations, groups special points into
Galois-stable clusters (one irreducible resolvent each) and enumerates the
guess space over the ambiguous clusters
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, Rational, eye
from sympy.polys.domains import QQ

from errors import GenericityError, InvalidInputError, ResourceLimitError
from ideals import Ideal, hilbert_function, saturate_by_variable
from poly import (
    XYZ,
    Polynomial,
    SquarefreeDecomposition,
    absolute_conic,
    discriminant,
    embed,
    factor_univariate,
    first_subresultant,
    format_polynomial,
    gen,
    is_homogeneous,
    normalize,
    partial,
    polynomial_ring,
    resultant,
    sort_key,
    squarefree,
    substitute_many,
    total_degree,
    trial_divide,
)
from utils.config import get_settings

logger = logging.getLogger(__name__)

FACTOR_DEGREE_LIMIT = 24


class CaseTag(Enum):
    NODAL = "nodal"
    CUSPIDAL = "cuspidal"


class ClusterKind(Enum):
    CUSP_OFF_CE = "CuspOffCE"
    NODE_OFF_CE = "NodeOffCE"
    NODE_ON_CE = "NodeOnCE"
    TRANSVERSAL_CE = "TransversalCE"
    TANGENTIAL_CE = "TangentialCE"


KIND_ORDER = list(ClusterKind)
ISOLATED_KINDS = (ClusterKind.CUSP_OFF_CE, ClusterKind.NODE_OFF_CE)


class NodeOnVariant(Enum):
    CROSS = "cross"
    CROSS_AND_MAXIMAL = "cross_and_maximal"


def contour_ring():
    return polynomial_ring(XYZ)


@dataclass(frozen=True)
class ContourInput:
    U: Polynomial
    U1: Polynomial
    k: int

    @property
    def case_tag(self) -> CaseTag:
        return CaseTag.NODAL if self.k == 2 else CaseTag.CUSPIDAL

    @property
    def A(self) -> Polynomial:
        return absolute_conic(self.U.ring)


@dataclass(frozen=True)
class SpecialPointCluster:
    id: str
    kind: ClusterKind
    resolvent: Polynomial
    radical: Ideal
    size: int
    multiplicity: int

    @property
    def guessable(self) -> bool:
        return self.kind != ClusterKind.NODE_ON_CE

    def to_dict(self) -> Dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "resolvent": format_polynomial(self.resolvent),
            "size": self.size,
            "multiplicity": self.multiplicity,
            "guessable": self.guessable,
        }


@dataclass(frozen=True)
class GuessVector:
    """skip=True means the cluster is taken as the image of a special point of the surface"""

    index: int
    choices: Tuple[Tuple[str, bool], ...] = ()
    variants: Tuple[Tuple[str, NodeOnVariant], ...] = ()

    def skips(self, cluster_id: str) -> bool:
        return dict(self.choices).get(cluster_id, False)

    def variant(self, cluster_id: str) -> NodeOnVariant:
        return dict(self.variants).get(cluster_id, NodeOnVariant.CROSS)

    def to_dict(self) -> Dict:
        return {
            "index": self.index,
            "choices": {cid: skip for cid, skip in self.choices},
            "variants": {cid: v.value for cid, v in self.variants},
        }


@dataclass
class ContourAnalysis:
    original: ContourInput
    input: ContourInput
    rotation: Matrix
    clusters: List[SpecialPointCluster]
    guesses: List[GuessVector]
    pruned: int = 0
    diagnostics: Dict = field(default_factory=dict)

    def cluster(self, cluster_id: str) -> SpecialPointCluster:
        for c in self.clusters:
            if c.id == cluster_id:
                return c
        raise KeyError(cluster_id)

    def to_dict(self) -> Dict:
        return {
            "caseTag": self.input.case_tag.value,
            "k": self.input.k,
            "U1": format_polynomial(self.input.U1),
            "rotation": [[str(self.rotation[i, j]) for j in range(3)] for i in range(3)],
            "clusters": [c.to_dict() for c in self.clusters],
            "guessCount": len(self.guesses),
            "prunedGuesses": self.pruned,
            "diagnostics": self.diagnostics,
        }


# ---------------------------------------------------------------------------
# input normalization
# ---------------------------------------------------------------------------

def strip_absolute(U: Polynomial) -> ContourInput:
    """Split U = U1 * A^k with k in {2, 3} and A not dividing U1"""
    ring = contour_ring()
    U = embed(U, ring)
    if not U:
        raise InvalidInputError("the contour polynomial is zero")
    if not is_homogeneous(U) or total_degree(U) != 12:
        raise InvalidInputError(f"expected a homogeneous form of degree 12 in x, y, z, got degree {total_degree(U)}")
    U1, k = trial_divide(U, absolute_conic(ring))
    if k not in (2, 3):
        raise InvalidInputError(
            f"not the apparent contour of a Darboux cyclide in general position (A divides U exactly {k} times)")
    logger.info(f"stripped A^{k} from the contour, deg U1 = {total_degree(U1)}")
    return ContourInput(U, U1, k)


def cayley_rotation(a: int, b: int, c: int) -> Matrix:
    """Rational orthogonal matrix (I - S)(I + S)^-1 for the skew matrix of (a, b, c)"""
    S = Matrix([[0, -c, b], [c, 0, -a], [-b, a, 0]]).applyfunc(Rational)
    M = (eye(3) - S) * (eye(3) + S).inv()
    if M.T * M != eye(3):
        raise GenericityError("Cayley transform produced a non-orthogonal matrix")
    return M


def random_rotation(seed: int, attempt: int) -> Matrix:
    rng = np.random.default_rng([abs(seed), attempt])
    while True:
        a, b, c = (int(v) for v in rng.integers(-3, 4, size=3))
        if (a, b, c) != (0, 0, 0):
            return cayley_rotation(a, b, c)


def rotate_polynomial(p: Polynomial, M: Matrix) -> Polynomial:
    """p(M * (x, y, z)); w (if present) is untouched"""
    ring = p.ring
    x, y, z = (gen(ring, n) for n in XYZ)
    images = {}
    for i, name in enumerate(XYZ):
        images[name] = (x.mul_ground(QQ.from_sympy(M[i, 0]))
                        + y.mul_ground(QQ.from_sympy(M[i, 1]))
                        + z.mul_ground(QQ.from_sympy(M[i, 2])))
    return substitute_many(p, images)


def rotate_input(inp: ContourInput, M: Matrix) -> ContourInput:
    return ContourInput(rotate_polynomial(inp.U, M), rotate_polynomial(inp.U1, M), inp.k)


# ---------------------------------------------------------------------------
# discriminant data and clusters
# ---------------------------------------------------------------------------

@dataclass
class ContourData:
    D: Polynomial
    R: Polynomial
    D_parts: SquarefreeDecomposition
    R_parts: SquarefreeDecomposition
    _subresultants: Dict[str, Tuple[Polynomial, Polynomial]] = field(default_factory=dict)

    def subresultant(self, inp: ContourInput, partner: str) -> Tuple[Polynomial, Polynomial]:
        if partner not in self._subresultants:
            other = partial(inp.U1, "x") if partner == "dx" else inp.A
            self._subresultants[partner] = first_subresultant(inp.U1, other, "x")
        return self._subresultants[partner]


def _lead_y(p: Polynomial) -> object:
    """Coefficient of y^deg in a binary form of (y, z); zero iff z divides p"""
    return p.get((0, total_degree(p), 0), QQ.zero)


def contour_data(inp: ContourInput) -> ContourData:
    U1 = inp.U1
    n = total_degree(U1)
    if not U1.get((n, 0, 0)):
        raise GenericityError("leading coefficient of U1 in x vanishes")
    D = discriminant(U1, "x")
    R = normalize(resultant(U1, inp.A, "x"))
    if not D or not R:
        raise GenericityError("discriminant or resultant in x vanishes identically")
    if not _lead_y(D) or not _lead_y(R):
        raise GenericityError("a special point lies on the line z = 0")
    D_parts = squarefree(D)
    R_parts = squarefree(R)
    if any(k > 3 for _, k in D_parts.factors):
        raise GenericityError("x-discriminant has a factor of multiplicity above 3")
    return ContourData(D, R, D_parts, R_parts)


def _irreducible(parts: Sequence[Polynomial]) -> List[Polynomial]:
    result = []
    for part in parts:
        for f, _ in factor_univariate(part, max_degree=FACTOR_DEGREE_LIMIT):
            result.append(f)
    return sorted(result, key=sort_key)


def _divides(f: Polynomial, g: Polynomial) -> bool:
    return not g.rem([f])


def _check_single_point_per_line(r: Polynomial, s1: Polynomial) -> None:
    if not s1 or not r.gcd(s1).is_ground:
        raise GenericityError(f"two special points share the projection line of {format_polynomial(r)}")


def _is_cluster_radical(I: Ideal, size: int) -> bool:
    return all(hilbert_function(I, d) == size for d in (size, size + 1))


def cluster_radical(inp: ContourInput, data: ContourData, r: Polynomial, on_ce: bool) -> Ideal:
    """
    Radical ideal of the points of the cluster with resolvent r.

    Saturation of the jacobian (or C_E) ideal plus r, verified by the Hilbert
    function; otherwise the graph of x = -s0/s1 over the roots of r.
    """
    ring = inp.U1.ring
    size = total_degree(r)
    if on_ce:
        gens = [inp.U1, inp.A, r]
        partner = "A"
    else:
        gens = [inp.U1] + [partial(inp.U1, v) for v in XYZ] + [r]
        partner = "dx"
    primary = saturate_by_variable(Ideal(gens, ring=ring), "z")
    if _is_cluster_radical(primary, size):
        return primary
    s1, s0 = data.subresultant(inp, partner)
    x = ring.gens[0]
    fallback = saturate_by_variable(Ideal([r, s1 * x + s0], ring=ring), "z")
    if not _is_cluster_radical(fallback, size):
        raise GenericityError(f"cannot isolate the cluster over {format_polynomial(r)}")
    logger.debug(f"cluster over {format_polynomial(r)} uses the subresultant radical")
    return fallback


def _make_clusters(inp, data, factors: List[Tuple[Polynomial, ClusterKind, int]]) -> List[SpecialPointCluster]:
    clusters = []
    counters: Dict[ClusterKind, int] = {}
    for r, kind, mult in sorted(factors, key=lambda t: (KIND_ORDER.index(t[1]), sort_key(t[0]))):
        on_ce = kind in (ClusterKind.TRANSVERSAL_CE, ClusterKind.TANGENTIAL_CE)
        partner = "A" if on_ce else "dx"
        _check_single_point_per_line(r, data.subresultant(inp, partner)[0])
        counters[kind] = counters.get(kind, 0) + 1
        clusters.append(SpecialPointCluster(
            id=f"{kind.value}-{counters[kind]}",
            kind=kind,
            resolvent=r,
            radical=cluster_radical(inp, data, r, on_ce),
            size=total_degree(r),
            multiplicity=mult,
        ))
    return clusters


def _singular_factors(inp: ContourInput, data: ContourData) -> List[Tuple[Polynomial, ClusterKind, int]]:
    R_mult = {format_polynomial(f): k for f, k in data.R_parts.factors}
    result = []
    for r in _irreducible(data.D_parts.part(3)):
        if _divides(r, data.R):
            raise GenericityError("a cusp of the contour lies on the image of the absolute conic")
        result.append((r, ClusterKind.CUSP_OFF_CE, 3))
    for r in _irreducible(data.D_parts.part(2)):
        if _divides(r, data.R):
            on_ce = [f for f in _irreducible(data.R_parts.part(2)) if f == r]
            if not on_ce:
                raise GenericityError("a node shares its projection with a simple C_E intersection")
            result.append((r, ClusterKind.NODE_ON_CE, 2))
        else:
            result.append((r, ClusterKind.NODE_OFF_CE, 2))
    if any(not f.gcd(data.R).is_ground for f in data.D_parts.part(1)):
        raise GenericityError("a branch point of the projection lies on C_E")
    return result


def _ce_factors(inp: ContourInput, data: ContourData) -> List[Tuple[Polynomial, ClusterKind, int]]:
    tangential_mult = 2 if inp.case_tag == CaseTag.NODAL else 3
    result = []
    for f, k in data.R_parts.factors:
        if k == 1:
            if not f.gcd(data.D).is_ground:
                raise GenericityError("a transversal C_E intersection shares a projection line with a singularity")
            result.extend((r, ClusterKind.TRANSVERSAL_CE, 1) for r in _irreducible([f]))
        elif k == tangential_mult:
            for r in _irreducible([f]):
                if _divides(r, data.D):
                    if k != 2:
                        raise GenericityError("a singular point lies on C_E with unexpected contact order")
                    continue
                result.append((r, ClusterKind.TANGENTIAL_CE, k))
        elif k == 2:
            # nodes on C_E in the cuspidal case
            for r in _irreducible([f]):
                if not _divides(r, data.D):
                    raise GenericityError("C_E intersection of multiplicity 2 in the cuspidal case")
        else:
            raise GenericityError(f"C_E resultant has a factor of multiplicity {k}")
    return result


def find_singular_clusters(inp: ContourInput, data: Optional[ContourData] = None) -> List[SpecialPointCluster]:
    """Cusp and node clusters from the squarefree parts of Disc_x(U1)"""
    data = data or contour_data(inp)
    return _make_clusters(inp, data, _singular_factors(inp, data))


def find_ce_clusters(inp: ContourInput, data: Optional[ContourData] = None) -> List[SpecialPointCluster]:
    """Transversal and tangential intersections with C_E from Res_x(U1, A)"""
    data = data or contour_data(inp)
    return _make_clusters(inp, data, _ce_factors(inp, data))


def classify(inp: ContourInput, data: Optional[ContourData] = None) -> List[SpecialPointCluster]:
    data = data or contour_data(inp)
    return find_singular_clusters(inp, data) + find_ce_clusters(inp, data)


def _search_generic(inp: ContourInput, seed: int, retries: int):
    reasons = []
    for attempt in range(retries + 1):
        M = eye(3) if attempt == 0 else random_rotation(seed, attempt)
        candidate = inp if attempt == 0 else rotate_input(inp, M)
        try:
            data = contour_data(candidate)
            clusters = classify(candidate, data)
        except GenericityError as e:
            logger.info(f"coordinates not generic (attempt {attempt}): {e.message}")
            reasons.append(e.message)
            continue
        return candidate, M, clusters, data
    raise GenericityError(f"genericity not achieved after {retries} rotations; last reason: {reasons[-1]}")


def ensure_generic(inp: ContourInput, seed: int = 0, retries: Optional[int] = None) -> Tuple[ContourInput, Matrix]:
    """Rotate by rational orthogonal matrices until the genericity tests pass"""
    retries = get_settings().genericity_retries if retries is None else retries
    generic, M, _, _ = _search_generic(inp, seed, retries)
    return generic, M


# ---------------------------------------------------------------------------
# guesses
# ---------------------------------------------------------------------------

def enumerate_guesses(clusters: Sequence[SpecialPointCluster], guess_limit: Optional[int] = None,
                      isolated_bound: Optional[int] = None) -> Tuple[List[GuessVector], int]:
    """
    Binary choices over guessable clusters times NodeOnCE variants.

    Returns the admissible guesses and how many were pruned because more
    than isolated_bound points would be isolated double point images.
    """
    settings = get_settings()
    guess_limit = settings.guess_limit if guess_limit is None else guess_limit
    isolated_bound = settings.isolated_bound if isolated_bound is None else isolated_bound

    guessable = [c for c in clusters if c.guessable]
    node_on = [c for c in clusters if c.kind == ClusterKind.NODE_ON_CE]
    if len(guessable) > guess_limit:
        raise ResourceLimitError(
            f"{len(guessable)} guessable clusters exceed the limit of {guess_limit}; supply hints or raise --guess-limit")

    guesses = []
    pruned = 0
    for bits in product((False, True), repeat=len(guessable)):
        isolated = sum(c.size for c, skip in zip(guessable, bits) if skip and c.kind in ISOLATED_KINDS)
        if isolated > isolated_bound:
            pruned += len(NodeOnVariant) ** len(node_on)
            continue
        for variants in product(list(NodeOnVariant), repeat=len(node_on)):
            guesses.append(GuessVector(
                index=len(guesses),
                choices=tuple((c.id, skip) for c, skip in zip(guessable, bits)),
                variants=tuple((c.id, v) for c, v in zip(node_on, variants)),
            ))
    logger.info(f"{len(guesses)} guesses over {len(guessable)} guessable clusters ({pruned} pruned)")
    return guesses, pruned


# ---------------------------------------------------------------------------
# numeric sanity check
# ---------------------------------------------------------------------------

def _to_numpy_coeffs(p: Polynomial, main: int) -> np.ndarray:
    degree = max(m[main] for m in p.itermonoms())
    coeffs = np.zeros(degree + 1, dtype=complex)
    for monom, c in p.iterterms():
        coeffs[degree - monom[main]] += float(c.numerator) / float(c.denominator)
    return coeffs


def numeric_ce_intersection_count(inp: ContourInput, data: Optional[ContourData] = None, tol: float = 1e-6) -> int:
    """Floating-point count of distinct points of {U1 = A = 0} (chart z = 1)"""
    data = data or contour_data(inp)
    ring = inp.U1.ring
    sqf = ring.one
    for f, _ in data.R_parts.factors:
        sqf *= f
    chart = substitute_many(sqf, {"z": ring.one})
    u_line = substitute_many(inp.U1, {"z": ring.one})
    count = 0
    for y0 in np.roots(_to_numpy_coeffs(chart, 1)):
        y0 = complex(y0)
        coeffs: Dict[int, complex] = {}
        for monom, c in u_line.iterterms():
            coeffs[monom[0]] = coeffs.get(monom[0], 0) + float(c.numerator) / float(c.denominator) * y0 ** monom[1]
        degree = max(coeffs)
        poly_x = np.array([coeffs.get(degree - i, 0) for i in range(degree + 1)], dtype=complex)
        root = np.sqrt(complex(-(y0**2) - 1))
        for x0 in (root, -root):
            scale = np.polyval(np.abs(poly_x), abs(x0))
            if abs(np.polyval(poly_x, x0)) < tol * max(scale, 1.0):
                count += 1
    return count


def analyze_contour(U: Polynomial, seed: int = 0, guess_limit: Optional[int] = None,
                    isolated_bound: Optional[int] = None, retries: Optional[int] = None) -> ContourAnalysis:
    """Strip A, reach generic coordinates, classify clusters and enumerate guesses"""
    settings = get_settings()
    retries = settings.genericity_retries if retries is None else retries
    original = strip_absolute(U)
    generic, M, clusters, data = _search_generic(original, seed, retries)
    guesses, pruned = enumerate_guesses(clusters, guess_limit, isolated_bound)
    ce_size = sum(c.size for c in clusters if c.kind in (
        ClusterKind.NODE_ON_CE, ClusterKind.TRANSVERSAL_CE, ClusterKind.TANGENTIAL_CE))
    diagnostics = {
        "ceIntersectionPoints": ce_size,
        "numericCeIntersectionPoints": numeric_ce_intersection_count(generic, data),
        "isolatedBound": settings.isolated_bound if isolated_bound is None else isolated_bound,
    }
    for c in clusters:
        logger.info(f"cluster {c.id}: size {c.size}, resolvent {format_polynomial(c.resolvent)}")
    return ContourAnalysis(original, generic, M, clusters, guesses, pruned, diagnostics)
