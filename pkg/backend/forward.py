#!/usr/bin/env python3
"""
Forward Oracle
Builds Darboux cyclides A^2 + 2ALw + Qw^2, moves the camera to the origin,
computes exact apparent contours and compares surfaces up to the scaling
group (x, y, z, w) -> (x, y, z, dw)
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import integer_nthroot
from sympy.polys.domains import QQ

from contour import CaseTag, strip_absolute
from errors import DarbouxError, InvalidInputError, ResourceLimitError
from ideals import Ideal, has_empty_projective_zero_set
from poly import (
    XYZ,
    XYZW,
    Polynomial,
    absolute_conic,
    coefficients_in,
    degree_in,
    discriminant,
    embed,
    equal_up_to_scalar,
    evaluate_at,
    format_polynomial,
    gen,
    is_homogeneous,
    monomials_of_degree,
    normalize,
    partial,
    polynomial_ring,
    substitute,
    substitute_many,
    total_degree,
)

logger = logging.getLogger(__name__)

COEFFICIENT_RANGE = 5
CAMERA_RANGE = 5
MAX_ATTEMPTS = 50

Camera = Tuple[object, object, object]


def surface_ring():
    return polynomial_ring(XYZW)


@dataclass(frozen=True)
class CyclideSpec:
    L: Polynomial
    Q: Polynomial
    case: CaseTag

    def to_dict(self) -> Dict:
        return {"L": format_polynomial(self.L), "Q": format_polynomial(self.Q), "caseTag": self.case.value}


@dataclass
class ScalingWitness:
    """G = mu * F(x, y, z, d*w)"""

    d: object
    mu: object

    def to_dict(self) -> Dict:
        return {"d": str(self.d), "mu": str(self.mu)}


@dataclass
class ForwardInstance:
    spec: CyclideSpec
    F: Polynomial
    camera: Camera
    F_camera: Polynomial
    U: Polynomial
    k: int
    no_triple_points: Optional[bool] = None
    seed: Optional[int] = None
    attempt: int = 0

    def to_dict(self) -> Dict:
        return {
            "seed": self.seed,
            "attempt": self.attempt,
            "spec": self.spec.to_dict(),
            "camera": [str(v) for v in self.camera],
            "F": format_polynomial(self.F),
            "FCamera": format_polynomial(self.F_camera),
            "U": format_polynomial(self.U),
            "caseTag": self.spec.case.value,
            "k": self.k,
            "degU": total_degree(self.U),
            "degU1": total_degree(self.U) - 2 * self.k,
            "noTriplePoints": self.no_triple_points,
        }


# ---------------------------------------------------------------------------
# cyclides
# ---------------------------------------------------------------------------

def case_of(L: Polynomial, Q: Polynomial) -> CaseTag:
    """Cuspidal iff L^2 - Q(x, y, z, 0) vanishes on the absolute conic"""
    ring = surface_ring()
    L, Q = embed(L, ring), embed(Q, ring)
    Q0 = substitute(Q, "w", ring.zero)
    if (L**2 - Q0).rem([absolute_conic(ring)]):
        return CaseTag.NODAL
    return CaseTag.CUSPIDAL


def make_cyclide(spec: CyclideSpec) -> Polynomial:
    """
    The quartic A^2 + 2ALw + Qw^2.

    Raises InvalidInputError for degenerate specs: L not a linear form in
    x, y, z, Q not a quadric, F divisible by w or by A, F not squarefree,
    or a case tag that contradicts L and Q.
    """
    ring = surface_ring()
    L, Q = embed(spec.L, ring), embed(spec.Q, ring)
    if L and (total_degree(L) != 1 or not is_homogeneous(L) or degree_in(L, "w") > 0):
        raise InvalidInputError(f"L must be a linear form in x, y, z, got {format_polynomial(L)}")
    if Q and (total_degree(Q) != 2 or not is_homogeneous(Q)):
        raise InvalidInputError(f"Q must be a quadratic form, got {format_polynomial(Q)}")
    A = absolute_conic(ring)
    w = gen(ring, "w")
    F = A**2 + 2 * A * L * w + Q * w**2
    if not F.rem([w]):
        raise InvalidInputError("degenerate cyclide: divisible by w")
    if not F.rem([A]):
        raise InvalidInputError("degenerate cyclide: divisible by A")
    _, factors = F.sqf_list()
    if any(m > 1 for _, m in factors):
        raise InvalidInputError("degenerate cyclide: not squarefree")
    actual = case_of(L, Q)
    if actual != spec.case:
        raise InvalidInputError(f"spec is tagged {spec.case.value} but describes a {actual.value} cyclide")
    return F


def torus_spec(R: int = 2, r: int = 1) -> CyclideSpec:
    """Ring torus (A + (R^2 - r^2)w^2)^2 = 4R^2 w^2 (x^2 + y^2)"""
    ring = surface_ring()
    x, y, _, w = ring.gens
    c = R**2 - r**2
    Q = 2 * c * absolute_conic(ring) - 4 * R**2 * (x**2 + y**2) + c**2 * w**2
    return CyclideSpec(ring.zero, Q, CaseTag.NODAL)


def _random_form(rng: np.random.Generator, names: Sequence[str], degree: int) -> Polynomial:
    ring = surface_ring()
    monomials = monomials_of_degree(len(names), degree)
    values = rng.integers(-COEFFICIENT_RANGE, COEFFICIENT_RANGE + 1, size=len(monomials))
    terms = {}
    for m, c in zip(monomials, values):
        if c:
            full = [0] * ring.ngens
            for name, e in zip(names, m):
                full[XYZW.index(name)] = e
            terms[tuple(full)] = QQ(int(c))
    return ring.from_dict(terms)


def random_spec(rng: np.random.Generator, case: CaseTag = CaseTag.NODAL) -> CyclideSpec:
    """
    Small integer coefficients in -5..5.

    Cuspidal specs use Q = L^2 + gamma*A + w*M with M linear in x, y, z, w,
    so that L^2 - Q(x, y, z, 0) = -gamma*A.
    """
    L = _random_form(rng, XYZ, 1)
    if case == CaseTag.NODAL:
        return CyclideSpec(L, _random_form(rng, XYZW, 2), case)
    ring = surface_ring()
    gamma = 0
    while not gamma:
        gamma = int(rng.integers(-COEFFICIENT_RANGE, COEFFICIENT_RANGE + 1))
    M = _random_form(rng, XYZW, 1)
    Q = L**2 + absolute_conic(ring).mul_ground(QQ(gamma)) + gen(ring, "w") * M
    return CyclideSpec(L, Q, case)


# ---------------------------------------------------------------------------
# camera and contour
# ---------------------------------------------------------------------------

def translate_camera(F: Polynomial, p: Camera) -> Polynomial:
    """F(x + p1 w, y + p2 w, z + p3 w, w): moves the camera (p : 1) to (0 : 0 : 0 : 1)"""
    ring = F.ring
    values = [QQ.convert(v) for v in p]
    if not evaluate_at(F, dict(zip(XYZW, values + [QQ.one]))):
        raise InvalidInputError(f"camera ({', '.join(str(v) for v in values)}) lies on the surface")
    w = gen(ring, "w")
    return substitute_many(F, {n: gen(ring, n) + w.mul_ground(v) for n, v in zip(XYZ, values)})


def apparent_contour(F: Polynomial) -> Polynomial:
    """Normalized discriminant of F in w, a form of degree 12 in x, y, z"""
    if degree_in(F, "w") != 4:
        raise InvalidInputError(f"camera is not generic: F has degree {degree_in(F, 'w')} in w")
    U = embed(discriminant(F, "w"), polynomial_ring(XYZ))
    if total_degree(U) != 12:
        raise InvalidInputError(f"contour has degree {total_degree(U)}, expected 12")
    return U


# ---------------------------------------------------------------------------
# comparisons
# ---------------------------------------------------------------------------

def _rational_root(q, n: int):
    """Exact rational n-th root of q (the positive one for even n), or None"""
    if n == 1:
        return q
    num, den = int(q.numerator), int(q.denominator)
    if num < 0 and n % 2 == 0:
        return None
    r_num, exact_num = integer_nthroot(abs(num), n)
    r_den, exact_den = integer_nthroot(den, n)
    if not (exact_num and exact_den):
        return None
    return QQ(-r_num if num < 0 else r_num, r_den)


def _slice_ratio(f: Polynomial, g: Polynomial):
    if not equal_up_to_scalar(f, g):
        return None
    return g.LC / f.LC


def equal_up_to_scaling(F: Polynomial, G: Polynomial) -> Optional[ScalingWitness]:
    """
    Witness (d, mu) with G(x, y, z, w) = mu * F(x, y, z, d*w), or None.

    Compares the w-graded slices of both quartics: each slice of G must be
    the matching slice of F times mu * d^k.
    """
    ring = surface_ring()
    F, G = embed(F, ring), embed(G, ring)
    if not F or not G:
        return None
    F_slices = coefficients_in(F, "w")
    G_slices = coefficients_in(G, "w")
    if set(F_slices) != set(G_slices):
        return None
    ratios = {}
    for k in sorted(F_slices):
        ratio = _slice_ratio(F_slices[k], G_slices[k])
        if ratio is None:
            return None
        ratios[k] = ratio
    ks = sorted(ratios)
    k0 = ks[0]
    if len(ks) == 1:
        candidates = [QQ.one]
    else:
        root = _rational_root(ratios[ks[1]] / ratios[k0], ks[1] - k0)
        if root is None:
            return None
        candidates = [root, -root]
    for d in candidates:
        if all(ratios[k] == ratios[k0] * d ** (k - k0) for k in ks):
            return ScalingWitness(d, ratios[k0] / d**k0)
    return None


def invert_at_camera(F: Polynomial) -> Polynomial:
    """Inversion at the unit sphere around the camera: F(xw, yw, zw, A) / A^2"""
    ring = surface_ring()
    F = embed(F, ring)
    x, y, z, w = ring.gens
    A = absolute_conic(ring)
    image = substitute_many(F, {"x": x * w, "y": y * w, "z": z * w, "w": A})
    quotient, remainder = image.div([A**2])
    if remainder:
        raise InvalidInputError("the inversion image is not divisible by A^2; not a Darboux cyclide")
    return normalize(quotient[0])


def has_no_triple_points(F: Polynomial) -> bool:
    """True iff F and all its second partials have no common projective zero"""
    ring = F.ring
    seconds = []
    for i in range(ring.ngens):
        du = partial(F, i)
        for v in range(i, ring.ngens):
            h = partial(du, v)
            if h:
                seconds.append(h)
    return has_empty_projective_zero_set(Ideal([F] + seconds, ring=ring))


def matches_hidden(candidate: Polynomial, hidden: Polynomial) -> Optional[str]:
    """'hidden', 'twin' (the inversion at the camera) or None"""
    if equal_up_to_scaling(hidden, candidate):
        return "hidden"
    try:
        twin = invert_at_camera(hidden)
    except DarbouxError:
        return None
    return "twin" if equal_up_to_scaling(twin, candidate) else None


# ---------------------------------------------------------------------------
# instances
# ---------------------------------------------------------------------------

def build_instance(spec: CyclideSpec, camera: Camera, check_triple_points: bool = True) -> ForwardInstance:
    F = make_cyclide(spec)
    F_camera = translate_camera(F, camera)
    U = apparent_contour(F_camera)
    k = strip_absolute(U).k
    expected = 2 if spec.case == CaseTag.NODAL else 3
    if k != expected:
        raise InvalidInputError(f"contour carries A^{k}, expected A^{expected} for a {spec.case.value} cyclide")
    no_triple = has_no_triple_points(F_camera) if check_triple_points else None
    return ForwardInstance(spec, F, tuple(QQ.convert(v) for v in camera), F_camera, U, k, no_triple)


def random_camera(rng: np.random.Generator) -> Camera:
    return tuple(QQ(int(v)) for v in rng.integers(-CAMERA_RANGE, CAMERA_RANGE + 1, size=3))


def random_instance(seed: int, case: Union[CaseTag, str] = CaseTag.NODAL, camera: Optional[Camera] = None,
                    start: int = 0, max_attempts: int = MAX_ATTEMPTS) -> ForwardInstance:
    """
    First valid instance for the seed, drawing spec and camera per attempt.

    Attempts are numbered from `start`; degenerate specs and non-generic
    cameras are rejected and resampled.
    """
    case = CaseTag(case)
    reasons = []
    for attempt in range(start, start + max_attempts):
        rng = np.random.default_rng([abs(seed), attempt])
        spec = random_spec(rng, case)
        p = camera if camera is not None else random_camera(rng)
        try:
            instance = build_instance(spec, p)
        except InvalidInputError as e:
            logger.debug(f"seed {seed} attempt {attempt} rejected: {e.message}")
            reasons.append(e.message)
            continue
        instance.seed = seed
        instance.attempt = attempt
        logger.info(f"seed {seed}: {case.value} instance after {attempt - start + 1} attempt(s)")
        return instance
    raise ResourceLimitError(
        f"no valid {case.value} instance for seed {seed} in {max_attempts} attempts; last reason: {reasons[-1]}")
