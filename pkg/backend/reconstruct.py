#!/usr/bin/env python3
"""
Surface Reconstruction
Lifts the apparent contour through (xG0 : yG0 : zG0 : G1), rebuilds the
quartic from the polar cubic by formal integration and a five-constant ansatz,
recovers the plane at infinity and verifies the candidate against the input.
Every guess of the contour analysis yields one report.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix
from sympy.polys.domains import QQ

from conductor import ConductorPair, assemble, contributions_for_guess
from contour import ContourAnalysis, GuessVector, analyze_contour, rotate_polynomial
from errors import (
    AssertContourFailed,
    AssertInfinityPlaneFailed,
    AssertionFailure,
    DarbouxError,
    InvalidInputError,
    VerificationError,
)
from ideals import (
    Ideal,
    graded_piece,
    normal_form,
    nullspace,
    rational_points,
    residual,
    rref,
    saturate,
    span_basis,
)
from poly import (
    XYZ,
    XYZW,
    Polynomial,
    absolute_conic,
    discriminant,
    embed,
    equal_up_to_scalar,
    evaluate_at,
    format_polynomial,
    gen,
    monomials_of_degree,
    normalize,
    partial,
    polynomial_ring,
    substitute,
    total_degree,
    var_index,
)
from utils.config import get_settings

logger = logging.getLogger(__name__)


def surface_ring():
    return polynomial_ring(XYZW)


@dataclass
class ContourIdeal:
    H0: Polynomial
    H1: Polynomial
    ideal: Ideal
    strategy: str = "kernel"


@dataclass
class AnsatzSolution:
    coefficients: List[object]
    F0: Polynomial
    free_parameters: int = 0


@dataclass
class CandidateSurface:
    F: Polynomial
    F_canonical: Polynomial
    abc: Tuple[object, object, object]
    alpha: object
    guess_index: int

    def to_dict(self) -> Dict:
        return {
            "F": format_polynomial(self.F),
            "FCanonical": format_polynomial(self.F_canonical),
            "abc": [str(v) for v in self.abc],
        }


@dataclass
class ReconstructionReport:
    guess: GuessVector
    outcome: str
    failed_assertion: Optional[str] = None
    candidates: List[CandidateSurface] = field(default_factory=list)
    diagnostics: Dict = field(default_factory=dict)

    @property
    def succeeded(self) -> bool:
        return self.outcome == "success"

    def to_dict(self) -> Dict:
        first = self.candidates[0] if self.candidates else None
        return {
            "guess": self.guess.to_dict(),
            "outcome": self.outcome,
            "failedAssertion": self.failed_assertion,
            "F": format_polynomial(first.F) if first else None,
            "abc": [str(v) for v in first.abc] if first else None,
            "candidates": [c.to_dict() for c in self.candidates],
            "diagnostics": self.diagnostics,
        }


@dataclass
class ReconstructionResult:
    analysis: ContourAnalysis
    reports: List[ReconstructionReport]

    @property
    def successes(self) -> List[ReconstructionReport]:
        return [r for r in self.reports if r.succeeded]

    def to_dict(self) -> Dict:
        return {
            "analysis": self.analysis.to_dict(),
            "reports": [r.to_dict() for r in self.reports],
            "solved": bool(self.successes),
        }


# ---------------------------------------------------------------------------
# lift
# ---------------------------------------------------------------------------

def _image_powers(images: Sequence[Polynomial], degree: int) -> List[List[Polynomial]]:
    table = []
    for p in images:
        row = [p.ring.one]
        for _ in range(degree):
            row.append(row[-1] * p)
        table.append(row)
    return table


def _kernel_piece(U: Polynomial, images: Sequence[Polynomial], d: int) -> List[Polynomial]:
    """Degree-d forms f in x, y, z, w with f(images) divisible by U"""
    ring = surface_ring()
    powers = _image_powers(images, d)
    monoms = monomials_of_degree(4, d)
    values = []
    for m in monoms:
        v = U.ring.one
        for i, e in enumerate(m):
            if e:
                v = v * powers[i][e]
        values.append(v.rem([U]))
    support = sorted({t for v in values for t in v.itermonoms()}, key=U.ring.order, reverse=True)
    system = [[v.get(t, QQ.zero) for v in values] for t in support]
    kernel = nullspace(system, len(monoms))
    forms = [ring.from_dict({m: c for m, c in zip(monoms, vec) if c}) for vec in kernel]
    return span_basis(forms, ring)


def _literal_pieces(U: Polynomial, pair: ConductorPair) -> Tuple[Ideal, List[Polynomial], List[Polynomial]]:
    ring = surface_ring()
    w = gen(ring, "w")
    G0 = embed(pair.G0, ring)
    G1 = embed(pair.G1, ring)
    J = saturate(Ideal([embed(U, ring), w * G0 - G1], ring=ring), Ideal([G0], ring=ring))
    return J, graded_piece(J, 3), graded_piece(J, 4)


def coprime_part(U: Polynomial, G0: Polynomial) -> Polynomial:
    """U with every irreducible factor shared with G0 removed"""
    g = U.gcd(G0)
    while not g.is_ground:
        U = U.exquo(g)
        g = U.gcd(G0)
    return U


def lift_contour(U: Polynomial, pair: ConductorPair, strategy: str = "kernel") -> ContourIdeal:
    """
    Ideal of the space contour, the image of (xG0 : yG0 : zG0 : G1).

    The kernel strategy reads the degree 3 and 4 pieces of
    <U, wG0 - G1> : G0^inf as the forms f with f(xG0, yG0, zG0, G1)
    divisible by the part of U coprime to G0; the saturation strategy
    computes the saturation itself. Raises AssertContourFailed unless the
    pieces are spanned by a single cubic H0 and one further quartic H1.
    """
    ring = surface_ring()
    if strategy == "kernel":
        x, y, z = (gen(U.ring, v) for v in XYZ)
        images = [x * pair.G0, y * pair.G0, z * pair.G0, pair.G1]
        modulus = coprime_part(U, pair.G0)
        J3 = _kernel_piece(modulus, images, 3)
        J4 = _kernel_piece(modulus, images, 4) if len(J3) == 1 else []
    elif strategy == "saturation":
        _, J3, J4 = _literal_pieces(U, pair)
    else:
        raise InvalidInputError(f"unknown lift strategy {strategy!r}")

    diagnostics = {"dimDeg3": len(J3), "dimDeg4": len(J4)}
    if len(J3) != 1:
        raise AssertContourFailed(f"lifted contour has {len(J3)} independent cubics", diagnostics)
    H0 = normalize(J3[0])
    multiples = span_basis([gen(ring, v) * H0 for v in XYZW], ring)
    if len(J4) != 5 or len(span_basis(multiples + J4, ring)) != 5:
        raise AssertContourFailed(f"lifted contour has {len(J4)} independent quartics", diagnostics)
    H1 = None
    for v in J4:
        rest = residual(v, multiples, ring)
        if rest:
            H1 = normalize(rest)
            break
    logger.info(f"lifted contour by {strategy}: cubic H0 with {len(H0)} terms")
    return ContourIdeal(H0, H1, Ideal([H0, H1], ring=ring), strategy)


# ---------------------------------------------------------------------------
# ansatz
# ---------------------------------------------------------------------------

def integrate_w(H0: Polynomial) -> Polynomial:
    """Antiderivative in w without w-free terms"""
    ring = H0.ring
    iw = var_index(ring, "w")
    terms = {}
    for monom, coeff in H0.iterterms():
        e = monom[iw]
        new = list(monom)
        new[iw] = e + 1
        terms[tuple(new)] = coeff / (e + 1)
    return ring.from_dict(terms)


def solve_ansatz(H2: Polynomial, H0: Polynomial, H1: Polynomial) -> AnsatzSolution:
    """
    Constants c1..c5 making H2 - c1 xH0 - c2 yH0 - c3 zH0 - c4 wH0 - c5 H1 free of w.

    F0 = c1 xH0 + c2 yH0 + c3 zH0 + c4 wH0 + c5 H1. An inconsistent
    system means no Darboux candidate exists for the current guess.
    """
    ring = H0.ring
    iw = var_index(ring, "w")
    spanning = [gen(ring, v) * H0 for v in XYZW] + [H1]
    support = sorted({m for p in spanning + [H2] for m in p.itermonoms() if m[iw]}, key=ring.order, reverse=True)
    augmented = [[p.get(m, QQ.zero) for p in spanning] + [H2.get(m, QQ.zero)] for m in support]
    reduced, pivots = rref(augmented, len(spanning) + 1)
    if len(spanning) in pivots:
        raise AssertInfinityPlaneFailed("the ansatz for the quartic has no solution",
                                        {"ansatzUnknowns": len(spanning)})
    coefficients = [QQ.zero] * len(spanning)
    for row, p in zip(reduced, pivots):
        coefficients[p] = row[-1]
    free = len(spanning) - len(pivots)
    F0 = ring.zero
    for c, p in zip(coefficients, spanning):
        if c:
            F0 += p.mul_ground(c)
    if partial(F0, "w") != H0:
        raise VerificationError("ansatz solution does not integrate the polar cubic")
    if free:
        logger.warning(f"ansatz is underdetermined ({free} free parameters), using the particular solution")
    return AnsatzSolution(coefficients, F0, free)


# ---------------------------------------------------------------------------
# plane at infinity
# ---------------------------------------------------------------------------

def _split_coefficients(p: Polynomial, inner: int, target) -> Dict[tuple, Polynomial]:
    """Coefficients of p over its last `inner` variables, as polynomials of target"""
    outer = p.ring.ngens - inner
    buckets: Dict[tuple, dict] = {}
    for monom, coeff in p.iterterms():
        key = monom[outer:]
        inner_key = monom[:outer]
        buckets.setdefault(key, {})
        buckets[key][inner_key] = buckets[key].get(inner_key, QQ.zero) + coeff
    return {k: target.from_dict(v) for k, v in buckets.items()}


def recover_infinity_plane(F0: Polynomial) -> List[Tuple[object, object, object]]:
    """
    All rational (a, b, c) for which F0(x, y, z, w - ax - by - cz) is a Darboux cyclide.

    Solves F0(x, y, z, -l) = alpha*A^2 and (dF0/dw)(x, y, z, -l) = A*(linear form)
    with l = ax + by + cz; alpha must not vanish.
    """
    big = polynomial_ring(("a", "b", "c") + XYZW)
    params = polynomial_ring(("a", "b", "c"))
    a, b, c, x, y, z, _ = big.gens
    ell = a * x + b * y + c * z
    F = embed(F0, big)
    P = substitute(F, "w", -ell)
    Q = substitute(partial(F, "w"), "w", -ell)
    A = absolute_conic(big)

    P_coeffs = _split_coefficients(P, 4, params)
    alpha = P_coeffs.get((4, 0, 0, 0), params.zero)
    Q_coeffs = _split_coefficients(Q, 4, params)
    betas = [Q_coeffs.get(m, params.zero) for m in ((3, 0, 0, 0), (0, 3, 0, 0), (0, 0, 3, 0))]

    equations = []
    target_P = _split_coefficients(A**2, 4, params)
    for m in set(P_coeffs) | set(target_P):
        equations.append(P_coeffs.get(m, params.zero) - alpha * target_P.get(m, params.zero))
    for m in set(Q_coeffs) | _cubic_support():
        target = params.zero
        for i, beta in enumerate(betas):
            if _conic_times_linear(m, i):
                target += beta
        equations.append(Q_coeffs.get(m, params.zero) - target)

    system = Ideal([e for e in equations if e], ring=params)
    if system.is_zero:
        raise AssertInfinityPlaneFailed("the plane at infinity is not determined by the quartic")
    try:
        points = rational_points(system)
    except InvalidInputError as e:
        raise AssertInfinityPlaneFailed(f"the plane at infinity is not determined: {e.message}")
    solutions = []
    for pt in points:
        if evaluate_at(alpha, pt):
            solutions.append((pt["a"], pt["b"], pt["c"]))
    if not solutions:
        raise AssertInfinityPlaneFailed("no rational plane at infinity turns the quartic into a Darboux cyclide",
                                        {"rationalPoints": len(points)})
    logger.info(f"recovered {len(solutions)} plane(s) at infinity")
    return solutions


def _cubic_support() -> set:
    return {m + (0,) for m in monomials_of_degree(3, 3)}


def _conic_times_linear(monom: tuple, i: int):
    """Coefficient of monom in A * x_i (x_0 = x, x_1 = y, x_2 = z)"""
    e = list(monom[:3])
    if monom[3] or e[i] < 1:
        return 0
    e[i] -= 1
    return 1 if sorted(e) == [0, 0, 2] else 0


# ---------------------------------------------------------------------------
# finalize and drive
# ---------------------------------------------------------------------------

def _canonical_sign(F: Polynomial) -> Polynomial:
    """Fix w -> -w so that the leading term odd in w has a positive coefficient"""
    odd = [coeff for monom, coeff in F.terms() if monom[3] % 2]
    if odd and odd[0] < 0:
        return substitute(F, "w", -gen(F.ring, "w"))
    return F


def finalize(F0: Polynomial, abc: Tuple[object, object, object], U: Polynomial, guess_index: int = 0,
             rotation: Optional[Matrix] = None) -> CandidateSurface:
    """
    Shift F0 by the plane at infinity, normalize and verify the candidate.

    The candidate must lie in <A, w>^2 with w-free part alpha*A^2 and its
    discriminant in w must agree with U up to a scalar; rotation (if given)
    maps the result back to the input coordinates.
    """
    ring = surface_ring()
    x, y, z, w = ring.gens
    a, b, c = (QQ.convert(v) for v in abc)
    F0 = embed(F0, ring)
    F = normalize(substitute(F0, "w", w - x.mul_ground(a) - y.mul_ground(b) - z.mul_ground(c)))
    A = absolute_conic(ring)

    if normal_form(F, Ideal([A**2, A * w, w**2], ring=ring)):
        raise VerificationError("candidate quartic is not in <A, w>^2")
    w_free = substitute(F, "w", ring.zero)
    alpha = w_free.get((4, 0, 0, 0), QQ.zero)
    if not alpha or w_free != (A**2).mul_ground(alpha):
        raise VerificationError("w-free part of the candidate is not a multiple of A^2")
    if substitute(partial(F, "w"), "w", ring.zero).rem([A]):
        raise VerificationError("dF/dw on the plane at infinity is not divisible by A")
    disc = discriminant(F, "w")
    if not equal_up_to_scalar(disc, embed(U, ring)):
        raise VerificationError("discriminant of the candidate does not match the contour")

    canonical = _canonical_sign(F.quo_ground(alpha))
    if rotation is not None:
        F = normalize(rotate_polynomial(F, rotation.T))
        canonical = rotate_polynomial(canonical, rotation.T)
    return CandidateSurface(F, canonical, (a, b, c), alpha, guess_index)


def run_guess(analysis: ContourAnalysis, guess: GuessVector, degree_cap: Optional[int] = None) -> ReconstructionReport:
    """One pass of the reconstruction for a single guess; failures become data"""
    diagnostics: Dict = {}
    try:
        contributions = contributions_for_guess(analysis.input, analysis.clusters, guess, degree_cap)
        diagnostics["contributions"] = [c.to_dict() for c in contributions]
        pair = assemble(contributions)
        diagnostics.update({"dimDeg6": 1, "dimDeg7": 4})
        contour_ideal = lift_contour(analysis.input.U, pair)
        diagnostics["contourDegrees"] = [total_degree(contour_ideal.H0), total_degree(contour_ideal.H1)]
        ansatz = solve_ansatz(integrate_w(contour_ideal.H0), contour_ideal.H0, contour_ideal.H1)
        diagnostics["ansatzFreeParameters"] = ansatz.free_parameters
        candidates = []
        errors = []
        for abc in recover_infinity_plane(ansatz.F0):
            try:
                candidates.append(finalize(ansatz.F0, abc, analysis.input.U, guess.index, analysis.rotation))
            except VerificationError as e:
                errors.append(e.message)
        if not candidates:
            raise VerificationError("; ".join(errors))
        if errors:
            diagnostics["rejectedPlanes"] = errors
        logger.info(f"guess {guess.index}: success with {len(candidates)} candidate(s)")
        return ReconstructionReport(guess, "success", None, candidates, diagnostics)
    except AssertionFailure as e:
        diagnostics.update(e.diagnostics)
        diagnostics["message"] = e.message
        logger.info(f"guess {guess.index}: assertion {e.label} failed ({e.message})")
        return ReconstructionReport(guess, "fail", e.label, [], diagnostics)
    except DarbouxError as e:
        diagnostics["error"] = e.message
        diagnostics["errorType"] = e.__class__.__name__
        logger.warning(f"guess {guess.index}: {e.__class__.__name__}: {e.message}")
        return ReconstructionReport(guess, "fail", None, [], diagnostics)
    except Exception as e:
        diagnostics["error"] = str(e)
        diagnostics["errorType"] = e.__class__.__name__
        logger.error(f"Error in guess {guess.index}: {e}")
        return ReconstructionReport(guess, "fail", None, [], diagnostics)


def _run_guess_job(args) -> ReconstructionReport:
    analysis, guess, degree_cap = args
    return run_guess(analysis, guess, degree_cap)


def run_all_guesses(analysis: ContourAnalysis, jobs: Optional[int] = None,
                    degree_cap: Optional[int] = None) -> List[ReconstructionReport]:
    """Evaluate every guess, in worker processes when jobs > 1; ordered by guess index"""
    jobs = get_settings().jobs if jobs is None else jobs
    tasks = [(analysis, g, degree_cap) for g in analysis.guesses]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_guess_job, tasks))
    else:
        reports = [_run_guess_job(t) for t in tasks]
    return sorted(reports, key=lambda r: r.guess.index)


def reconstruct(U: Polynomial, seed: int = 0, guess_limit: Optional[int] = None,
                isolated_bound: Optional[int] = None, jobs: Optional[int] = None) -> ReconstructionResult:
    analysis = analyze_contour(U, seed=seed, guess_limit=guess_limit, isolated_bound=isolated_bound)
    reports = run_all_guesses(analysis, jobs=jobs)
    solved = sum(1 for r in reports if r.succeeded)
    logger.info(f"reconstruction finished: {solved} of {len(reports)} guesses succeeded")
    return ReconstructionResult(analysis, reports)
