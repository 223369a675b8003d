#!/usr/bin/env python3
"""
Reconstruction Service - Integration layer between the algebra modules and the CLI / HTTP surface
Parses inputs, schedules guesses, times roundtrips and formats every result as a schema document
"""

import asyncio
import logging
import time
from collections import Counter
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Union

from sympy import Rational
from sympy.polys.domains import QQ

from contour import CaseTag, ContourAnalysis, analyze_contour, contour_ring
from errors import GenericityError, InvalidInputError, ResourceLimitError
from forward import (
    MAX_ATTEMPTS,
    ForwardInstance,
    equal_up_to_scaling,
    invert_at_camera,
    matches_hidden,
    random_instance,
)
from poly import Polynomial, parse_polynomial
from reconstruct import ReconstructionReport, run_all_guesses
from schemas import (
    AnalysisReport,
    ForwardInstanceModel,
    GuessReport,
    HealthStatus,
    ReconstructionRun,
    RoundtripVerdict,
)
from services.failure_templates import get_failure_template
from utils.config import Settings, get_settings

logger = logging.getLogger(__name__)

VERSION = "1.0.0"


def strip_comments(text: str) -> str:
    """Drop '#' comment lines and join the rest"""
    return " ".join(line for line in text.splitlines() if not line.lstrip().startswith("#")).strip()


def parse_camera(values: Union[str, Sequence[str]]) -> tuple:
    """Camera position from "p1,p2,p3" or three rational strings"""
    parts = values.split(",") if isinstance(values, str) else list(values)
    if len(parts) != 3:
        raise InvalidInputError(f"camera needs three coordinates, got {len(parts)}")
    try:
        return tuple(QQ.from_sympy(Rational(str(p).strip())) for p in parts)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"camera coordinates must be rational numbers: {e}")


class ReconstructionService:
    """Service layer shared by the command line and the HTTP API"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    def parse_input(self, text: str) -> Polynomial:
        body = strip_comments(text)
        if not body:
            raise InvalidInputError("input contains no polynomial")
        return parse_polynomial(body, contour_ring())

    # -----------------------------------------------------------------------
    # pipeline entry points
    # -----------------------------------------------------------------------

    def analyze(self, U: Polynomial, seed: int = 0, guess_limit: Optional[int] = None,
                isolated_bound: Optional[int] = None) -> AnalysisReport:
        analysis = self._analyze(U, seed, guess_limit, isolated_bound)
        return self._format_analysis(analysis)

    def reconstruct(self, U: Polynomial, seed: int = 0, guess_limit: Optional[int] = None,
                    isolated_bound: Optional[int] = None, jobs: Optional[int] = None) -> ReconstructionRun:
        analysis = self._analyze(U, seed, guess_limit, isolated_bound)
        reports = run_all_guesses(analysis, jobs=self._jobs(jobs), degree_cap=self.settings.degree_cap)
        return self._format_run(analysis, reports)

    def forward(self, seed: int = 0, case: str = "nodal", camera: Optional[tuple] = None) -> ForwardInstanceModel:
        instance = random_instance(seed, CaseTag(case), camera=camera)
        return self._format_instance(instance)

    def roundtrip(self, seed: int = 0, case: str = "nodal", guess_limit: Optional[int] = None,
                  isolated_bound: Optional[int] = None, jobs: Optional[int] = None) -> RoundtripVerdict:
        """
        Generate a hidden cyclide, reconstruct it from its contour and compare.

        Instances whose contour fails the genericity tests are resampled;
        the verdict holds iff some candidate equals the hidden surface up to
        scaling. Candidates matching the inversion twin are reported too.
        """
        timings = {"generate": 0.0, "analyze": 0.0, "reconstruct": 0.0, "compare": 0.0}
        start_time = time.perf_counter()
        attempt = 0
        while True:
            if attempt >= MAX_ATTEMPTS:
                raise ResourceLimitError(f"no generic {case} instance for seed {seed} in {MAX_ATTEMPTS} attempts")
            t0 = time.perf_counter()
            instance = random_instance(seed, CaseTag(case), start=attempt, max_attempts=MAX_ATTEMPTS - attempt)
            t1 = time.perf_counter()
            timings["generate"] += t1 - t0
            try:
                analysis = self._analyze(instance.U, seed, guess_limit, isolated_bound)
            except GenericityError as e:
                logger.info(f"seed {seed}: contour of attempt {instance.attempt} rejected ({e.message})")
                attempt = instance.attempt + 1
                continue
            finally:
                timings["analyze"] += time.perf_counter() - t1
            break

        t0 = time.perf_counter()
        reports = run_all_guesses(analysis, jobs=self._jobs(jobs), degree_cap=self.settings.degree_cap)
        t1 = time.perf_counter()
        timings["reconstruct"] = t1 - t0

        match = None
        witness = None
        twin_found = False
        for report in reports:
            for candidate in report.candidates:
                kind = matches_hidden(candidate.F, instance.F_camera)
                if kind == "twin":
                    twin_found = True
                if kind == "hidden" and match is None:
                    match = kind
                    witness = equal_up_to_scaling(instance.F_camera, candidate.F)
        if match is None and twin_found:
            match = "twin"
            witness = self._twin_witness(instance, reports)
        timings["compare"] = time.perf_counter() - t1
        timings["total"] = time.perf_counter() - start_time

        successes = [r for r in reports if r.succeeded]
        logger.info(f"roundtrip seed {seed} ({case}): {len(successes)} successes, match={match}")
        return RoundtripVerdict(
            seed=seed,
            case_tag=case,
            verdict=match == "hidden",
            match=match,
            twin_found=twin_found,
            witness=witness.to_dict() if witness else None,
            instance=self._format_instance(instance),
            guess_count=len(reports),
            success_count=len(successes),
            failures=self._failure_counts(reports),
            timings={k: round(v, 6) for k, v in timings.items()},
        )

    async def run_in_background(self, fn: Callable, *args, **kwargs):
        """Run a blocking pipeline call without stalling the event loop"""
        loop = asyncio.get_event_loop()
        return await loop.run_in_executor(None, partial(fn, *args, **kwargs))

    def health(self) -> HealthStatus:
        s = self.settings
        return HealthStatus(
            status="ok",
            version=VERSION,
            settings={
                "guessLimit": s.guess_limit,
                "isolatedBound": s.isolated_bound,
                "degreeCap": s.degree_cap,
                "groebnerMethod": s.groebner_method,
                "jobs": s.jobs,
            },
        )

    # -----------------------------------------------------------------------
    # helpers
    # -----------------------------------------------------------------------

    def _analyze(self, U: Polynomial, seed: int, guess_limit: Optional[int],
                 isolated_bound: Optional[int]) -> ContourAnalysis:
        return analyze_contour(
            U,
            seed=seed,
            guess_limit=self.settings.guess_limit if guess_limit is None else guess_limit,
            isolated_bound=self.settings.isolated_bound if isolated_bound is None else isolated_bound,
            retries=self.settings.genericity_retries,
        )

    def _jobs(self, jobs: Optional[int]) -> int:
        return self.settings.jobs if jobs is None else jobs

    def _twin_witness(self, instance: ForwardInstance, reports: List[ReconstructionReport]):
        twin = invert_at_camera(instance.F_camera)
        for report in reports:
            for candidate in report.candidates:
                witness = equal_up_to_scaling(twin, candidate.F)
                if witness:
                    return witness
        return None

    def _failure_label(self, report: ReconstructionReport) -> str:
        if report.failed_assertion:
            return report.failed_assertion
        return "verification" if report.diagnostics.get("errorType") == "VerificationError" else "error"

    def _failure_counts(self, reports: List[ReconstructionReport]) -> Dict[str, int]:
        counts = Counter(self._failure_label(r) for r in reports if not r.succeeded)
        return dict(sorted(counts.items()))

    def _format_analysis(self, analysis: ContourAnalysis) -> AnalysisReport:
        return AnalysisReport.model_validate(analysis.to_dict())

    def _format_report(self, report: ReconstructionReport) -> GuessReport:
        data = report.to_dict()
        if not report.succeeded:
            data["explanation"] = get_failure_template(self._failure_label(report))
        return GuessReport.model_validate(data)

    def _format_run(self, analysis: ContourAnalysis, reports: List[ReconstructionReport]) -> ReconstructionRun:
        formatted = [self._format_report(r) for r in reports]
        successes = sum(1 for r in reports if r.succeeded)
        return ReconstructionRun(
            analysis=self._format_analysis(analysis),
            reports=formatted,
            solved=successes > 0,
            success_count=successes,
        )

    def _format_instance(self, instance: ForwardInstance) -> ForwardInstanceModel:
        return ForwardInstanceModel.model_validate(instance.to_dict())


# Global service instance
reconstruction_service = ReconstructionService()
