#!/usr/bin/env python3
"""
Command line entry point
Every command prints one JSON document; exit codes are 0 success,
2 parse or validation error, 3 no solution, 4 resource bound exceeded
"""

import json
import logging
import sys
from pathlib import Path
from typing import Optional

import click
from pydantic import ValidationError

from errors import DarbouxError, NoSolutionError
from schemas import RunConfig
from services.reconstruction_service import VERSION, parse_camera, reconstruction_service
from utils.config import get_settings
from utils.logging_utils import setup_logging

logger = logging.getLogger(__name__)


def _configure(config_kwargs: dict) -> RunConfig:
    try:
        config = RunConfig(**config_kwargs)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        click.echo(f"error: {messages}", err=True)
        sys.exit(2)
    settings = get_settings()
    setup_logging("DEBUG" if config.verbose else settings.log_level, settings.log_json)
    return config


def _read_polynomial(config: RunConfig):
    if config.input_path is not None:
        text = Path(config.input_path).read_text(encoding="utf-8")
    else:
        text = config.polynomial
    return reconstruction_service.parse_input(text)


def _emit(document: dict, output_path: Optional[str]) -> None:
    text = json.dumps(document, indent=2)
    if output_path:
        Path(output_path).write_text(text + "\n", encoding="utf-8")
        logger.info(f"wrote {output_path}")
    else:
        click.echo(text)


def _fail(e: DarbouxError) -> None:
    click.echo(f"error: {e.__class__.__name__}: {e.message}", err=True)
    sys.exit(e.exit_code)


def input_options(fn):
    fn = click.option("--polynomial", "-p", default=None, help="Contour polynomial in x, y, z as text")(fn)
    fn = click.option("--input", "-i", "input_path", type=click.Path(exists=True, dir_okay=False), default=None,
                      help="File with one polynomial; lines starting with # are ignored")(fn)
    return fn


def guess_options(fn):
    settings = get_settings()
    fn = click.option("--isolated-bound", default=settings.isolated_bound, show_default=True, type=int,
                      help="Most points guessed as images of isolated double points")(fn)
    fn = click.option("--guess-limit", default=settings.guess_limit, show_default=True, type=int,
                      help="Most guessable clusters before giving up")(fn)
    return fn


def common_options(fn):
    fn = click.option("--verbose", "-v", count=True, help="Debug logging")(fn)
    fn = click.option("--output", "-o", "output_path", default=None, help="Write JSON here instead of stdout")(fn)
    fn = click.option("--seed", default=0, show_default=True, type=int, help="Seed of every random choice")(fn)
    return fn


@click.group()
@click.version_option(VERSION)
def cli():
    """Reconstruct Darboux cyclides from their apparent contours"""


@cli.command()
@input_options
@guess_options
@common_options
def analyze(input_path, polynomial, guess_limit, isolated_bound, seed, output_path, verbose):
    """Cluster table of an apparent contour"""
    config = _configure(dict(command="analyze", input_path=input_path, polynomial=polynomial, seed=seed,
                             guess_limit=guess_limit, isolated_bound=isolated_bound,
                             output_path=output_path, verbose=verbose))
    try:
        U = _read_polynomial(config)
        report = reconstruction_service.analyze(U, config.seed, config.guess_limit, config.isolated_bound)
    except DarbouxError as e:
        _fail(e)
    _emit(report.to_json_dict(), config.output_path)


@cli.command()
@input_options
@guess_options
@common_options
@click.option("--jobs", "-j", default=None, type=int, help="Worker processes for the guesses")
def reconstruct(input_path, polynomial, guess_limit, isolated_bound, seed, output_path, verbose, jobs):
    """Run every guess and report the reconstructed cyclides"""
    config = _configure(dict(command="reconstruct", input_path=input_path, polynomial=polynomial, seed=seed,
                             guess_limit=guess_limit, isolated_bound=isolated_bound, output_path=output_path,
                             verbose=verbose, jobs=jobs or get_settings().jobs))
    try:
        U = _read_polynomial(config)
        run = reconstruction_service.reconstruct(U, config.seed, config.guess_limit, config.isolated_bound,
                                                 config.jobs)
    except DarbouxError as e:
        _fail(e)
    _emit(run.to_json_dict(), config.output_path)
    if not run.solved:
        sys.exit(NoSolutionError.exit_code)


@cli.command()
@common_options
@click.option("--case", type=click.Choice(["nodal", "cuspidal"]), default="nodal", show_default=True)
@click.option("--camera", default=None, help="Camera position p1,p2,p3 (rationals); random if omitted")
@click.option("--contour-output", default=None, help="Also write the contour polynomial as an input file")
def forward(seed, output_path, verbose, case, camera, contour_output):
    """Generate a cyclide and its exact apparent contour"""
    config = _configure(dict(command="forward", seed=seed, output_path=output_path, verbose=verbose,
                             case=case, camera=camera))
    try:
        p = parse_camera(config.camera) if config.camera else None
        instance = reconstruction_service.forward(config.seed, config.case, p)
    except DarbouxError as e:
        _fail(e)
    if contour_output:
        header = f"# apparent contour, {instance.case_tag} cyclide, seed {instance.seed}, camera {','.join(instance.camera)}"
        Path(contour_output).write_text(f"{header}\n{instance.u}\n", encoding="utf-8")
    _emit(instance.to_json_dict(), config.output_path)


@cli.command()
@guess_options
@common_options
@click.option("--case", type=click.Choice(["nodal", "cuspidal"]), default="nodal", show_default=True)
@click.option("--jobs", "-j", default=None, type=int, help="Worker processes for the guesses")
def roundtrip(guess_limit, isolated_bound, seed, output_path, verbose, case, jobs):
    """Generate, reconstruct and compare with the hidden cyclide"""
    config = _configure(dict(command="roundtrip", seed=seed, guess_limit=guess_limit,
                             isolated_bound=isolated_bound, output_path=output_path, verbose=verbose,
                             case=case, jobs=jobs or get_settings().jobs))
    try:
        verdict = reconstruction_service.roundtrip(config.seed, config.case, config.guess_limit,
                                                   config.isolated_bound, config.jobs)
    except DarbouxError as e:
        _fail(e)
    _emit(verdict.to_json_dict(), config.output_path)
    if not verdict.verdict:
        sys.exit(NoSolutionError.exit_code)


if __name__ == "__main__":
    cli()
