"""
Command line frontend: `pycylinder <command>` or `flask verify <command>`.

Every command prints one JSON document on stdout and logs on stderr.
Exit codes: 0 verified, 1 verification failure, 2 input error.
"""
import json
import logging
import os

import click
from flask import current_app, has_app_context

from app import configure_logging, config_dict
from app.business import (
    CONSTRUCTIONS, REDUCE_MODES, run_construct, run_check, run_conditions, run_reduce, run_simulate, run_pullback
)
from app.config import Config
from pycylinder.exceptions import CylinderError
from pycylinder.helpers import json_default
from pycylinder.serializers.csvgrid import read_grid, write_samples
from pycylinder.serializers.fixture import load_fixture, dump_fixture, read_json, load_base

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2


def emit(report):
    click.echo(json.dumps(report, indent=2, default=json_default))


def _settings():
    if has_app_context():
        return current_app.config
    return config_dict(Config)


def _run(ctx, action):
    try:
        report = action()
    except CylinderError as e:
        logger.error('{}: {}'.format(type(e).__name__, e.msg))
        emit({'error': type(e).__name__, 'message': e.msg, 'passed': False})
        ctx.exit(EXIT_INPUT)
    emit(report)
    ctx.exit(EXIT_OK if report.get('passed') else EXIT_FAILURE)


@click.group()
@click.option('-v', '--verbose', is_flag=True, help='Log debug messages on stderr.')
@click.pass_context
def cli(ctx, verbose):
    """
    Verification of independent linear statistics on R x T and Sigma_a x T.
    """
    settings = dict(_settings())
    settings['LOG_TO_STDOUT'] = True
    if verbose:
        settings['LOG_LEVEL'] = 'DEBUG'
    configure_logging(settings)
    ctx.obj = settings


@cli.command()
@click.option('--family', type=click.Choice(sorted(CONSTRUCTIONS)), required=True)
@click.option('--params', 'params_path', type=click.Path(), required=True, help='JSON file with the parameters.')
@click.option('--out', 'out_path', type=click.Path(), default=None, help='Where to write the fixture.')
@click.pass_context
def construct(ctx, family, params_path, out_path):
    """
    Builds a certified fixture.
    """
    def action():
        built = run_construct(family, read_json(params_path))
        if out_path:
            dump_fixture(built, out_path)
        return {
            'out': out_path,
            'fixture': built.to_dict(),
            'residual': built.residual(workers=ctx.obj.get('WORKERS', 1)),
            'passed': True,
        }

    _run(ctx, action)


@cli.command()
@click.option('--fixture', 'fixture_path', type=click.Path(), required=True)
@click.option('--grid', type=click.Choice(['default', 'dense']), default='default')
@click.option('--workers', type=click.IntRange(min=1), default=None)
@click.pass_context
def check(ctx, fixture_path, grid, workers):
    """
    Runs every applicable check on a fixture.
    """
    _run(ctx, lambda: run_check(load_fixture(fixture_path), ctx.obj, grid=grid, workers=workers))


@cli.command()
@click.option('--a1', required=True)
@click.option('--a2', required=True)
@click.option('--b1', required=True)
@click.option('--b2', required=True)
@click.pass_context
def conditions(ctx, a1, a2, b1, b2):
    """
    Sign and determinant conditions on the multipliers of a reduced matrix.
    """
    _run(ctx, lambda: run_conditions(a1, a2, b1, b2))


@cli.command('reduce')
@click.option('--input', 'inputs', type=click.Path(), multiple=True, required=True,
              help='Grid CSV with the header s,n,re,im; repeat for several functions.')
@click.option('--mode', type=click.Choice(REDUCE_MODES), required=True)
@click.option('--fixture', 'fixture_path', type=click.Path(), default=None,
              help='Fixture whose matrix gives the subgroups in triple mode.')
@click.pass_context
def reduce_grids(ctx, inputs, mode, fixture_path):
    """
    Finite-difference analysis of sampled grid functions.
    """
    def action():
        grids = [read_grid(path) for path in inputs]
        family = load_fixture(fixture_path) if fixture_path else None
        return run_reduce(grids, mode, family, ctx.obj)

    _run(ctx, action)


@cli.command()
@click.option('--fixture', 'fixture_path', type=click.Path(), required=True)
@click.option('--count', type=click.IntRange(min=1), required=True)
@click.option('--seed', type=int, default=0)
@click.option('--workers', type=click.IntRange(min=1), default=None)
@click.option('--export-dir', type=click.Path(file_okay=False), default=None,
              help='Writes the samples of each member as xi_<j>.csv.')
@click.pass_context
def simulate(ctx, fixture_path, count, seed, workers, export_dir):
    """
    Monte-Carlo check of the independence of the statistics.
    """
    def action():
        report, samples = run_simulate(load_fixture(fixture_path), count, seed, ctx.obj, workers)
        if export_dir:
            if not os.path.exists(export_dir):
                os.makedirs(export_dir)
            for j, member in enumerate(samples, 1):
                write_samples(member, os.path.join(export_dir, 'xi_{}.csv'.format(j)))
            report['export_dir'] = export_dir
        return report

    _run(ctx, action)


@cli.command()
@click.option('--base', 'base_path', type=click.Path(), required=True, help='JSON list a_0, a_1, ...')
@click.option('--fixture', 'fixture_path', type=click.Path(), required=True)
@click.option('--depth', type=click.IntRange(min=0), required=True)
@click.option('--workers', type=click.IntRange(min=1), default=None)
@click.pass_context
def solenoid(ctx, base_path, fixture_path, depth, workers):
    """
    Independence equation restricted to the rational dual H_a x Z.
    """
    _run(ctx, lambda: run_pullback(load_fixture(fixture_path), load_base(base_path), depth, ctx.obj, workers))


if __name__ == '__main__':
    cli()
