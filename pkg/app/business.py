import logging

from pycylinder.analysis.fdiff import polynomial_degree, quadratic_section_fit, verify_triple_differences
from pycylinder.analysis.independence import (
    build_grid, independence_report, gaussian_system_check, first_failure, classify_subgroups,
    subgroup_case, nu_support_report, reduce_to_normal_form, invariant_line_slopes, sign_conditions
)
from pycylinder.analysis.montecarlo import sample_family, empirical_independence, exact_independence
from pycylinder.exceptions import (
    CylinderError, CharacteristicFunctionError, FixtureError, ConditionViolatedError, InconclusiveError,
    NotQuadraticSectionError, DimensionMismatchError
)
from pycylinder.helpers import format_number
from pycylinder.measures.charfn import CylinderCF, support_kind, is_valid_probability, is_gaussian
from pycylinder.measures.constructions import line_gaussian_family, twisted_torus_pair, hadamard_counterexample
from pycylinder.solenoid.dual import pullback_report

logger = logging.getLogger(__name__)

CONSTRUCTIONS = {
    'line-gaussian': (line_gaussian_family, ('omega', 'a1', 'a2', 'b1', 'b2'),
                      ('p1', 'p2', 'q1', 'q2', 'sigma_scale')),
    'twisted-pair': (twisted_torus_pair, ('sigma',), ('theta1', 'theta2', 'kappa')),
    'hadamard': (hadamard_counterexample, ('sigma', 'kappa'), ()),
}

REDUCE_MODES = ('degree', 'fit', 'triple')


def _setting(config, key, default):
    value = config.get(key) if config is not None else None
    return default if value is None else value


def run_conditions(a1, a2, b1, b2):
    return sign_conditions(a1, a2, b1, b2).to_dict()


def run_construct(family, params):
    """
    Builds a certified family from a JSON parameter object.

    :raises FixtureError: unknown family, unknown or missing parameters
    """
    if family not in CONSTRUCTIONS:
        raise FixtureError('Unknown family "{}", expected one of {}'.format(family, ', '.join(CONSTRUCTIONS)))
    if not isinstance(params, dict):
        raise FixtureError('The parameters must be a JSON object')

    builder, required, optional = CONSTRUCTIONS[family]
    missing = [name for name in required if name not in params]
    if missing:
        raise FixtureError('Missing parameters for {}: {}'.format(family, ', '.join(missing)))
    unknown = [name for name in params if name not in required + optional]
    if unknown:
        raise FixtureError('Unknown parameters for {}: {}'.format(family, ', '.join(unknown)))

    logger.debug('Constructing {} with {}'.format(family, params))
    return builder(**params)


def _member_report(cf, tol):
    report = {'kind': 'torus' if not isinstance(cf, CylinderCF) else 'cylinder'}
    try:
        report['support'] = support_kind(cf, tol)
    except CharacteristicFunctionError as e:
        report['support'] = None
        report['support_error'] = e.msg
    try:
        report['valid'] = bool(is_valid_probability(cf, tol=tol))
    except InconclusiveError as e:
        logger.debug('Validity of {} is inconclusive: {}'.format(cf, e.msg))
        report['valid'] = None
    try:
        report['gaussian'] = bool(is_gaussian(cf, tol))
    except CylinderError as e:
        report['gaussian'] = None
        report['error'] = e.msg
    return report


def _gaussian_section(family, tol):
    """
    Gaussian parameter system, subgroup tags and line support of a family of
    three twist-free cylinder CFs, computed on its normal form.
    """
    matrix, cfs = family.matrix, list(family.cfs)
    transform = None
    if not matrix.is_reduced():
        matrix, transform = reduce_to_normal_form(matrix)
        cfs = transform.transport(cfs)

    residuals = gaussian_system_check(cfs, matrix)
    section = {
        'reduced': matrix.to_list() if transform is not None else None,
        'transform': transform.to_dict() if transform is not None else None,
        'system': dict(residuals),
        'failed_equation': first_failure(residuals, tol),
    }

    try:
        tags = classify_subgroups(matrix)
        section['subgroups'] = [tag.value for tag in tags]
        section['case'] = subgroup_case(tags)
    except ConditionViolatedError as e:
        section['subgroups'] = None
        section['case'] = None
        section['subgroup_error'] = e.msg

    nu = nu_support_report(cfs, matrix, tol)
    section['nu_support'] = nu
    section['omega'] = nu['omega']
    section['slopes'] = [format_number(v) if v is not None else None for v in invariant_line_slopes(matrix)]
    section['passed'] = section['failed_equation'] is None and nu['passed']
    return section


def run_check(family, config=None, grid='default', workers=None):
    """
    Report of every check that applies to the family, with 'passed' set
    when all residuals are within the check tolerance.
    """
    tol = _setting(config, 'CHECK_TOLERANCE', 1e-10)
    cap = _setting(config, 'GRID_CAP', 100000)
    seed = _setting(config, 'GRID_SEED', 0)
    workers = workers or _setting(config, 'WORKERS', 1)

    dual_grid = build_grid(family.matrix.size, kind=grid, cap=cap, seed=seed)
    report = {
        'family': family.name,
        'grid': grid,
        'independence': independence_report(family.cfs, family.matrix, dual_grid, workers=workers),
        'members': [_member_report(cf, tol) for cf in family.cfs],
    }
    passed = report['independence']['residual'] <= tol
    passed = passed and all(member['valid'] is not False for member in report['members'])

    if all(cf.is_degenerate() for cf in family.cfs):
        report['support'] = 'point support'
    elif family.matrix.size == 3 and all(isinstance(cf, CylinderCF) and cf.twist == 0 for cf in family.cfs):
        try:
            gaussian = _gaussian_section(family, tol)
        except ConditionViolatedError as e:
            gaussian = {'passed': False, 'error': e.msg}
        report['gaussian'] = gaussian
        report['support'] = 'line' if gaussian.get('omega') is not None else None
        passed = passed and gaussian['passed']

    report['passed'] = bool(passed)
    logger.debug('Check of {}: passed={}'.format(family.name, report['passed']))
    return report


def _reduce_degree(grids, tol):
    degrees = [polynomial_degree(f, tol=tol) for f in grids]
    return {'mode': 'degree', 'degrees': degrees, 'passed': all(d is not None for d in degrees)}


def _reduce_fit(grids, tol):
    fits = []
    for f in grids:
        try:
            section = quadratic_section_fit(f, tol)
            fits.append({'sigma': section.sigma, 'kappa': section.kappa, 'lambda': section.lam,
                         'n': section.n_values})
        except NotQuadraticSectionError as e:
            fits.append({'error': e.msg})
    return {'mode': 'fit', 'fits': fits, 'passed': all('error' not in fit for fit in fits)}


def _reduce_triple(grids, family, tol):
    if family is None:
        raise FixtureError('The triple mode needs a fixture to classify the subgroups')
    if len(grids) != 3:
        raise DimensionMismatchError('The triple mode needs three grid functions, got {}'.format(len(grids)))

    matrix = family.matrix
    if not matrix.is_reduced():
        matrix, _ = reduce_to_normal_form(matrix)
    tags = classify_subgroups(matrix)
    residuals = verify_triple_differences(grids, matrix, tags, tol)
    limits = [tol * max(1.0, f.max_abs()) for f in grids]
    return {
        'mode': 'triple',
        'subgroups': [tag.value for tag in tags],
        'residuals': residuals,
        'passed': all(r <= limit for r, limit in zip(residuals, limits)),
    }


def run_reduce(grids, mode, family=None, config=None):
    tol = _setting(config, 'FIT_TOLERANCE', 1e-9)
    if mode == 'degree':
        return _reduce_degree(grids, tol)
    if mode == 'fit':
        return _reduce_fit(grids, tol)
    if mode == 'triple':
        return _reduce_triple(grids, family, tol)
    raise FixtureError('Unknown mode "{}", expected one of {}'.format(mode, ', '.join(REDUCE_MODES)))


def run_simulate(family, count, seed, config=None, workers=None):
    """
    :return: (report, samples)
    """
    resamples = _setting(config, 'BOOTSTRAP_RESAMPLES', 200)
    workers = workers or _setting(config, 'WORKERS', 1)

    samples = sample_family(family, count, seed=seed, workers=workers)
    estimate = empirical_independence(samples, family.matrix, resamples=resamples, seed=seed, workers=workers)
    report = estimate.to_dict()
    report.update({'family': family.name, 'count': count, 'seed': seed,
                   'exact': exact_independence(family.cfs, family.matrix)})
    report['passed'] = estimate.consistent_with_zero
    return report, samples


def run_pullback(family, base, depth, config=None, workers=None):
    tol = _setting(config, 'CHECK_TOLERANCE', 1e-10)
    workers = workers or _setting(config, 'WORKERS', 1)
    seed = _setting(config, 'GRID_SEED', 0)

    report = pullback_report(family.cfs, family.matrix, base, depth, workers=workers, seed=seed)
    report['family'] = family.name
    report['passed'] = report['residual'] <= tol
    return report
