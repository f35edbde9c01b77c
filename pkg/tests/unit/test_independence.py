from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from pycylinder.analysis.independence import (
    StatMatrix, DualGrid, SIGN_TABLE, SubgroupTag, build_grid, default_grid, dense_grid, independence_residual,
    independence_report, sign_conditions, solve_sigmas, sigma_nullspace, identity_polynomial, support_identity,
    gaussian_system_check, first_failure, classify_subgroups, subgroup_case, nu_support_report, nu_support_check,
    reduce_to_normal_form, invariant_line_slopes, slopes_agree
)
from pycylinder.exceptions import ConditionViolatedError, DimensionMismatchError, GridError
from pycylinder.groups.cylinder import CylinderAuto, DualPoint, compose, invert
from pycylinder.measures.charfn import CylinderCF, TorusCF, pushforward
from pycylinder.measures.constructions import (
    Family, reduced_matrix, degenerate_family, line_gaussian_family, HADAMARD_SIGNS
)


def _random_auto(rng):
    a = Fraction(int(rng.choice([-1, 1])) * int(rng.integers(1, 6)), int(rng.integers(1, 6)))
    c = Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 6)))
    return CylinderAuto(a, c, int(rng.choice([-1, 1])))


def _perturbed(family, delta=Fraction(1, 10)):
    beta_1 = family.matrix.beta(1)
    return reduced_matrix(family.matrix.alpha(1), family.matrix.alpha(2),
                          CylinderAuto(beta_1.a, beta_1.c + delta, beta_1.p), family.matrix.beta(2))


def _random_rational(rng):
    value = Fraction(0)
    while value == 0:
        value = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
    return value


def test_line_gaussian_family_is_independent(line_gaussian, half_line_gaussian):
    for family in (line_gaussian, half_line_gaussian):
        grid = default_grid(3)
        assert len(grid) >= 10000
        assert independence_residual(family.cfs, family.matrix, grid) <= 1e-12


def test_degenerate_family_is_independent(line_gaussian):
    family = degenerate_family(_perturbed(line_gaussian))
    assert independence_residual(family.cfs, family.matrix, default_grid(3)) == 0


def test_perturbed_shift_breaks_independence(line_gaussian):
    matrix = _perturbed(line_gaussian)
    assert independence_residual(line_gaussian.cfs, matrix, default_grid(3)) > 1e-6

    residuals = gaussian_system_check(line_gaussian.cfs, matrix)
    assert first_failure(residuals) == 'shift_d'
    assert abs(residuals['shift_d'] - 0.2) < 1e-12
    assert all(residuals[name] == 0 for name in ('sigma_a', 'sigma_b', 'sigma_ab', 'kappa_a', 'kappa_b'))


def test_residual_does_not_depend_on_the_order_of_statistics(line_gaussian):
    """
    Reordering the statistics, or the variables together with their CFs,
    describes the same family
    """
    m = _perturbed(line_gaussian)
    grid = default_grid(3)
    assert len(grid) == 35 ** 3
    base = independence_residual(line_gaussian.cfs, m, grid)
    assert base > 1e-6

    for rows in permutations(range(3)):
        for cols in permutations(range(3)):
            permuted = StatMatrix([[m.entry(i, j) for j in cols] for i in rows])
            cfs = [line_gaussian.cfs[j] for j in cols]
            assert abs(independence_residual(cfs, permuted, grid) - base) <= 1e-12


def test_float_parameters_use_the_float_kernel(line_gaussian):
    cfs = [CylinderCF(float(cf.sigma), float(cf.kappa), float(cf.lam)) for cf in line_gaussian.cfs]
    assert independence_residual(cfs, line_gaussian.matrix, default_grid(3)) <= 1e-10


def test_report_does_not_depend_on_workers(line_gaussian):
    matrix = _perturbed(line_gaussian)
    single = independence_report(line_gaussian.cfs, matrix, default_grid(3), workers=1)
    threaded = independence_report(line_gaussian.cfs, matrix, default_grid(3), workers=4)
    assert single == threaded


def test_hadamard_twists_cancel():
    plus, minus = TorusCF(1, 0, Fraction(1, 20)), TorusCF(1, 0, Fraction(-1, 20))
    matrix = StatMatrix.from_signs(HADAMARD_SIGNS)
    grid = build_grid(4, cap=20000)

    assert independence_residual([plus, plus, minus, minus], matrix, grid) <= 1e-12
    assert independence_residual([plus, plus, plus, minus], matrix, grid) > 1e-6


def test_residual_accepts_a_list_of_tuples(line_gaussian):
    tuples = [(DualPoint(1, 0), DualPoint(0, 1), DualPoint(Fraction(1, 2), -1))]
    assert independence_residual(line_gaussian.cfs, line_gaussian.matrix, tuples) <= 1e-12
    assert independence_residual(line_gaussian.cfs, _perturbed(line_gaussian), tuples) > 1e-6


def test_dimension_mismatch(line_gaussian):
    with pytest.raises(DimensionMismatchError):
        independence_residual(line_gaussian.cfs[:2], line_gaussian.matrix, default_grid(3))
    with pytest.raises(DimensionMismatchError):
        StatMatrix([[CylinderAuto.identity()]])


def test_sampled_grid_is_reproducible():
    first = build_grid(3, 'dense', cap=1000, seed=3)
    second = dense_grid(3, cap=1000, seed=3)

    assert len(first) == 1000
    assert np.array_equal(first.s, second.s)
    assert np.array_equal(first.n, second.n)
    assert len(build_grid(3, 'dense', cap=1000, seed=4)) == 1000


def test_empty_grid():
    with pytest.raises(GridError):
        DualGrid.from_tuples([])
    with pytest.raises(GridError):
        build_grid(2, 'sparse')


def test_sign_conditions():
    report = sign_conditions(2, -3, '-4/5', '-1/5')
    assert report.identity1_residual == 0
    assert report.sign_row == 2
    assert report.cross_det == Fraction(14, 5)
    assert report.corner_det == Fraction(-42, 5)
    assert report.passed

    data = report.to_dict()
    assert data['cross_det'] == '14/5'
    assert data['corner_det'] == '-42/5'
    assert data['statements']['identity']


def test_sign_conditions_reject():
    report = sign_conditions(1, -2, -2, 1)
    assert report.identity1_residual == 9
    assert not report.passed
    assert solve_sigmas(1, -2, -2, 1) is None

    with pytest.raises(ConditionViolatedError):
        sign_conditions(0, -2, -2, 1)


def test_support_identity():
    assert support_identity(2, -3, '-4/5', '-1/5') == (Fraction(588, 25), Fraction(588, 25))


def test_solve_sigmas():
    assert solve_sigmas(2, -3, '-4/5', '-1/5') == (1, 1, 1)
    assert sigma_nullspace(2, -3, '-4/5', '-1/5') == (1, 1, 1)

    with pytest.raises(ConditionViolatedError):
        solve_sigmas(1, 1, 1, 1)


def test_random_accepted_tuples_follow_the_sign_table():
    """
    Tuples with b2 solving the identity polynomial and positive sigmas
    have a sign pattern of the table and certify as Gaussian families
    """
    rng = np.random.default_rng(11)
    accepted = []
    attempts = 0
    while len(accepted) < 50 and attempts < 20000:
        attempts += 1
        a1, a2, b1 = _random_rational(rng), _random_rational(rng), _random_rational(rng)
        denominator = a1 - a1 * a2 - a1 * b1 + a2 * b1
        if denominator == 0:
            continue
        b2 = (a2 * b1 - a1 * a2 * b1) / denominator
        if b2 == 0 or a2 * b1 - a1 * b2 == 0:
            continue
        if solve_sigmas(a1, a2, b1, b2) is not None:
            accepted.append((a1, a2, b1, b2))

    assert len(accepted) == 50
    for a1, a2, b1, b2 in accepted:
        assert identity_polynomial(a1, a2, b1, b2) == 0
        assert sign_conditions(a1, a2, b1, b2).sign_row is not None
    for a1, a2, b1, b2 in accepted[:5]:
        family = line_gaussian_family(0, a1, a2, b1, b2)
        assert max(gaussian_system_check(family.cfs, family.matrix).values()) == 0


def test_random_rejected_tuples():
    rng = np.random.default_rng(12)
    rejected = 0
    while rejected < 50:
        a1, a2, b1, b2 = [_random_rational(rng) for _ in range(4)]
        if a2 * b1 - a1 * b2 == 0 or identity_polynomial(a1, a2, b1, b2) == 0:
            continue
        assert solve_sigmas(a1, a2, b1, b2) is None
        assert not sign_conditions(a1, a2, b1, b2).passed
        rejected += 1


def test_sign_table_rows_are_distinct():
    assert len(set(SIGN_TABLE)) == 6


FULL, Y2 = SubgroupTag.FULL_R, SubgroupTag.Y2


def _signed_matrix(p1, p2, q1, q2):
    return reduced_matrix(CylinderAuto(2, 0, p1), CylinderAuto(-3, 0, p2),
                          CylinderAuto(Fraction(-4, 5), 0, q1), CylinderAuto(Fraction(-1, 5), 0, q2))


@pytest.mark.parametrize('p1, p2, q1, q2, tags, case', [
    (1, 1, 1, 1, (FULL, FULL, FULL), 1),
    (1, 1, 1, -1, (FULL, Y2, Y2), 2),
    (1, 1, -1, 1, (Y2, FULL, Y2), 3),
    (1, 1, -1, -1, (Y2, Y2, FULL), 4),
    (1, -1, 1, 1, (FULL, Y2, Y2), 2),
    (1, -1, 1, -1, (FULL, Y2, Y2), 2),
    (1, -1, -1, 1, (Y2, Y2, Y2), 5),
    (1, -1, -1, -1, (Y2, Y2, Y2), 5),
    (-1, 1, 1, 1, (Y2, FULL, Y2), 3),
    (-1, 1, 1, -1, (Y2, Y2, Y2), 5),
    (-1, 1, -1, 1, (Y2, FULL, Y2), 3),
    (-1, 1, -1, -1, (Y2, Y2, Y2), 5),
    (-1, -1, 1, 1, (Y2, Y2, FULL), 4),
    (-1, -1, 1, -1, (Y2, Y2, Y2), 5),
    (-1, -1, -1, 1, (Y2, Y2, Y2), 5),
    (-1, -1, -1, -1, (Y2, Y2, FULL), 4),
])
def test_classify_subgroups(p1, p2, q1, q2, tags, case):
    assert classify_subgroups(_signed_matrix(p1, p2, q1, q2)) == tags
    assert subgroup_case(tags) == case


def test_classify_subgroups_excluded_case():
    identity = CylinderAuto.identity()
    matrix = reduced_matrix(identity, CylinderAuto(2), identity, CylinderAuto(3))
    with pytest.raises(ConditionViolatedError):
        classify_subgroups(matrix)


def test_subgroup_tags():
    assert SubgroupTag.FULL_R.contains(DualPoint(3, 0))
    assert not SubgroupTag.FULL_R.contains(DualPoint(3, 2))
    assert SubgroupTag.Y2.contains(DualPoint(3, 2))
    assert not SubgroupTag.Y2.contains(DualPoint(3, 1))


def test_gaussian_system_of_the_line_family(line_gaussian):
    residuals = gaussian_system_check(line_gaussian.cfs, line_gaussian.matrix)
    assert list(residuals) == ['sigma_a', 'sigma_b', 'sigma_ab', 'kappa_a', 'kappa_b',
                               'shift_c', 'shift_d', 'shift_ad', 'shift_bc', 'integer_cross']
    assert first_failure(residuals) is None


def test_nu_support(line_gaussian):
    report = nu_support_report(line_gaussian.cfs, line_gaussian.matrix)
    assert (report['sigma'], report['kappa'], report['lambda']) == (6, 12, 6)
    assert report['omega'] == 1
    assert report['identity'] == ['588/25', '588/25']
    assert report['passed']
    assert nu_support_check(line_gaussian.cfs, line_gaussian.matrix)


def test_reduce_to_normal_form(line_gaussian):
    """
    Changing variables and applying automorphisms to the statistics keeps
    the family independent, and the normal form recovers a reduced matrix
    """
    g = [CylinderAuto(2, 1, 1), CylinderAuto(-1, Fraction(1, 2), -1), CylinderAuto(3, 0, 1)]
    h = [CylinderAuto(Fraction(1, 2), 1, -1), CylinderAuto(2, 0, 1), CylinderAuto(-1, 1, 1)]
    m = line_gaussian.matrix
    matrix = StatMatrix([[compose(compose(invert(g[j]), m.entry(i, j)), h[i]) for j in range(3)]
                         for i in range(3)])
    cfs = [pushforward(cf, g[j]) for j, cf in enumerate(line_gaussian.cfs)]

    assert not matrix.is_reduced()
    assert independence_residual(cfs, matrix, default_grid(3)) <= 1e-12

    reduced, transform = reduce_to_normal_form(matrix)
    reduced_cfs = transform.transport(cfs)
    assert reduced.is_reduced()
    assert not transform.is_identity()
    assert independence_residual(reduced_cfs, reduced, default_grid(3)) <= 1e-12
    assert first_failure(gaussian_system_check(reduced_cfs, reduced)) is None


def test_normal_form_transform_restores_the_matrix():
    rng = np.random.default_rng(13)
    for _ in range(50):
        matrix = StatMatrix([[_random_auto(rng) for _ in range(3)] for _ in range(3)])
        reduced, transform = reduce_to_normal_form(matrix)

        assert reduced.is_reduced()
        assert transform.apply(matrix) == reduced
        assert transform.restore(reduced) == matrix
        assert transform.variables == matrix.row(0)
        assert transform.statistics[0].is_identity()
        assert len(transform.to_dict()['statistics']) == 3


def test_reduced_matrix_is_its_own_normal_form(line_gaussian):
    reduced, transform = reduce_to_normal_form(line_gaussian.matrix)
    assert reduced == line_gaussian.matrix
    assert transform.is_identity()
    assert transform.transport(line_gaussian.cfs) == list(line_gaussian.cfs)


def test_invariant_line_slopes(line_gaussian, half_line_gaussian):
    assert invariant_line_slopes(line_gaussian.matrix) == [1, 1, 1, 1]
    assert invariant_line_slopes(half_line_gaussian.matrix) == [Fraction(1, 2)] * 4
    assert slopes_agree(half_line_gaussian.matrix)
    assert not slopes_agree(_perturbed(half_line_gaussian))


def test_matrix_round_trip(half_line_gaussian):
    data = half_line_gaussian.matrix.to_list()
    assert data[2][0] == {'a': '-4/5', 'c': '-9/10', 'p': 1}
    assert StatMatrix.from_list(data) == half_line_gaussian.matrix


def test_family_needs_reduced_matrix_for_parameters():
    family = Family('signs', StatMatrix.from_signs(HADAMARD_SIGNS), [TorusCF(1)] * 4)
    with pytest.raises(ConditionViolatedError):
        family.matrix.reduced_parameters()
