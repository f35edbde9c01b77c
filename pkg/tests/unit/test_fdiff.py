import numpy as np
import pytest

from pycylinder.analysis.fdiff import (
    GridFunction, delta, delta_chain, polynomial_degree, quadratic_section_fit, evaluate_section,
    verify_triple_differences, verify_kappa_linearity, default_n_grid
)
from pycylinder.analysis.independence import StatMatrix, SubgroupTag, classify_subgroups
from pycylinder.exceptions import GridError, NotQuadraticSectionError, DimensionMismatchError, ConditionViolatedError
from pycylinder.helpers import FIT_TOL


def test_delta_of_a_square():
    f = GridFunction.from_callable(lambda s, n: s * s)
    g = delta(f, (1, 0))

    assert g.shape == (37, 13)
    assert np.allclose(g.values, (2 * g.s_grid + 1)[:, None] * np.ones(13))


def test_delta_along_the_integers():
    f = GridFunction.from_callable(lambda s, n: n * n * s)
    g = delta(f, (0, 1))
    assert np.allclose(g.values, np.outer(g.s_grid, 2 * g.n_grid + 1))


def test_delta_needs_a_multiple_of_the_step():
    f = GridFunction.from_callable(lambda s, n: s)
    with pytest.raises(GridError):
        delta(f, (0.1, 0))
    with pytest.raises(GridError):
        delta(f, (0, 20))


def test_grid_must_be_uniform():
    with pytest.raises(GridError):
        GridFunction([0.0, 1.0, 3.0], [0], np.zeros((3, 1)))
    with pytest.raises(GridError):
        GridFunction([0.0, 1.0], [0, 2], np.zeros((2, 2)))
    with pytest.raises(DimensionMismatchError):
        GridFunction([0.0, 1.0], [0, 1], np.zeros((2, 3)))


def test_value_at():
    f = GridFunction.from_callable(lambda s, n: s + 10 * n)
    assert f.value_at(1.25, -2) == pytest.approx(-18.75)
    with pytest.raises(GridError):
        f.value_at(1.3, 0)


@pytest.mark.parametrize('func, degree', [
    (lambda s, n: 3.0 + 0 * s, 0),
    (lambda s, n: 2 * s - n, 1),
    (lambda s, n: s * s + n * s + n * n, 2),
    (lambda s, n: s ** 3 - n, 3),
    (lambda s, n: s ** 4, 4),
])
def test_polynomial_degree(func, degree):
    assert polynomial_degree(GridFunction.from_callable(func)) == degree


def test_polynomial_degree_above_the_limit():
    assert polynomial_degree(GridFunction.from_callable(lambda s, n: s ** 4), max_deg=3) is None


def test_quadratic_section_fit():
    section = quadratic_section_fit(GridFunction.from_callable(lambda s, n: s * s + n * s + n * n))
    n = np.array(section.n_values)

    assert section.sigma == pytest.approx(1.0, abs=1e-9)
    assert np.allclose(section.kappa, n, atol=1e-9)
    assert np.allclose(section.lam, n * n, atol=1e-9)
    assert evaluate_section(section, 1.0, 2) == pytest.approx(7.0)


def test_quadratic_section_fit_with_quartic_lambda():
    section = quadratic_section_fit(GridFunction.from_callable(lambda s, n: 2 * s * s + 3 * n * s + n ** 4))
    n = np.array(section.n_values)

    assert section.sigma == pytest.approx(2.0, abs=1e-8)
    assert np.allclose(section.kappa, 3 * n, atol=1e-8)
    assert np.allclose(section.lam, n ** 4, atol=1e-6)


@pytest.mark.parametrize('func', [
    lambda s, n: s ** 4,
    lambda s, n: s * s + n ** 3,
    lambda s, n: s * s + s ** 3,
    lambda s, n: (1.0 + 0.1 * n * n) * s * s,
])
def test_not_a_quadratic_section(func):
    with pytest.raises(NotQuadraticSectionError):
        quadratic_section_fit(GridFunction.from_callable(func))


def test_complex_values_are_not_a_section():
    f = GridFunction.from_callable(lambda s, n: s * s + 1j * n * s)
    with pytest.raises(NotQuadraticSectionError):
        quadratic_section_fit(f)


def test_fit_recovers_random_sections():
    rng = np.random.default_rng(5)
    for _ in range(100):
        sigma = rng.uniform(0.1, 3.0)
        k = rng.uniform(-2.0, 2.0)
        c2, c1 = rng.uniform(0.0, 3.0), rng.uniform(0.0, 1.0)

        f = GridFunction.from_callable(lambda s, n: sigma * s * s + k * n * s + c2 * n * n + c1 * np.abs(n))
        section = quadratic_section_fit(f)
        n = np.array(section.n_values)

        assert abs(section.sigma - sigma) <= FIT_TOL
        assert np.max(np.abs(np.array(section.kappa) - k * n)) <= FIT_TOL
        assert np.max(np.abs(np.array(section.lam) - (c2 * n * n + c1 * np.abs(n)))) <= FIT_TOL


def test_triple_differences_of_quadratic_psis(line_gaussian):
    tags = classify_subgroups(line_gaussian.matrix)
    psis = [GridFunction.from_cf(cf) for cf in line_gaussian.cfs]

    assert all(r <= 1e-9 for r in verify_triple_differences(psis, line_gaussian.matrix, tags))


def test_triple_differences_detect_a_cubic_term(line_gaussian):
    psis = [GridFunction.from_cf(cf) for cf in line_gaussian.cfs]
    psis[0] = psis[0] + GridFunction.from_callable(lambda s, n: s ** 3)

    residuals = verify_triple_differences(psis, line_gaussian.matrix)
    assert residuals[0] > 1e-3
    assert residuals[1] <= 1e-9
    assert residuals[2] <= 1e-9


def test_triple_differences_need_three_functions(line_gaussian):
    tags = classify_subgroups(line_gaussian.matrix)
    with pytest.raises(DimensionMismatchError):
        verify_triple_differences([GridFunction.from_cf(line_gaussian.cfs[0])], line_gaussian.matrix, tags)


def test_triple_differences_follow_the_matrix(line_gaussian):
    psis = [GridFunction.from_cf(cf) for cf in line_gaussian.cfs]
    m = line_gaussian.matrix
    shuffled = StatMatrix([m.row(2), m.row(0), m.row(1)])
    assert not shuffled.is_reduced()
    assert verify_triple_differences(psis, shuffled) == verify_triple_differences(psis, m)

    full, y2 = SubgroupTag.FULL_R, SubgroupTag.Y2
    with pytest.raises(ConditionViolatedError):
        verify_triple_differences(psis, m, (full, y2, y2))


def test_kappa_linearity():
    n = default_n_grid()
    a, b = (2, -3), (-0.8, -0.2)

    assert verify_kappa_linearity([2 * n, 2 * n, 2 * n], a, b, 6)
    assert not verify_kappa_linearity([n ** 3, 2 * n, 2 * n], a, b, 6)
    assert verify_kappa_linearity([0 * n, 0 * n, 0 * n], a, b, 0)


def test_kappa_linearity_needs_an_invertible_corner():
    n = default_n_grid()
    with pytest.raises(ConditionViolatedError):
        verify_kappa_linearity([n, n, n], (2, 2), (3, 3), 1)


def test_delta_chain_of_a_cubic():
    f = GridFunction.from_callable(lambda s, n: s ** 3)
    g = delta_chain(f, [(0.25, 0)] * 3)
    assert np.allclose(g.values, 6 * 0.25 ** 3)
