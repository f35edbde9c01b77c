from fractions import Fraction

import pytest

from pycylinder.analysis.independence import build_grid, independence_residual
from pycylinder.exceptions import ConstructionError, InvalidProbabilityError, FixtureError
from pycylinder.groups.cylinder import CylinderAuto
from pycylinder.measures.charfn import CylinderCF, TorusCF, is_gaussian
from pycylinder.measures.constructions import (
    Family, line_gaussian_family, twisted_torus_pair, hadamard_counterexample, z2_signed_measure,
    torus_degeneration, torus_degeneration_matrix, degenerate_family
)


def test_line_gaussian_family(line_gaussian):
    m = line_gaussian.matrix
    assert m.alpha(1) == CylinderAuto(2, 1, 1)
    assert m.alpha(2) == CylinderAuto(-3, -4, 1)
    assert m.beta(1) == CylinderAuto(Fraction(-4, 5), Fraction(-9, 5), 1)
    assert m.beta(2) == CylinderAuto(Fraction(-1, 5), Fraction(-6, 5), 1)
    assert all(cf == CylinderCF(1, 2, 1) for cf in line_gaussian.cfs)
    assert line_gaussian.omega == 1
    assert line_gaussian.residual() <= 1e-12


def test_line_gaussian_family_on_a_slope_of_one_half(half_line_gaussian):
    m = half_line_gaussian.matrix
    assert [m.alpha(1).c, m.alpha(2).c, m.beta(1).c, m.beta(2).c] == \
        [Fraction(1, 2), -2, Fraction(-9, 10), Fraction(-3, 5)]


def test_line_gaussian_family_with_negative_signs():
    family = line_gaussian_family(1, 2, -3, '-4/5', '-1/5', p1=-1, q2=-1)
    assert family.matrix.alpha(1) == CylinderAuto(2, 3, -1)
    assert family.matrix.beta(2) == CylinderAuto(Fraction(-1, 5), Fraction(4, 5), -1)
    assert family.residual() <= 1e-12


def test_line_gaussian_family_on_the_real_line():
    family = line_gaussian_family(0, 2, -3, '-4/5', '-1/5', sigma_scale=3)
    assert all(e.c == 0 for row in family.matrix.entries for e in row)
    assert all(cf == CylinderCF(3) for cf in family.cfs)


def test_line_gaussian_family_without_sigmas():
    with pytest.raises(ConstructionError):
        line_gaussian_family(1, 1, -2, -2, 1)
    with pytest.raises(ConstructionError):
        line_gaussian_family(1, 2, -3, '-4/5', '-1/5', sigma_scale=0)


def test_twisted_torus_pair():
    family = twisted_torus_pair(1, kappa='1/20')
    assert family.cfs == (TorusCF(1, 0, Fraction(1, 20)), TorusCF(1, 0, Fraction(-1, 20)))
    assert not any(is_gaussian(cf) for cf in family.cfs)
    assert family.residual() <= 1e-12


@pytest.mark.parametrize('sigma, kappa', [(0, '1/10'), (1, '1/2')])
def test_twisted_torus_pair_needs_probabilities(sigma, kappa):
    with pytest.raises(InvalidProbabilityError):
        twisted_torus_pair(sigma, kappa=kappa)


def test_hadamard_counterexample():
    family = hadamard_counterexample(1, '1/20')
    assert family.matrix.size == 4
    assert not any(is_gaussian(cf) for cf in family.cfs)
    assert family.residual() <= 1e-12


def test_hadamard_with_a_wrong_member():
    family = hadamard_counterexample(1, '1/20')
    cfs = list(family.cfs)
    cfs[2] = cfs[0]
    assert independence_residual(cfs, family.matrix, build_grid(4, cap=4096)) > 1e-6


@pytest.mark.parametrize('sigma, kappa', [(1, 0), (0, '1/20')])
def test_hadamard_counterexample_rejects_gaussian_or_degenerate_members(sigma, kappa):
    with pytest.raises(ConstructionError):
        hadamard_counterexample(sigma, kappa)


def test_z2_signed_measure():
    assert z2_signed_measure(0).p1 == 1
    assert not z2_signed_measure(0).is_signed()
    assert z2_signed_measure(0.1).pm1 < 0
    assert z2_signed_measure(-0.1).pm1 > 0


def test_torus_degeneration():
    verdict = torus_degeneration()
    assert verdict['unique']
    assert verdict['sigma'] == [0, 0, 0]


def test_gaussians_on_the_degeneration_matrix_are_dependent():
    matrix = torus_degeneration_matrix()
    grid = build_grid(3)

    cfs = [TorusCF(1), TorusCF(Fraction(1, 2)), TorusCF(2)]
    assert independence_residual(cfs, matrix, grid) > 1e-6
    assert independence_residual([TorusCF.degenerate(1)] * 3, matrix, grid) <= 1e-12
    assert degenerate_family(matrix).residual() == 0


def test_family_round_trip(half_line_gaussian):
    family = Family.from_dict(half_line_gaussian.to_dict())
    assert family.matrix == half_line_gaussian.matrix
    assert family.cfs == half_line_gaussian.cfs
    assert family.omega == Fraction(1, 2)
    assert family.name == 'line-gaussian'


@pytest.mark.parametrize('data', [
    {'matrix': [[{'a': 1}, {'a': 1}], [{'a': 1}, {'a': -1}]]},
    {'matrix': [[{'a': 1}, {'a': 1}], [{'a': 1}, {'a': -1}]], 'cfs': [{'kind': 'torus'}]},
    {'matrix': [[{'a': 0}, {'a': 1}], [{'a': 1}, {'a': -1}]], 'cfs': [{}, {}]},
])
def test_malformed_family(data):
    with pytest.raises(FixtureError):
        Family.from_dict(data)
