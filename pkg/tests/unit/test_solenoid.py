from fractions import Fraction

import numpy as np
import pytest

from pycylinder.exceptions import SolenoidError, IncompatibleMultiplierError
from pycylinder.groups.cylinder import CylinderAuto
from pycylinder.measures.constructions import line_gaussian_family
from pycylinder.solenoid.adic import BaseSequence, AdicInteger, adic_add, adic_add_with_carries, adic_negate
from pycylinder.solenoid.dual import (
    ha_member, HaRational, check_multiplier, check_solenoid_matrix, SolenoidAuto, ha_grid, pullback_report,
    pullback_residual
)


def _random_adic(rng, base):
    return AdicInteger([int(rng.integers(0, radix)) for radix in base.values], base)


def test_addition_with_carries():
    base = BaseSequence([2, 3, 2])
    total, carries = adic_add_with_carries(AdicInteger([1, 2, 1], base), AdicInteger([1, 0, 1], base))

    assert total.digits == (0, 0, 1)
    assert carries == [1, 1, 1]


def test_addition_is_associative_and_commutative():
    rng = np.random.default_rng(3)
    base = BaseSequence(rng.integers(2, 10, 32))
    for _ in range(1000):
        x, y, z = _random_adic(rng, base), _random_adic(rng, base), _random_adic(rng, base)
        assert adic_add(adic_add(x, y), z) == adic_add(x, adic_add(y, z))
        assert x + y == y + x


def test_negation():
    rng = np.random.default_rng(4)
    base = BaseSequence.consecutive(2, 12)
    for _ in range(100):
        x = _random_adic(rng, base)
        assert x + adic_negate(x) == AdicInteger.zero(base)


def test_integers_embed():
    base = BaseSequence([2, 3, 2])
    assert AdicInteger.from_int(-1, base).digits == (1, 2, 1)
    assert AdicInteger.from_int(7, base).to_int() == 7
    assert (AdicInteger.from_int(5, base) + AdicInteger.from_int(9, base)).to_int() == 2


def test_invalid_digits_and_bases():
    base = BaseSequence([2, 3, 2])
    with pytest.raises(SolenoidError):
        AdicInteger([0, 3, 0], base)
    with pytest.raises(SolenoidError):
        AdicInteger([0, 0], base)
    with pytest.raises(SolenoidError):
        BaseSequence([2, 1, 3])
    with pytest.raises(SolenoidError):
        BaseSequence([])
    with pytest.raises(SolenoidError):
        adic_add(AdicInteger.zero(base), AdicInteger.zero(BaseSequence([2, 2, 2])))


def test_base_from_dict():
    assert BaseSequence.from_dict({'base': [2, 3]}) == BaseSequence([2, 3])
    assert BaseSequence.from_dict([2, 3]).modulus == 6
    with pytest.raises(SolenoidError):
        BaseSequence.from_dict({'values': [2, 3]})


def test_ha_member():
    assert ha_member('5/6', BaseSequence.consecutive(2, 8)) == 1
    assert ha_member('1/3', BaseSequence.constant(2, 16)) is None
    assert ha_member(5, BaseSequence.constant(2, 16)) == 0
    assert ha_member(0.5, BaseSequence.constant(2, 16)) is None
    assert ha_member('1/8', BaseSequence.constant(2, 16), depth_limit=1) is None


def test_ha_rational():
    base = BaseSequence.constant(2, 8)
    x = HaRational('3/8', base)
    assert x.depth == 2
    assert (x + HaRational('1/8', base)).value == Fraction(1, 2)
    assert (-x).value == Fraction(-3, 8)
    with pytest.raises(SolenoidError):
        HaRational('1/3', base)


def test_check_multiplier():
    check_multiplier(2, BaseSequence.constant(2, 16), 3)
    check_multiplier('-4/5', BaseSequence.consecutive(2, 16), 6)

    with pytest.raises(IncompatibleMultiplierError):
        check_multiplier('1/7', BaseSequence.constant(2, 16), 3)
    with pytest.raises(IncompatibleMultiplierError):
        check_multiplier(0.5, BaseSequence.constant(2, 16), 3)
    with pytest.raises(SolenoidError):
        check_multiplier(2, BaseSequence.constant(2, 4), 4)


def test_solenoid_auto():
    base = BaseSequence.consecutive(2, 16)
    e = SolenoidAuto.from_auto(CylinderAuto(Fraction(-4, 5), Fraction(-9, 10), 1), base, 6)
    assert e.apply_dual(Fraction(1, 2), 1) == (Fraction(-13, 10), 1)

    with pytest.raises(IncompatibleMultiplierError):
        SolenoidAuto.from_auto(CylinderAuto(2, 0.5, 1), base, 6)


def test_ha_grid():
    values = ha_grid(BaseSequence.constant(2, 4), 2)
    assert values == sorted(Fraction(v) for v in ('-2', '-1', '-1/2', '-1/4', '-1/8', '0',
                                                   '1/8', '1/4', '1/2', '1', '2'))
    with pytest.raises(SolenoidError):
        ha_grid(BaseSequence.constant(2, 4), 4)


def test_pullback_of_line_families(half_line_gaussian):
    base = BaseSequence.consecutive(2, 16)
    real_line = line_gaussian_family(0, 2, -3, '-4/5', '-1/5')

    assert pullback_residual(real_line.cfs, real_line.matrix, base, 6) <= 1e-12
    report = pullback_report(half_line_gaussian.cfs, half_line_gaussian.matrix, base, 6)
    assert report['residual'] <= 1e-12
    assert report['depth'] == 6
    assert report['base'] == list(range(2, 18))


def test_pullback_rejects_incompatible_multipliers(half_line_gaussian):
    with pytest.raises(IncompatibleMultiplierError) as error:
        check_solenoid_matrix(half_line_gaussian.matrix, BaseSequence.constant(2, 16), 3)
    assert 'Entry (2, 2)' in error.value.msg
