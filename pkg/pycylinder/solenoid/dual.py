"""
The character group H_a = {m / (a_0 a_1 ... a_n)} of the a-adic solenoid and
the independence equation restricted to the rational dual H_a x Z.

The dual of Sigma_a x T embeds into R x Z by (r, n) -> (r, n), so the
closed-form cylinder CFs are evaluated at exact rational points.
"""
import logging
from fractions import Fraction

from pycylinder.analysis.independence import DualGrid, independence_report, DEFAULT_N_VALUES
from pycylinder.exceptions import SolenoidError, IncompatibleMultiplierError
from pycylinder.groups.cylinder import DualPoint
from pycylinder.helpers import is_exact, parse_number, format_number

logger = logging.getLogger(__name__)

PULLBACK_CAP = 4096


def ha_member(q, base, depth_limit=None):
    """
    Smallest n <= depth_limit such that the denominator of q divides a_0 ... a_n.

    :return: the witness depth or None
    """
    q = parse_number(q)
    if not is_exact(q):
        return None
    depth_limit = base.precision - 1 if depth_limit is None else min(depth_limit, base.precision - 1)

    denominator = Fraction(q).denominator
    for n in range(depth_limit + 1):
        if base.prefix_product(n) % denominator == 0:
            return n
    return None


class HaRational(object):

    def __init__(self, value, base, depth_limit=None):
        value = parse_number(value)
        depth = ha_member(value, base, depth_limit)
        if depth is None:
            raise SolenoidError('{} is not an element of H_a for {}'.format(value, base))
        self.__value = Fraction(value)
        self.__depth = depth
        self.__base = base

    @property
    def value(self):
        return self.__value

    @property
    def depth(self):
        return self.__depth

    @property
    def base(self):
        return self.__base

    def __add__(self, other):
        return HaRational(self.value + other.value, self.base)

    def __neg__(self):
        return HaRational(-self.value, self.base)

    def __eq__(self, other):
        if not isinstance(other, HaRational):
            return NotImplemented
        return self.value == other.value and self.base == other.base

    def __hash__(self):
        return hash((self.value, self.base))

    def __repr__(self):
        return 'HaRational({}, depth={})'.format(self.value, self.depth)

    def to_dict(self):
        return {'value': format_number(self.value), 'depth': self.depth}


def check_multiplier(a, base, depth):
    """
    Multiplication by a is taken as an automorphism of H_a when a g and g / a
    lie in H_a for every generator g = 1 / (a_0 ... a_k), k <= depth.
    """
    a = parse_number(a)
    if not is_exact(a) or a == 0:
        raise IncompatibleMultiplierError('The multiplier {} is not a nonzero rational'.format(a))
    if depth > base.precision - 1:
        raise SolenoidError('Depth {} exceeds the precision {} of the base'.format(depth, base.precision))

    a = Fraction(a)
    for k in range(depth + 1):
        generator = Fraction(1, base.prefix_product(k))
        for image in (a * generator, generator / a):
            if ha_member(image, base) is None:
                raise IncompatibleMultiplierError('Multiplier {} maps 1/{} to {} outside H_a'.format(
                    a, base.prefix_product(k), image))


class SolenoidAuto(object):
    """
    Automorphism (r, n) -> (a r + c n, p n) of H_a x Z.
    """

    def __init__(self, a, c, p, base, depth):
        check_multiplier(a, base, depth)
        if p not in (1, -1):
            raise IncompatibleMultiplierError('The sign p must be +1 or -1, got {}'.format(p))
        self.__a = Fraction(parse_number(a))
        self.__c = HaRational(c, base)
        self.__p = p

    @property
    def a(self):
        return self.__a

    @property
    def c(self):
        return self.__c

    @property
    def p(self):
        return self.__p

    @classmethod
    def from_auto(cls, e, base, depth):
        if not is_exact(e.c):
            raise IncompatibleMultiplierError('The shift {} is not a rational'.format(e.c))
        try:
            return cls(e.a, e.c, e.p, base, depth)
        except SolenoidError as error:
            raise IncompatibleMultiplierError(error.msg)

    def apply_dual(self, r, n):
        return self.a * r + self.c.value * n, self.p * n

    def __repr__(self):
        return 'SolenoidAuto(a={}, c={}, p={})'.format(self.a, self.c.value, self.p)


def check_solenoid_matrix(m, base, depth):
    """
    :return: the SolenoidAuto rows of the matrix
    :raises IncompatibleMultiplierError: naming the first offending entry
    """
    rows = []
    for i, row in enumerate(m.entries):
        converted = []
        for j, e in enumerate(row):
            try:
                converted.append(SolenoidAuto.from_auto(e, base, depth))
            except IncompatibleMultiplierError as error:
                raise IncompatibleMultiplierError('Entry ({}, {}) {}: {}'.format(i + 1, j + 1, e, error.msg))
        rows.append(converted)
    return rows


def ha_grid(base, depth):
    """
    s-coordinates 0, +-1, +-2 and +-1 / (a_0 ... a_d) for d <= depth.
    """
    if depth > base.precision - 1:
        raise SolenoidError('Depth {} exceeds the precision {} of the base'.format(depth, base.precision))
    values = {Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2)}
    for d in range(depth + 1):
        values.add(Fraction(1, base.prefix_product(d)))
        values.add(Fraction(-1, base.prefix_product(d)))
    return sorted(values)


def pullback_report(cfs, m, base, grid_depth, workers=1, cap=PULLBACK_CAP, seed=0):
    check_solenoid_matrix(m, base, grid_depth)
    points = [DualPoint(r, n) for r in ha_grid(base, grid_depth) for n in DEFAULT_N_VALUES]
    grid = DualGrid.from_points(points, m.size, cap, seed)

    report = independence_report(cfs, m, grid, workers=workers)
    report['depth'] = grid_depth
    report['base'] = list(base.values)
    logger.debug('Pullback residual over H_a x Z: {}'.format(report['residual']))
    return report


def pullback_residual(cfs, m, base, grid_depth, workers=1):
    """
    Residual of the independence equation on tuples of H_a x Z whose rational
    coordinates have depth <= grid_depth.
    """
    return pullback_report(cfs, m, base, grid_depth, workers)['residual']
