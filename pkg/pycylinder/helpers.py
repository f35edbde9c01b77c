import logging
import math
import numbers
from fractions import Fraction
from functools import reduce

import numpy as np
import sympy

from pycylinder.exceptions import CylinderError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

# default absolute tolerances
EXACT_TOL = 1e-12
CHECK_TOL = 1e-10
FIT_TOL = 1e-9


def parse_number(value):
    """
    Converts the value taken from a fixture, a CLI option or a
    request payload into a number of the library.

    Integers and strings like "3/4", "-2" or "0.25" become exact
    values (int or Fraction), floats stay floats.

    :param value: int, Fraction, float or str
    :return: the parsed number
    """
    if isinstance(value, bool) or value is None:
        raise CylinderError('Not a number: {}'.format(value))
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Real):
        return float(value)
    if isinstance(value, str):
        try:
            number = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise CylinderError('Not a number: {}'.format(value))
        return int(number) if number.denominator == 1 else number

    raise CylinderError('Not a number: {}'.format(value))


def is_exact(*values):
    return all(isinstance(v, numbers.Rational) and not isinstance(v, bool) for v in values)


def format_number(value):
    """
    Serializable representation: exact rationals as "p/q" strings,
    integers and floats as JSON numbers.
    """
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return str(value)
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        return float(value)
    return value


def json_default(value):
    """
    `default` hook of json.dumps for the exact and numpy values left in reports.
    """
    if isinstance(value, Fraction):
        return format_number(value)
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError('{} is not JSON serializable'.format(type(value).__name__))


def is_close(x, y, tol=EXACT_TOL):
    if is_exact(x, y):
        return x == y
    return abs(float(x) - float(y)) <= tol


def reduce_angle(theta):
    """
    Reduces theta into [0, 2pi). Exact angles already in range stay exact.
    """
    if is_exact(theta) and 0 <= theta < TWO_PI:
        return theta
    reduced = float(theta) % TWO_PI
    if reduced >= TWO_PI:
        reduced = 0.0
    return reduced


def wrap_phase(values):
    """
    Maps phase differences into (-pi, pi].
    """
    return np.pi - np.mod(np.pi - values, TWO_PI)


def common_denominator(values):
    denominators = [Fraction(v).denominator for v in values]
    return reduce(lambda x, y: x * y // math.gcd(x, y), denominators, 1)


def prefix_product(values, n):
    return reduce(lambda x, y: x * y, values[:n + 1], 1)


def to_fraction(value):
    """
    Converts a sympy rational into a Fraction.
    """
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def exact_nullspace(rows):
    """
    Basis of the right nullspace of a matrix with rational entries.

    :param rows: list of rows of exact numbers
    :return: list of basis vectors, each a list of Fraction
    """
    matrix = sympy.Matrix([[sympy.Rational(Fraction(v).numerator, Fraction(v).denominator) for v in row]
                           for row in rows])
    basis = matrix.nullspace()
    logger.debug('Nullspace of {}x{} system has dimension {}'.format(matrix.rows, matrix.cols, len(basis)))
    return [[to_fraction(v) for v in vector] for vector in basis]
