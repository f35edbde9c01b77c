import cmath
import logging
from fractions import Fraction

from pycylinder.exceptions import InvalidAutomorphismError, CylinderError
from pycylinder.helpers import (
    parse_number, reduce_angle, is_exact, is_close, format_number, wrap_phase, EXACT_TOL
)

logger = logging.getLogger(__name__)


class CylinderPoint(object):
    """
    Element x = (t, z) of the cylinder X = R x T, with z = exp(i theta).
    The angle is reduced into [0, 2pi) at construction.
    """

    def __init__(self, t=0, theta=0):
        self.__t = parse_number(t)
        self.__theta = reduce_angle(parse_number(theta))

    @property
    def t(self):
        return self.__t

    @property
    def theta(self):
        return self.__theta

    def __add__(self, other):
        return CylinderPoint(self.t + other.t, self.theta + other.theta)

    def __neg__(self):
        return CylinderPoint(-self.t, -self.theta)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, CylinderPoint):
            return NotImplemented
        return self.t == other.t and self.theta == other.theta

    def __hash__(self):
        return hash((self.t, self.theta))

    def __repr__(self):
        return 'CylinderPoint(t={}, theta={})'.format(self.t, self.theta)

    def is_close(self, other, tol=EXACT_TOL):
        return is_close(self.t, other.t, tol) and \
            abs(float(wrap_phase(float(self.theta) - float(other.theta)))) <= tol

    def to_dict(self):
        return {'t': format_number(self.t), 'theta': format_number(self.theta)}

    @classmethod
    def from_dict(cls, data):
        return cls(data.get('t', 0), data.get('theta', 0))


class DualPoint(object):
    """
    Character y = (s, n) of the cylinder, an element of Y = R x Z.
    """

    def __init__(self, s=0, n=0):
        self.__s = parse_number(s)
        n = parse_number(n)
        if not is_exact(n) or Fraction(n).denominator != 1:
            raise CylinderError('The integer coordinate of a dual point must be an integer, got {}'.format(n))
        self.__n = int(n)

    @property
    def s(self):
        return self.__s

    @property
    def n(self):
        return self.__n

    def __add__(self, other):
        return DualPoint(self.s + other.s, self.n + other.n)

    def __neg__(self):
        return DualPoint(-self.s, -self.n)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, DualPoint):
            return NotImplemented
        return self.s == other.s and self.n == other.n

    def __hash__(self):
        return hash((self.s, self.n))

    def __repr__(self):
        return 'DualPoint(s={}, n={})'.format(self.s, self.n)

    def to_list(self):
        return [format_number(self.s), self.n]

    @classmethod
    def from_list(cls, data):
        s, n = data
        return cls(s, n)


class CylinderAuto(object):
    """
    Topological automorphism of R x T given by the matrix (a, c; 0, p).

    The same instance acts on characters by (s, n) -> (a s + c n, p n)
    and on points by the adjoint (t, theta) -> (a t, c t + p theta).
    """

    def __init__(self, a=1, c=0, p=1):
        self.__a = parse_number(a)
        self.__c = parse_number(c)
        self.__p = parse_number(p)

        if self.__a == 0:
            raise InvalidAutomorphismError('The automorphism multiplier a must be nonzero')
        if self.__p not in (1, -1):
            raise InvalidAutomorphismError('The automorphism sign p must be +1 or -1, got {}'.format(self.__p))
        self.__p = int(self.__p)

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
    def identity(cls):
        return cls(1, 0, 1)

    @classmethod
    def negation(cls):
        return cls(-1, 0, -1)

    @classmethod
    def sign(cls, value):
        """
        The automorphism +I or -I, which on the torus factor is z -> z or z -> z^-1.
        """
        if value not in (1, -1):
            raise InvalidAutomorphismError('A sign automorphism needs +1 or -1, got {}'.format(value))
        return cls(value, 0, value)

    def is_exact(self):
        return is_exact(self.a, self.c)

    def is_identity(self):
        return self.a == 1 and self.c == 0 and self.p == 1

    def is_plus_minus_identity(self):
        return self.c == 0 and self.a == self.p

    def __eq__(self, other):
        if not isinstance(other, CylinderAuto):
            return NotImplemented
        return self.a == other.a and self.c == other.c and self.p == other.p

    def __hash__(self):
        return hash((self.a, self.c, self.p))

    def __repr__(self):
        return 'CylinderAuto(a={}, c={}, p={})'.format(self.a, self.c, self.p)

    def to_dict(self):
        return {'a': format_number(self.a), 'c': format_number(self.c), 'p': self.p}

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(data['a'], data.get('c', 0), data.get('p', 1))
        except (KeyError, TypeError):
            raise InvalidAutomorphismError('Malformed automorphism: {}'.format(data))


def pair(x, y):
    """
    Value (x, y) = exp(i (s t + n theta)) of the character y at the point x.
    """
    return cmath.exp(1j * (float(y.s) * float(x.t) + y.n * float(x.theta)))


def apply_dual(e, y):
    return DualPoint(e.a * y.s + e.c * y.n, e.p * y.n)


def apply_point(e, x):
    return CylinderPoint(e.a * x.t, e.c * x.t + e.p * x.theta)


def compose(e1, e2):
    """
    Product of the matrices e1 e2, so that
    apply_dual(compose(e1, e2), y) == apply_dual(e1, apply_dual(e2, y)).

    On points the order is reversed:
    apply_point(compose(e1, e2), x) == apply_point(e2, apply_point(e1, x)).
    """
    return CylinderAuto(e1.a * e2.a, e1.a * e2.c + e1.c * e2.p, e1.p * e2.p)


def invert(e):
    inverse = Fraction(1) / e.a if is_exact(e.a) else 1.0 / e.a
    return CylinderAuto(inverse, -e.c * e.p * inverse, e.p)


def preserves_line(e, omega, tol=EXACT_TOL):
    """
    Whether the automorphism maps the line {(t, exp(i omega t))} onto itself,
    which happens iff c = (a - p) omega.
    """
    omega = parse_number(omega)
    expected = (e.a - e.p) * omega
    return is_close(e.c, expected, tol)


class LineSubgroup(object):
    """
    The one-parameter subgroup G = {(t, exp(i omega t)) : t in R} of the
    cylinder, together with its annihilator H = {k (-omega, 1) : k in Z}
    in the dual group.
    """

    def __init__(self, omega):
        self.__omega = parse_number(omega)

    @property
    def omega(self):
        return self.__omega

    def __repr__(self):
        return 'LineSubgroup(omega={})'.format(self.omega)

    def point(self, t):
        return CylinderPoint(t, self.omega * parse_number(t))

    def contains(self, x, tol=EXACT_TOL):
        defect = wrap_phase(float(x.theta) - float(self.omega) * float(x.t))
        return abs(float(defect)) <= tol

    def kernel_generator(self):
        return DualPoint(-self.omega, 1)

    def annihilates(self, y, tol=EXACT_TOL):
        return is_close(y.s, -self.omega * y.n, tol)

    def is_invariant(self, e, tol=EXACT_TOL):
        return preserves_line(e, self.omega, tol)
