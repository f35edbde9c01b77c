"""
Parameterized characteristic functions on R x T and on T.

A cylinder CF is stored through its logarithm

    l(s, n) = -(sigma s^2 + kappa s n + lam n^2) + i (tau s + theta n) + twist (1 - (-1)^n)

and a torus CF through l(n) = -sigma n^2 + i theta n + twist (1 - (-1)^n).
Convolution of measures is the sum of the parameters.
"""
import logging
import math

import numpy as np

from pycylinder.exceptions import CharacteristicFunctionError, InconclusiveError
from pycylinder.groups.cylinder import DualPoint
from pycylinder.helpers import (
    parse_number, reduce_angle, format_number, is_exact, is_close, EXACT_TOL, CHECK_TOL, TWO_PI
)

logger = logging.getLogger(__name__)

INVERSION_POINTS = 1024
DEFAULT_TRUNCATION = 50


class CharacteristicFunction(object):
    """
    Common behaviour of the parameter bundles. Subclasses expose
    `coefficients()` as the six numbers (sigma, kappa, lam, tau, theta, twist)
    of the log-CF written on the dual group R x Z.
    """

    kind = None

    def coefficients(self):
        raise NotImplementedError

    def is_exact(self):
        sigma, kappa, lam, tau, theta, _ = self.coefficients()
        return is_exact(sigma, kappa, lam, tau, theta)

    def log_parts(self, s, n):
        """
        Real and imaginary part of the log-CF, vectorized over numpy arrays.
        """
        sigma, kappa, lam, tau, theta, twist = [float(v) for v in self.coefficients()]
        s = np.asarray(s, dtype=float)
        n = np.asarray(n)
        nf = n.astype(float)
        odd = np.mod(n, 2).astype(float)
        real = -(sigma * s * s + kappa * s * nf + lam * nf * nf) + 2.0 * twist * odd
        imag = tau * s + theta * nf
        return real, imag

    def evaluate(self, y):
        return evaluate(self, y)

    def is_degenerate(self):
        sigma, kappa, lam, _, _, twist = self.coefficients()
        return sigma == 0 and kappa == 0 and lam == 0 and twist == 0


class CylinderCF(CharacteristicFunction):

    kind = 'cylinder'

    def __init__(self, sigma=0, kappa=0, lam=0, tau=0, theta=0, twist=0, tol=EXACT_TOL):
        self.__sigma = parse_number(sigma)
        self.__kappa = parse_number(kappa)
        self.__lam = parse_number(lam)
        self.__tau = parse_number(tau)
        self.__theta = reduce_angle(parse_number(theta))
        self.__twist = parse_number(twist)

        if self.__sigma < 0 or self.__lam < 0:
            raise CharacteristicFunctionError(
                'sigma and lambda must be nonnegative, got sigma={} lambda={}'.format(self.__sigma, self.__lam))

        defect = 4 * self.__sigma * self.__lam - self.__kappa * self.__kappa
        if is_exact(self.__sigma, self.__kappa, self.__lam):
            psd = defect >= 0
        else:
            psd = float(defect) >= -tol * max(1.0, float(self.__kappa) ** 2)
        if not psd:
            raise CharacteristicFunctionError(
                'The quadratic form is not positive semidefinite: 4*sigma*lambda - kappa^2 = {}'.format(defect))

    @property
    def sigma(self):
        return self.__sigma

    @property
    def kappa(self):
        return self.__kappa

    @property
    def lam(self):
        return self.__lam

    @property
    def tau(self):
        return self.__tau

    @property
    def theta(self):
        return self.__theta

    @property
    def twist(self):
        return self.__twist

    @classmethod
    def degenerate(cls, t=0, theta=0):
        """
        CF of the point mass at (t, exp(i theta)).
        """
        return cls(tau=t, theta=theta)

    @classmethod
    def line_gaussian(cls, sigma, omega):
        """
        Gaussian exp(-sigma (s + omega n)^2) supported by the line {(t, exp(i omega t))}.
        """
        sigma = parse_number(sigma)
        omega = parse_number(omega)
        return cls(sigma, 2 * sigma * omega, sigma * omega * omega)

    def coefficients(self):
        return self.sigma, self.kappa, self.lam, self.tau, self.theta, self.twist

    def __eq__(self, other):
        if not isinstance(other, CylinderCF):
            return NotImplemented
        return self.coefficients() == other.coefficients()

    def __hash__(self):
        return hash(self.coefficients())

    def __repr__(self):
        return 'CylinderCF(sigma={}, kappa={}, lambda={}, tau={}, theta={}, twist={})'.format(
            *self.coefficients())

    def to_dict(self):
        return {
            'kind': self.kind,
            'sigma': format_number(self.sigma),
            'kappa': format_number(self.kappa),
            'lambda': format_number(self.lam),
            'tau': format_number(self.tau),
            'theta': format_number(self.theta),
            'twist': format_number(self.twist),
        }


class TorusCF(CharacteristicFunction):
    """
    CF exp(-sigma n^2 + i theta n + twist (1 - (-1)^n)) on the circle,
    seen on the cylinder as a distribution on {0} x T.
    """

    kind = 'torus'

    def __init__(self, sigma=0, theta=0, twist=0):
        self.__sigma = parse_number(sigma)
        self.__theta = reduce_angle(parse_number(theta))
        self.__twist = parse_number(twist)

        if self.__sigma < 0:
            raise CharacteristicFunctionError('sigma must be nonnegative, got {}'.format(self.__sigma))

    @property
    def sigma(self):
        return self.__sigma

    @property
    def theta(self):
        return self.__theta

    @property
    def twist(self):
        return self.__twist

    @classmethod
    def degenerate(cls, theta=0):
        return cls(theta=theta)

    def coefficients(self):
        return 0, 0, self.sigma, 0, self.theta, self.twist

    def __eq__(self, other):
        if not isinstance(other, TorusCF):
            return NotImplemented
        return (self.sigma, self.theta, self.twist) == (other.sigma, other.theta, other.twist)

    def __hash__(self):
        return hash((self.sigma, self.theta, self.twist))

    def __repr__(self):
        return 'TorusCF(sigma={}, theta={}, twist={})'.format(self.sigma, self.theta, self.twist)

    def to_dict(self):
        return {
            'kind': self.kind,
            'sigma': format_number(self.sigma),
            'theta': format_number(self.theta),
            'twist': format_number(self.twist),
        }


class Z2SignedMeasure(object):
    """
    Signed measure on the subgroup {+1, -1} of T with masses p1 at +1
    and pm1 at -1, p1 + pm1 = 1. Its CF is n -> p1 + pm1 (-1)^n.
    """

    def __init__(self, p1, pm1, tol=EXACT_TOL):
        self.__p1 = parse_number(p1)
        self.__pm1 = parse_number(pm1)
        if not is_close(self.__p1 + self.__pm1, 1, tol):
            raise CharacteristicFunctionError(
                'Masses of a signed measure on Z(2) must add up to 1, got {} + {}'.format(self.__p1, self.__pm1))

    @property
    def p1(self):
        return self.__p1

    @property
    def pm1(self):
        return self.__pm1

    @classmethod
    def from_twist(cls, kappa):
        """
        The measure whose CF is exp(kappa (1 - (-1)^n)).
        """
        factor = math.exp(2.0 * float(kappa))
        return cls((1.0 + factor) / 2.0, (1.0 - factor) / 2.0)

    @property
    def twist(self):
        difference = float(self.p1 - self.pm1)
        if difference <= 0:
            raise CharacteristicFunctionError('The measure {} has no twist parameter'.format(self))
        return math.log(difference) / 2.0

    def is_signed(self):
        return self.p1 < 0 or self.pm1 < 0

    def evaluate(self, n):
        return self.p1 + self.pm1 * (-1) ** (int(n) % 2)

    def convolve(self, other):
        return Z2SignedMeasure(self.p1 * other.p1 + self.pm1 * other.pm1,
                               self.p1 * other.pm1 + self.pm1 * other.p1)

    def __repr__(self):
        return 'Z2SignedMeasure(p1={}, pm1={})'.format(self.p1, self.pm1)

    def to_dict(self):
        return {'p1': format_number(self.p1), 'pm1': format_number(self.pm1)}


def evaluate(cf, y):
    """
    Value of the CF at a dual point (or at an integer for a torus CF).
    """
    if isinstance(y, DualPoint):
        s, n = y.s, y.n
    else:
        s, n = 0, int(y)
    real, imag = cf.log_parts(float(s), n)
    return complex(np.exp(real + 1j * imag))


def convolve(cf1, cf2):
    if type(cf1) is not type(cf2):
        raise CharacteristicFunctionError('Can not convolve a {} CF with a {} CF'.format(cf1.kind, cf2.kind))

    if isinstance(cf1, TorusCF):
        return TorusCF(cf1.sigma + cf2.sigma, cf1.theta + cf2.theta, cf1.twist + cf2.twist)

    return CylinderCF(cf1.sigma + cf2.sigma, cf1.kappa + cf2.kappa, cf1.lam + cf2.lam,
                      cf1.tau + cf2.tau, cf1.theta + cf2.theta, cf1.twist + cf2.twist)


def reflect(cf):
    """
    CF of the reflected measure mu(-B), the complex conjugate of the CF.
    """
    if isinstance(cf, TorusCF):
        return TorusCF(cf.sigma, -cf.theta, cf.twist)
    return CylinderCF(cf.sigma, cf.kappa, cf.lam, -cf.tau, -cf.theta, cf.twist)


def symmetrize(cf):
    return convolve(cf, reflect(cf))


def pushforward(cf, e):
    """
    CF of the image of the distribution under the automorphism e,
    y -> cf(apply_dual(e, y)), again a parameter bundle.
    """
    if isinstance(cf, TorusCF):
        return TorusCF(cf.sigma, cf.theta * e.p, cf.twist)

    sigma = cf.sigma * e.a * e.a
    kappa = 2 * cf.sigma * e.a * e.c + cf.kappa * e.a * e.p
    lam = cf.sigma * e.c * e.c + cf.kappa * e.c * e.p + cf.lam
    return CylinderCF(sigma, kappa, lam, cf.tau * e.a, cf.tau * e.c + cf.theta * e.p, cf.twist)


def _phi(cf, y):
    # -Re log of the CF
    real, _ = cf.log_parts(float(y.s), y.n)
    return -float(real)


def parallelogram_defect(cf):
    """
    Largest violation of phi(u + v) + phi(u - v) = 2 (phi(u) + phi(v))
    over a 5 x 5 grid of pairs, with phi = -Re log of the CF.
    """
    points = [DualPoint(0, 0), DualPoint(0, 1), DualPoint(1, 0), DualPoint('1/2', 1), DualPoint(-1, 2)]
    defect = 0.0
    for u in points:
        for v in points:
            lhs = _phi(cf, u + v) + _phi(cf, u - v)
            rhs = 2.0 * (_phi(cf, u) + _phi(cf, v))
            defect = max(defect, abs(lhs - rhs))
    return defect


def is_gaussian(cf, tol=CHECK_TOL):
    """
    A parameter CF is Gaussian iff it has no Z(2) twist; the quadratic part
    is also checked against the parallelogram equation.
    """
    twist_free = is_close(cf.twist, 0, tol)
    defect = parallelogram_defect(cf)
    logger.debug('Parallelogram defect of {}: {}'.format(cf, defect))

    sigma, kappa, lam = [abs(float(v)) for v in cf.coefficients()[:3]]
    scale = max(1.0, 16.0 * (sigma + kappa + lam))
    if twist_free and defect > tol * scale:
        raise CharacteristicFunctionError('The quadratic part of {} fails the parallelogram equation'.format(cf))
    return twist_free


def _tail_bound(cf, truncation):
    sigma = float(cf.sigma)
    twist = abs(float(cf.twist))
    ratio = math.exp(-sigma * (2 * truncation + 3))
    return 2.0 * math.exp(2.0 * twist) * math.exp(-sigma * (truncation + 1) ** 2) / (1.0 - ratio)


def torus_density(cf, truncation=DEFAULT_TRUNCATION, points=INVERSION_POINTS, tol=CHECK_TOL):
    """
    Density of a torus CF on a uniform grid of [0, 2pi), by Fourier inversion.

    :return: (grid, complex density values)
    """
    if truncation < 1:
        raise CharacteristicFunctionError('The truncation must be at least 1, got {}'.format(truncation))
    if cf.sigma == 0:
        raise InconclusiveError('A torus CF with sigma = 0 has no density')

    bound = _tail_bound(cf, truncation)
    if bound > tol:
        raise InconclusiveError('Fourier tail bound {} exceeds tolerance {} at truncation {}'.format(
            bound, tol, truncation))

    grid = TWO_PI * np.arange(points) / points
    n = np.arange(-truncation, truncation + 1)
    real, imag = cf.log_parts(np.zeros(n.shape), n)
    values = np.exp(real + 1j * imag)
    density = np.exp(-1j * np.outer(grid, n)).dot(values) / TWO_PI
    return grid, density


def z2_masses(twist):
    factor = math.exp(2.0 * float(twist))
    return (1.0 + factor) / 2.0, (1.0 - factor) / 2.0


def is_valid_probability(cf, truncation=DEFAULT_TRUNCATION, tol=CHECK_TOL):
    """
    Decides whether the CF belongs to a probability measure.

    Twist-free CFs are Gaussian and always valid. A torus CF with sigma = 0
    is the point mass at theta convolved with the Z(2) measure of its twist,
    valid iff the mass at -1 is nonnegative. Otherwise the density is
    recovered on a 1024-point grid and checked for nonnegativity.
    """
    if is_close(cf.twist, 0, 0):
        return True

    if isinstance(cf, CylinderCF):
        if cf.sigma == 0 and cf.kappa == 0:
            return is_valid_probability(TorusCF(cf.lam, cf.theta, cf.twist), truncation, tol)
        raise InconclusiveError('Validity of a twisted cylinder CF with sigma > 0 is not decided: {}'.format(cf))

    if cf.sigma == 0:
        _, q = z2_masses(cf.twist)
        logger.debug('Mass at -1 of {}: {}'.format(cf, q))
        return q >= -tol

    _, density = torus_density(cf, truncation, tol=tol)
    minimum = float(np.min(density.real))
    imaginary = float(np.max(np.abs(density.imag)))
    logger.debug('Density of {}: min real {} max imag {}'.format(cf, minimum, imaginary))
    return minimum >= -tol and imaginary <= tol


def support_kind(cf, tol=CHECK_TOL):
    """
    Shape of the support of a cylinder CF, up to its shift:
    'point', 'line' {(t, exp(i omega t))}, 'torus' {0} x T or the whole 'plane'.

    A twisted CF with sigma = kappa = 0 lives on {0} x T.
    """
    if isinstance(cf, TorusCF):
        return 'point' if cf.sigma == 0 and cf.twist == 0 else 'torus'
    if not is_close(cf.twist, 0, 0):
        if cf.sigma == 0 and cf.kappa == 0:
            return 'torus'
        raise CharacteristicFunctionError('The support of a twisted CF is not a subgroup coset: {}'.format(cf))

    if cf.sigma == 0 and cf.kappa == 0 and cf.lam == 0:
        return 'point'
    if cf.sigma == 0:
        return 'torus'
    defect = 4 * cf.sigma * cf.lam - cf.kappa * cf.kappa
    if abs(float(defect)) <= tol:
        return 'line'
    return 'plane'


def support_line(cf, tol=CHECK_TOL):
    """
    Slope omega = kappa / (2 sigma) of the line carrying the Gaussian,
    or None when the support is a point, the torus or the plane.
    """
    if support_kind(cf, tol) != 'line':
        return None
    if is_exact(cf.kappa, cf.sigma):
        return cf.kappa / (2 * cf.sigma)
    return float(cf.kappa) / (2.0 * float(cf.sigma))


def cf_from_dict(data):
    try:
        kind = data.get('kind', 'cylinder')
        if kind == 'torus':
            return TorusCF(data.get('sigma', 0), data.get('theta', 0), data.get('twist', 0))
        if kind == 'cylinder':
            return CylinderCF(data.get('sigma', 0), data.get('kappa', 0), data.get('lambda', 0),
                              data.get('tau', 0), data.get('theta', 0), data.get('twist', 0))
    except AttributeError:
        pass
    raise CharacteristicFunctionError('Malformed characteristic function: {}'.format(data))
