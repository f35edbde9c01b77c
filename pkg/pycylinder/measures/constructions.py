"""
Explicit families of independent linear statistics.

Every constructor checks the properties it advertises before returning,
so its output can be used as a certified fixture.
"""
import logging
from itertools import combinations

from pycylinder.analysis.independence import (
    StatMatrix, solve_sigmas, independence_residual, build_grid
)
from pycylinder.exceptions import ConstructionError, InvalidProbabilityError, FixtureError, CylinderError
from pycylinder.groups.cylinder import CylinderAuto, preserves_line
from pycylinder.helpers import parse_number, format_number, exact_nullspace, EXACT_TOL
from pycylinder.measures.charfn import (
    CylinderCF, TorusCF, Z2SignedMeasure, is_valid_probability, is_gaussian, support_line, cf_from_dict
)

logger = logging.getLogger(__name__)

# tuples used when a constructor certifies its own output
CERTIFICATION_CAP = 4096

TWO_STATISTICS = ((1, 1), (1, -1))

HADAMARD_SIGNS = (
    (1, 1, 1, 1),
    (1, 1, -1, -1),
    (1, -1, 1, -1),
    (1, -1, -1, 1),
)

DEGENERATION_SIGNS = (
    (1, 1, 1),
    (1, -1, 1),
    (-1, 1, 1),
)


class Family(object):
    """
    Random variables xi_j given by their CFs together with the matrix of the
    linear statistics built from them.
    """

    def __init__(self, name, matrix, cfs, omega=None):
        self.__name = name
        self.__matrix = matrix
        self.__cfs = tuple(cfs)
        self.__omega = omega

    @property
    def name(self):
        return self.__name

    @property
    def matrix(self):
        return self.__matrix

    @property
    def cfs(self):
        return self.__cfs

    @property
    def omega(self):
        return self.__omega

    def residual(self, cap=CERTIFICATION_CAP, workers=1):
        grid = build_grid(self.matrix.size, cap=cap)
        return independence_residual(self.cfs, self.matrix, grid, workers=workers)

    def to_dict(self):
        return {
            'family': self.name,
            'matrix': self.matrix.to_list(),
            'cfs': [cf.to_dict() for cf in self.cfs],
            'omega': format_number(self.omega) if self.omega is not None else None,
        }

    @classmethod
    def from_dict(cls, data):
        try:
            matrix = StatMatrix.from_list(data['matrix'])
            cfs = [cf_from_dict(cf) for cf in data['cfs']]
            omega = data.get('omega')
            name = data.get('family', 'custom')
        except (KeyError, TypeError, AttributeError) as e:
            raise FixtureError('Malformed fixture: {}'.format(e))
        except CylinderError as e:
            raise FixtureError('Malformed fixture: {}'.format(e.msg))

        if len(cfs) != matrix.size:
            raise FixtureError('The fixture has {} CFs for a {}x{} matrix'.format(len(cfs), matrix.size, matrix.size))
        return cls(name, matrix, cfs, parse_number(omega) if omega is not None else None)


def _certify(family, tol=EXACT_TOL):
    residual = family.residual()
    logger.debug('Certifying {}: residual {}'.format(family.name, residual))
    if residual > tol:
        raise ConstructionError('The {} family fails the independence equation (residual {})'.format(
            family.name, residual))
    return family


def reduced_matrix(alpha_1, alpha_2, beta_1, beta_2):
    identity = CylinderAuto.identity()
    return StatMatrix([
        [identity, identity, identity],
        [alpha_1, alpha_2, identity],
        [beta_1, beta_2, identity],
    ])


def line_gaussian_family(omega, a1, a2, b1, b2, p1=1, p2=1, q1=1, q2=1, sigma_scale=1):
    """
    Three Gaussians exp(-sigma_j (s + omega n)^2) carried by the line
    {(t, exp(i omega t))} and a reduced matrix with entries
    (a_i, (a_i - p_i) omega; 0, p_i) and (b_i, (b_i - q_i) omega; 0, q_i),
    for which the three statistics are independent.
    """
    omega = parse_number(omega)
    a1, a2, b1, b2 = [parse_number(v) for v in (a1, a2, b1, b2)]
    sigma_scale = parse_number(sigma_scale)
    if sigma_scale <= 0:
        raise ConstructionError('sigma_scale must be positive, got {}'.format(sigma_scale))

    sigmas = solve_sigmas(a1, a2, b1, b2)
    if sigmas is None:
        raise ConstructionError('No positive sigma solution for a=({}, {}) b=({}, {})'.format(a1, a2, b1, b2))

    matrix = reduced_matrix(
        CylinderAuto(a1, (a1 - p1) * omega, p1),
        CylinderAuto(a2, (a2 - p2) * omega, p2),
        CylinderAuto(b1, (b1 - q1) * omega, q1),
        CylinderAuto(b2, (b2 - q2) * omega, q2),
    )
    cfs = [CylinderCF.line_gaussian(sigma * sigma_scale, omega) for sigma in sigmas]
    family = _certify(Family('line-gaussian', matrix, cfs, omega))

    for cf in cfs:
        if support_line(cf) is None or abs(float(support_line(cf)) - float(omega)) > EXACT_TOL:
            raise ConstructionError('{} is not carried by the line of slope {}'.format(cf, omega))
    for row in matrix.entries:
        for e in row:
            if not preserves_line(e, omega):
                raise ConstructionError('{} does not preserve the line of slope {}'.format(e, omega))
    return family


def twisted_torus_pair(sigma, theta1=0, theta2=0, kappa=0):
    """
    CFs exp(-sigma n^2 + i theta_j n +/- kappa (1 - (-1)^n)) on the circle:
    xi_1 + xi_2 and xi_1 - xi_2 are independent although the members are
    not Gaussian when kappa != 0.
    """
    first = TorusCF(sigma, theta1, kappa)
    second = TorusCF(sigma, theta2, -parse_number(kappa))
    for index, cf in enumerate((first, second), 1):
        if not is_valid_probability(cf):
            raise InvalidProbabilityError('Member {} is not a probability distribution: {}'.format(index, cf))

    return _certify(Family('twisted-pair', StatMatrix.from_signs(TWO_STATISTICS), [first, second]))


def hadamard_counterexample(sigma, kappa):
    """
    Four non-Gaussian distributions on the circle with four independent
    statistics given by the Hadamard sign patterns.
    """
    sigma = parse_number(sigma)
    kappa = parse_number(kappa)
    if sigma <= 0:
        raise ConstructionError('sigma must be positive, got {}'.format(sigma))
    if kappa == 0:
        raise ConstructionError('Not a counterexample: kappa = 0 gives Gaussian members')

    plus = TorusCF(sigma, 0, kappa)
    minus = TorusCF(sigma, 0, -kappa)
    for cf in (plus, minus):
        if not is_valid_probability(cf):
            raise InvalidProbabilityError('Member is not a probability distribution: {}'.format(cf))

    family = _certify(Family('hadamard', StatMatrix.from_signs(HADAMARD_SIGNS), [plus, plus, minus, minus]))
    if any(is_gaussian(cf) for cf in family.cfs):
        raise ConstructionError('Not a counterexample: some member is Gaussian')
    return family


def z2_signed_measure(kappa):
    return Z2SignedMeasure.from_twist(kappa)


def torus_degeneration_matrix():
    return StatMatrix.from_signs(DEGENERATION_SIGNS)


def torus_degeneration():
    """
    For sign statistics on the circle every pair (L_i, L_k) gives the equation
    sum_j e_ij e_kj sigma_j = 0. For the matrix (+++, +-+, -++) the system
    only has the zero solution, so independent Gaussian members are degenerate.
    """
    signs = DEGENERATION_SIGNS
    equations = [[signs[i][j] * signs[k][j] for j in range(3)] for i, k in combinations(range(3), 2)]
    basis = exact_nullspace(equations)

    verdict = {
        'equations': equations,
        'sigma': [0, 0, 0],
        'verdict': 'only degenerate solutions' if not basis else 'nondegenerate solutions exist',
        'unique': not basis,
    }
    if basis:
        verdict['sigma'] = [format_number(v) for v in basis[0]]
    logger.debug('Torus degeneration verdict: {}'.format(verdict))
    return verdict


def degenerate_family(matrix):
    return Family('degenerate', matrix, [CylinderCF.degenerate() for _ in range(matrix.size)])
