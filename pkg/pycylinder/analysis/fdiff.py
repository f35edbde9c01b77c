"""
Finite differences of functions sampled on a grid of the dual group R x Z.
"""
import logging
from collections import namedtuple
from itertools import product

import numpy as np

from pycylinder.analysis.independence import classify_subgroups, reduce_to_normal_form
from pycylinder.exceptions import GridError, NotQuadraticSectionError, ConditionViolatedError, DimensionMismatchError
from pycylinder.groups.cylinder import DualPoint
from pycylinder.helpers import FIT_TOL

logger = logging.getLogger(__name__)

QuadraticSection = namedtuple('QuadraticSection', ['sigma', 'kappa', 'lam', 'n_values'])


def default_s_grid():
    return np.linspace(-5.0, 5.0, 41)


def default_n_grid():
    return np.arange(-6, 7)


class GridFunction(object):
    """
    Values of a function f(s, n) on the product of a uniform s-grid
    and a contiguous range of integers; values[k, m] = f(s_grid[k], n_grid[m]).
    """

    def __init__(self, s_grid, n_grid, values, s_step=None):
        s_grid = np.asarray(s_grid, dtype=float)
        n_grid = np.asarray(n_grid, dtype=np.int64)
        values = np.asarray(values)

        if s_grid.ndim != 1 or len(s_grid) < 1 or (len(s_grid) < 2 and s_step is None):
            raise GridError('The s-grid needs at least two nodes')
        if len(s_grid) >= 2:
            steps = np.diff(s_grid)
            if steps[0] <= 0 or not np.allclose(steps, steps[0], rtol=0, atol=1e-9 * max(1.0, abs(steps[0]))):
                raise GridError('The s-grid must be increasing with a uniform step')
            s_step = float(steps[0]) if s_step is None else s_step
        if len(n_grid) < 1 or np.any(np.diff(n_grid) != 1):
            raise GridError('The n-grid must be a contiguous integer range')
        if values.shape != (len(s_grid), len(n_grid)):
            raise DimensionMismatchError('Values of shape {} do not match the grid {}x{}'.format(
                values.shape, len(s_grid), len(n_grid)))

        self.__s_grid = s_grid
        self.__n_grid = n_grid
        self.__values = values
        self.__s_step = float(s_step)

    @property
    def s_grid(self):
        return self.__s_grid

    @property
    def n_grid(self):
        return self.__n_grid

    @property
    def values(self):
        return self.__values

    @property
    def s_step(self):
        return self.__s_step

    @property
    def shape(self):
        return self.__values.shape

    def __add__(self, other):
        self._check_same_grid(other)
        return GridFunction(self.s_grid, self.n_grid, self.values + other.values)

    def __sub__(self, other):
        self._check_same_grid(other)
        return GridFunction(self.s_grid, self.n_grid, self.values - other.values)

    def _check_same_grid(self, other):
        if self.shape != other.shape or not np.allclose(self.s_grid, other.s_grid) or \
                np.any(self.n_grid != other.n_grid):
            raise GridError('Grid functions live on different grids')

    def max_abs(self):
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def is_real(self, tol=FIT_TOL):
        return not np.iscomplexobj(self.values) or float(np.max(np.abs(self.values.imag))) <= tol

    def value_at(self, s, n):
        k = int(round((s - self.s_grid[0]) / self.s_step))
        m = int(n - self.n_grid[0])
        if not (0 <= k < len(self.s_grid)) or not (0 <= m < len(self.n_grid)) or \
                abs(self.s_grid[k] - s) > 1e-9 * max(1.0, abs(s)):
            raise GridError('({}, {}) is not a node of the grid'.format(s, n))
        return self.values[k, m]

    @classmethod
    def from_callable(cls, func, s_grid=None, n_grid=None):
        s_grid = default_s_grid() if s_grid is None else np.asarray(s_grid, dtype=float)
        n_grid = default_n_grid() if n_grid is None else np.asarray(n_grid)
        s, n = np.meshgrid(s_grid, n_grid, indexing='ij')
        return cls(s_grid, n_grid, func(s, n))

    @classmethod
    def from_cf(cls, cf, s_grid=None, n_grid=None):
        """
        Samples phi = -Re log of the CF, i.e. sigma s^2 + kappa s n + lam n^2 - twist (1 - (-1)^n).
        """
        return cls.from_callable(lambda s, n: -cf.log_parts(s, n)[0], s_grid, n_grid)


def _offset(f, h):
    if isinstance(h, DualPoint):
        hs, hn = float(h.s), h.n
    else:
        hs, hn = float(h[0]), int(h[1])

    ratio = hs / f.s_step
    ks = int(round(ratio))
    if abs(ratio - ks) > 1e-9:
        raise GridError('Step {} is not a multiple of the grid step {}'.format(hs, f.s_step))
    return ks, int(hn)


def delta(f, h):
    """
    Finite difference f(y + h) - f(y) on the nodes y where y + h is also a node.
    """
    ks, kn = _offset(f, h)
    size_s, size_n = f.shape
    if abs(ks) >= size_s or abs(kn) >= size_n:
        raise GridError('The grid is too small for the step ({}, {})'.format(ks, kn))

    s_range = slice(max(0, -ks), size_s - max(0, ks))
    n_range = slice(max(0, -kn), size_n - max(0, kn))
    shifted_s = slice(s_range.start + ks, s_range.stop + ks)
    shifted_n = slice(n_range.start + kn, n_range.stop + kn)

    values = f.values[shifted_s, shifted_n] - f.values[s_range, n_range]
    return GridFunction(f.s_grid[s_range], f.n_grid[n_range], values, s_step=f.s_step)


def delta_chain(f, steps):
    for h in steps:
        f = delta(f, h)
    return f


def _scale(f):
    return max(1.0, f.max_abs())


def polynomial_degree(f, max_deg=4, tol=FIT_TOL):
    """
    Smallest d <= max_deg with Delta_h^(d+1) f = 0 for the steps (h_s, 0), (0, 1)
    and (h_s, 1); None when no such d exists. The tolerance is relative to max |f|.
    """
    steps = [(f.s_step, 0), (0, 1), (f.s_step, 1)]
    limit = tol * _scale(f)
    for degree in range(max_deg + 1):
        worst = max(delta_chain(f, [h] * (degree + 1)).max_abs() for h in steps)
        logger.debug('Degree {} test: max |difference| = {}'.format(degree, worst))
        if worst <= limit:
            return degree
    return None


def quadratic_section_fit(f, tol=FIT_TOL):
    """
    Writes a symmetric f with Delta_k^2 Delta_h f = 0 (k along R) as
    f(s, n) = sigma s^2 + kappa(n) s + lam(n), with kappa odd and lam even.

    :return: QuadraticSection(sigma, kappa list, lam list, n values)
    """
    if not f.is_real(tol):
        raise NotQuadraticSectionError('The function is not real-valued')
    values = np.real(f.values).astype(float)
    real = GridFunction(f.s_grid, f.n_grid, values)
    limit = tol * _scale(real)

    if not np.allclose(f.s_grid, -f.s_grid[::-1], atol=1e-9) or np.any(f.n_grid != -f.n_grid[::-1]):
        raise GridError('Symmetry f(-y) = f(y) needs a grid symmetric about the origin')
    asymmetry = float(np.max(np.abs(values - values[::-1, ::-1])))
    if asymmetry > limit:
        raise NotQuadraticSectionError('f(-y) = f(y) fails by {}'.format(asymmetry))

    k = (f.s_step, 0)
    for h in ((f.s_step, 0), (0, 1)):
        defect = delta_chain(real, [k, k, h]).max_abs()
        if defect > limit:
            raise NotQuadraticSectionError('Second differences along R of Delta_h f do not vanish: {}'.format(defect))

    s = f.s_grid
    design = np.column_stack([s * s, s, np.ones_like(s)])
    coefficients, _, _, _ = np.linalg.lstsq(design, values, rcond=None)
    sigmas = coefficients[0]
    spread = float(np.max(sigmas) - np.min(sigmas))
    if spread > limit:
        raise NotQuadraticSectionError('The s^2 coefficient depends on n (spread {})'.format(spread))

    sigma = float(np.mean(sigmas))
    linear, _, _, _ = np.linalg.lstsq(design[:, 1:], values - sigma * (s * s)[:, None], rcond=None)
    kappa, lam = linear[0], linear[1]

    fitted = sigma * (s * s)[:, None] + np.outer(s, kappa) + lam[None, :]
    misfit = float(np.max(np.abs(fitted - values)))
    if misfit > limit:
        raise NotQuadraticSectionError('Residual of the quadratic fit is {}'.format(misfit))

    if float(np.max(np.abs(kappa + kappa[::-1]))) > limit:
        raise NotQuadraticSectionError('kappa(n) is not odd')
    if float(np.max(np.abs(lam - lam[::-1]))) > limit:
        raise NotQuadraticSectionError('lambda(n) is not even')

    logger.debug('Quadratic section fit: sigma={} misfit={}'.format(sigma, misfit))
    return QuadraticSection(sigma, [float(v) for v in kappa], [float(v) for v in lam],
                            [int(v) for v in f.n_grid])


def evaluate_section(section, s, n):
    m = section.n_values.index(n)
    return section.sigma * s * s + section.kappa[m] * s + section.lam[m]


GENERIC_STEPS = ((1, 0), (0, 1), (1, 1))


def verify_triple_differences(psis, m, tags=None, tol=FIT_TOL):
    """
    Max of |Delta_h Delta_k Delta_l psi_j| with h generic and (k, l) taken from
    (N, L) for psi_1, (N, M) for psi_2 and (L, M) for psi_3.

    :param psis: three GridFunctions on the same grid
    :param m: statistics matrix of the family, reduced here when it is not
    :param tags: (L, M, N) SubgroupTags, classified from m when omitted
    :return: list of three residuals
    """
    psis = list(psis)
    if len(psis) != 3 or m.size != 3:
        raise DimensionMismatchError('Triple differences need three functions and three statistics')

    if not m.is_reduced():
        m, _ = reduce_to_normal_form(m)
    expected = classify_subgroups(m)
    if tags is None:
        tags = expected
    elif tuple(tags) != tuple(expected):
        raise ConditionViolatedError('Subgroup tags {} do not match the matrix, expected {}'.format(
            [tag.value for tag in tags], [tag.value for tag in expected]))

    tag_l, tag_m, tag_n = tags
    pairs = ((tag_n, tag_l), (tag_n, tag_m), (tag_l, tag_m))
    residuals = []
    for psi, (tag_k, tag_l_) in zip(psis, pairs):
        hs = psi.s_step
        generic = [DualPoint(float(a) * hs, b) for a, b in GENERIC_STEPS]
        worst = 0.0
        for h, k, ell in product(generic, tag_k.steps(hs), tag_l_.steps(hs)):
            worst = max(worst, delta_chain(psi, [h, k, ell]).max_abs())
        residuals.append(worst)

    logger.debug('Triple difference residuals: {}'.format(residuals))
    return residuals


def verify_kappa_linearity(kappa_of_n, a, b, kappa_total, n_values=None, tol=FIT_TOL):
    """
    Checks that the tables kappa_j(n) solve, for each n,

        (a1 - 1) kappa_1(n) + (a2 - 1) kappa_2(n) = -kappa n
        (b1 - 1) kappa_1(n) + (b2 - 1) kappa_2(n) = -kappa n
        kappa_1(n) + kappa_2(n) + kappa_3(n) = kappa n

    and that kappa_j(n) / n does not depend on n.
    """
    n_values = list(default_n_grid()) if n_values is None else list(n_values)
    tables = [np.asarray(table, dtype=float) for table in kappa_of_n]
    if len(tables) != 3 or any(len(table) != len(n_values) for table in tables):
        raise DimensionMismatchError('Three kappa tables aligned with the n values are needed')

    a1, a2 = [float(v) for v in a]
    b1, b2 = [float(v) for v in b]
    corner = np.array([[a1 - 1, a2 - 1], [b1 - 1, b2 - 1]])
    if abs(np.linalg.det(corner)) <= tol:
        raise ConditionViolatedError('The corner determinant (a1-1)(b2-1) - (a2-1)(b1-1) vanishes')

    n = np.asarray(n_values, dtype=float)
    kappa = float(kappa_total)
    rhs = np.vstack([-kappa * n, -kappa * n])
    solved = np.linalg.solve(corner, rhs)
    expected = [solved[0], solved[1], kappa * n - solved[0] - solved[1]]

    scale = max(1.0, max(float(np.max(np.abs(table))) if table.size else 0.0 for table in tables))
    for j in range(3):
        mismatch = float(np.max(np.abs(tables[j] - expected[j])))
        if mismatch > tol * scale:
            logger.debug('kappa_{}(n) disagrees with the linear system by {}'.format(j + 1, mismatch))
            return False

    nonzero = n != 0
    for table in tables:
        ratios = table[nonzero] / n[nonzero]
        if ratios.size and float(np.max(ratios) - np.min(ratios)) > tol * scale:
            return False
    return True
