"""
Checkers for the independence of linear statistics L_i = sum_j alpha_ij xi_j.

The statistics are independent iff, for every tuple (y_1, ..., y_n) of characters,

    prod_j cf_j(sum_i alpha_ij~ y_i) = prod_i prod_j cf_j(alpha_ij~ y_i)

and for parameter CFs both sides are sums of closed-form log terms.
"""
import logging
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from fractions import Fraction
from functools import reduce
from itertools import product

import numpy as np

from pycylinder.exceptions import (
    DimensionMismatchError, ConditionViolatedError, CharacteristicFunctionError, GridError
)
from pycylinder.groups.cylinder import CylinderAuto, DualPoint, compose, invert
from pycylinder.helpers import (
    parse_number, is_exact, is_close, format_number, common_denominator, wrap_phase, exact_nullspace,
    EXACT_TOL, CHECK_TOL
)
from pycylinder.measures.charfn import CylinderCF, convolve, symmetrize, pushforward

logger = logging.getLogger(__name__)

DEFAULT_S_VALUES = ('-2', '-1', '-1/2', '0', '1/2', '1', '2')
DEFAULT_N_VALUES = tuple(range(-2, 3))
DENSE_S_VALUES = ('-2', '-3/2', '-1', '-3/4', '-1/2', '-1/4', '0', '1/4', '1/2', '3/4', '1', '3/2', '2')
DENSE_N_VALUES = tuple(range(-4, 5))

GRID_CAP = 100000
CHUNK_SIZE = 4096

# sign patterns of (a1, a2, b1, b2) admitted by three positive sigmas
SIGN_TABLE = (
    (1, -1, -1, 1),
    (1, -1, -1, -1),
    (-1, 1, 1, -1),
    (-1, 1, -1, -1),
    (-1, -1, 1, -1),
    (-1, -1, -1, 1),
)

SYSTEM_EQUATIONS = (
    'sigma_a', 'sigma_b', 'sigma_ab',
    'kappa_a', 'kappa_b',
    'shift_c', 'shift_d', 'shift_ad', 'shift_bc',
    'integer_cross',
)


class StatMatrix(object):
    """
    Square array of automorphisms; row i defines L_i = sum_j alpha_ij xi_j.

    In the reduced form of three statistics the rows are
    (I, I, I), (alpha_1, alpha_2, I) and (beta_1, beta_2, I).
    """

    def __init__(self, entries):
        rows = [list(row) for row in entries]
        size = len(rows)
        if size < 2 or any(len(row) != size for row in rows):
            raise DimensionMismatchError('A statistics matrix must be square of size >= 2')

        self.__entries = tuple(
            tuple(e if isinstance(e, CylinderAuto) else CylinderAuto.from_dict(e) for e in row)
            for row in rows
        )

    @property
    def size(self):
        return len(self.__entries)

    @property
    def entries(self):
        return self.__entries

    def entry(self, i, j):
        return self.__entries[i][j]

    def row(self, i):
        return self.__entries[i]

    @classmethod
    def from_signs(cls, signs):
        """
        Matrix of +I / -I entries, as used by statistics on the torus.
        """
        return cls([[CylinderAuto.sign(value) for value in row] for row in signs])

    def is_exact(self):
        return all(e.is_exact() for row in self.__entries for e in row)

    def is_reduced(self):
        if self.size != 3:
            return False
        return all(e.is_identity() for e in self.row(0)) and \
            self.entry(1, 2).is_identity() and self.entry(2, 2).is_identity()

    def alpha(self, j):
        return self.entry(1, j - 1)

    def beta(self, j):
        return self.entry(2, j - 1)

    def reduced_parameters(self):
        if not self.is_reduced():
            raise ConditionViolatedError('The statistics matrix is not in reduced form: {}'.format(self))

        alpha_1, alpha_2, beta_1, beta_2 = self.alpha(1), self.alpha(2), self.beta(1), self.beta(2)
        return {
            'a1': alpha_1.a, 'a2': alpha_2.a, 'b1': beta_1.a, 'b2': beta_2.a,
            'c1': alpha_1.c, 'c2': alpha_2.c, 'd1': beta_1.c, 'd2': beta_2.c,
            'p1': alpha_1.p, 'p2': alpha_2.p, 'q1': beta_1.p, 'q2': beta_2.p,
        }

    def __eq__(self, other):
        if not isinstance(other, StatMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return 'StatMatrix({})'.format([list(row) for row in self.entries])

    def to_list(self):
        return [[e.to_dict() for e in row] for row in self.entries]

    @classmethod
    def from_list(cls, data):
        try:
            return cls([[CylinderAuto.from_dict(e) for e in row] for row in data])
        except TypeError:
            raise DimensionMismatchError('Malformed statistics matrix: {}'.format(data))


class DualGrid(object):
    """
    Finite set of n-tuples of dual points, stored column-wise:
    `s[k, i]` and `n[k, i]` are the coordinates of y_i in tuple k.
    """

    def __init__(self, s, n):
        s = np.asarray(s, dtype=object)
        n = np.asarray(n, dtype=np.int64)
        if s.ndim != 2 or s.shape != n.shape:
            raise GridError('Grid coordinates must be two arrays of the same shape (tuples, arity)')
        if s.shape[0] == 0:
            raise GridError('The grid is empty')

        self.__exact = all(is_exact(v) for v in s.flat)
        self.__s = s
        self.__s_float = s.astype(float)
        self.__n = n

    @property
    def size(self):
        return self.__n.shape[0]

    @property
    def arity(self):
        return self.__n.shape[1]

    @property
    def s(self):
        return self.__s_float

    @property
    def n(self):
        return self.__n

    def __len__(self):
        return self.size

    def is_exact(self):
        return self.__exact

    def scaled_s(self):
        """
        Integer matrix s * D and the common denominator D of an exact grid.
        """
        denominator = common_denominator(set(self.__s.flat))
        scaled = np.array([[int(v * denominator) for v in row] for row in self.__s], dtype=object)
        return scaled, denominator

    def tuple_at(self, k):
        return tuple(DualPoint(self.__s[k, i], int(self.__n[k, i])) for i in range(self.arity))

    @classmethod
    def from_tuples(cls, tuples):
        tuples = [tuple(t) for t in tuples]
        if not tuples:
            raise GridError('The grid is empty')
        return cls([[y.s for y in t] for t in tuples], [[y.n for y in t] for t in tuples])

    @classmethod
    def from_points(cls, points, arity, cap=GRID_CAP, seed=0):
        """
        All arity-tuples of the given dual points, or a seeded sample of `cap`
        of them stratified by the parity pattern of the integer coordinates.
        """
        points = list(points)
        total = len(points) ** arity
        if total <= cap:
            index = np.array(list(product(range(len(points)), repeat=arity)), dtype=np.int64)
        else:
            index = _stratified_sample(points, arity, cap, seed)

        s = np.array([[points[k].s for k in row] for row in index], dtype=object)
        n = np.array([[points[k].n for k in row] for row in index], dtype=np.int64)
        logger.debug('Built grid of {} tuples out of {}'.format(len(index), total))
        return cls(s, n)


def _stratified_sample(points, arity, cap, seed):
    rng = np.random.default_rng(seed)
    by_parity = [[k for k, y in enumerate(points) if y.n % 2 == parity] for parity in (0, 1)]
    total = len(points) ** arity

    patterns = list(product((0, 1), repeat=arity))
    counts = [int(np.prod([len(by_parity[b]) for b in pattern])) for pattern in patterns]
    exact_quotas = [Fraction(cap * count, total) for count in counts]
    quotas = [int(q) for q in exact_quotas]
    remainder = cap - sum(quotas)
    order = sorted(range(len(patterns)), key=lambda k: (-(exact_quotas[k] - quotas[k]), k))
    for k in order[:remainder]:
        quotas[k] += 1

    chunks = []
    for pattern, count, quota in zip(patterns, counts, quotas):
        if quota == 0:
            continue
        shape = tuple(len(by_parity[b]) for b in pattern)
        flat = np.sort(rng.choice(count, size=quota, replace=False))
        local = np.array(np.unravel_index(flat, shape)).T
        lookup = [np.array(by_parity[b], dtype=np.int64) for b in pattern]
        chunks.append(np.column_stack([lookup[i][local[:, i]] for i in range(arity)]))

    return np.vstack(chunks)


def grid_points(kind='default'):
    if kind == 'default':
        s_values, n_values = DEFAULT_S_VALUES, DEFAULT_N_VALUES
    elif kind == 'dense':
        s_values, n_values = DENSE_S_VALUES, DENSE_N_VALUES
    else:
        raise GridError('Unknown grid kind: {}'.format(kind))
    return [DualPoint(s, n) for s in s_values for n in n_values]


def build_grid(arity, kind='default', cap=GRID_CAP, seed=0):
    return DualGrid.from_points(grid_points(kind), arity, cap, seed)


def default_grid(arity, cap=GRID_CAP, seed=0):
    return build_grid(arity, 'default', cap, seed)


def dense_grid(arity, cap=GRID_CAP, seed=0):
    return build_grid(arity, 'dense', cap, seed)


class _FloatKernel(object):

    def __init__(self, cfs, m, grid):
        self.cfs = cfs
        self.m = m
        self.grid = grid

    def __call__(self, start, stop):
        s = self.grid.s[start:stop]
        n = self.grid.n[start:stop]
        size = self.m.size

        d_re = np.zeros(stop - start)
        d_im = np.zeros(stop - start)
        for j in range(size):
            cf = self.cfs[j]
            total_s = np.zeros(stop - start)
            total_n = np.zeros(stop - start, dtype=np.int64)
            for i in range(size):
                e = self.m.entry(i, j)
                s_ij = float(e.a) * s[:, i] + float(e.c) * n[:, i]
                n_ij = e.p * n[:, i]
                re, im = cf.log_parts(s_ij, n_ij)
                d_re -= re
                d_im -= im
                total_s += s_ij
                total_n += n_ij
            re, im = cf.log_parts(total_s, total_n)
            d_re += re
            d_im += im

        return np.hypot(d_re, wrap_phase(d_im))


class _ExactKernel(object):
    """
    Evaluates the quadratic and linear parts in scaled integers, so that
    an identity between rational parameters yields a residual of exactly 0.
    """

    def __init__(self, cfs, m, grid):
        self.size = m.size
        self.cfs = cfs
        s_scaled, s_den = grid.scaled_s()
        m_den = common_denominator([v for row in m.entries for e in row for v in (e.a, e.c)])
        p_den = common_denominator([v for cf in cfs for v in cf.coefficients()[:5]])

        self.scale = m_den * s_den
        self.p_den = p_den
        self.a = [[int(e.a * m_den) for e in row] for row in m.entries]
        self.c = [[int(e.c * m_den) * s_den for e in row] for row in m.entries]
        self.p = [[e.p for e in row] for row in m.entries]
        self.coefficients = [[int(v * p_den) for v in cf.coefficients()[:5]] for cf in cfs]
        self.twists = [float(cf.twist) for cf in cfs]

        s_max = int(max(abs(v) for v in s_scaled.flat))
        n_max = int(np.max(np.abs(grid.n)))
        a_max = max(abs(v) for row in self.a for v in row)
        c_max = max(abs(v) for row in self.c for v in row)
        p_max = max(max(abs(v) for v in row) for row in self.coefficients)
        value_max = self.size * (a_max * s_max + c_max * n_max + self.scale * n_max)
        bound = 3 * (self.size * self.size + self.size) * max(p_max, 1) * max(value_max, 1) ** 2
        self.dtype = np.int64 if bound < 2 ** 62 else object
        logger.debug('Exact residual kernel with dtype {} (bound {})'.format(self.dtype, bound))

        self.s = s_scaled.astype(self.dtype)
        self.n = grid.n.astype(self.dtype)

    def _quadratic(self, j, s, n):
        sigma, kappa, lam, tau, theta = self.coefficients[j]
        return sigma * s * s + kappa * s * n + lam * n * n, tau * s + theta * n

    def __call__(self, start, stop):
        s = self.s[start:stop]
        n = self.n[start:stop]
        count = stop - start
        quad = np.zeros(count, dtype=self.dtype)
        lin = np.zeros(count, dtype=self.dtype)
        twist = np.zeros(count)

        for j in range(self.size):
            total_s = np.zeros(count, dtype=self.dtype)
            total_n = np.zeros(count, dtype=self.dtype)
            for i in range(self.size):
                s_ij = self.a[i][j] * s[:, i] + self.c[i][j] * n[:, i]
                n_ij = self.p[i][j] * n[:, i]
                q, ell = self._quadratic(j, s_ij, n_ij * self.scale)
                quad -= q
                lin -= ell
                twist -= 2.0 * self.twists[j] * np.mod(n_ij, 2).astype(float)
                total_s += s_ij
                total_n += n_ij
            q, ell = self._quadratic(j, total_s, total_n * self.scale)
            quad += q
            lin += ell
            twist += 2.0 * self.twists[j] * np.mod(total_n, 2).astype(float)

        d_re = -quad.astype(float) / float(self.scale * self.scale * self.p_den) + twist
        d_im = lin.astype(float) / float(self.scale * self.p_den)
        return np.hypot(d_re, wrap_phase(d_im))


def _kernel(cfs, m, grid):
    cfs = list(cfs)
    if isinstance(grid, (list, tuple)):
        grid = DualGrid.from_tuples(grid)
    if len(cfs) != m.size or grid.arity != m.size:
        raise DimensionMismatchError('Got {} CFs, a {}x{} matrix and {}-tuples on the grid'.format(
            len(cfs), m.size, m.size, grid.arity))

    if m.is_exact() and grid.is_exact() and all(cf.is_exact() for cf in cfs):
        return _ExactKernel(cfs, m, grid), grid
    return _FloatKernel(cfs, m, grid), grid


def _evaluate(kernel, size, workers):
    def task(start):
        values = kernel(start, min(start + CHUNK_SIZE, size))
        k = int(np.argmax(values))
        return float(values[k]), start + k

    starts = range(0, size, CHUNK_SIZE)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(task, starts))
    else:
        results = [task(start) for start in starts]

    # ties go to the first tuple so the report does not depend on scheduling
    return max(results, key=lambda r: (r[0], -r[1]))


def independence_residual(cfs, m, grid, workers=1):
    """
    Largest deviation |LHS_log - RHS_log| of the independence equation over the grid.

    :param cfs: one CF per random variable
    :param m: StatMatrix of the linear statistics
    :param grid: DualGrid or list of n-tuples of DualPoint
    :param workers: number of threads evaluating the grid chunks
    :return: the residual as float
    """
    kernel, grid = _kernel(cfs, m, grid)
    residual, _ = _evaluate(kernel, grid.size, workers)
    return residual


def independence_report(cfs, m, grid, workers=1):
    kernel, grid = _kernel(cfs, m, grid)
    residual, worst = _evaluate(kernel, grid.size, workers)
    logger.debug('Independence residual {} over {} tuples'.format(residual, grid.size))
    return {
        'residual': residual,
        'grid_size': grid.size,
        'worst_tuple': [y.to_list() for y in grid.tuple_at(worst)],
    }


def _exact(*values):
    parsed = [Fraction(parse_number(v)) for v in values]
    return parsed


class ConditionReport(object):
    """
    Findings on the multipliers a1, a2, b1, b2 of a reduced matrix of three statistics.
    """

    def __init__(self, identity1_residual, sign_row, distinct_a, distinct_b, cross_det, corner_det):
        self.identity1_residual = identity1_residual
        self.sign_row = sign_row
        self.distinct_a = distinct_a
        self.distinct_b = distinct_b
        self.cross_det = cross_det
        self.corner_det = corner_det

    @property
    def statements(self):
        return OrderedDict([
            ('identity', self.identity1_residual == 0),
            ('sign_table', self.sign_row is not None),
            ('distinct', self.distinct_a and self.distinct_b),
            ('cross_det', self.cross_det != 0),
            ('corner_det', self.corner_det != 0),
        ])

    @property
    def passed(self):
        return all(self.statements.values())

    def to_dict(self):
        return {
            'identity1_residual': format_number(self.identity1_residual),
            'sign_row': self.sign_row,
            'distinct_a': self.distinct_a,
            'distinct_b': self.distinct_b,
            'cross_det': format_number(self.cross_det),
            'corner_det': format_number(self.corner_det),
            'statements': dict(self.statements),
            'passed': self.passed,
        }


def identity_polynomial(a1, a2, b1, b2):
    return a1 * b2 - a1 * a2 * b2 - a1 * b1 * b2 - a2 * b1 + a1 * a2 * b1 + a2 * b1 * b2


def _sign(value):
    return 1 if value > 0 else -1


def sign_conditions(a1, a2, b1, b2):
    """
    Evaluates, in exact arithmetic, the necessary conditions on the multipliers
    of a reduced matrix admitting independent nondegenerate Gaussian statistics.
    """
    a1, a2, b1, b2 = _exact(a1, a2, b1, b2)
    if 0 in (a1, a2, b1, b2):
        raise ConditionViolatedError('The multipliers a1, a2, b1, b2 must be nonzero')

    signs = (_sign(a1), _sign(a2), _sign(b1), _sign(b2))
    sign_row = SIGN_TABLE.index(signs) + 1 if signs in SIGN_TABLE else None

    report = ConditionReport(
        identity1_residual=identity_polynomial(a1, a2, b1, b2),
        sign_row=sign_row,
        distinct_a=a1 != a2,
        distinct_b=b1 != b2,
        cross_det=a2 * b1 - a1 * b2,
        corner_det=(a1 - 1) * (b2 - 1) - (a2 - 1) * (b1 - 1),
    )
    logger.debug('Conditions for a=({}, {}) b=({}, {}): {}'.format(a1, a2, b1, b2, report.to_dict()))
    return report


def solve_sigmas(a1, a2, b1, b2):
    """
    Positive solution, normalized by sigma_3 = 1, of

        sigma_1 a_1 + sigma_2 a_2 + sigma_3 = 0
        sigma_1 b_1 + sigma_2 b_2 + sigma_3 = 0
        sigma_1 a_1 b_1 + sigma_2 a_2 b_2 + sigma_3 = 0

    :return: (sigma_1, sigma_2, sigma_3) as Fractions, or None
    """
    a1, a2, b1, b2 = _exact(a1, a2, b1, b2)
    cross = a2 * b1 - a1 * b2
    if cross == 0:
        raise ConditionViolatedError('The cross determinant a2*b1 - a1*b2 vanishes')

    sigma_1 = (b2 - a2) / cross
    sigma_2 = (a1 - b1) / cross
    sigma_3 = Fraction(1)

    if sigma_1 * a1 * b1 + sigma_2 * a2 * b2 + sigma_3 != 0:
        logger.debug('No sigma solution: the mixed equation fails for a=({}, {}) b=({}, {})'.format(a1, a2, b1, b2))
        return None
    if sigma_1 <= 0 or sigma_2 <= 0:
        return None
    return sigma_1, sigma_2, sigma_3


def sigma_nullspace(a1, a2, b1, b2):
    """
    The same sigma system solved as a nullspace, normalized by sigma_3 = 1 when possible.
    """
    a1, a2, b1, b2 = _exact(a1, a2, b1, b2)
    basis = exact_nullspace([[a1, a2, 1], [b1, b2, 1], [a1 * b1, a2 * b2, 1]])
    if len(basis) != 1:
        return None
    vector = basis[0]
    if vector[2] != 0:
        vector = [v / vector[2] for v in vector]
    return tuple(vector)


def _quadratic(cf, s, n):
    return cf.sigma * s * s + cf.kappa * s * n + cf.lam * n * n


def _integer_cross(cfs, m):
    worst = 0
    for ns in product(range(-2, 3), repeat=m.size):
        difference = 0
        for j, cf in enumerate(cfs):
            total_s, total_n = 0, 0
            for i in range(m.size):
                e = m.entry(i, j)
                s_ij, n_ij = e.c * ns[i], e.p * ns[i]
                difference -= _quadratic(cf, s_ij, n_ij)
                total_s += s_ij
                total_n += n_ij
            difference += _quadratic(cf, total_s, total_n)
        worst = max(worst, abs(difference))
    return worst


def gaussian_system_check(cfs, m):
    """
    Residuals of the linear system that the parameters of three independent
    Gaussian CFs and a reduced matrix must satisfy, in system order.

    :return: OrderedDict equation name -> absolute residual
    """
    cfs = list(cfs)
    if len(cfs) != 3 or m.size != 3:
        raise DimensionMismatchError('The Gaussian parameter system needs three CFs and a 3x3 matrix')
    if any(not isinstance(cf, CylinderCF) for cf in cfs):
        raise CharacteristicFunctionError('The Gaussian parameter system needs cylinder CFs')
    if any(not is_close(cf.twist, 0, 0) for cf in cfs):
        raise CharacteristicFunctionError('The Gaussian parameter system applies to twist-free CFs only')

    r = m.reduced_parameters()
    a1, a2, b1, b2 = r['a1'], r['a2'], r['b1'], r['b2']
    c1, c2, d1, d2 = r['c1'], r['c2'], r['d1'], r['d2']
    p1, p2, q1, q2 = r['p1'], r['p2'], r['q1'], r['q2']
    s1, s2, s3 = [cf.sigma for cf in cfs]
    k1, k2, k3 = [cf.kappa for cf in cfs]

    residuals = OrderedDict()
    residuals['sigma_a'] = s1 * a1 + s2 * a2 + s3
    residuals['sigma_b'] = s1 * b1 + s2 * b2 + s3
    residuals['sigma_ab'] = s1 * a1 * b1 + s2 * a2 * b2 + s3
    residuals['kappa_a'] = k1 * a1 + k2 * a2 + k3
    residuals['kappa_b'] = k1 * b1 + k2 * b2 + k3
    residuals['shift_c'] = 2 * s1 * c1 + 2 * s2 * c2 + k1 * p1 + k2 * p2 + k3
    residuals['shift_d'] = 2 * s1 * d1 + 2 * s2 * d2 + k1 * q1 + k2 * q2 + k3
    residuals['shift_ad'] = 2 * s1 * a1 * d1 + 2 * s2 * a2 * d2 + k1 * a1 * q1 + k2 * a2 * q2 + k3
    residuals['shift_bc'] = 2 * s1 * b1 * c1 + 2 * s2 * b2 * c2 + k1 * b1 * p1 + k2 * b2 * p2 + k3
    residuals['integer_cross'] = _integer_cross(cfs, m)

    return OrderedDict((name, abs(float(value))) for name, value in residuals.items())


def first_failure(residuals, tol=CHECK_TOL):
    for name, value in residuals.items():
        if value > tol:
            return name
    return None


class SubgroupTag(Enum):
    """
    The subgroups R x {0} and Y2 = R x 2Z of the dual group R x Z.
    """

    FULL_R = 'FullR'
    Y2 = 'Y2'

    def contains(self, y):
        if self is SubgroupTag.FULL_R:
            return y.n == 0
        return y.n % 2 == 0

    def steps(self, h):
        if self is SubgroupTag.FULL_R:
            return [DualPoint(h, 0), DualPoint(2 * h, 0)]
        return [DualPoint(h, 0), DualPoint(0, 2), DualPoint(h, 2)]


SUBGROUP_CASES = {
    (SubgroupTag.FULL_R, SubgroupTag.FULL_R, SubgroupTag.FULL_R): 1,
    (SubgroupTag.FULL_R, SubgroupTag.Y2, SubgroupTag.Y2): 2,
    (SubgroupTag.Y2, SubgroupTag.FULL_R, SubgroupTag.Y2): 3,
    (SubgroupTag.Y2, SubgroupTag.Y2, SubgroupTag.FULL_R): 4,
    (SubgroupTag.Y2, SubgroupTag.Y2, SubgroupTag.Y2): 5,
}


def classify_subgroups(m):
    """
    Tags of the subgroups L, M, N generated by the differences of the
    reduced matrix entries with the identity.

    :return: (L, M, N) as SubgroupTag
    """
    r = m.reduced_parameters()
    if r['a1'] == 1 and r['b1'] == 1 and r['p1'] == 1 and r['q1'] == 1:
        raise ConditionViolatedError('a1 = b1 = 1 with p1 = q1 = 1: L is a proper subgroup of R')
    if r['a2'] == 1 and r['b2'] == 1 and r['p2'] == 1 and r['q2'] == 1:
        raise ConditionViolatedError('a2 = b2 = 1 with p2 = q2 = 1: M is a proper subgroup of R')

    full, y2 = SubgroupTag.FULL_R, SubgroupTag.Y2
    tag_l = full if r['p1'] == 1 and r['q1'] == 1 else y2
    tag_m = full if r['p2'] == 1 and r['q2'] == 1 else y2
    tag_n = full if r['p1'] == r['p2'] and r['q1'] == r['q2'] else y2
    return tag_l, tag_m, tag_n


def subgroup_case(tags):
    return SUBGROUP_CASES[tuple(tags)]


def support_identity(a1, a2, b1, b2):
    """
    Both sides of the rational identity behind the line support of the
    symmetrized convolution; they agree whenever the identity polynomial vanishes.
    """
    a1, a2, b1, b2 = _exact(a1, a2, b1, b2)
    lhs = (a2 * b1 - a1 * b2) * ((1 - b2) * (1 - a2) * (a1 - b1) + (1 - b1) * (1 - a1) * (b2 - a2))
    rhs = -(b2 - b1) * (a2 - a1) * (a1 - b1) * (b2 - a2)
    return lhs, rhs


def nu_support_report(cfs, m, tol=CHECK_TOL):
    nu = reduce(convolve, [symmetrize(cf) for cf in cfs])
    defect = 4 * nu.sigma * nu.lam - nu.kappa * nu.kappa
    r = m.reduced_parameters()
    lhs, rhs = support_identity(r['a1'], r['a2'], r['b1'], r['b2'])

    omega = None
    if nu.sigma != 0:
        omega = nu.kappa / (2 * nu.sigma) if is_exact(nu.kappa, nu.sigma) else float(nu.kappa) / (2 * nu.sigma)

    report = {
        'sigma': format_number(nu.sigma),
        'kappa': format_number(nu.kappa),
        'lambda': format_number(nu.lam),
        'defect': abs(float(defect)),
        'identity': [format_number(lhs), format_number(rhs)],
        'omega': format_number(omega) if omega is not None else None,
    }
    identity_holds = lhs == rhs if m.is_exact() else abs(float(lhs - rhs)) <= tol * max(1.0, abs(float(rhs)))
    report['passed'] = report['defect'] <= tol and identity_holds
    return report


def nu_support_check(cfs, m, tol=CHECK_TOL):
    """
    Whether the convolution of the three symmetrized CFs is carried by a line
    (4 sigma lambda = kappa^2) and the supporting rational identity holds exactly.
    """
    return nu_support_report(cfs, m, tol)['passed']


class NormalFormTransform(object):
    """
    Record of a reduction: the variables were changed by
    zeta_j = variables[j] xi_j and statistic i was composed with statistics[i].
    """

    def __init__(self, variables, statistics):
        self.__variables = tuple(variables)
        self.__statistics = tuple(statistics)

    @property
    def variables(self):
        return self.__variables

    @property
    def statistics(self):
        return self.__statistics

    def apply(self, m):
        return StatMatrix([[compose(compose(invert(self.__variables[j]), m.entry(i, j)), self.__statistics[i])
                            for j in range(m.size)] for i in range(m.size)])

    def restore(self, reduced):
        """
        Matrix the reduction started from.
        """
        return StatMatrix([[compose(compose(self.__variables[j], reduced.entry(i, j)),
                                    invert(self.__statistics[i])) for j in range(reduced.size)]
                           for i in range(reduced.size)])

    def transport(self, cfs):
        """
        CFs of the new variables zeta_j.
        """
        return [pushforward(cf, self.__variables[j]) for j, cf in enumerate(cfs)]

    def is_identity(self):
        return all(e.is_identity() for e in self.__variables + self.__statistics)

    def to_dict(self):
        return {
            'variables': [e.to_dict() for e in self.__variables],
            'statistics': [e.to_dict() for e in self.__statistics],
        }


def reduce_to_normal_form(m):
    """
    Changes variables xi_j -> alpha_1j xi_j and applies an automorphism to each
    statistic so that the first row and the last column become identities.

    :return: (StatMatrix, NormalFormTransform)
    """
    variables = m.row(0)
    statistics = [CylinderAuto.identity()]
    for i in range(1, m.size):
        statistics.append(invert(compose(invert(variables[-1]), m.entry(i, m.size - 1))))

    transform = NormalFormTransform(variables, statistics)
    return transform.apply(m), transform


def invariant_line_slopes(m, tol=EXACT_TOL):
    """
    Ratios c / (a - p) of the reduced entries different from +I and -I.
    An entry with a = p and c != 0 preserves no line and yields None.
    """
    r = m.reduced_parameters()
    slopes = []
    for a, c, p in ((r['a1'], r['c1'], r['p1']), (r['a2'], r['c2'], r['p2']),
                    (r['b1'], r['d1'], r['q1']), (r['b2'], r['d2'], r['q2'])):
        if is_close(a, p, tol):
            if not is_close(c, 0, tol):
                slopes.append(None)
            continue
        slopes.append(c / (a - p) if is_exact(a, c) else float(c) / (float(a) - p))
    return slopes


def slopes_agree(m, tol=EXACT_TOL):
    slopes = invariant_line_slopes(m, tol)
    if any(slope is None for slope in slopes):
        return False
    return all(is_close(slope, slopes[0], tol) for slope in slopes)
