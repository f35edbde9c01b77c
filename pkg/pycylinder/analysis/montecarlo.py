"""
Sampling of the parameter distributions and an empirical check of the
independence of linear statistics through characters.

Samples are drawn in fixed-size blocks, block b using the generator
seeded with (seed, b), so the streams do not depend on the number of workers.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import product

import numpy as np

from pycylinder.exceptions import InvalidProbabilityError, CharacteristicFunctionError, DimensionMismatchError
from pycylinder.groups.cylinder import CylinderPoint, DualPoint, apply_dual
from pycylinder.helpers import TWO_PI
from pycylinder.measures.charfn import (
    TorusCF, evaluate, is_valid_probability, support_kind, torus_density, z2_masses
)

logger = logging.getLogger(__name__)

BLOCK_SIZE = 65536
CDF_POINTS = 4096
BOOTSTRAP_RESAMPLES = 200
BAND_LEVEL = 95

# probe characters for each statistic
PROBE_POINTS = (DualPoint('1/2', 0), DualPoint(0, 1), DualPoint('1/2', 1))


class CylinderSamples(object):
    """
    Points (t_k, theta_k) of the cylinder, stored as two arrays.
    """

    def __init__(self, t, theta):
        t = np.asarray(t, dtype=float)
        theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        if t.shape != theta.shape or t.ndim != 1:
            raise DimensionMismatchError('Sample coordinates must be two arrays of the same length')
        self.__t = t
        self.__theta = theta

    @property
    def t(self):
        return self.__t

    @property
    def theta(self):
        return self.__theta

    def __len__(self):
        return len(self.__t)

    def point(self, k):
        return CylinderPoint(float(self.t[k]), float(self.theta[k]))


def _blocks(count):
    return [(b, min(BLOCK_SIZE, count - b * BLOCK_SIZE)) for b in range((count + BLOCK_SIZE - 1) // BLOCK_SIZE)]


def _run_blocks(draw, count, seed, workers):
    def task(block):
        index, size = block
        return draw(np.random.default_rng([seed, index]), size)

    blocks = _blocks(count)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(task, blocks))
    else:
        parts = [task(block) for block in blocks]
    t = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0)
    theta = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0)
    return CylinderSamples(t, theta)


def sample_line_gaussian(sigma, omega, shift=None, count=1, seed=0, workers=1):
    """
    Samples of exp(-sigma (s + omega n)^2) shifted by `shift`: t is normal with
    variance 2 sigma and the point is (t, omega t mod 2pi) + shift.
    """
    if count < 1:
        raise DimensionMismatchError('count must be at least 1')
    sigma, omega = float(sigma), float(omega)
    shift = shift or CylinderPoint()
    scale = np.sqrt(2.0 * sigma)

    def draw(rng, size):
        t = rng.normal(0.0, scale, size) if scale > 0 else np.zeros(size)
        return t + float(shift.t), omega * t + float(shift.theta)

    return _run_blocks(draw, count, seed, workers)


def sample_cylinder_gaussian(cf, count=1, seed=0, workers=1):
    """
    Samples of a twist-free cylinder CF as the image of a normal vector of R^2
    with covariance 2 [[sigma, kappa/2], [kappa/2, lambda]].
    """
    covariance = 2.0 * np.array([[float(cf.sigma), float(cf.kappa) / 2.0],
                                 [float(cf.kappa) / 2.0, float(cf.lam)]])
    values, vectors = np.linalg.eigh(covariance)
    root = vectors * np.sqrt(np.clip(values, 0.0, None))

    def draw(rng, size):
        normal = rng.standard_normal((size, 2)).dot(root.T)
        return normal[:, 0] + float(cf.tau), normal[:, 1] + float(cf.theta)

    return _run_blocks(draw, count, seed, workers)


def sample_torus_twisted(cf, count=1, seed=0, workers=1):
    """
    Samples of a torus CF: point masses when sigma = 0, otherwise inverse-CDF
    sampling of the Fourier-inverted density on a 4096-point grid.
    """
    if not is_valid_probability(cf):
        raise InvalidProbabilityError('Can not sample a CF that is not a probability: {}'.format(cf))

    theta = float(cf.theta)
    if cf.sigma == 0:
        p, q = z2_masses(cf.twist)
        q = max(q, 0.0)

        def draw(rng, size):
            flips = rng.random(size) < q / (p + q)
            return np.zeros(size), theta + np.pi * flips

        return _run_blocks(draw, count, seed, workers)

    grid, density = torus_density(cf, points=CDF_POINTS)
    weights = np.clip(density.real, 0.0, None)
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    width = TWO_PI / CDF_POINTS

    def draw(rng, size):
        u = rng.random(size)
        jitter = rng.random(size) - 0.5
        index = np.minimum(np.searchsorted(cdf, u, side='right'), CDF_POINTS - 1)
        return np.zeros(size), grid[index] + jitter * width

    return _run_blocks(draw, count, seed, workers)


def sample_cf(cf, count=1, seed=0, workers=1):
    """
    Samples of any parameter CF the library can sample.
    """
    if isinstance(cf, TorusCF):
        return sample_torus_twisted(cf, count, seed, workers)

    if cf.twist != 0:
        if cf.sigma == 0 and cf.kappa == 0:
            samples = sample_torus_twisted(TorusCF(cf.lam, cf.theta, cf.twist), count, seed, workers)
            return CylinderSamples(samples.t + float(cf.tau), samples.theta)
        raise CharacteristicFunctionError('Can not sample a twisted cylinder CF with sigma > 0: {}'.format(cf))

    if support_kind(cf) == 'line':
        omega = float(cf.kappa) / (2.0 * float(cf.sigma))
        return sample_line_gaussian(cf.sigma, omega, CylinderPoint(cf.tau, cf.theta), count, seed, workers)
    return sample_cylinder_gaussian(cf, count, seed, workers)


def sample_family(family, count, seed=0, workers=1):
    """
    One sample array per member of the family, member j drawn with seed (seed, j).
    """
    return [sample_cf(cf, count, int(seed) * 1000003 + j, workers) for j, cf in enumerate(family.cfs)]


def empirical_cf(samples, y):
    phase = float(y.s) * samples.t + y.n * samples.theta
    return complex(np.mean(np.exp(1j * phase)))


def statistics_samples(samples, m):
    """
    Samples of L_i = sum_j alpha_ij xi_j, each alpha_ij acting on points.
    """
    if len(samples) != m.size:
        raise DimensionMismatchError('Got {} sample sets for a {}x{} matrix'.format(len(samples), m.size, m.size))
    count = len(samples[0])
    if any(len(x) != count for x in samples):
        raise DimensionMismatchError('All sample sets must have the same size')

    result = []
    for i in range(m.size):
        t = np.zeros(count)
        theta = np.zeros(count)
        for j in range(m.size):
            e = m.entry(i, j)
            t += float(e.a) * samples[j].t
            theta += float(e.c) * samples[j].t + e.p * samples[j].theta
        result.append(CylinderSamples(t, theta))
    return result


def default_probes(arity):
    return list(product(range(len(PROBE_POINTS)), repeat=arity))


class IndependenceEstimate(object):

    def __init__(self, residual, band, threshold, probe_count, worst_probe, resamples):
        self.residual = residual
        self.band = band
        self.threshold = threshold
        self.probe_count = probe_count
        self.worst_probe = worst_probe
        self.resamples = resamples

    @property
    def consistent_with_zero(self):
        return self.threshold is not None and self.residual <= self.threshold

    def to_dict(self):
        return {
            'residual': self.residual,
            'band': list(self.band) if self.band is not None else None,
            'threshold': self.threshold,
            'consistent_with_zero': self.consistent_with_zero,
            'probe_count': self.probe_count,
            'worst_probe': self.worst_probe,
            'resamples': self.resamples,
        }


def _characters(statistics, points):
    # characters[i][k] = exp(i (s_k t + n_k theta)) over the samples of L_i
    return [[np.exp(1j * (float(y.s) * L.t + y.n * L.theta)) for y in points] for L in statistics]


def _max_deviation(characters, probes):
    worst, worst_index = 0.0, 0
    for index, probe in enumerate(probes):
        joint = characters[0][probe[0]]
        marginal = np.mean(characters[0][probe[0]])
        for i in range(1, len(probe)):
            joint = joint * characters[i][probe[i]]
            marginal = marginal * np.mean(characters[i][probe[i]])
        deviation = abs(np.mean(joint) - marginal)
        if deviation > worst:
            worst, worst_index = float(deviation), index
    return worst, worst_index


def empirical_independence(samples, m, probes=None, resamples=BOOTSTRAP_RESAMPLES, seed=0, workers=1):
    """
    Max over the probe tuples of |E prod_i (L_i, y_i) - prod_i E (L_i, y_i)|.

    The band is the 95% level of the same statistic under independence,
    estimated from `resamples` bootstrap draws that resample each L_i on its own.

    :param samples: one CylinderSamples per random variable, all of the same size
    :param probes: tuples of indices into PROBE_POINTS, one index per statistic
    :return: IndependenceEstimate
    """
    statistics = statistics_samples(samples, m)
    probes = default_probes(m.size) if probes is None else [tuple(p) for p in probes]
    characters = _characters(statistics, PROBE_POINTS)
    residual, worst = _max_deviation(characters, probes)
    worst_probe = [PROBE_POINTS[k].to_list() for k in probes[worst]]

    if not resamples:
        return IndependenceEstimate(residual, None, None, len(probes), worst_probe, 0)

    count = len(statistics[0])

    def null_draw(b):
        rng = np.random.default_rng([seed, b])
        shuffled = []
        for row in characters:
            index = rng.integers(0, count, count)
            shuffled.append([values[index] for values in row])
        return _max_deviation(shuffled, probes)[0]

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            null = list(executor.map(null_draw, range(resamples)))
    else:
        null = [null_draw(b) for b in range(resamples)]

    threshold = float(np.percentile(null, BAND_LEVEL))
    logger.debug('Empirical independence residual {} against the {}% null level {}'.format(
        residual, BAND_LEVEL, threshold))
    return IndependenceEstimate(residual, (0.0, threshold), threshold, len(probes), worst_probe, resamples)


def exact_independence(cfs, m, probes=None):
    """
    The quantity estimated by empirical_independence, computed from the CFs:
    max over the probe tuples of |prod_j mu_j(sum_i alpha_ij y_i) - prod_i prod_j mu_j(alpha_ij y_i)|.
    """
    if len(cfs) != m.size:
        raise DimensionMismatchError('Got {} CFs for a {}x{} matrix'.format(len(cfs), m.size, m.size))
    probes = default_probes(m.size) if probes is None else [tuple(p) for p in probes]

    worst = 0.0
    for probe in probes:
        ys = [PROBE_POINTS[k] for k in probe]
        joint = complex(1.0)
        marginal = complex(1.0)
        for j, cf in enumerate(cfs):
            images = [apply_dual(m.entry(i, j), y) for i, y in enumerate(ys)]
            total = images[0]
            for image in images[1:]:
                total = total + image
            joint *= evaluate(cf, total)
            for image in images:
                marginal *= evaluate(cf, image)
        worst = max(worst, abs(joint - marginal))
    return worst
