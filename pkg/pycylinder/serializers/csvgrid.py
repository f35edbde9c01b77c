"""
CSV import and export of grid functions (header "s,n,re,im") and
of cylinder samples (header "t,theta").
"""
import csv
import logging
import os

import numpy as np

from pycylinder.analysis.fdiff import GridFunction
from pycylinder.analysis.montecarlo import CylinderSamples
from pycylinder.exceptions import GridError, FixtureError

logger = logging.getLogger(__name__)

GRID_HEADER = ['s', 'n', 're', 'im']
SAMPLE_HEADER = ['t', 'theta']


def _open_rows(path, header):
    if not os.path.isfile(path):
        raise FixtureError('File not found: {}'.format(path))
    with open(path, 'r', newline='') as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or [name.strip() for name in reader.fieldnames] != header:
            raise FixtureError('{} must have the header "{}"'.format(path, ','.join(header)))
        return [row for row in reader]


def read_grid(path):
    """
    Reads a GridFunction; every (s, n) node of the product grid must appear exactly once.
    """
    rows = _open_rows(path, GRID_HEADER)
    try:
        records = [(float(row['s']), int(row['n']), float(row['re']), float(row['im'])) for row in rows]
    except (TypeError, ValueError) as e:
        raise FixtureError('Malformed row in {}: {}'.format(path, e))
    if not records:
        raise GridError('{} holds no grid values'.format(path))

    s_grid = np.unique([r[0] for r in records])
    n_grid = np.unique([r[1] for r in records])
    if len(records) != len(s_grid) * len(n_grid):
        raise GridError('{} does not cover the product grid {}x{}'.format(path, len(s_grid), len(n_grid)))

    values = np.full((len(s_grid), len(n_grid)), np.nan, dtype=complex)
    s_index = {s: k for k, s in enumerate(s_grid)}
    n_index = {n: m for m, n in enumerate(n_grid)}
    for s, n, re, im in records:
        values[s_index[s], n_index[n]] = complex(re, im)
    if np.isnan(values.real).any():
        raise GridError('{} repeats a grid node'.format(path))

    if np.all(values.imag == 0):
        values = values.real
    logger.debug('Read a {}x{} grid function from {}'.format(len(s_grid), len(n_grid), path))
    return GridFunction(s_grid, n_grid, values)


def write_grid(f, path):
    values = np.asarray(f.values)
    with open(path, 'w', newline='') as out:
        writer = csv.writer(out)
        writer.writerow(GRID_HEADER)
        for k, s in enumerate(f.s_grid):
            for m, n in enumerate(f.n_grid):
                value = complex(values[k, m])
                writer.writerow([repr(float(s)), int(n), repr(value.real), repr(value.imag)])


def read_samples(path):
    rows = _open_rows(path, SAMPLE_HEADER)
    try:
        t = [float(row['t']) for row in rows]
        theta = [float(row['theta']) for row in rows]
    except (TypeError, ValueError) as e:
        raise FixtureError('Malformed row in {}: {}'.format(path, e))
    return CylinderSamples(t, theta)


def write_samples(samples, path):
    with open(path, 'w', newline='') as out:
        writer = csv.writer(out)
        writer.writerow(SAMPLE_HEADER)
        for t, theta in zip(samples.t, samples.theta):
            writer.writerow([repr(float(t)), repr(float(theta))])
