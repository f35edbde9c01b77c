"""
JSON fixtures of families: {"family", "matrix", "cfs", "omega"}.

Exact rationals are written as "p/q" strings so a fixture survives a
round trip through the CLI without float drift.
"""
import json
import logging
import os

from pycylinder.exceptions import FixtureError, SolenoidError
from pycylinder.measures.constructions import Family
from pycylinder.solenoid.adic import BaseSequence

logger = logging.getLogger(__name__)


def read_json(path):
    if not os.path.isfile(path):
        raise FixtureError('File not found: {}'.format(path))
    with open(path, 'r') as f:
        try:
            return json.load(f)
        except ValueError as e:
            raise FixtureError('{} is not valid JSON: {}'.format(path, e))


def write_json(data, path):
    with open(path, 'w') as f:
        json.dump(data, f, indent=2, sort_keys=False)
        f.write('\n')


def load_fixture(path):
    data = read_json(path)
    if not isinstance(data, dict):
        raise FixtureError('A fixture must be a JSON object, got {}'.format(type(data).__name__))
    family = Family.from_dict(data)
    logger.debug('Loaded fixture {} ({} members) from {}'.format(family.name, len(family.cfs), path))
    return family


def dump_fixture(family, path):
    write_json(family.to_dict(), path)
    logger.debug('Fixture {} written to {}'.format(family.name, path))


def load_base(path):
    """
    Base sequence file: a JSON list [a_0, a_1, ...] or {"base": [...]}.
    """
    data = read_json(path)
    try:
        return BaseSequence.from_dict(data)
    except SolenoidError as e:
        raise FixtureError('Malformed base sequence in {}: {}'.format(path, e.msg))
