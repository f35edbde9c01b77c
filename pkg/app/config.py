import os

from dotenv import load_dotenv

from pycylinder.helpers import json_default

base_dir = os.path.abspath(os.path.dirname(__file__))
load_dotenv(os.path.join(base_dir, '.env'))


def _flag(name, default=False):
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


class Config(object):
    FLASK_ENV = os.environ.get('FLASK_ENV')
    SECRET_KEY = os.environ.get('SECRET_KEY') or 'this_value_should_be_updated'

    # tolerances of the exact checks, the default checks and the grid fits
    EXACT_TOLERANCE = float(os.environ.get('EXACT_TOLERANCE', 1e-12))
    CHECK_TOLERANCE = float(os.environ.get('CHECK_TOLERANCE', 1e-10))
    FIT_TOLERANCE = float(os.environ.get('FIT_TOLERANCE', 1e-9))

    GRID_CAP = int(os.environ.get('GRID_CAP', 100000))
    GRID_SEED = int(os.environ.get('GRID_SEED', 0))
    WORKERS = int(os.environ.get('WORKERS', 1))
    BOOTSTRAP_RESAMPLES = int(os.environ.get('BOOTSTRAP_RESAMPLES', 200))

    RESTX_JSON = {'default': json_default}

    LOG_TO_STDOUT = _flag('LOG_TO_STDOUT')
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')
    LOG_DIR = os.environ.get('LOG_DIR', 'logs')


class TestConfig(Config):
    TESTING = True
    LOG_TO_STDOUT = True
    LOG_LEVEL = 'DEBUG'
    BOOTSTRAP_RESAMPLES = 50
