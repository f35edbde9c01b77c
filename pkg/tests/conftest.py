import json

import pytest
from click.testing import CliRunner

from app import create_app
from app.config import TestConfig
from pycylinder.measures.constructions import line_gaussian_family
from pycylinder.serializers.fixture import dump_fixture
from tests.functional.verifier import Verifier


@pytest.fixture(scope='session')
def app():
    """
    Initializing the Flask application for the verification API
    by passing the TestConfig class as the configuration

    :return: app: Flask application
    """
    app = create_app(TestConfig)
    app.testing = True
    yield app


@pytest.fixture(scope='session')
def client(app):
    """
    Getting the test_client instance for the Flask application
    for executing and validating the tests

    :param app: Flask application
    :return: client: Client with test configuration
    """
    with app.test_client() as client:
        with app.app_context():
            yield client


@pytest.fixture
def verifier(client):
    return Verifier(client)


@pytest.fixture
def runner():
    """
    Click runner for invoking the CLI commands in-process
    """
    return CliRunner()


@pytest.fixture(scope='session')
def line_gaussian():
    """
    Three Gaussians on the line of slope 1 with the reduced matrix
    a = (2, -3), b = (-4/5, -1/5), all sigmas equal to 1
    """
    return line_gaussian_family(1, 2, -3, '-4/5', '-1/5')


@pytest.fixture(scope='session')
def half_line_gaussian():
    """
    The same multipliers on the line of slope 1/2
    """
    return line_gaussian_family('1/2', 2, -3, '-4/5', '-1/5')


@pytest.fixture
def write_file(tmp_path):
    """
    Writes a family (as a fixture) or any JSON value under tmp_path
    and returns the path as a string
    """
    def write(content, name):
        path = str(tmp_path / name)
        if hasattr(content, 'to_dict'):
            dump_fixture(content, path)
        else:
            with open(path, 'w') as f:
                json.dump(content, f)
        return path

    return write
