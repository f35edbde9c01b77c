import logging

from flask import request, current_app
from flask_restx import Resource

from app.api import api
from app.api.exceptions import VerificationFailed
from app.api.verify.models import conditions, fixture, pullback
from app.api.verify.parsers import check_parser, solenoid_parser
from app.business import run_conditions, run_construct, run_check, run_pullback
from pycylinder.exceptions import FixtureError
from pycylinder.measures.constructions import Family
from pycylinder.solenoid.adic import BaseSequence

logger = logging.getLogger(__name__)


def _payload():
    data = request.get_json(silent=True)
    if data is None:
        raise FixtureError('The request body must be a JSON object')
    return data


class Conditions(Resource):

    @api.expect(conditions)
    @api.response(200, 'Report of the sign and determinant conditions')
    def post(self):
        """
        Evaluates the conditions on the multipliers a1, a2, b1, b2 of a reduced matrix

        Multipliers are exact rationals given as strings, e.g.

        ```
        {"a1": "2", "a2": "-3", "b1": "-4/5", "b2": "-1/5"}
        ```
        """
        data = _payload()
        return run_conditions(data['a1'], data['a2'], data['b1'], data['b2']), 200


class Construct(Resource):

    @api.response(200, 'Certified fixture')
    @api.response(400, 'The parameters do not admit the construction')
    def post(self, family):
        """
        Builds a certified fixture of the family line-gaussian, twisted-pair or hadamard
        """
        built = run_construct(family, _payload())
        logger.debug('Constructed fixture {}'.format(built.name))
        return built.to_dict(), 200


class Check(Resource):

    @api.expect(fixture, check_parser)
    @api.response(200, 'Every check passed')
    @api.response(422, 'Some check failed')
    def post(self):
        """
        Runs every applicable check on a fixture
        """
        args = check_parser.parse_args()
        report = run_check(Family.from_dict(_payload()), current_app.config, grid=args['grid'],
                           workers=args['workers'])
        if not report['passed']:
            raise VerificationFailed(report)
        return report, 200


class Solenoid(Resource):

    @api.expect(pullback, solenoid_parser)
    @api.response(200, 'The pullback residual is within tolerance')
    @api.response(422, 'The pullback residual is too large')
    def post(self):
        """
        Independence equation of a fixture restricted to the rational dual H_a x Z
        """
        args = solenoid_parser.parse_args()
        data = _payload()
        family = Family.from_dict(data['fixture'])
        base = BaseSequence.from_dict(data['base'])
        report = run_pullback(family, base, data['depth'], current_app.config, args['workers'])
        if not report['passed']:
            raise VerificationFailed(report)
        return report, 200
