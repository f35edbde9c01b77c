import logging

from flask import Blueprint, request
from flask_restx import Api

from app.api.exceptions import VerificationFailed
from pycylinder.exceptions import CylinderError

bp = Blueprint('api', __name__, url_prefix='/api')

api = Api(
    app=bp,
    version='0.1.0',
    title='pycylinder verification API',
    description='Checks of independent linear statistics on the cylinder R x T and on Sigma_a x T',
    validate=True
)


@bp.before_request
def before_request_func():
    logger = logging.getLogger('flask.app')
    logger.debug('Requesting BEFORE_REQUEST from: {} {} to {}'.format(request.access_route,
                                                                      request.user_agent,
                                                                      request.base_url))


@api.errorhandler(CylinderError)
def cylinder_error_handler(e):
    return {'error': type(e).__name__, 'message': e.msg, 'passed': False}, 400


@api.errorhandler(VerificationFailed)
def verification_failed_handler(e):
    return e.report, VerificationFailed.code
