from flask_restx import Namespace

from app.api import bp, api
from app.api.verify.routes import Conditions, Construct, Check, Solenoid

verify_ns = Namespace(name='verify', description='Verification of independent linear statistics', path='/verify')

verify_ns.add_resource(Conditions, '/conditions')
verify_ns.add_resource(Construct, '/construct/<string:family>')
verify_ns.add_resource(Check, '/check')
verify_ns.add_resource(Solenoid, '/solenoid')

api.add_namespace(verify_ns)


def init_app(app):
    app.register_blueprint(bp)
