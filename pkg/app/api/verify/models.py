from flask_restx import fields

from app.api import api

conditions = api.model('Conditions', {
    'a1': fields.String(required=True, example='2'),
    'a2': fields.String(required=True, example='-3'),
    'b1': fields.String(required=True, example='-4/5'),
    'b2': fields.String(required=True, example='-1/5'),
})

fixture = api.model('Fixture', {
    'family': fields.String(example='line-gaussian'),
    'matrix': fields.List(fields.List(fields.Raw), required=True),
    'cfs': fields.List(fields.Raw, required=True),
})

pullback = api.model('Pullback', {
    'fixture': fields.Nested(fixture, required=True),
    'base': fields.List(fields.Integer, required=True, example=list(range(2, 18))),
    'depth': fields.Integer(required=True, min=0, example=6),
})
