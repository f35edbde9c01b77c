from flask_restx import reqparse

check_parser = reqparse.RequestParser()
check_parser.add_argument('grid', type=str, choices=('default', 'dense'), default='default', location='args',
                          help='Grid of dual tuples')
check_parser.add_argument('workers', type=int, default=None, location='args', help='Number of worker threads')

solenoid_parser = reqparse.RequestParser()
solenoid_parser.add_argument('workers', type=int, default=None, location='args', help='Number of worker threads')
