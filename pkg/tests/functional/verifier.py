import json


class Verifier:

    def __init__(self, client):
        self._client = client
        self.headers = {
            'Accept': 'application/json',
            'Content-Type': 'application/json'
        }

    def get_swagger(self, path='/api/swagger.json'):
        return self._client.get(path)

    def post_conditions(self, payload):
        return self._client.post(
            '/api/verify/conditions',
            data=json.dumps(payload),
            headers=self.headers
        )

    def post_construct(self, family, params):
        return self._client.post(
            '/api/verify/construct/{}'.format(family),
            data=json.dumps(params),
            headers=self.headers
        )

    def post_check(self, fixture, grid=None):
        query = {'grid': grid} if grid else None
        return self._client.post(
            '/api/verify/check',
            data=json.dumps(fixture),
            query_string=query,
            headers=self.headers
        )

    def post_solenoid(self, fixture, base, depth):
        return self._client.post(
            '/api/verify/solenoid',
            data=json.dumps({'fixture': fixture, 'base': base, 'depth': depth}),
            headers=self.headers
        )
