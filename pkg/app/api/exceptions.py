from werkzeug.exceptions import HTTPException


class VerificationFailed(HTTPException):
    """*422* `Unprocessable Entity`

    Raise when the input was valid but some check of the report failed.
    """

    code = 422
    description = (
        "The request was well-formed but the verification did not pass, "
        "the report names the failing checks."
    )

    def __init__(self, report, description=None):
        super(VerificationFailed, self).__init__(description=description)
        self.report = report
