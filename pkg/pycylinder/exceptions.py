class CylinderError(Exception):
    """
    Base class for every error raised by the pycylinder library.

    The message is kept on the `msg` attribute so the CLI and the
    REST layer can report it without formatting the exception.
    """

    def __init__(self, msg=None):
        Exception.__init__(self, msg)
        self.msg = msg


class InvalidAutomorphismError(CylinderError):
    pass


class CharacteristicFunctionError(CylinderError):
    pass


class InvalidProbabilityError(CharacteristicFunctionError):
    pass


class InconclusiveError(CharacteristicFunctionError):
    """
    Raised when a numerical decision can not be certified,
    e.g. the Fourier tail is larger than the requested tolerance.
    """
    pass


class DimensionMismatchError(CylinderError):
    pass


class ConditionViolatedError(CylinderError):
    pass


class NotQuadraticSectionError(CylinderError):
    pass


class GridError(CylinderError):
    pass


class ConstructionError(CylinderError):
    pass


class SolenoidError(CylinderError):
    pass


class IncompatibleMultiplierError(SolenoidError):
    pass


class FixtureError(CylinderError):
    pass
