"""Exception hierarchy shared by every module."""


class GrothcatError(Exception):
    pass


class InputError(GrothcatError, ValueError):
    """Malformed or inconsistent input data."""


class CompositionError(GrothcatError, ValueError):
    """Endpoints of two morphisms do not match."""


class NonStabilizingError(GrothcatError):
    """Saturation hit its bound without a stabilization certificate.

    ``partial`` carries the last partition computed (a ``FinPresCategory``
    built at the final bound, without the certificate).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InfiniteDimensionError(GrothcatError):
    """A hom space could not be certified finite dimensional."""


class BoundError(GrothcatError, ValueError):
    """A path is longer than the bound a reducer was built for."""


class FactorizationError(GrothcatError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class InductionError(GrothcatError, ValueError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair
