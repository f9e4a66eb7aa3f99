"""Exception types.

Two families: ``InputError`` for malformed or out-of-domain user input
(the CLI exits with status 2), and ``DomainError`` for a valid input that
fails a mathematical precondition (status 3).
"""


class HolofillError(Exception):
    """Base class for every error raised by this package."""


class InputError(HolofillError, ValueError):
    pass


class DomainError(HolofillError, ValueError):
    pass


# -- input errors ------------------------------------------------------------

class ParseError(InputError):
    pass


class LowerHalfPlane(InputError):
    """A Teichmueller parameter was required to have positive imaginary part."""


class TooFewSteps(InputError):
    pass


# -- domain errors -----------------------------------------------------------

class NonPositiveInput(DomainError):
    pass


class NonPositiveRadius(NonPositiveInput):
    pass


class NegativeRadius(DomainError):
    pass


class OutOfRange(DomainError):
    pass


class OutOfFundamentalDomain(DomainError):
    pass


class NormalizedLengthTooShort(DomainError):
    """The normalized length squared is below the filling threshold 8(2 pi)^2."""


class TwistTooLarge(DomainError):
    """|A^2| < 3, so the rotational estimate does not apply."""


class KappaTooSmall(DomainError):
    pass


class EmptyCuspList(DomainError):
    pass


class EmptySamples(DomainError):
    pass


class NotUpperTriangular(DomainError):
    pass


class NonParabolic(DomainError):
    pass


class NonCommuting(DomainError):
    pass


class DependentGenerators(DomainError):
    pass


class SingularMatrix(DomainError):
    pass
