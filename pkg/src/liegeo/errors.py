"""Error taxonomy shared by all layers.

Exit-code mapping used by the CLI and service: InputError subclasses map to
exit code 1, CapacityError subclasses to 2, anything else to 3.
"""


class LieGeoError(Exception):
    """Base class for every error raised by this package."""


class InputError(LieGeoError):
    """Bad user input: malformed text, wrong field, inconsistent shapes."""


class CapacityError(LieGeoError):
    """A configured budget or capacity cap was exceeded."""


class FieldSpecError(InputError):
    """Unparseable field spec or non-prime GF modulus."""


class FieldMismatchError(InputError):
    """Two values from different ground fields were combined."""


class DivisionByZeroError(InputError):
    """Division or inversion of zero in an exact field."""


class AlgebraMismatchError(InputError):
    """Elements of different algebras were combined."""


class RingMismatch(InputError):
    """Polynomials from different rings were combined."""


class ParseError(InputError):
    """Syntax error in a system file; carries line and column."""

    def __init__(self, line, col, message):
        super().__init__("line %d, col %d: %s" % (line, col, message))
        self.line = line
        self.col = col


class UnknownSymbolError(InputError):
    """A variable, constant or binding name is not declared."""


class FieldLiteralOutOfRangeError(InputError):
    """Scalar literal does not denote an element of the ground field."""


class CapacityExceededError(CapacityError):
    """Enumeration or search budget exceeded."""


class DependentBasisError(InputError):
    """Parallelepipedon factor basis is linearly dependent."""


class PointOutsidePolytopeError(InputError):
    """Point does not lie in the parallelepipedon."""


class AnchorDegenerateError(CapacityError):
    """No anchor element with nonvanishing reference product was found."""


class TorsionDetectedError(InputError):
    """Module presentation has torsion within the checked degree bound."""


class NotADomainError(InputError):
    """Operation requires a carrier with no coefficient-relative zero divisors."""


class InfiniteFieldError(InputError):
    """Operation requires a finite ground field."""


class TruncationRequiredError(InputError):
    """Operation on an infinite carrier needs an explicit truncation."""


class UnsupportedAlgebraError(InputError):
    """Operation is not defined for this coefficient-algebra kind."""


class EmptyWindowError(InputError):
    """Degree bound admits no basis terms at all."""


class WindowTooSmallError(InputError):
    """The verification window cannot contain the object being checked."""


class ShapeViolationError(InputError):
    """Generators are outside the affine span the construction requires."""


class InternalError(LieGeoError):
    """Invariant violation inside the library; always a bug."""
