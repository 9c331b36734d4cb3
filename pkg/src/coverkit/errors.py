"""Exception hierarchy shared across the package.

Everything semantic derives from CoverkitError so front ends can map it to
a single exit code / HTTP status.
"""


class CoverkitError(Exception):
    """Base class for all semantic errors raised by coverkit."""


class CapExceeded(CoverkitError):
    """A group closure grew past the configured cap."""


class UnknownName(CoverkitError):
    """Catalog lookup with an unrecognized family name."""


class BadParams(CoverkitError):
    """Catalog parameters are out of range or malformed."""


class InvalidDatum(CoverkitError):
    """Operation requires a valid based root datum."""


class InvalidForm(CoverkitError):
    """Operation requires a strictly Weyl-invariant form."""


class WellDefinednessFailure(CoverkitError):
    """A map or pairing failed its exactness/independence-of-lift check."""


class ActionDoesNotPreserveSharp(CoverkitError):
    """The Galois action does not stabilize the radical sublattice."""


class UnsupportedField(CoverkitError):
    """Field does not support the requested symbol."""


class DegreeNotSupported(CoverkitError):
    """Tame symbol degree incompatible with the residue field."""


class UnsupportedWildCase(CoverkitError):
    """Roots of unity requested in a wild case we do not model."""


class BadChi(CoverkitError):
    """Obstruction character coordinates are malformed."""


class BadDocument(CoverkitError):
    """Problem document failed schema or cross-field validation."""
