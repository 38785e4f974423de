"""Exception hierarchy.

Domain errors (bad mathematical input) map to CLI exit code 1, parse errors
to exit code 2.
"""


class NilcertError(Exception):
    pass


class DomainError(NilcertError):
    """A mathematical precondition does not hold."""


class ParseError(NilcertError):
    """Malformed input file or literal."""


class FieldMismatch(DomainError):
    pass


class NotAnAutomorphism(DomainError):
    pass


class NotUnimodular(DomainError):
    pass


class NotAUnit(DomainError):
    pass


class NoQualifyingEigenvalue(DomainError):
    pass


class LatticeError(DomainError):
    pass


class RootIsolationError(DomainError):
    pass
