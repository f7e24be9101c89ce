"""Exception hierarchy.

Every validation failure raises a subclass of NefdiscError carrying an
optional machine-readable certificate (the violated identity, offending
vertex, etc.).  Malformed documents raise MalformedInput instead, so the
CLI can distinguish exit code 1 (validation) from 2 (bad input).
"""


class NefdiscError(Exception):
    """Base class for validation failures."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate

    def payload(self):
        doc = {"error": type(self).__name__, "message": str(self)}
        if self.certificate is not None:
            doc["certificate"] = self.certificate
        return doc


class MalformedInput(Exception):
    """Unparseable or schema-violating input document."""


# lattice geometry
class EmptyInput(NefdiscError):
    pass


class DimensionMismatch(NefdiscError):
    pass


class OriginNotInterior(NefdiscError):
    pass


class Unbounded(NefdiscError):
    pass


class Empty(NefdiscError):
    pass


# nef partitions
class NotReflexive(NefdiscError):
    pass


class NotNef(NefdiscError):
    pass


class InvalidPartition(NefdiscError):
    pass


# sigma complex
class InconsistentDuality(NefdiscError):
    pass


class InvalidSubdivision(NefdiscError):
    pass


class NotAComplex(NefdiscError):
    pass


# discriminant
class UnsupportedDimension(NefdiscError):
    pass


class UnclassifiableCell(NefdiscError):
    pass


# census
class WrongDimension(NefdiscError):
    pass


class NotUnipotent(NefdiscError):
    pass


class ProductNotIdentity(NefdiscError):
    pass
