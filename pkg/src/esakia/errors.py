"""Exception types shared across the package."""


class EsakiaError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateElement(EsakiaError):
    pass


class UnknownElement(EsakiaError):
    pass


class AntisymmetryViolation(EsakiaError):
    """The reflexive-transitive closure of the covers produced a 2-cycle."""


class NotALattice(EsakiaError):
    """An order lacks some binary meet or join."""


class NotDistributive(EsakiaError):
    """A lattice admits no residuated implication, or a counit fails to be bijective."""


class NotAPMorphism(EsakiaError):
    pass


class NotAHomomorphism(EsakiaError):
    pass


class NotStrict(EsakiaError):
    """A bundle projection fails the unique-witness back condition."""


class NotEtale(EsakiaError):
    pass


class InvalidPresheaf(EsakiaError):
    """Fiber/restriction data violates identity or composition laws."""


class CodomainMismatch(EsakiaError):
    pass


class DomainMismatch(EsakiaError):
    pass


class BaseMismatch(EsakiaError):
    pass


class InputSyntaxError(EsakiaError):
    """Malformed line in an input document. Carries a 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnresolvedReference(EsakiaError):
    """A declaration references a name that does not resolve."""

    def __init__(self, line: int, name: str, message: str = ""):
        detail = message or f"unresolved reference {name!r}"
        super().__init__(f"line {line}: {detail}")
        self.line = line
        self.name = name
