"""Exception types shared across the library."""


class KConesError(Exception):
    """Base class for every error raised by this library."""


class DimensionError(KConesError, ValueError):
    """Operands have incompatible lengths, ranks, or shapes."""


class DomainError(KConesError, ValueError):
    """A value lies outside the domain an operation is defined on."""


class CapacityError(KConesError, ValueError):
    """A guard limit (rank cap, generation attempt cap) was exceeded."""


class DecompositionError(KConesError, ValueError):
    """A requested cone decomposition does not exist.

    ``witness`` names the offending coordinate or support pair.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ExtensionError(KConesError, ValueError):
    """The fiber of a restriction map is empty or has no minimum."""


class GluingConflictError(KConesError, ValueError):
    """Two partial traces disagree on an overlap.

    ``pair`` holds the indices (i, j) of the disagreeing parts.
    """

    def __init__(self, message, pair=None, functional=None):
        super().__init__(message)
        self.pair = pair
        self.functional = functional


class GluingError(KConesError, ValueError):
    """Pairwise consistent parts admit no common extension."""


class TransportError(KConesError, RuntimeError):
    """Morphism transport reached a state that validated inputs rule out."""


class UnboundedError(KConesError, RuntimeError):
    """An exact linear program was unbounded; signals an invalid family."""


class ParseError(KConesError, ValueError):
    """Malformed document text; carries line/column when known."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class DocumentError(KConesError, ValueError):
    """Well-formed text whose payload violates the document schema.

    ``field`` is a dotted path naming the offending field.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class GenerationError(KConesError, RuntimeError):
    """Random generation exceeded its attempt cap; reports the seed."""

    def __init__(self, message, seed=None):
        super().__init__(message)
        self.seed = seed
