"""Shared exception types."""


class ConfigError(ValueError):
    """A parameter set violates one of its invariants.

    The message names the first violated invariant, e.g. "octaves >= 1".
    """


class DomainError(ValueError):
    """An input value lies outside the domain of an operation."""


class TileCodecError(ValueError):
    """Base class for tile decode failures."""


class BadMagicError(TileCodecError):
    pass


class VersionError(TileCodecError):
    pass


class TruncatedError(TileCodecError):
    pass


class IndexRangeError(TileCodecError):
    pass
