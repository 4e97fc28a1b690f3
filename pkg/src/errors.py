"""
Exceptions raised by the services. The command layer turns AllcastError into
a message plus nonzero exit; anything else is logged as unexpected.
"""


class AllcastError(Exception):
    """Base class for expected, user-facing failures."""


class DimensionMismatch(AllcastError, ValueError):
    pass


class InvalidParameter(AllcastError, ValueError):
    pass


class NotDecodable(AllcastError):
    def __init__(self, rank, dim):
        super().__init__(f"not decodable: rank {rank} < {dim} columns")
        self.rank = rank
        self.dim = dim


class OracleLimitExceeded(AllcastError):
    pass


class NoCompletedReplicates(AllcastError):
    def __init__(self, censored):
        super().__init__("no completed replicates")
        self.censored = censored


class ConfigFileError(AllcastError):
    """Malformed sweep config; lineno is 1-based (None for file-level problems)."""

    def __init__(self, message, lineno=None):
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(f"{where}{message}")
        self.lineno = lineno
