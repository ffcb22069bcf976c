"""Exception types shared across the generator."""


class BioblendError(Exception):
    """Base class for all generator errors."""


class ConfigError(BioblendError, ValueError):
    """Invalid configuration or precondition violation.

    ``problems`` holds every violation found, not just the first one.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class FormatError(BioblendError):
    """An input file does not follow the dataset layout."""


class InvariantError(BioblendError):
    """An internal invariant was violated (indicates a bug)."""
