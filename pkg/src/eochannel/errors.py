"""Exception hierarchy shared by all modules."""


class ChannelModelError(Exception):
    """Base class for errors raised by this package."""


class InfeasibleGeometry(ChannelModelError, ValueError):
    """The requested reflector placement cannot be realized."""


class DomainError(ChannelModelError, ValueError):
    """An argument lies outside the domain of a formula."""


class DegenerateInput(ChannelModelError, ValueError):
    """Inputs leave nothing to normalize or combine."""


class EmptyInput(ChannelModelError, ValueError):
    """A statistic was requested on empty or zero-power data."""


class ParseError(ChannelModelError, ValueError):
    """A data file could not be parsed.

    ``line`` and ``column`` are 1-based when known.
    """

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class ConfigError(ChannelModelError, ValueError):
    """An experiment configuration is invalid."""
