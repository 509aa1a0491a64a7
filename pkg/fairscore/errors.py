"""Exception hierarchy and CLI exit codes."""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class FairscoreError(Exception):
    """Base class for all fairscore errors."""

    exit_code = EXIT_INTERNAL


class UsageError(FairscoreError, ValueError):
    """Invalid flags, parameters or policies."""

    exit_code = EXIT_USAGE


class ConfigError(UsageError):
    """Invalid configuration value."""


class DataError(FairscoreError, ValueError):
    """Input data that cannot be processed."""

    exit_code = EXIT_DATA


class MissingScoreError(DataError):
    """A record has no score where one is required."""


class CsvFormatError(DataError):
    """Malformed CSV input; ``problems`` lists ``(line_number, message)`` pairs."""

    def __init__(self, path, problems: list[tuple[int, str]]):
        self.path = str(path)
        self.problems = list(problems)
        shown = "; ".join(f"line {line}: {message}" for line, message in self.problems[:10])
        more = f" (+{len(self.problems) - 10} more)" if len(self.problems) > 10 else ""
        super().__init__(f"{self.path}: {shown}{more}")


class InvariantViolation(FairscoreError, AssertionError):
    """A post-condition failed at runtime."""

    exit_code = EXIT_INTERNAL
