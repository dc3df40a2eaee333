"""Exception hierarchy shared across the package.

Each class carries the process exit code the CLI maps it to, so library
callers and the command line agree on failure semantics.
"""


class RecallScanError(Exception):
    """Base class for all recallscan failures."""

    exit_code = 1


class UsageError(RecallScanError):
    """Bad invocation: unknown format, malformed config, invalid flag value."""

    exit_code = 2


class TransportError(RecallScanError):
    """Network-level failure after retries were exhausted."""

    exit_code = 3


class RequestError(TransportError):
    """The API answered with a non-retryable client-error status."""

    def __init__(self, status: int, detail: str):
        super().__init__(f"HTTP {status}: {detail}")
        self.status = status


class DataError(RecallScanError):
    """Missing, empty, or inconsistent data artifacts."""

    exit_code = 4


class ParseError(DataError):
    """A response or file body could not be decoded."""


class FormatError(DataError):
    """A file exists but does not match the expected schema."""


class ContractError(RecallScanError):
    """A caller violated a documented precondition."""

    exit_code = 5
