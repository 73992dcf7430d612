"""Shared exception types."""


class OacsError(Exception):
    """Base class for all errors raised by this package."""


class UsersFileError(OacsError):
    """A users CSV file could not be parsed."""


class ConfigError(OacsError):
    """A config file or config value is invalid."""


class ScriptError(OacsError):
    """A scenario script could not be parsed."""


class DuplicateCodeError(OacsError):
    """Two user records share the same code."""

    def __init__(self, code_text: str, first_name: str, second_name: str):
        super().__init__(
            f"code {code_text} is shared by {first_name!r} and {second_name!r}"
        )
        self.code_text = code_text
        self.first_name = first_name
        self.second_name = second_name


class CapacityError(OacsError):
    """The user database is full."""


class UnknownCodeError(OacsError):
    """An operation referenced a code that is not in the database."""


class PulseError(OacsError):
    """An unlock pulse was requested while one is already active."""
