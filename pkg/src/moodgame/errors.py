"""Exception hierarchy shared by every engine module.

Each error carries a stable machine-readable ``code`` (used verbatim on the
wire by the HTTP layer) and a default ``http_status``. Codes must stay unique
across the hierarchy; the API test suite enforces this.
"""

from __future__ import annotations


class EngineError(Exception):
    code = "ENGINE_ERROR"
    http_status = 400

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


# -- labels / config ---------------------------------------------------------

class EmptyLabelError(EngineError):
    code = "EMPTY_LABEL"
    http_status = 400


class LabelTooLongError(EngineError):
    code = "LABEL_TOO_LONG"
    http_status = 400


class ConfigOutOfRangeError(EngineError):
    code = "CONFIG_OUT_OF_RANGE"
    http_status = 400

    def __init__(self, field: str, message: str = ""):
        self.field = field
        super().__init__(message or f"config field out of range: {field}")


# -- scoring / tallies -------------------------------------------------------

class InvalidTallyError(EngineError):
    code = "INVALID_TALLY"
    http_status = 400


class UnknownSnippetError(EngineError):
    code = "UNKNOWN_SNIPPET"
    http_status = 404


class InactiveSnippetError(EngineError):
    code = "INACTIVE_SNIPPET"
    http_status = 409


# -- sessions ----------------------------------------------------------------

class InvalidMoodRatingError(EngineError):
    code = "INVALID_MOOD_RATING"
    http_status = 400


class SessionAlreadyActiveError(EngineError):
    code = "SESSION_ALREADY_ACTIVE"
    http_status = 409


class AccountNotActivatedError(EngineError):
    code = "ACCOUNT_NOT_ACTIVATED"
    http_status = 403


class EmptyCorpusError(EngineError):
    code = "EMPTY_CORPUS"
    http_status = 409


class SessionEndedError(EngineError):
    code = "SESSION_ENDED"
    http_status = 409


class SnippetNotServedError(EngineError):
    code = "SNIPPET_NOT_SERVED"
    http_status = 409


class UnknownSessionError(EngineError):
    code = "UNKNOWN_SESSION"
    http_status = 404


class UnknownPlayerError(EngineError):
    code = "UNKNOWN_PLAYER"
    http_status = 404


# -- accounts / auth ---------------------------------------------------------

class EmailInUseError(EngineError):
    code = "EMAIL_IN_USE"
    http_status = 409


class InvalidEmailError(EngineError):
    code = "INVALID_EMAIL"
    http_status = 400


class InfoSheetNotAcknowledgedError(EngineError):
    code = "INFO_SHEET_NOT_ACKNOWLEDGED"
    http_status = 400


class TokenInvalidError(EngineError):
    code = "TOKEN_INVALID"
    http_status = 401


class NotActivatedError(EngineError):
    code = "NOT_ACTIVATED"
    http_status = 401


class CredentialsError(EngineError):
    code = "INVALID_CREDENTIALS"
    http_status = 401


class NotAuthorizedError(EngineError):
    code = "NOT_AUTHORIZED"
    http_status = 403


# -- corpus tools ------------------------------------------------------------

class ParseError(EngineError):
    code = "PARSE_ERROR"
    http_status = 400

    def __init__(self, line: int, message: str = ""):
        self.line = line
        super().__init__(message or f"unparseable corpus record at line {line}")


class DuplicateIdError(EngineError):
    code = "DUPLICATE_ID"
    http_status = 409


class WrongModalityPayloadError(EngineError):
    code = "WRONG_MODALITY_PAYLOAD"
    http_status = 400


class NegativeInputError(EngineError):
    code = "NEGATIVE_INPUT"
    http_status = 400


class InvalidProfileError(EngineError):
    code = "INVALID_PROFILE"
    http_status = 400


# -- persistence -------------------------------------------------------------

class ConflictRetryError(EngineError):
    """Transaction conflict; the caller may retry.

    The embedded store serializes writers behind a single lock, so it never
    raises this itself; the class exists for alternative store backends.
    """

    code = "CONFLICT_RETRY"
    http_status = 409


class StorageFailureError(EngineError):
    code = "STORAGE_FAILURE"
    http_status = 503
