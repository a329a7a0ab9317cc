"""Exception hierarchy for the fault-localization engine.

Every error raised by the engine derives from ``SbflError`` so callers
(CLI, service) can map the whole family to input-validation failures.
"""


class SbflError(Exception):
    """Base class for all engine errors."""


# -- spectrum construction / lookup -----------------------------------------

class DuplicateId(SbflError):
    pass


class DanglingReference(SbflError):
    pass


class InvalidHierarchy(SbflError):
    pass


class UnknownElement(SbflError):
    pass


# -- ranking ------------------------------------------------------------------

class NoSuchGranularity(SbflError):
    pass


class NotCoarser(SbflError):
    pass


# -- formula DSL --------------------------------------------------------------

class ParseError(SbflError):
    """Malformed formula text. ``offset`` is the 1-based character position."""

    def __init__(self, offset: int, message: str):
        super().__init__(f"at offset {offset}: {message}")
        self.offset = offset
        self.reason = message


class UnknownIdentifier(ParseError):
    def __init__(self, offset: int, name: str):
        super().__init__(offset, f"unknown identifier {name!r}")
        self.name = name


# -- interactive sessions -----------------------------------------------------

class SessionConcluded(SbflError):
    pass


class EmptyLog(SbflError):
    pass


# -- elo ------------------------------------------------------------------------

class UnknownItem(SbflError):
    pass


class SelfMatch(SbflError):
    pass


class TooFewItems(SbflError):
    pass


class NonPositiveC(SbflError):
    pass


# -- ingestion ------------------------------------------------------------------

class SchemaError(SbflError):
    """Canonical-document validation failure; ``path`` names the bad field."""

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}" if path else reason)
        self.path = path
        self.reason = reason


class VersionMismatch(SbflError):
    pass


class MalformedRecord(SbflError):
    """Bad LCOV record; carries the 1-based line number and its content."""

    def __init__(self, line_no: int, content: str, reason: str):
        super().__init__(f"line {line_no}: {reason}: {content!r}")
        self.line_no = line_no
        self.content = content


class MalformedDocument(SbflError):
    pass


# -- service ---------------------------------------------------------------------

class UnknownSession(SbflError):
    pass
