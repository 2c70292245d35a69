"""Shared error taxonomy.

Every failure raised by this package derives from ToolError and carries a
machine-readable ``code`` plus the CLI exit status class it belongs to
(2 = validation, 3 = cap/budget).
"""


class ToolError(Exception):
    code = "error"
    exit_status = 2


class ValidationError(ToolError):
    code = "validation_error"


class CapError(ToolError):
    """Raised when a configured size/budget cap refuses the computation."""

    code = "cap_exceeded"
    exit_status = 3


class ParseError(ToolError):
    code = "parse_error"
