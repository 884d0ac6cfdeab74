"""Exception types shared across the package.

Parsing problems raise DocumentError subclasses; invariant violations on
already-constructed entities are reported as data (see model.validate), not
as exceptions.
"""

from __future__ import annotations


class LeafGraphError(Exception):
    """Base class for all errors raised by this package."""


# --- document parsing ---------------------------------------------------


class DocumentError(LeafGraphError):
    """A structured document could not be turned into an entity."""


class MissingFieldError(DocumentError):
    def __init__(self, field: str):
        super().__init__(f"missing required field: {field}")
        self.field = field


class DuplicateVariableNameError(DocumentError):
    def __init__(self, name: str):
        super().__init__(f"duplicate variable name: {name!r}")
        self.name = name


class MalformedDocumentError(DocumentError):
    pass


class MalformedChainError(DocumentError):
    pass


class DanglingEdgeError(DocumentError):
    def __init__(self, src: str, dst: str):
        super().__init__(f"edge references missing node: {src!r} -> {dst!r}")
        self.src = src
        self.dst = dst


class EmptyLabelError(DocumentError):
    pass


class FrameMemberMissingError(DocumentError):
    def __init__(self, frame_id: str, member: str):
        super().__init__(f"frame {frame_id!r} references missing node {member!r}")
        self.frame_id = frame_id
        self.member = member


class InvalidEntityError(LeafGraphError):
    """Entity failed invariant checks; carries the violation list."""

    def __init__(self, violations):
        super().__init__(
            "entity has invariant violations: "
            + "; ".join(v.code for v in violations)
        )
        self.violations = list(violations)


# --- translation --------------------------------------------------------


class EmptyNameError(LeafGraphError):
    pass


class NotFunctionalError(LeafGraphError):
    def __init__(self, name: str):
        super().__init__(f"variable is not classified as functional: {name!r}")
        self.name = name


class NoStatesDefinedError(LeafGraphError):
    def __init__(self, name: str):
        super().__init__(f"no states defined for functional variable: {name!r}")
        self.name = name


class InvalidJacketError(LeafGraphError):
    pass


# --- map construction ---------------------------------------------------


class EmptyInputError(LeafGraphError):
    pass


class EmptyCorpusError(LeafGraphError):
    pass


class UnsupportedFormatError(LeafGraphError):
    def __init__(self, fmt: str):
        super().__init__(f"unsupported export format: {fmt!r}")
        self.format = fmt


# --- co-evolution -------------------------------------------------------


class BadThresholdError(LeafGraphError):
    def __init__(self, value: float):
        super().__init__(f"match threshold must be in (0, 1], got {value}")
        self.value = value


# --- analytics ----------------------------------------------------------


class NoAnchorsError(LeafGraphError):
    pass


class MissingClassError(LeafGraphError):
    pass


class NoStickersError(LeafGraphError):
    pass


# --- session service ----------------------------------------------------


class UnknownSessionError(LeafGraphError):
    def __init__(self, session_id: str):
        super().__init__(f"unknown session: {session_id!r}")
        self.session_id = session_id


class InvalidReferenceError(LeafGraphError):
    pass


class StaleEditError(LeafGraphError):
    pass


class CorruptLogError(LeafGraphError):
    pass


class ConfigError(LeafGraphError):
    pass


class StorageUnavailableError(LeafGraphError):
    pass
