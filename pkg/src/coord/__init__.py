"""
Coordination chain: block clock, key registry and the coordination contract
"""
from .errors import (
    CoordinationError,
    StaleVersion,
    UnknownKeyVersion,
    SubmissionRejected,
    BadSignature,
    DuplicateTxId,
    TimeoutInPast,
    WrongState,
    PastTimeout,
)
from .clock import CoordClock
from .registry import KeyRegistryEntry, KeyRegistry
from .messages import start_message, commit_message, ignore_message, ready_message, view_result_message
from .contract import CoordinationStatus, CoordinationRecord, CoordinationContract

__all__ = [
    # Errors
    "CoordinationError",
    "StaleVersion",
    "UnknownKeyVersion",
    "SubmissionRejected",
    "BadSignature",
    "DuplicateTxId",
    "TimeoutInPast",
    "WrongState",
    "PastTimeout",

    # Clock and keys
    "CoordClock",
    "KeyRegistryEntry",
    "KeyRegistry",

    # Signed messages
    "start_message",
    "commit_message",
    "ignore_message",
    "ready_message",
    "view_result_message",

    # Contract
    "CoordinationStatus",
    "CoordinationRecord",
    "CoordinationContract",
]
