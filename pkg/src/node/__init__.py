"""
Validator nodes and the chains they run
"""
from .errors import (
    NodeError,
    NestingInvalid,
    StartRejected,
    TrialReverted,
    ViewSignatureInvalid,
    CommitRejected,
    IgnoreRejected,
)
from .messages import (
    MessageKind,
    NodeRef,
    Route,
    ReadyMessage,
    SignedViewResult,
    DispatchSubordinate,
    ViewRequest,
    ViewResponse,
    ErrorReport,
    SignallingRequest,
    MineTransaction,
    MineSignalling,
    TimerExpiry,
)
from .sessions import ExecutionSession, CoordinatorSession, subordinate_paths_on
from .chain import Blockchain
from .validator import CrashPoint, ByzantineStyle, NodeHost, ValidatorNode

__all__ = [
    # Errors
    "NodeError",
    "NestingInvalid",
    "StartRejected",
    "TrialReverted",
    "ViewSignatureInvalid",
    "CommitRejected",
    "IgnoreRejected",

    # Messages
    "MessageKind",
    "NodeRef",
    "Route",
    "ReadyMessage",
    "SignedViewResult",
    "DispatchSubordinate",
    "ViewRequest",
    "ViewResponse",
    "ErrorReport",
    "SignallingRequest",
    "MineTransaction",
    "MineSignalling",
    "TimerExpiry",

    # Sessions
    "ExecutionSession",
    "CoordinatorSession",
    "subordinate_paths_on",

    # Nodes
    "Blockchain",
    "CrashPoint",
    "ByzantineStyle",
    "NodeHost",
    "ValidatorNode",
]
