"""
Validator node errors

Handlers raise these inside a protocol step and catch them at the step boundary,
where they become trace records and, where applicable, the Ignore flow.
"""
from typing import Optional

from ..utils.errors import CrosschainError


class NodeError(CrosschainError):
    """Base class for validator node failures; reason names the underlying cause"""

    default_reason = "NodeError"

    def __init__(self, detail: str, reason: Optional[str] = None):
        super().__init__(detail)
        self.reason = reason or self.default_reason


class NestingInvalid(NodeError):
    default_reason = "NestingInvalid"


class StartRejected(NodeError):
    default_reason = "StartRejected"


class TrialReverted(NodeError):
    default_reason = "TrialReverted"


class ViewSignatureInvalid(NodeError):
    default_reason = "ViewSignatureInvalid"


class CommitRejected(NodeError):
    default_reason = "CommitRejected"


class IgnoreRejected(NodeError):
    default_reason = "IgnoreRejected"
