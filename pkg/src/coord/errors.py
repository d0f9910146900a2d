"""
Coordination chain errors
"""
from ..utils.errors import CrosschainError


class CoordinationError(CrosschainError):
    """Base class for coordination chain failures"""


class StaleVersion(CoordinationError):
    """Key registration does not advance the chain's key version"""


class UnknownKeyVersion(CoordinationError):
    """No key registered for the requested chain and version"""


class SubmissionRejected(CoordinationError):
    """The coordination contract refused a Start, Commit or Ignore submission"""

    reason = "Rejected"


class BadSignature(SubmissionRejected):
    reason = "BadSignature"


class DuplicateTxId(SubmissionRejected):
    reason = "DuplicateTxId"


class TimeoutInPast(SubmissionRejected):
    reason = "TimeoutInPast"


class WrongState(SubmissionRejected):
    reason = "WrongState"


class PastTimeout(SubmissionRejected):
    reason = "PastTimeout"
