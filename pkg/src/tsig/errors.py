"""
Threshold signature errors
"""
from ..utils.errors import CrosschainError


class TsigError(CrosschainError):
    """Base class for threshold signature failures"""


class InvalidConfig(TsigError):
    """Threshold m outside [1, n]"""


class InsufficientShares(TsigError):
    """Fewer than m distinct signature shares supplied"""


class DuplicateIndex(TsigError):
    """Two shares claim the same index"""


class InvalidShareIndex(TsigError):
    """Share index is zero or not a valid evaluation point"""
