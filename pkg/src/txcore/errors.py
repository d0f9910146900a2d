"""
Transaction model errors
"""
from ..utils.errors import CrosschainError


class TxCoreError(CrosschainError):
    """Base class for transaction model failures"""


class MalformedEncoding(TxCoreError):
    """Buffer is truncated, has trailing bytes or carries an impossible count"""


class ConstructionFault(TxCoreError):
    """A contract function faulted during the construction pass"""
