"""
Contract runtime errors
"""
import enum
from typing import Optional

from ..utils.errors import CrosschainError


class ContractVMError(CrosschainError):
    """Base class for contract runtime failures"""


class AddressInUse(ContractVMError):
    """A contract is already deployed at this address"""


class NotLocked(ContractVMError):
    """Unlock requested on a contract without a lock owner"""


class ContractFault(ContractVMError):
    """Contract code rejected the call (failed require, bad arity, unknown target)"""


class LockFaultKind(str, enum.Enum):
    NONLOCKABLE = "Nonlockable"
    ALREADY_LOCKED = "AlreadyLocked"


class LockFault(ContractVMError):
    """The contract cannot take part in a crosschain state update"""

    def __init__(self, kind: LockFaultKind, address: int, owner: Optional[int] = None):
        self.kind = kind
        self.address = address
        self.owner = owner
        detail = f" by {owner}" if owner is not None else ""
        super().__init__(f"LockFault({kind.value}) on contract {address}{detail}")
