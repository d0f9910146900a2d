"""
Contract runtime: storage, locking, provisional state and trial execution
"""
from .errors import ContractVMError, AddressInUse, NotLocked, ContractFault, LockFault, LockFaultKind
from .state import ContractFunction, ContractInstance, ChainState
from .locking import check_lock, lock_set, lock_and_stage, unlock_commit, unlock_discard
from .runtime import (
    ExecMode,
    ExecContext,
    Outcome,
    RevertReason,
    TrialResult,
    CallFrame,
    run_call,
    execute_trial,
)
from .library import ContractLibrary, LIBRARY
from . import bodies  # noqa: F401  registers the packaged contract bodies

__all__ = [
    # Errors
    "ContractVMError",
    "AddressInUse",
    "NotLocked",
    "ContractFault",
    "LockFault",
    "LockFaultKind",

    # State
    "ContractFunction",
    "ContractInstance",
    "ChainState",

    # Locking
    "check_lock",
    "lock_set",
    "lock_and_stage",
    "unlock_commit",
    "unlock_discard",

    # Execution
    "ExecMode",
    "ExecContext",
    "Outcome",
    "RevertReason",
    "TrialResult",
    "CallFrame",
    "run_call",
    "execute_trial",

    # Bodies
    "ContractLibrary",
    "LIBRARY",
]
