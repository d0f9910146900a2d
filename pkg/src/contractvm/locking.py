"""
Contract locking and provisional state
"""
from typing import Iterable, List, Mapping

from ..txcore.types import Address, CrosschainTxId
from ..utils.logger import setup_logger
from .errors import LockFault, LockFaultKind, NotLocked
from .state import ChainState, ContractInstance

logger = setup_logger("contractvm")


def check_lock(c: ContractInstance, tx_id: CrosschainTxId) -> None:
    """Raise LockFault unless c is lockable and unlocked; a lock held by tx_id itself still faults"""
    if not c.lockable:
        raise LockFault(LockFaultKind.NONLOCKABLE, c.address)
    if c.lock_owner is not None:
        raise LockFault(LockFaultKind.ALREADY_LOCKED, c.address, c.lock_owner)


def lock_set(chain: ChainState, target: Address, written: Iterable[Address]) -> List[Address]:
    """Contracts a mined transaction locks: everything it wrote plus a lockable target"""
    addresses = set(written)
    contract = chain.get(target)
    if contract is not None and contract.lockable:
        addresses.add(target)
    return sorted(addresses)


def lock_and_stage(c: ContractInstance, writes: Mapping[int, int], tx_id: CrosschainTxId) -> ContractInstance:
    check_lock(c, tx_id)
    c.provisional_overlay = dict(writes)
    c.lock_owner = tx_id
    logger.debug(f"contract {c.address} locked by {tx_id} with {len(writes)} staged writes")
    return c


def unlock_commit(c: ContractInstance) -> ContractInstance:
    """Provisional state becomes normal state"""
    if c.lock_owner is None:
        raise NotLocked(f"contract {c.address} is not locked")
    c.committed_storage.update(c.provisional_overlay or {})
    c.provisional_overlay = None
    c.lock_owner = None
    return c


def unlock_discard(c: ContractInstance) -> ContractInstance:
    if c.lock_owner is None:
        raise NotLocked(f"contract {c.address} is not locked")
    c.provisional_overlay = None
    c.lock_owner = None
    return c
