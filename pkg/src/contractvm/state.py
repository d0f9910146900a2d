"""
Contract instances and per-chain contract state
"""
import copy
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Optional

from ..txcore.types import Address, ChainId, CrosschainTxId
from .errors import AddressInUse


@dataclass(frozen=True)
class ContractFunction:
    """A host-registered deterministic function body with a declared arity"""
    name: str
    arity: int
    body: Callable[..., Optional[int]]


@dataclass
class ContractInstance:
    address: Address
    lockable: bool
    functions: Mapping[str, ContractFunction]
    committed_storage: Dict[int, int] = field(default_factory=dict)
    provisional_overlay: Optional[Dict[int, int]] = None
    lock_owner: Optional[CrosschainTxId] = None
    body_name: str = ""
    name: str = ""

    @property
    def locked(self) -> bool:
        return self.lock_owner is not None

    def read(self, key: int) -> int:
        """Committed value; provisional writes are never visible here"""
        return self.committed_storage.get(key, 0)

    def dump(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "body": self.body_name,
            "lockable": self.lockable,
            "lock_owner": self.lock_owner,
            "storage": {str(k): v for k, v in sorted(self.committed_storage.items())},
        }


class ChainState:
    """Contracts, account nonces and block height of one simulated chain"""

    def __init__(self, chain_id: ChainId):
        self.chain_id = chain_id
        self.contracts: Dict[Address, ContractInstance] = {}
        self.nonces: Dict[Address, int] = {}
        self.height = 0

    def deploy(self, address: Address, lockable: bool, functions: Mapping[str, ContractFunction],
               storage: Optional[Mapping[int, int]] = None, body_name: str = "",
               name: str = "") -> ContractInstance:
        if address in self.contracts:
            raise AddressInUse(f"address {address} already deployed on chain {self.chain_id}")
        instance = ContractInstance(
            address=address,
            lockable=lockable,
            functions=functions,
            committed_storage=dict(storage or {}),
            body_name=body_name,
            name=name or str(address),
        )
        self.contracts[address] = instance
        return instance

    def get(self, address: Address) -> Optional[ContractInstance]:
        return self.contracts.get(address)

    def next_nonce(self, sender: Address) -> int:
        return self.nonces.get(sender, 0)

    def bump_nonce(self, sender: Address) -> None:
        self.nonces[sender] = self.nonces.get(sender, 0) + 1

    def snapshot(self) -> "ChainState":
        """Independent copy of committed state for construction passes"""
        copied = ChainState(self.chain_id)
        copied.height = self.height
        copied.nonces = dict(self.nonces)
        for address, contract in self.contracts.items():
            copied.contracts[address] = ContractInstance(
                address=contract.address,
                lockable=contract.lockable,
                functions=contract.functions,
                committed_storage=copy.copy(contract.committed_storage),
                provisional_overlay=None if contract.provisional_overlay is None else dict(contract.provisional_overlay),
                lock_owner=contract.lock_owner,
                body_name=contract.body_name,
                name=contract.name,
            )
        return copied

    def dump(self) -> Dict[str, object]:
        return {str(address): self.contracts[address].dump() for address in sorted(self.contracts)}
