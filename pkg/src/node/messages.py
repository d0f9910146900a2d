"""
Messages exchanged between validator nodes and the work items they queue for themselves
"""
import enum
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from ..tsig import ThresholdSignature
from ..txcore.types import ChainId, CrosschainTxId, SignedEnvelope, TxPath


class MessageKind(str, enum.Enum):
    DISPATCH = "dispatch"
    VIEW_REQUEST = "view_request"
    VIEW_RESULT = "view_result"
    READY = "ready"
    ERROR_REPORT = "error_report"
    SIGNALLING = "signalling"


@dataclass(frozen=True, order=True)
class NodeRef:
    chain: ChainId
    node: int

    def __str__(self) -> str:
        return f"{self.chain}/{self.node}"


@dataclass(frozen=True)
class Route:
    """Members of the submitting multichain node, one per chain, and the coordinating node"""
    members: Tuple[Tuple[ChainId, int], ...]
    coordinator: NodeRef

    @classmethod
    def from_members(cls, members: Dict[ChainId, int], root_chain: ChainId) -> "Route":
        return cls(tuple(sorted(members.items())), NodeRef(root_chain, members[root_chain]))

    def member(self, chain: ChainId) -> NodeRef:
        for member_chain, node in self.members:
            if member_chain == chain:
                return NodeRef(chain, node)
        raise KeyError(f"multichain node has no member on chain {chain}")

    def chains(self) -> Tuple[ChainId, ...]:
        return tuple(chain for chain, _ in self.members)


@dataclass(frozen=True)
class ReadyMessage:
    tx_id: CrosschainTxId
    chain: ChainId
    key_version: int
    sig: ThresholdSignature

    kind = MessageKind.READY


@dataclass(frozen=True)
class SignedViewResult:
    tx_id: CrosschainTxId
    chain: ChainId
    block_number: int
    value: int
    key_version: int
    sig: ThresholdSignature


@dataclass(frozen=True)
class DispatchSubordinate:
    envelope: SignedEnvelope
    path: TxPath
    route: Route

    kind = MessageKind.DISPATCH


@dataclass(frozen=True)
class ViewRequest:
    envelope: SignedEnvelope
    path: TxPath
    route: Route
    reply_to: NodeRef

    kind = MessageKind.VIEW_REQUEST


@dataclass(frozen=True)
class ViewResponse:
    tx_id: CrosschainTxId
    path: TxPath
    result: Optional[SignedViewResult] = None
    error: str = ""

    kind = MessageKind.VIEW_RESULT

    @property
    def requester_path(self) -> TxPath:
        return self.path[:-1]

    @property
    def position(self) -> int:
        return self.path[-1]


@dataclass(frozen=True)
class ErrorReport:
    """Unsigned notice from a participating chain that the transaction cannot proceed"""
    tx_id: CrosschainTxId
    chain: ChainId
    path: TxPath
    reason: str

    kind = MessageKind.ERROR_REPORT


@dataclass(frozen=True)
class SignallingRequest:
    tx_id: CrosschainTxId

    kind = MessageKind.SIGNALLING


# Work a node schedules for itself; never lost or delayed by the network

@dataclass(frozen=True)
class MineTransaction:
    tx_id: CrosschainTxId
    path: TxPath


@dataclass(frozen=True)
class MineSignalling:
    tx_id: CrosschainTxId


@dataclass(frozen=True)
class TimerExpiry:
    tx_id: CrosschainTxId
    expiry: int
