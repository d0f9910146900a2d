"""
Per-transaction bookkeeping held by validator nodes
"""
from dataclasses import dataclass, field
from typing import Dict, Optional, Set, Tuple

from ..txcore.types import ChainId, SignedEnvelope, TxPath, TxType
from .messages import NodeRef, Route


@dataclass
class ExecutionSession:
    """One nested element being processed on this node: pending views, then trial and mining"""
    envelope: SignedEnvelope
    path: TxPath
    route: Route
    reply_to: Optional[NodeRef] = None
    pending_views: Set[int] = field(default_factory=set)
    view_results: Dict[int, int] = field(default_factory=dict)
    failed: bool = False

    @property
    def element(self):
        return self.envelope.element(self.path)

    @property
    def tx_id(self) -> int:
        return self.envelope.tx_id


@dataclass
class CoordinatorSession:
    """State the coordinating node keeps between Start and Commit or Ignore"""
    envelope: SignedEnvelope
    route: Route
    ready_expected: Tuple[ChainId, ...]
    ready_received: Set[ChainId] = field(default_factory=set)
    root_mined: bool = False
    decision: Optional[str] = None

    @classmethod
    def open(cls, envelope: SignedEnvelope, route: Route) -> "CoordinatorSession":
        chains = {element.chain_id for _, element in envelope.body.walk() if element.tx_type == TxType.SUBORDINATE}
        return cls(envelope=envelope, route=route, ready_expected=tuple(sorted(chains)))

    def all_ready(self) -> bool:
        return self.root_mined and all(chain in self.ready_received for chain in self.ready_expected)


def subordinate_paths_on(envelope: SignedEnvelope, chain: ChainId) -> Set[TxPath]:
    """Paths of every Subordinate Transaction of the nest that targets chain"""
    return {
        path for path, element in envelope.body.walk()
        if element.tx_type == TxType.SUBORDINATE and element.chain_id == chain
    }
