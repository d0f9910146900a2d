"""
Crosschain Coordination Contract

Holds one record per crosschain transaction. A record moves Started -> Committed or
Started -> Ignored on a threshold-signed message from the originating chain; a record
still Started after its time-out block resolves as Ignored when queried.
"""
import enum
from dataclasses import dataclass
from typing import Dict, List, Optional

from ..tsig import ThresholdSignature, verify
from ..txcore.types import Address, ChainId, CrosschainTxId
from ..utils.logger import setup_logger
from .clock import CoordClock
from .errors import BadSignature, DuplicateTxId, PastTimeout, TimeoutInPast, WrongState
from .messages import commit_message, ignore_message, start_message
from .registry import KeyRegistry

logger = setup_logger("coord")


class CoordinationStatus(str, enum.Enum):
    NOT_STARTED = "NotStarted"
    STARTED = "Started"
    COMMITTED = "Committed"
    IGNORED = "Ignored"

    @property
    def terminal(self) -> bool:
        return self in (CoordinationStatus.COMMITTED, CoordinationStatus.IGNORED)


@dataclass
class CoordinationRecord:
    tx_id: CrosschainTxId
    status: CoordinationStatus
    timeout_block: int
    originating_chain: ChainId
    started_block: int = 0
    resolved_block: Optional[int] = None


class CoordinationContract:
    """State machine plus key registry living on the coordination chain"""

    def __init__(self, chain_id: ChainId, address: Address, registry: KeyRegistry, clock: CoordClock):
        self.chain_id = chain_id
        self.address = address
        self.registry = registry
        self.clock = clock
        self.records: Dict[CrosschainTxId, CoordinationRecord] = {}

    def _verify(self, chain: ChainId, msg: bytes, sig: ThresholdSignature) -> None:
        entry = self.registry.latest(chain)
        if entry is None or not verify(entry.public_key, msg, sig):
            raise BadSignature(f"signature does not verify under chain {chain}'s registered key")

    def submit_start(self, tx_id: CrosschainTxId, originating_chain: ChainId, timeout_block: int,
                     sig: ThresholdSignature) -> CoordinationRecord:
        self._verify(originating_chain, start_message(tx_id, timeout_block, originating_chain), sig)
        if tx_id in self.records:
            raise DuplicateTxId(f"crosschain transaction {tx_id} already started")
        if timeout_block <= self.clock.current_block:
            raise TimeoutInPast(
                f"time-out block {timeout_block} is not after current block {self.clock.current_block}"
            )

        record = CoordinationRecord(
            tx_id=tx_id,
            status=CoordinationStatus.STARTED,
            timeout_block=timeout_block,
            originating_chain=originating_chain,
            started_block=self.clock.current_block,
        )
        self.records[tx_id] = record
        logger.info(f"tx {tx_id} Started at block {record.started_block}, times out after {timeout_block}")
        return record

    def _resolve(self, tx_id: CrosschainTxId, msg: bytes, sig: ThresholdSignature,
                 outcome: CoordinationStatus) -> CoordinationRecord:
        record = self.records.get(tx_id)
        if record is None:
            raise WrongState(f"crosschain transaction {tx_id} was never started")
        # Only the originating chain commits or ignores
        self._verify(record.originating_chain, msg, sig)
        if record.status != CoordinationStatus.STARTED:
            raise WrongState(f"tx {tx_id} is {record.status.value}, cannot become {outcome.value}")
        if self.clock.current_block > record.timeout_block:
            raise PastTimeout(
                f"block {self.clock.current_block} is past tx {tx_id}'s time-out block {record.timeout_block}"
            )

        record.status = outcome
        record.resolved_block = self.clock.current_block
        logger.info(f"tx {tx_id} {outcome.value} at block {record.resolved_block}")
        return record

    def submit_commit(self, tx_id: CrosschainTxId, sig: ThresholdSignature) -> CoordinationRecord:
        return self._resolve(tx_id, commit_message(tx_id), sig, CoordinationStatus.COMMITTED)

    def submit_ignore(self, tx_id: CrosschainTxId, sig: ThresholdSignature) -> CoordinationRecord:
        return self._resolve(tx_id, ignore_message(tx_id), sig, CoordinationStatus.IGNORED)

    def status(self, tx_id: CrosschainTxId, at_block: Optional[int] = None) -> CoordinationStatus:
        """Resolved status at a block (default: the current block)"""
        record = self.records.get(tx_id)
        if record is None:
            return CoordinationStatus.NOT_STARTED
        if at_block is None:
            at_block = self.clock.current_block
        if record.status == CoordinationStatus.STARTED and at_block > record.timeout_block:
            return CoordinationStatus.IGNORED
        return record.status

    def started(self) -> List[CoordinationRecord]:
        return [self.records[tx_id] for tx_id in sorted(self.records)
                if self.records[tx_id].status == CoordinationStatus.STARTED]

    def dump(self) -> Dict[str, str]:
        return {str(tx_id): self.status(tx_id).value for tx_id in sorted(self.records)}
