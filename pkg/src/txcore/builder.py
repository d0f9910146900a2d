"""
Construction of nested crosschain transactions

The builder runs the root call in construction mode against a multi-chain snapshot,
records every crosschain call with its actual arguments (and every view's value) and
emits the nest with subordinates in depth-first call order.
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Sequence

from ..contractvm.runtime import CallFrame, ExecContext, ExecMode, TrialResult, run_call
from ..contractvm.state import ChainState
from ..utils.logger import setup_logger
from ..utils.rng import rng_stream
from .errors import ConstructionFault
from .signing import sign_transaction
from .types import (
    Address,
    CallPayload,
    ChainId,
    CoordinationParams,
    CrosschainTransaction,
    CrosschainTxId,
    SignedEnvelope,
    TxPath,
    TxType,
)

logger = setup_logger("txcore")

DEFAULT_GAS_LIMIT = 1_000_000


@dataclass
class DeclaredCall:
    """One element of a nest written out by hand instead of discovered by construction"""
    tx_type: TxType
    chain: ChainId
    address: Address
    payload: CallPayload
    subordinates: List["DeclaredCall"] = field(default_factory=list)


class _ConstructionPass:
    """Executes the call graph against private copies of the snapshot"""

    def __init__(self, snapshot: Mapping[ChainId, ChainState], sender: Address, root_chain: ChainId):
        self.chains: Dict[ChainId, ChainState] = {cid: state.snapshot() for cid, state in snapshot.items()}
        self.sender = sender
        self.root_chain = root_chain

    def execute(self, element: DeclaredCall, from_chain: ChainId, from_address: Address) -> TrialResult:
        chain = self.chains.get(element.chain)
        if chain is None:
            raise ConstructionFault(f"chain {element.chain} is not in the snapshot")

        ctx = ExecContext(
            msg_sender=self.sender,
            tx_origin=self.sender,
            from_address=from_address,
            from_chain=from_chain,
            originating_chain=self.root_chain,
            this_chain=element.chain,
            mode=ExecMode.CONSTRUCTION,
        )
        result = run_call(chain, element.address, element.payload, ctx, _CallRecorder(self, element))
        if not result.ok:
            raise ConstructionFault(
                f"{element.payload.function_name}{list(element.payload.args)} on chain {element.chain} "
                f"faulted during construction: {result.describe()}"
            )

        # Later calls in the same pass observe earlier writes; views never write
        if element.tx_type != TxType.VIEW:
            for address, writes in result.writes.items():
                chain.contracts[address].committed_storage.update(writes)
        return result


class _CallRecorder:
    def __init__(self, construction: _ConstructionPass, parent: DeclaredCall):
        self.construction = construction
        self.parent = parent

    def _record(self, tx_type: TxType, chain: ChainId, address: Address, payload: CallPayload) -> TrialResult:
        child = DeclaredCall(tx_type, chain, address, payload)
        self.parent.subordinates.append(child)
        return self.construction.execute(child, self.parent.chain, self.parent.address)

    def transaction(self, caller: CallFrame, chain: ChainId, address: Address, payload: CallPayload) -> None:
        if self.parent.tx_type == TxType.VIEW:
            raise ConstructionFault(f"view {self.parent.payload.function_name} calls a crosschain transaction")
        self._record(TxType.SUBORDINATE, chain, address, payload)

    def view(self, caller: CallFrame, chain: ChainId, address: Address, payload: CallPayload) -> int:
        result = self._record(TxType.VIEW, chain, address, payload)
        if result.return_value is None:
            raise ConstructionFault(f"view {payload.function_name} on chain {chain} returned no value")
        return result.return_value


def derive_tx_id(seed: int) -> CrosschainTxId:
    return rng_stream(seed, "txcore/crosschain-tx-id").next_u64() or 1


def assemble_crosschain_tx(root: DeclaredCall, sender: Address, coordination: CoordinationParams,
                           tx_id: CrosschainTxId, nonces: Mapping[ChainId, int]) -> CrosschainTransaction:
    """
    Materialize a call tree into a consistent nest

    Shared fields are copied from the root, from_chain/from_address from each parent,
    and nonces are handed out per chain in depth-first order starting at nonces[chain].
    """
    next_nonce: Dict[ChainId, int] = dict(nonces)

    def materialize(element: DeclaredCall, tx_type: TxType, from_chain: ChainId,
                    from_address: Address) -> CrosschainTransaction:
        nonce = next_nonce.get(element.chain, 0)
        next_nonce[element.chain] = nonce + 1
        children = [
            materialize(child, child.tx_type, element.chain, element.address)
            for child in element.subordinates
        ]
        return CrosschainTransaction(
            tx_type=tx_type,
            nonce=nonce,
            gas_price=0,
            gas_limit=DEFAULT_GAS_LIMIT,
            to=element.address,
            value=0,
            data=element.payload,
            chain_id=element.chain,
            sender=sender,
            coordination_chain=coordination.chain,
            coordination_contract=coordination.contract,
            timeout_block=coordination.timeout_block,
            crosschain_tx_id=tx_id,
            originating_chain=root.chain,
            from_chain=from_chain,
            from_address=from_address,
            subordinates=tuple(children),
        )

    # The root transaction is attributed to the submitting account on its own chain
    return materialize(root, TxType.ORIGINATING, root.chain, sender)


def build_crosschain_tx(root_call: CallPayload, root_chain: ChainId, root_contract: Address,
                        snapshot: Mapping[ChainId, ChainState], coordination: CoordinationParams,
                        seed: int, sender: Address) -> SignedEnvelope:
    """
    Build and sign a nest by dynamic analysis of the root call

    Args:
        root_call: Function and arguments of the Originating Transaction
        root_chain: Chain the Originating Transaction executes on
        root_contract: Target contract of the root call
        snapshot: Committed state of every chain the call graph can reach
        coordination: Coordination chain, contract and time-out block
        seed: Determines the crosschain transaction id
        sender: Submitting account

    Returns:
        SignedEnvelope over the nest

    Raises:
        ConstructionFault: a function faulted during the construction pass
    """
    root = DeclaredCall(TxType.ORIGINATING, root_chain, root_contract, root_call)
    construction = _ConstructionPass(snapshot, sender, root_chain)
    construction.execute(root, root_chain, sender)

    nonces = {cid: state.next_nonce(sender) for cid, state in snapshot.items()}
    tx = assemble_crosschain_tx(root, sender, coordination, derive_tx_id(seed), nonces)
    logger.debug(
        f"built crosschain tx {tx.crosschain_tx_id}: {sum(1 for _ in tx.walk()) - 1} subordinates "
        f"across chains {list(tx.chains())}"
    )
    return sign_transaction(tx)


def with_subordinate_args(envelope: SignedEnvelope, path: TxPath, args: Sequence[int]) -> SignedEnvelope:
    """Replace the arguments of one nested element and re-sign as the same account"""
    element = envelope.body.at(path)
    changed = replace(element, data=CallPayload(element.data.function_name, tuple(args)))
    return sign_transaction(envelope.body.replace_at(path, changed))


def declared_call(tx_type: TxType, chain: ChainId, address: Address, function: str,
                  args: Sequence[int] = (), subordinates: Optional[List[DeclaredCall]] = None) -> DeclaredCall:
    return DeclaredCall(tx_type, chain, address, CallPayload(function, tuple(args)), list(subordinates or []))
