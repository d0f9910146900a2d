"""
Discrete-event simulator

A single-threaded event loop over a heap of (tick, seq) ordered events. The simulator
is the NodeHost of every validator: it carries messages between nodes (subject to
loss and delay faults), queues the work nodes schedule for themselves, owns the
coordination chain and its clock, and records the trace.
"""
import heapq
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from ..contractvm import LIBRARY
from ..coord import CoordClock, CoordinationContract, CoordinationRecord, KeyRegistry
from ..node import Blockchain, CrashPoint, NodeRef, Route, ValidatorNode
from ..tsig import ThresholdConfig
from ..txcore import CallPayload, ConstructionFault, CoordinationParams, SignedEnvelope, TxType, sign_transaction
from ..txcore.builder import assemble_crosschain_tx, build_crosschain_tx, derive_tx_id, with_subordinate_args
from ..txcore.types import ChainId, CrosschainTxId
from ..utils.logger import setup_logger
from ..utils.rng import rng_stream
from .config import ScenarioConfig, SubmissionConfig
from .errors import ConfigError, SimulationError, UnknownSite
from .faults import FaultKind, FaultSpec, max_fault_delay
from .state import FinalState
from .trace import TraceRecord

logger = setup_logger("sim")


@dataclass(order=True)
class SimEvent:
    tick: int
    seq: int
    target: Optional[NodeRef] = field(compare=False)
    payload: object = field(compare=False)


@dataclass(frozen=True)
class SubmitNest:
    label: str


@dataclass(frozen=True)
class CoordinationTimeout:
    tx_id: CrosschainTxId


@dataclass(frozen=True)
class KeyRotation:
    chain: ChainId


class Simulation:
    """
    One deterministic run of a scenario

    Args:
        config: Validated scenario
        seed: Run seed; together with config and faults it fixes the trace
        faults: Faults applied on top of the scenario's own
        allow_outside: Run even when byzantine validators reach a chain's threshold
    """

    def __init__(self, config: ScenarioConfig, seed: int, faults: Iterable[FaultSpec] = (),
                 allow_outside: bool = False):
        self.config = config
        self.seed = seed
        self.allow_outside = allow_outside
        self.mining_delay = config.timing.mining_delay
        self.timer_jitter = config.timing.timer_jitter
        self.now = 0

        self.registry = KeyRegistry()
        self.coordination = CoordinationContract(
            config.coordination.chain,
            config.coordination.contract,
            self.registry,
            CoordClock(ticks_per_block=config.timing.ticks_per_block),
        )
        self.chains: Dict[ChainId, Blockchain] = {}
        self.faults: List[FaultSpec] = []
        self.outside_assumptions = False
        self.submissions: Dict[str, Optional[CrosschainTxId]] = {}
        self.records: List[TraceRecord] = []

        self._queue: List[SimEvent] = []
        self._seq = 0
        self._started = False
        self._fired: Set[int] = set()
        self._loss_rng = rng_stream(seed, "sim/loss")
        self._delay_rng = rng_stream(seed, "sim/delay")

        self._build_topology()
        for fault in list(config.faults) + list(faults):
            self.inject(fault)

    def _build_topology(self) -> None:
        for chain_cfg in sorted(self.config.chains, key=lambda c: c.chain_id):
            chain = Blockchain(chain_cfg.chain_id, ThresholdConfig(chain_cfg.validators, chain_cfg.threshold))
            chain.validators = [ValidatorNode(chain, i, self) for i in range(chain_cfg.validators)]
            for contract in chain_cfg.contracts:
                chain.state.deploy(
                    contract.address, contract.lockable, LIBRARY.functions(contract.body),
                    contract.storage, body_name=contract.body, name=contract.name,
                )
            self.registry.register_key(chain.deal_keys(self.seed))
            self.chains[chain.chain_id] = chain

        # Every node starts out knowing every chain's genesis key
        genesis = {chain_id: self.registry.latest(chain_id) for chain_id in self.chains}
        for chain in self.chains.values():
            for validator in chain.validators:
                validator.key_cache = dict(genesis)

    # NodeHost

    def chain(self, chain_id: ChainId) -> Blockchain:
        return self.chains[chain_id]

    def node(self, ref: NodeRef) -> ValidatorNode:
        return self.chains[ref.chain].validators[ref.node]

    def send(self, sender: NodeRef, target: NodeRef, message: object) -> None:
        kind = message.kind
        tx_id = getattr(message, "tx_id", None)
        if tx_id is None:
            tx_id = message.envelope.tx_id
        for fault in self.faults:
            if fault.kind == FaultKind.MESSAGE_LOSS and fault.applies_to(kind) and self._loss_rng.chance(fault.rate):
                self.trace("message_lost", sender, tx_id, message=kind.value, target=str(target))
                return
        delay = self.config.timing.network_latency
        for fault in self.faults:
            if fault.kind == FaultKind.MESSAGE_DELAY:
                delay += self._delay_rng.draw_range(fault.min_delay, fault.max_delay)
        self._push(self.now + delay, target, message)

    def schedule(self, target: NodeRef, tick: int, work: object) -> None:
        self._push(tick, target, work)

    def trace(self, kind: str, ref: Optional[NodeRef], tx_id: Optional[CrosschainTxId], **details) -> None:
        record = TraceRecord(
            seq=len(self.records),
            tick=self.now,
            chain=ref.chain if ref is not None else None,
            node=ref.node if ref is not None else None,
            kind=kind,
            tx_id=tx_id,
            details=details,
        )
        self.records.append(record)
        logger.debug(f"[{self.now}] {kind} {ref} tx={tx_id} {details}")

    def should_crash(self, node: ValidatorNode, point: CrashPoint, envelope: SignedEnvelope) -> bool:
        """Fire the first unfired crash fault set at this point and site; each fires once"""
        for index, fault in enumerate(self.faults):
            if fault.kind != FaultKind.CRASH_COORDINATOR or fault.point != point or index in self._fired:
                continue
            site = fault.chain
            if site is None and point == CrashPoint.SUBORDINATE_COORDINATOR:
                site = _first_subordinate_chain(envelope)
            if site is not None and site != node.chain.chain_id:
                continue
            self._fired.add(index)
            node.crashed = True
            self.trace("crash", node.ref, envelope.tx_id, point=point.value)
            logger.info(f"node {node.ref} crashed at {point.value} for tx {envelope.tx_id}")
            return True
        return False

    def on_started(self, record: CoordinationRecord) -> None:
        tick = self.coordination.clock.timeout_tick(record.timeout_block)
        self._push(tick, None, CoordinationTimeout(record.tx_id))

    # Faults

    def inject(self, fault: FaultSpec) -> None:
        """
        Apply a fault before the run starts

        Raises:
            UnknownSite: the fault names a chain that is not simulated, or more
                byzantine validators than the chain has
            SimulationError: the run already started
        """
        if self._started:
            raise SimulationError("faults must be injected before the run starts")
        if fault.chain is not None and fault.chain not in self.chains:
            raise UnknownSite(f"fault {fault.describe()} names unknown chain {fault.chain}")

        if fault.kind == FaultKind.BYZANTINE_VALIDATORS:
            targets = [fault.chain] if fault.chain is not None else sorted(self.chains)
            for chain_id in targets:
                chain = self.chains[chain_id]
                if fault.count > len(chain.validators):
                    raise UnknownSite(f"chain {chain_id} has only {len(chain.validators)} validators")
                # Highest node ids turn byzantine; multichain members usually sit on low ids
                for validator in chain.validators[-fault.count:]:
                    validator.byzantine = fault.style
                byzantine = sum(1 for v in chain.validators if v.byzantine is not None)
                if byzantine >= chain.cfg.m:
                    self.outside_assumptions = True
                    logger.warning(f"chain {chain_id} has {byzantine} byzantine validators, threshold {chain.cfg.m}")
        self.faults.append(fault)

    # Event loop

    def _push(self, tick: int, target: Optional[NodeRef], payload: object) -> None:
        heapq.heappush(self._queue, SimEvent(tick, self._seq, target, payload))
        self._seq += 1

    def run(self) -> Tuple[List[TraceRecord], FinalState]:
        """
        Execute events until the queue is empty or max_ticks is passed

        Raises:
            ConfigError: the run is outside the protocol's assumptions and
                allow_outside was not given
        """
        if self.outside_assumptions and not self.allow_outside:
            raise ConfigError("byzantine validators reach a chain's signing threshold; allow_outside not set")
        if self._started:
            raise SimulationError("a simulation runs once")
        self._started = True

        self.trace("run_start", None, None, scenario=self.config.name, seed=self.seed,
                   faults=[fault.describe() for fault in self.faults],
                   outside_assumptions=self.outside_assumptions)
        for sub in self.config.submissions:
            self._push(sub.at_tick, None, SubmitNest(sub.label))
        for chain_cfg in self.config.chains:
            if chain_cfg.rotate_key_at_tick is not None:
                self._push(chain_cfg.rotate_key_at_tick, None, KeyRotation(chain_cfg.chain_id))

        max_ticks = self.config.timing.max_ticks
        quiescent = True
        while self._queue:
            event = heapq.heappop(self._queue)
            if event.tick > max_ticks:
                self.now = max_ticks
                quiescent = False
                self.trace("max_ticks", None, None, pending=len(self._queue) + 1)
                logger.warning(f"{self.config.name}: events still pending at max_ticks {max_ticks}")
                break
            self.now = event.tick
            self.coordination.clock.advance_to_tick(self.now)
            self._deliver(event)

        self.trace("run_end", None, None, quiescent=quiescent, block=self.coordination.clock.current_block)
        final = self._final_state(quiescent)
        logger.info(f"{self.config.name} seed {self.seed}: {final.coordination} at tick {self.now}")
        return list(self.records), final

    def _deliver(self, event: SimEvent) -> None:
        payload = event.payload
        if isinstance(payload, SubmitNest):
            self._submit(self.config.submission(payload.label))
        elif isinstance(payload, CoordinationTimeout):
            status = self.coordination.status(payload.tx_id)
            self.trace("coord_timeout", None, payload.tx_id, status=status.value,
                       block=self.coordination.clock.current_block)
        elif isinstance(payload, KeyRotation):
            chain = self.chains[payload.chain]
            self.registry.register_key(chain.deal_keys(self.seed))
            self.trace("key_rotated", None, None, chain=chain.chain_id, version=chain.key_version)
        else:
            node = self.node(event.target)
            # Messages to a crashed node, or to one that never answers, go nowhere
            if node.alive:
                node.handle(payload)

    # Submissions

    def _submit(self, sub: SubmissionConfig) -> None:
        account = self.config.multichain_node(sub.multichain_node)
        self.submissions[sub.label] = None
        coordinator_id = account.members.get(sub.chain)
        if coordinator_id is None:
            self.trace("submission_rejected", None, None, label=sub.label, reason="MultichainNodeSpan",
                       missing=[sub.chain])
            return

        coordinator = NodeRef(sub.chain, coordinator_id)
        try:
            envelope = self._build(sub, account.account)
        except ConstructionFault as e:
            logger.warning(f"submission {sub.label} faulted during construction: {e}")
            self.trace("construction_fault", coordinator, None, label=sub.label, detail=str(e))
            return

        tx_id = envelope.tx_id
        self.submissions[sub.label] = tx_id
        chains = envelope.body.chains()
        missing = [chain for chain in chains if chain not in account.members]
        if missing:
            logger.warning(f"submission {sub.label}: multichain node {account.name} lacks chains {missing}")
            self.trace("submission_rejected", coordinator, tx_id, label=sub.label, reason="MultichainNodeSpan",
                       missing=missing)
            return

        node = self.node(coordinator)
        if not node.alive:
            self.trace("submission_dropped", coordinator, tx_id, label=sub.label)
            return
        route = Route.from_members({chain: account.members[chain] for chain in chains}, sub.chain)
        node.on_submit_originating(envelope, route)

    def _build(self, sub: SubmissionConfig, sender: int) -> SignedEnvelope:
        """The submitting account builds and signs the nest against committed state"""
        clock = self.coordination.clock
        coordination = CoordinationParams(
            self.config.coordination.chain,
            self.config.coordination.contract,
            clock.current_block + sub.timeout_blocks,
        )
        builder_seed = rng_stream(self.seed, f"sim/submission/{sub.label}").next_u64()

        if sub.subordinates is not None:
            nonces = {chain_id: chain.state.next_nonce(sender) for chain_id, chain in sorted(self.chains.items())}
            tx = assemble_crosschain_tx(sub.declared_root(), sender, coordination, derive_tx_id(builder_seed), nonces)
            envelope = sign_transaction(tx)
        else:
            snapshot = {chain_id: chain.state.snapshot() for chain_id, chain in sorted(self.chains.items())}
            for override in sub.snapshot_overrides:
                snapshot[override.chain].get(override.contract).committed_storage.update(override.storage)
            envelope = build_crosschain_tx(
                CallPayload(sub.function, tuple(sub.args)), sub.chain, sub.contract,
                snapshot, coordination, builder_seed, sender,
            )

        for tamper in sub.tamper:
            envelope = with_subordinate_args(envelope, tuple(tamper.path), tamper.args)
        return envelope

    def _final_state(self, quiescent: bool) -> FinalState:
        return FinalState(
            chains={str(chain_id): chain.state.dump() for chain_id, chain in sorted(self.chains.items())},
            coordination=self.coordination.dump(),
            current_block=self.coordination.clock.current_block,
            end_tick=self.now,
            quiescent=quiescent,
            outside_assumptions=self.outside_assumptions,
            submissions=dict(self.submissions),
            faults=[fault.describe() for fault in self.faults],
            max_fault_delay=max_fault_delay(self.faults),
        )


def _first_subordinate_chain(envelope: SignedEnvelope) -> Optional[ChainId]:
    for _, element in envelope.body.walk():
        if element.tx_type == TxType.SUBORDINATE:
            return element.chain_id
    return None


def run(config: ScenarioConfig, seed: int, faults: Iterable[FaultSpec] = (),
        allow_outside: bool = False) -> Tuple[List[TraceRecord], FinalState]:
    """Build a Simulation and run it to completion"""
    return Simulation(config, seed, faults, allow_outside).run()
