"""
Validator node behaviour

A node plays three roles for a crosschain transaction: coordinating node for a nest
submitted to it, processing node for elements dispatched to its chain, and ordinary
validator contributing signature shares, timers and signalling transactions.
"""
import enum
from typing import Callable, Dict, Optional, Protocol, Set, Tuple, Type

from ..contractvm import (
    ExecContext,
    ExecMode,
    LockFault,
    TrialResult,
    check_lock,
    execute_trial,
    lock_and_stage,
    lock_set,
    unlock_commit,
    unlock_discard,
)
from ..coord import (
    CoordinationContract,
    CoordinationRecord,
    CoordinationStatus,
    KeyRegistryEntry,
    SubmissionRejected,
    UnknownKeyVersion,
    commit_message,
    ignore_message,
    ready_message,
    start_message,
    view_result_message,
)
from ..tsig import Q, KeyShare, SignatureShare, ThresholdSignature, sign_share, verify
from ..txcore import SignedEnvelope, TxPath, TxType, validate_nesting, verify_envelope
from ..txcore.types import ChainId, CrosschainTxId
from ..utils.logger import setup_logger
from ..utils.rng import rng_stream
from .chain import Blockchain
from .errors import (
    CommitRejected,
    IgnoreRejected,
    NestingInvalid,
    NodeError,
    StartRejected,
    TrialReverted,
    ViewSignatureInvalid,
)
from .messages import (
    DispatchSubordinate,
    ErrorReport,
    MineSignalling,
    MineTransaction,
    NodeRef,
    ReadyMessage,
    Route,
    SignallingRequest,
    SignedViewResult,
    TimerExpiry,
    ViewRequest,
    ViewResponse,
)
from .sessions import CoordinatorSession, ExecutionSession, subordinate_paths_on

logger = setup_logger("node")


class CrashPoint(str, enum.Enum):
    """Where a coordinating node can stop for good"""
    BEFORE_START = "BeforeStart"
    AFTER_START_BEFORE_COMMIT = "AfterStartBeforeCommit"
    AFTER_COMMIT = "AfterCommit"
    SUBORDINATE_COORDINATOR = "SubordinateCoordinator"


class ByzantineStyle(str, enum.Enum):
    CRASH = "crash"
    CORRUPT = "corrupt"


class NodeHost(Protocol):
    """Services the simulator provides to nodes"""
    now: int
    seed: int
    mining_delay: int
    timer_jitter: int
    coordination: CoordinationContract

    def chain(self, chain_id: ChainId) -> Blockchain:
        ...

    def send(self, sender: NodeRef, target: NodeRef, message: object) -> None:
        ...

    def schedule(self, target: NodeRef, tick: int, work: object) -> None:
        ...

    def trace(self, kind: str, ref: Optional[NodeRef], tx_id: Optional[CrosschainTxId], **details) -> None:
        ...

    def should_crash(self, node: "ValidatorNode", point: CrashPoint, envelope: SignedEnvelope) -> bool:
        ...

    def on_started(self, record: CoordinationRecord) -> None:
        ...


class ValidatorNode:
    def __init__(self, chain: Blockchain, node_id: int, host: NodeHost):
        self.chain = chain
        self.node_id = node_id
        self.host = host
        self.ref = NodeRef(chain.chain_id, node_id)
        self.key_share: Optional[KeyShare] = None
        self.byzantine: Optional[ByzantineStyle] = None
        self.crashed = False
        self.key_cache: Dict[ChainId, KeyRegistryEntry] = {}
        self.timers: Dict[CrosschainTxId, int] = {}
        self.executions: Dict[Tuple[CrosschainTxId, TxPath], ExecutionSession] = {}
        self.coordinating: Dict[CrosschainTxId, CoordinatorSession] = {}
        self.ready_progress: Dict[CrosschainTxId, Set[TxPath]] = {}

        self._handlers: Dict[type, Callable] = {
            DispatchSubordinate: self.on_dispatch,
            ViewRequest: self.on_view_request,
            ViewResponse: self.on_view_response,
            ReadyMessage: self.on_ready,
            ErrorReport: self.on_error_report,
            SignallingRequest: self.on_signalling_request,
            MineTransaction: self.on_mine,
            MineSignalling: self.handle_signalling,
            TimerExpiry: self.on_timer_expiry,
        }

    def __repr__(self) -> str:
        return f"ValidatorNode({self.ref})"

    @property
    def alive(self) -> bool:
        return not self.crashed and self.byzantine != ByzantineStyle.CRASH

    def signature_share(self, msg: bytes) -> Optional[SignatureShare]:
        if not self.alive or self.key_share is None:
            return None
        share = sign_share(self.key_share, msg)
        if self.byzantine == ByzantineStyle.CORRUPT:
            return SignatureShare(share.index, (share.value + 1) % Q)
        return share

    def handle(self, message: object) -> None:
        handler = self._handlers.get(type(message))
        if handler is None:
            raise TypeError(f"{self} cannot handle {type(message).__name__}")
        try:
            handler(message)
        except NodeError as e:
            logger.error(f"{self} failed on {type(message).__name__}: {e}", exc_info=True)
            self._trace("node_error", None, reason=e.reason, detail=str(e))

    def _trace(self, kind: str, tx_id: Optional[CrosschainTxId], **details) -> None:
        self.host.trace(kind, self.ref, tx_id, **details)

    # Keys

    def _key(self, chain: ChainId, version: int) -> Optional[KeyRegistryEntry]:
        """Cached key of chain, refreshed from the registry when the version differs"""
        entry = self.key_cache.get(chain)
        if entry is None or entry.version != version:
            try:
                entry = self.host.coordination.registry.get(chain, version)
            except UnknownKeyVersion:
                return None
            self.key_cache[chain] = entry
            self._trace("key_fetch", None, chain=chain, version=version)
        return entry

    def _verify_signed(self, chain: ChainId, version: int, msg: bytes, sig: ThresholdSignature) -> bool:
        entry = self._key(chain, version)
        return entry is not None and verify(entry.public_key, msg, sig)

    # Coordinating node

    def on_submit_originating(self, envelope: SignedEnvelope, route: Route) -> bool:
        """Validate, threshold-sign Start and begin processing the Originating Transaction"""
        tx_id = envelope.tx_id
        self._trace("submit", tx_id, chains=list(envelope.body.chains()))
        try:
            self._check_submission(envelope)
        except NestingInvalid as e:
            self._trace("submission_rejected", tx_id, reason=e.reason, detail=str(e))
            return False

        if self.host.should_crash(self, CrashPoint.BEFORE_START, envelope):
            return False

        try:
            record = self._start(envelope)
        except StartRejected as e:
            logger.warning(f"tx {tx_id} Start rejected: {e}")
            self._trace("start_rejected", tx_id, reason=e.reason, detail=str(e))
            return False

        self._trace("start_accepted", tx_id, timeout_block=record.timeout_block, block=record.started_block)
        self.host.on_started(record)
        self.coordinating[tx_id] = CoordinatorSession.open(envelope, route)
        self.process(envelope, (), route)
        return True

    def _check_submission(self, envelope: SignedEnvelope) -> None:
        root = envelope.body
        if not verify_envelope(envelope):
            raise NestingInvalid("EOA signature does not verify")
        violations = validate_nesting(root)
        if violations:
            raise NestingInvalid("; ".join(str(v) for v in violations))
        if root.tx_type != TxType.ORIGINATING or root.chain_id != self.chain.chain_id:
            raise NestingInvalid(f"root is a {root.tx_type.value} for chain {root.chain_id}")

    def _start(self, envelope: SignedEnvelope) -> CoordinationRecord:
        root = envelope.body
        signed = self.chain.threshold_sign(start_message(envelope.tx_id, root.timeout_block, root.chain_id))
        if signed is None:
            raise StartRejected("fewer than m validators gave valid shares", reason="InsufficientShares")
        try:
            return self.host.coordination.submit_start(envelope.tx_id, root.chain_id, root.timeout_block, signed[0])
        except SubmissionRejected as e:
            raise StartRejected(str(e), reason=e.reason) from e

    def on_ready(self, msg: ReadyMessage) -> None:
        session = self.coordinating.get(msg.tx_id)
        if session is None:
            return
        valid = msg.chain in session.ready_expected and self._verify_signed(
            msg.chain, msg.key_version, ready_message(msg.tx_id, msg.chain), msg.sig
        )
        if not valid:
            self._trace("ready_invalid", msg.tx_id, chain=msg.chain)
            return
        session.ready_received.add(msg.chain)
        self._trace("ready_received", msg.tx_id, chain=msg.chain)
        self._maybe_commit(session)

    def on_error_report(self, msg: ErrorReport) -> None:
        self._trace("error_received", msg.tx_id, chain=msg.chain, path=list(msg.path), reason=msg.reason)
        self.on_ignore_trigger(msg.tx_id, msg.reason)

    def _maybe_commit(self, session: CoordinatorSession) -> None:
        if session.decision is None and session.all_ready():
            self.on_all_ready(session.envelope.tx_id)

    def on_all_ready(self, tx_id: CrosschainTxId) -> None:
        """Root mined and every subordinate chain reported Ready: threshold sign and submit Commit"""
        session = self.coordinating[tx_id]
        session.decision = "Commit"
        if self.host.should_crash(self, CrashPoint.AFTER_START_BEFORE_COMMIT, session.envelope):
            return
        try:
            self._decide(tx_id, commit_message(tx_id), self.host.coordination.submit_commit, CommitRejected)
        except CommitRejected as e:
            logger.warning(f"tx {tx_id} Commit rejected: {e}")
            self._trace("commit_rejected", tx_id, reason=e.reason, detail=str(e))
            return
        self._trace("commit_accepted", tx_id, block=self.host.coordination.clock.current_block)
        self._after_decision(session)

    def on_ignore_trigger(self, tx_id: CrosschainTxId, reason: str, detail: str = "") -> None:
        session = self.coordinating.get(tx_id)
        if session is None or session.decision is not None:
            return
        session.decision = "Ignore"
        self._trace("ignore_trigger", tx_id, reason=reason, detail=detail)
        if self.host.should_crash(self, CrashPoint.AFTER_START_BEFORE_COMMIT, session.envelope):
            return
        try:
            self._decide(tx_id, ignore_message(tx_id), self.host.coordination.submit_ignore, IgnoreRejected)
        except IgnoreRejected as e:
            logger.warning(f"tx {tx_id} Ignore rejected: {e}")
            self._trace("ignore_rejected", tx_id, reason=e.reason, detail=str(e))
            return
        self._trace("ignore_accepted", tx_id, block=self.host.coordination.clock.current_block)
        self._after_decision(session)

    def _decide(self, tx_id: CrosschainTxId, msg: bytes, submit: Callable, error: Type[NodeError]) -> None:
        signed = self.chain.threshold_sign(msg)
        if signed is None:
            raise error("fewer than m validators gave valid shares", reason="InsufficientShares")
        try:
            submit(tx_id, signed[0])
        except SubmissionRejected as e:
            raise error(str(e), reason=e.reason) from e

    def _after_decision(self, session: CoordinatorSession) -> None:
        """Ask one node per chain that executes part of the nest to mine a signalling transaction"""
        tx_id = session.envelope.tx_id
        if self.host.should_crash(self, CrashPoint.AFTER_COMMIT, session.envelope):
            return
        chains = sorted({element.chain_id for _, element in session.envelope.body.walk() if not element.is_view})
        for chain in chains:
            target = session.route.member(chain)
            self._trace("signalling_request", tx_id, target=str(target))
            if target == self.ref:
                self.on_signalling_request(SignallingRequest(tx_id))
            else:
                self.host.send(self.ref, target, SignallingRequest(tx_id))

    # Processing node

    def on_dispatch(self, msg: DispatchSubordinate) -> None:
        envelope, path = msg.envelope, msg.path
        tx_id = envelope.tx_id
        if self.host.should_crash(self, CrashPoint.SUBORDINATE_COORDINATOR, envelope):
            return
        self._trace("dispatch_received", tx_id, path=list(path))

        element = envelope.element(path)
        if (not verify_envelope(envelope) or validate_nesting(envelope.body)
                or element.chain_id != self.chain.chain_id or element.tx_type != TxType.SUBORDINATE):
            self._report_failure(envelope, path, msg.route, NestingInvalid.default_reason, "dispatched element invalid")
            return

        # The Start record must exist before a subordinate is processed
        status = self.host.coordination.status(tx_id)
        if status != CoordinationStatus.STARTED:
            self._report_failure(envelope, path, msg.route, "NotStarted", f"coordination status {status.value}")
            return
        self.process(envelope, path, msg.route)

    def on_view_request(self, msg: ViewRequest) -> None:
        element = msg.envelope.element(msg.path)
        if (not verify_envelope(msg.envelope) or element.tx_type != TxType.VIEW
                or element.chain_id != self.chain.chain_id):
            self.host.send(self.ref, msg.reply_to, ViewResponse(msg.envelope.tx_id, msg.path, error="NestingInvalid"))
            return
        self.process(msg.envelope, msg.path, msg.route, reply_to=msg.reply_to)

    def process(self, envelope: SignedEnvelope, path: TxPath, route: Route,
                reply_to: Optional[NodeRef] = None) -> None:
        """Dispatch the element's views; trial execution waits for every signed result"""
        session = ExecutionSession(envelope, path, route, reply_to)
        element = session.element
        session.pending_views = {i for i, sub in enumerate(element.subordinates) if sub.is_view}
        self.executions[(envelope.tx_id, path)] = session

        for i in sorted(session.pending_views):
            target = route.member(element.subordinates[i].chain_id)
            self._trace("view_dispatch", envelope.tx_id, path=list(path + (i,)), target=str(target))
            self.host.send(self.ref, target, ViewRequest(envelope, path + (i,), route, self.ref))

        if not session.pending_views:
            self._after_views(session)

    def on_view_response(self, msg: ViewResponse) -> None:
        session = self.executions.get((msg.tx_id, msg.requester_path))
        if session is None or session.failed or msg.position not in session.pending_views:
            return
        if msg.result is None:
            self._trace("view_failed", msg.tx_id, path=list(msg.path), reason=msg.error)
            self._fail(session, msg.error or "ViewFailed")
            return
        try:
            self._verify_view(session, msg)
        except ViewSignatureInvalid as e:
            self._trace("view_signature_invalid", msg.tx_id, path=list(msg.path), detail=str(e))
            self._fail(session, e.reason, str(e))
            return

        session.pending_views.discard(msg.position)
        session.view_results[msg.position] = msg.result.value
        self._trace("view_result", msg.tx_id, path=list(msg.path), value=msg.result.value,
                    block=msg.result.block_number)
        if not session.pending_views:
            self._after_views(session)

    def _verify_view(self, session: ExecutionSession, msg: ViewResponse) -> None:
        result: SignedViewResult = msg.result
        expected = session.element.subordinates[msg.position]
        if result.tx_id != session.tx_id or result.chain != expected.chain_id:
            raise ViewSignatureInvalid(f"result names tx {result.tx_id} on chain {result.chain}")
        signed = view_result_message(result.tx_id, result.chain, result.block_number, result.value)
        if not self._verify_signed(result.chain, result.key_version, signed, result.sig):
            raise ViewSignatureInvalid(f"view result from chain {result.chain} does not verify")

    def _after_views(self, session: ExecutionSession) -> None:
        try:
            result = self._trial(session)
        except TrialReverted as e:
            self._fail(session, e.reason, str(e))
            return
        if session.element.is_view:
            self._reply_view(session, result)
            return
        self._trace("pooled", session.tx_id, path=list(session.path))
        self.host.schedule(self.ref, self.host.now + self.host.mining_delay, MineTransaction(session.tx_id, session.path))

    def _trial(self, session: ExecutionSession) -> TrialResult:
        element = session.element
        contract = self.chain.state.get(element.to)
        if contract is None:
            raise TrialReverted(f"no contract at {element.to} on chain {self.chain.chain_id}", reason="ContractFault")
        result = execute_trial(
            contract,
            element.data,
            ExecContext.for_transaction(element, ExecMode.TRIAL),
            element.subordinates,
            session.view_results,
            chain=self.chain.state,
        )
        self._trace(
            "trial", session.tx_id, path=list(session.path), outcome=result.outcome.value,
            reason=result.reason.value if result.reason else None, detail=result.detail,
        )
        if not result.ok:
            raise TrialReverted(result.detail, reason=result.reason.value)
        return result

    def _reply_view(self, session: ExecutionSession, result: TrialResult) -> None:
        value = result.return_value
        if value is None:
            self._fail(session, "ContractFault", "view returned no value")
            return
        height = self.chain.state.height
        signed = self.chain.threshold_sign(view_result_message(session.tx_id, self.chain.chain_id, height, value))
        if signed is None:
            self._fail(session, "InsufficientShares", "view result could not be threshold signed")
            return
        sig, version = signed
        del self.executions[(session.tx_id, session.path)]
        view_result = SignedViewResult(session.tx_id, self.chain.chain_id, height, value, version, sig)
        self.host.send(self.ref, session.reply_to, ViewResponse(session.tx_id, session.path, result=view_result))

    def on_mine(self, work: MineTransaction) -> None:
        """Re-check, lock and stage; then hand subordinates on and report readiness"""
        session = self.executions.pop((work.tx_id, work.path), None)
        if session is None:
            return
        tx_id = work.tx_id
        status = self.host.coordination.status(tx_id)
        if status != CoordinationStatus.STARTED:
            self._trace("mine_skipped", tx_id, path=list(work.path), status=status.value)
            return
        try:
            result = self._trial(session)
        except TrialReverted as e:
            self._fail(session, e.reason, str(e))
            return

        element = session.element
        state = self.chain.state
        addresses = lock_set(state, element.to, result.writes)
        try:
            for address in addresses:
                check_lock(state.get(address), tx_id)
        except LockFault as e:
            self._trace("lock_fault", tx_id, path=list(work.path), fault=e.kind.value, address=e.address, owner=e.owner)
            self._fail(session, "LockFault", str(e))
            return

        for address in addresses:
            lock_and_stage(state.get(address), result.writes.get(address, {}), tx_id)
            self._trace("lock", tx_id, address=address)
        self.chain.record_locks(tx_id, addresses)
        state.bump_nonce(element.sender)
        state.height += 1
        self._trace("mined", tx_id, path=list(work.path), block=state.height, locked=addresses)

        self._set_timers(tx_id, session.envelope.body.timeout_block)
        self._dispatch_subordinates(session)
        self._after_mining(session)

    def _set_timers(self, tx_id: CrosschainTxId, timeout_block: int) -> None:
        """Every live validator of the chain waits for the time-out plus its own random extra"""
        timeout_tick = self.host.coordination.clock.timeout_tick(timeout_block)
        for validator in self.chain.live_validators():
            if tx_id in validator.timers:
                continue
            stream = rng_stream(self.host.seed, f"node/timer/{self.chain.chain_id}/{validator.node_id}/{tx_id}")
            expiry = timeout_tick + stream.draw_range(0, self.host.timer_jitter)
            validator.timers[tx_id] = expiry
            validator._trace("timer_set", tx_id, expiry=expiry)
            self.host.schedule(validator.ref, expiry, TimerExpiry(tx_id, expiry))

    def _dispatch_subordinates(self, session: ExecutionSession) -> None:
        for i, sub in enumerate(session.element.subordinates):
            if sub.tx_type != TxType.SUBORDINATE:
                continue
            path = session.path + (i,)
            target = session.route.member(sub.chain_id)
            self._trace("dispatch", session.tx_id, path=list(path), target=str(target))
            self.host.send(self.ref, target, DispatchSubordinate(session.envelope, path, session.route))

    def _after_mining(self, session: ExecutionSession) -> None:
        tx_id = session.tx_id
        if not session.path:
            coordinator = self.coordinating.get(tx_id)
            if coordinator is not None:
                coordinator.root_mined = True
                self._maybe_commit(coordinator)
            return

        mined = self.ready_progress.setdefault(tx_id, set())
        mined.add(session.path)
        if mined != subordinate_paths_on(session.envelope, self.chain.chain_id):
            return
        signed = self.chain.threshold_sign(ready_message(tx_id, self.chain.chain_id))
        if signed is None:
            self._fail(session, "InsufficientShares", "Ready could not be threshold signed")
            return
        sig, version = signed
        self._trace("ready_sent", tx_id, chain=self.chain.chain_id, key_version=version)
        self.host.send(self.ref, session.route.coordinator, ReadyMessage(tx_id, self.chain.chain_id, version, sig))

    def _fail(self, session: ExecutionSession, reason: str, detail: str = "") -> None:
        session.failed = True
        self.executions.pop((session.tx_id, session.path), None)
        self._report_failure(session.envelope, session.path, session.route, reason, detail, session.reply_to)

    def _report_failure(self, envelope: SignedEnvelope, path: TxPath, route: Route, reason: str,
                        detail: str = "", reply_to: Optional[NodeRef] = None) -> None:
        """Views answer their requester; everything else ends in the coordinating node's Ignore flow"""
        tx_id = envelope.tx_id
        if reply_to is not None:
            self.host.send(self.ref, reply_to, ViewResponse(tx_id, path, error=reason))
        elif route.coordinator == self.ref:
            self.on_ignore_trigger(tx_id, reason, detail)
        else:
            self._trace("error_report", tx_id, path=list(path), reason=reason, detail=detail)
            self.host.send(self.ref, route.coordinator, ErrorReport(tx_id, self.chain.chain_id, path, reason))

    # Signalling and timers

    def on_signalling_request(self, msg: SignallingRequest) -> None:
        self._trace("signalling_submitted", msg.tx_id)
        self.host.schedule(self.ref, self.host.now + self.host.mining_delay, MineSignalling(msg.tx_id))

    def handle_signalling(self, work: MineSignalling) -> None:
        """Unlock everything this chain holds for the transaction the way the coordination contract says"""
        tx_id = work.tx_id
        status = self.host.coordination.status(tx_id)
        state = self.chain.state
        state.height += 1
        self._trace("signalling_mined", tx_id, status=status.value, block=state.height)
        if not status.terminal:
            logger.warning(f"signalling for tx {tx_id} on chain {self.chain.chain_id} while {status.value}")
            return

        for address in self.chain.locks.pop(tx_id, []):
            contract = state.get(address)
            if status == CoordinationStatus.COMMITTED:
                unlock_commit(contract)
                mode = "commit"
            else:
                unlock_discard(contract)
                mode = "discard"
            self._trace("unlock", tx_id, address=address, mode=mode)

        for validator in self.chain.live_validators():
            if validator.timers.pop(tx_id, None) is not None:
                validator._trace("timer_cancel", tx_id)

    def on_timer_expiry(self, work: TimerExpiry) -> None:
        if self.timers.get(work.tx_id) != work.expiry:
            return
        del self.timers[work.tx_id]
        status = self.host.coordination.status(work.tx_id)
        self._trace("timer_fire", work.tx_id, status=status.value)
        self.on_signalling_request(SignallingRequest(work.tx_id))
