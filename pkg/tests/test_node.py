"""
Validator node tests against a recording host
"""
from dataclasses import replace

import pytest

from src.cli.scenarios import load_scenario
from src.contractvm import LIBRARY
from src.coord import CoordClock, CoordinationContract, CoordinationStatus, KeyRegistry, ready_message
from src.node import (
    Blockchain,
    ByzantineStyle,
    CoordinatorSession,
    CrashPoint,
    MineSignalling,
    MineTransaction,
    NodeRef,
    ReadyMessage,
    Route,
    TimerExpiry,
    ValidatorNode,
    ViewResponse,
    subordinate_paths_on,
)
from src.sim import Simulation, check_liveness, check_safety, run
from src.tsig import Q, ThresholdConfig, ThresholdSignature, combine, dealer_keygen, sign_share, verify
from src.txcore import CallPayload, CoordinationParams, SignedEnvelope
from src.txcore.builder import build_crosschain_tx

EOA = 0xE0A
HOTEL = 200
CFG = ThresholdConfig(n=4, m=3)

class RecordingHost:
    """Minimal NodeHost: remembers what nodes send, schedule and trace"""

    def __init__(self, crash_points=()):
        self.now = 0
        self.seed = 1
        self.mining_delay = 2
        self.timer_jitter = 20
        self.registry = KeyRegistry()
        self.coordination = CoordinationContract(100, 0xC00D, self.registry, CoordClock(ticks_per_block=10))
        self.chains = {}
        self.crash_points = set(crash_points)
        self.sent = []
        self.scheduled = []
        self.records = []
        self.started = []

    def chain(self, chain_id):
        return self.chains[chain_id]

    def send(self, sender, target, message):
        self.sent.append((sender, target, message))

    def schedule(self, target, tick, work):
        self.scheduled.append((target, tick, work))

    def trace(self, kind, ref, tx_id, **details):
        self.records.append((kind, ref, tx_id, details))

    def should_crash(self, node, point, envelope):
        if point in self.crash_points:
            node.crashed = True
            return True
        return False

    def on_started(self, record):
        self.started.append(record)

    def kinds(self):
        return [kind for kind, _, _, _ in self.records]

    def advance(self, tick):
        self.now = tick
        self.coordination.clock.advance_to_tick(tick)

def make_chain(host: RecordingHost, chain_id: int = 1) -> Blockchain:
    chain = Blockchain(chain_id, CFG)
    chain.validators = [ValidatorNode(chain, i, host) for i in range(CFG.n)]
    chain.state.deploy(HOTEL, True, LIBRARY.functions("travel.inventory"), {5: 2}, body_name="travel.inventory")
    host.registry.register_key(chain.deal_keys(host.seed))
    host.chains[chain_id] = chain
    for validator in chain.validators:
        validator.key_cache = {chain_id: host.registry.latest(chain_id)}
    return chain

def reserve_nest(chain: Blockchain) -> SignedEnvelope:
    return build_crosschain_tx(
        CallPayload("reserve", (5,)), chain.chain_id, HOTEL, {chain.chain_id: chain.state},
        CoordinationParams(100, 0xC00D, 30), seed=3, sender=EOA,
    )

def submit(host: RecordingHost, chain: Blockchain) -> SignedEnvelope:
    envelope = reserve_nest(chain)
    route = Route.from_members({chain.chain_id: 0}, chain.chain_id)
    assert chain.validators[0].on_submit_originating(envelope, route)
    return envelope

def run_scheduled(host: RecordingHost, chain: Blockchain, kind) -> None:
    """Deliver the oldest scheduled work item of a kind"""
    for i, (target, tick, work) in enumerate(host.scheduled):
        if isinstance(work, kind):
            del host.scheduled[i]
            host.advance(max(host.now, tick))
            chain.validators[target.node].handle(work)
            return
    raise AssertionError(f"nothing scheduled of kind {kind.__name__}")

class TestBlockchain:
    def test_threshold_sign_verifies_under_public_key(self):
        chain = make_chain(RecordingHost())
        sig, version = chain.threshold_sign(b"hello")
        assert version == 1
        assert verify(chain.public_key, b"hello", sig)

    def test_one_silent_validator_is_tolerated(self):
        chain = make_chain(RecordingHost())
        chain.validators[3].crashed = True
        assert chain.threshold_sign(b"hello") is not None

    def test_below_threshold_cannot_sign(self):
        chain = make_chain(RecordingHost())
        chain.validators[2].crashed = True
        chain.validators[3].byzantine = ByzantineStyle.CRASH
        assert chain.threshold_sign(b"hello") is None

    def test_corrupt_share_is_skipped(self):
        chain = make_chain(RecordingHost())
        chain.validators[0].byzantine = ByzantineStyle.CORRUPT
        honest = chain.validators[1].signature_share(b"m")
        assert chain.validators[0].signature_share(b"m").index == 1
        assert honest is not None
        sig, _ = chain.threshold_sign(b"m")
        assert verify(chain.public_key, b"m", sig)

    def test_rekeying_bumps_the_version(self):
        host = RecordingHost()
        chain = make_chain(host)
        old_key = chain.public_key
        entry = chain.deal_keys(host.seed)
        assert entry.version == 2
        assert entry.public_key != old_key
        sig, version = chain.threshold_sign(b"m")
        assert version == 2
        assert verify(entry.public_key, b"m", sig)
        assert not verify(old_key, b"m", sig)

    def test_live_validators(self):
        chain = make_chain(RecordingHost())
        chain.validators[1].crashed = True
        chain.validators[2].byzantine = ByzantineStyle.CORRUPT
        assert [v.node_id for v in chain.live_validators()] == [0, 2, 3]

class TestRoutingTypes:
    def test_route_members(self):
        route = Route.from_members({3: 1, 1: 0, 2: 2}, root_chain=1)
        assert route.coordinator == NodeRef(1, 0)
        assert route.member(2) == NodeRef(2, 2)
        assert route.chains() == (1, 2, 3)
        with pytest.raises(KeyError):
            route.member(9)

    def test_view_response_positions(self):
        response = ViewResponse(tx_id=1, path=(0, 2))
        assert response.requester_path == (0,)
        assert response.position == 2

    def test_sessions_expect_ready_from_subordinate_chains(self, func_b_chains, coordination):
        envelope = build_crosschain_tx(CallPayload("funcB", (1,)), 2, 0xB0, func_b_chains, coordination, 1, EOA)
        session = CoordinatorSession.open(envelope, Route.from_members({2: 0, 3: 0, 4: 0}, 2))
        # funcC is a view, so only chain 4 reports Ready
        assert session.ready_expected == (4,)
        assert subordinate_paths_on(envelope, 4) == {(1,)}
        assert subordinate_paths_on(envelope, 3) == set()
        session.root_mined = True
        assert not session.all_ready()
        session.ready_received.add(4)
        assert session.all_ready()

class TestCoordinatingNode:
    def test_tampered_submission_is_rejected_before_start(self):
        host = RecordingHost()
        chain = make_chain(host)
        envelope = reserve_nest(chain)
        forged = replace(envelope, eoa_signature=bytes(32))
        route = Route.from_members({1: 0}, 1)
        assert not chain.validators[0].on_submit_originating(forged, route)
        assert "submission_rejected" in host.kinds()
        assert host.coordination.status(envelope.tx_id) == CoordinationStatus.NOT_STARTED

    def test_start_needs_threshold_shares(self):
        host = RecordingHost()
        chain = make_chain(host)
        chain.validators[2].crashed = True
        chain.validators[3].crashed = True
        envelope = reserve_nest(chain)
        assert not chain.validators[0].on_submit_originating(envelope, Route.from_members({1: 0}, 1))
        rejected = [details for kind, _, _, details in host.records if kind == "start_rejected"]
        assert rejected[0]["reason"] == "InsufficientShares"

    def test_crash_before_start(self):
        host = RecordingHost(crash_points={CrashPoint.BEFORE_START})
        chain = make_chain(host)
        envelope = reserve_nest(chain)
        assert not chain.validators[0].on_submit_originating(envelope, Route.from_members({1: 0}, 1))
        assert not chain.validators[0].alive
        assert host.coordination.records == {}

    def test_single_chain_nest_commits(self):
        host = RecordingHost()
        chain = make_chain(host)
        envelope = submit(host, chain)
        tx_id = envelope.tx_id
        assert host.coordination.status(tx_id) == CoordinationStatus.STARTED
        assert host.started[0].timeout_block == 30
        assert host.scheduled[0][1] == 2

        run_scheduled(host, chain, MineTransaction)
        hotel = chain.state.get(HOTEL)
        # Nothing dispatched or awaited, so the root's mining is enough to commit
        assert host.coordination.status(tx_id) == CoordinationStatus.COMMITTED
        assert hotel.lock_owner == tx_id
        assert hotel.provisional_overlay == {5: 1}
        assert hotel.read(5) == 2
        assert all(tx_id in v.timers for v in chain.validators)
        assert chain.state.next_nonce(EOA) == 1

        run_scheduled(host, chain, MineSignalling)
        assert hotel.lock_owner is None
        assert hotel.read(5) == 1
        assert host.kinds().count("timer_cancel") == CFG.n
        assert all(tx_id not in v.timers for v in chain.validators)
        unlock = [details for kind, _, _, details in host.records if kind == "unlock"]
        assert unlock == [{"address": HOTEL, "mode": "commit"}]

    def test_timers_stay_within_jitter(self):
        host = RecordingHost()
        chain = make_chain(host)
        envelope = submit(host, chain)
        run_scheduled(host, chain, MineTransaction)
        timeout_tick = host.coordination.clock.timeout_tick(30)
        expiries = [work.expiry for _, _, work in host.scheduled if isinstance(work, TimerExpiry)]
        assert len(expiries) == CFG.n
        assert all(timeout_tick <= e <= timeout_tick + host.timer_jitter for e in expiries)
        assert envelope.tx_id

    def test_crash_after_start_falls_back_to_timers(self):
        host = RecordingHost(crash_points={CrashPoint.AFTER_START_BEFORE_COMMIT})
        chain = make_chain(host)
        envelope = submit(host, chain)
        tx_id = envelope.tx_id
        run_scheduled(host, chain, MineTransaction)
        assert not chain.validators[0].alive
        assert host.coordination.status(tx_id) == CoordinationStatus.STARTED

        validator = chain.validators[1]
        expiry = validator.timers[tx_id]
        host.advance(expiry)
        validator.handle(TimerExpiry(tx_id, expiry + 1))
        assert "timer_fire" not in host.kinds()

        validator.handle(TimerExpiry(tx_id, expiry))
        assert "timer_fire" in host.kinds()
        run_scheduled(host, chain, MineSignalling)
        hotel = chain.state.get(HOTEL)
        assert hotel.lock_owner is None
        assert hotel.read(5) == 2
        unlock = [details for kind, _, _, details in host.records if kind == "unlock"]
        assert unlock == [{"address": HOTEL, "mode": "discard"}]

    def test_ready_from_unexpected_chain_is_ignored(self):
        host = RecordingHost()
        chain = make_chain(host)
        other = make_chain(host, chain_id=2)
        envelope = submit(host, chain)
        sig, version = other.threshold_sign(ready_message(envelope.tx_id, 2))

        chain.validators[0].handle(ReadyMessage(envelope.tx_id, 2, version, sig))
        assert "ready_invalid" in host.kinds()

    def test_unknown_message_type(self):
        host = RecordingHost()
        chain = make_chain(host)
        with pytest.raises(TypeError):
            chain.validators[0].handle(object())


def run_rewriting(monkeypatch, name, rewrite):
    """Run a packaged scenario with every message passed through rewrite on its way out"""
    original = Simulation.send

    def send(sim, sender, target, message):
        original(sim, sender, target, rewrite(message))

    monkeypatch.setattr(Simulation, "send", send)
    config = load_scenario(name)
    trace, final = run(config, 1)
    assert check_safety(trace, final).passed
    assert check_liveness(trace, final, config).passed
    return trace, final


def bump(sig: ThresholdSignature) -> ThresholdSignature:
    return ThresholdSignature((sig.value + 1) % Q)


def foreign_ready_signature(msg: ReadyMessage) -> ThresholdSignature:
    cfg = ThresholdConfig(n=4, m=3)
    stranger = dealer_keygen(cfg, seed=99)
    payload = ready_message(msg.tx_id, msg.chain)
    return combine([sign_share(share, payload) for share in stranger.shares[:3]], cfg)


class TestForgedMessages:
    def test_tampered_view_signature_ignores_the_nest(self, monkeypatch):
        def tamper(message):
            if isinstance(message, ViewResponse) and message.result is not None:
                return replace(message, result=replace(message.result, sig=bump(message.result.sig)))
            return message

        trace, final = run_rewriting(monkeypatch, "nested_params", tamper)
        kinds = [r.kind for r in trace]
        assert kinds.count("view_signature_invalid") == 1
        assert "view_result" not in kinds
        assert "commit_accepted" not in kinds
        assert final.status_of("funcB") == "Ignored"
        assert final.storage(4, 208).get(1, 0) == 0

    @pytest.mark.parametrize("forge", [
        lambda msg: bump(msg.sig),
        foreign_ready_signature,
    ], ids=["altered", "foreign_key"])
    def test_forged_ready_never_counts_towards_commit(self, monkeypatch, forge):
        def tamper(message):
            if isinstance(message, ReadyMessage):
                return replace(message, sig=forge(message))
            return message

        trace, final = run_rewriting(monkeypatch, "travel_agent_single", tamper)
        kinds = [r.kind for r in trace]
        assert kinds.count("ready_invalid") == 2
        assert "ready_received" not in kinds
        assert "commit_accepted" not in kinds
        assert final.status_of("booking") == "Ignored"
        assert {r.details["mode"] for r in trace if r.kind == "unlock"} == {"discard"}
