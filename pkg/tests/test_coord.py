"""
Coordination chain tests: clock, key registry, coordination contract state machine
"""
from itertools import product

import pytest

from src.coord import (
    BadSignature,
    CoordClock,
    CoordinationContract,
    CoordinationStatus,
    DuplicateTxId,
    KeyRegistry,
    KeyRegistryEntry,
    PastTimeout,
    StaleVersion,
    SubmissionRejected,
    TimeoutInPast,
    UnknownKeyVersion,
    WrongState,
    commit_message,
    ignore_message,
    start_message,
    view_result_message,
)
from src.tsig import Q, ThresholdConfig, ThresholdSignature, combine, dealer_keygen, lagrange_at_zero, sign_share

CFG = ThresholdConfig(n=4, m=3)
ORIGIN = 1
TX = 7
TIMEOUT = 50

KEYS = dealer_keygen(CFG, seed=11)
OTHER_KEYS = dealer_keygen(CFG, seed=12)


def threshold_sign(msg: bytes, keys=KEYS, count: int = CFG.m) -> ThresholdSignature:
    shares = [sign_share(share, msg) for share in keys.shares[:count]]
    if count >= CFG.m:
        return combine(shares, CFG)
    # Interpolating too few shares gives a value that does not verify
    lambdas = lagrange_at_zero([share.index for share in shares])
    return ThresholdSignature(sum(lam * share.value for lam, share in zip(lambdas, shares)) % Q)


def make_contract(block: int = 10) -> CoordinationContract:
    registry = KeyRegistry()
    registry.register_key(KeyRegistryEntry(ORIGIN, 1, KEYS.public_key, CFG))
    registry.register_key(KeyRegistryEntry(2, 1, OTHER_KEYS.public_key, CFG))
    clock = CoordClock(ticks_per_block=10)
    clock.advance_clock(block * 10)
    return CoordinationContract(100, 0xC00D, registry, clock)


def start(contract: CoordinationContract, tx_id: int = TX, timeout: int = TIMEOUT):
    return contract.submit_start(tx_id, ORIGIN, timeout, threshold_sign(start_message(tx_id, timeout, ORIGIN)))


class TestCoordClock:
    def test_advance_with_carry(self):
        clock = CoordClock(ticks_per_block=10)
        assert clock.advance_clock(25) == 2
        assert clock.carry == 5

    def test_zero_ticks(self):
        clock = CoordClock(ticks_per_block=10, current_block=4)
        assert clock.advance_clock(0) == 4

    def test_carry_accumulates(self):
        clock = CoordClock(ticks_per_block=10)
        clock.advance_clock(5)
        assert clock.advance_clock(5) == 1
        assert clock.carry == 0

    def test_negative_ticks(self):
        with pytest.raises(ValueError):
            CoordClock().advance_clock(-1)

    def test_advance_to_tick_never_goes_back(self):
        clock = CoordClock(ticks_per_block=10)
        assert clock.advance_to_tick(37) == 3
        assert clock.advance_to_tick(12) == 3
        assert clock.advance_to_tick(40) == 4

    def test_timeout_tick(self):
        assert CoordClock(ticks_per_block=10).timeout_tick(50) == 510


class TestKeyRegistry:
    def test_first_registration(self):
        registry = KeyRegistry()
        registry.register_key(KeyRegistryEntry(3, 1, 99, CFG))
        assert registry.get(3, 1).public_key == 99
        assert registry.latest(3).version == 1

    def test_reregistering_a_version(self):
        registry = KeyRegistry()
        registry.register_key(KeyRegistryEntry(3, 1, 99, CFG))
        with pytest.raises(StaleVersion):
            registry.register_key(KeyRegistryEntry(3, 1, 98, CFG))

    def test_latest_follows_new_versions(self):
        registry = KeyRegistry()
        registry.register_key(KeyRegistryEntry(3, 1, 99, CFG))
        registry.register_key(KeyRegistryEntry(3, 2, 98, CFG))
        assert registry.latest(3).public_key == 98
        assert registry.get(3, 1).public_key == 99

    def test_unknown_version(self):
        registry = KeyRegistry()
        assert registry.latest(3) is None
        with pytest.raises(UnknownKeyVersion):
            registry.get(3, 1)


def test_message_layouts():
    assert start_message(1, 2, 3) == b"START" + bytes(7) + b"\x01" + bytes(7) + b"\x02" + bytes(7) + b"\x03"
    assert commit_message(1) != ignore_message(1)
    assert view_result_message(1, 2, 3, -1)[-8:] == b"\xff" * 8


class TestSubmissions:
    def test_valid_start(self):
        contract = make_contract()
        record = start(contract)
        assert record.status == CoordinationStatus.STARTED
        assert contract.status(TX) == CoordinationStatus.STARTED

    def test_start_with_too_few_shares(self):
        contract = make_contract()
        sig = threshold_sign(start_message(TX, TIMEOUT, ORIGIN), count=CFG.m - 1)
        with pytest.raises(BadSignature):
            contract.submit_start(TX, ORIGIN, TIMEOUT, sig)
        assert contract.status(TX) == CoordinationStatus.NOT_STARTED

    def test_start_signed_by_another_chain(self):
        contract = make_contract()
        sig = threshold_sign(start_message(TX, TIMEOUT, ORIGIN), keys=OTHER_KEYS)
        with pytest.raises(BadSignature):
            contract.submit_start(TX, ORIGIN, TIMEOUT, sig)

    def test_start_for_unregistered_chain(self):
        contract = make_contract()
        with pytest.raises(BadSignature):
            contract.submit_start(TX, 9, TIMEOUT, threshold_sign(start_message(TX, TIMEOUT, 9)))

    def test_duplicate_start(self):
        contract = make_contract()
        start(contract)
        with pytest.raises(DuplicateTxId):
            start(contract)

    def test_timeout_in_past(self):
        contract = make_contract(block=50)
        with pytest.raises(TimeoutInPast):
            start(contract)

    def test_commit_before_timeout(self):
        contract = make_contract()
        start(contract)
        contract.submit_commit(TX, threshold_sign(commit_message(TX)))
        assert contract.status(TX) == CoordinationStatus.COMMITTED
        assert contract.status(TX, at_block=10_000) == CoordinationStatus.COMMITTED

    def test_commit_after_timeout_resolves_ignored(self):
        contract = make_contract()
        start(contract)
        contract.clock.advance_clock(410)
        assert contract.clock.current_block == 51
        with pytest.raises(PastTimeout):
            contract.submit_commit(TX, threshold_sign(commit_message(TX)))
        assert contract.records[TX].status == CoordinationStatus.STARTED
        assert contract.status(TX) == CoordinationStatus.IGNORED

    def test_commit_on_the_timeout_block_is_accepted(self):
        contract = make_contract()
        start(contract)
        contract.clock.advance_clock(400)
        contract.submit_commit(TX, threshold_sign(commit_message(TX)))
        assert contract.status(TX) == CoordinationStatus.COMMITTED

    def test_ignore_after_commit(self):
        contract = make_contract()
        start(contract)
        contract.submit_commit(TX, threshold_sign(commit_message(TX)))
        with pytest.raises(WrongState):
            contract.submit_ignore(TX, threshold_sign(ignore_message(TX)))
        assert contract.status(TX) == CoordinationStatus.COMMITTED

    def test_commit_signed_by_a_subordinate_chain(self):
        contract = make_contract()
        start(contract)
        with pytest.raises(BadSignature):
            contract.submit_commit(TX, threshold_sign(commit_message(TX), keys=OTHER_KEYS))

    def test_commit_for_unknown_transaction(self):
        with pytest.raises(WrongState):
            make_contract().submit_commit(TX, threshold_sign(commit_message(TX)))

    def test_status_queries(self):
        contract = make_contract()
        assert contract.status(99) == CoordinationStatus.NOT_STARTED
        start(contract)
        assert contract.status(TX, at_block=60) == CoordinationStatus.IGNORED
        assert contract.status(TX, at_block=50) == CoordinationStatus.STARTED
        assert [r.tx_id for r in contract.started()] == [TX]
        assert contract.dump() == {str(TX): "Started"}


# Small-model check of the coordination state machine: every sequence of up to four
# submissions, each a start, commit or ignore with a valid or invalid signature,
# sent before or after the time-out block.

SUBMISSIONS = list(product(("start", "commit", "ignore"), (True, False), (False, True)))
VALID_SIGS = {
    "start": threshold_sign(start_message(TX, TIMEOUT, ORIGIN)),
    "commit": threshold_sign(commit_message(TX)),
    "ignore": threshold_sign(ignore_message(TX)),
}
LEGAL = {
    (CoordinationStatus.NOT_STARTED, CoordinationStatus.STARTED),
    (CoordinationStatus.STARTED, CoordinationStatus.COMMITTED),
    (CoordinationStatus.STARTED, CoordinationStatus.IGNORED),
}


def expected_step(stored, kind, valid, block):
    """Oracle: (new stored status, rejection type or None)"""
    if kind == "start":
        if not valid:
            return stored, BadSignature
        if stored is not None:
            return stored, DuplicateTxId
        if TIMEOUT <= block:
            return stored, TimeoutInPast
        return CoordinationStatus.STARTED, None
    if stored is None:
        return stored, WrongState
    if not valid:
        return stored, BadSignature
    if stored != CoordinationStatus.STARTED:
        return stored, WrongState
    if block > TIMEOUT:
        return stored, PastTimeout
    return (CoordinationStatus.COMMITTED if kind == "commit" else CoordinationStatus.IGNORED), None


def run_sequence(sequence):
    contract = make_contract(block=10)
    stored = None
    for kind, valid, after in sequence:
        if after:
            contract.clock.advance_to_tick(60 * 10)
        before_status = contract.status(TX)
        sig = VALID_SIGS[kind] if valid else ThresholdSignature((VALID_SIGS[kind].value + 1) % Q)
        stored, rejection = expected_step(stored, kind, valid, contract.clock.current_block)

        try:
            if kind == "start":
                contract.submit_start(TX, ORIGIN, TIMEOUT, sig)
            elif kind == "commit":
                contract.submit_commit(TX, sig)
            else:
                contract.submit_ignore(TX, sig)
            raised = None
        except SubmissionRejected as e:
            raised = type(e)

        assert raised is rejection, sequence
        actual = contract.records[TX].status if TX in contract.records else None
        assert actual == stored, sequence

        after_status = contract.status(TX)
        if after_status != before_status:
            assert (before_status, after_status) in LEGAL, sequence
        if before_status.terminal:
            assert after_status == before_status, sequence


@pytest.mark.parametrize("length", [1, 2, 3, 4])
def test_every_submission_sequence_follows_legal_transitions(length):
    for sequence in product(SUBMISSIONS, repeat=length):
        run_sequence(sequence)
