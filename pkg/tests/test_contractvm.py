"""
Contract runtime tests: deployment, locking, provisional state, trial execution
"""
from dataclasses import replace

import pytest

from src.contractvm import (
    LIBRARY,
    AddressInUse,
    ChainState,
    ExecContext,
    ExecMode,
    LockFault,
    LockFaultKind,
    NotLocked,
    RevertReason,
    check_lock,
    execute_trial,
    lock_and_stage,
    lock_set,
    run_call,
    unlock_commit,
    unlock_discard,
)
from src.contractvm.bodies import SLOT_BALANCE
from src.txcore import CallPayload, TxType
from src.txcore.builder import build_crosschain_tx

EOA = 0xE0A
EXAMPLE_B, EXAMPLE_D = 0xB0, 0xD0


def trial_context(chain: int, sender: int = EOA, from_address: int = EOA, from_chain: int = 2,
                  originating_chain: int = 2) -> ExecContext:
    return ExecContext(
        msg_sender=sender,
        tx_origin=sender,
        from_address=from_address,
        from_chain=from_chain,
        originating_chain=originating_chain,
        this_chain=chain,
        mode=ExecMode.TRIAL,
    )


class _NoCrosschain:
    def transaction(self, caller, chain, address, payload):
        raise AssertionError("unexpected crosschain transaction")

    def view(self, caller, chain, address, payload):
        raise AssertionError("unexpected crosschain view")


@pytest.fixture
def chain():
    state = ChainState(1)
    state.deploy(0x1, True, LIBRARY.functions("example.funcD"), {1: 7}, body_name="example.funcD")
    state.deploy(0x2, False, LIBRARY.functions("example.funcD"), body_name="example.funcD")
    return state


class TestDeployment:
    def test_duplicate_address(self, chain):
        with pytest.raises(AddressInUse):
            chain.deploy(0x1, True, LIBRARY.functions("example.funcC"))

    def test_unknown_body(self):
        with pytest.raises(KeyError):
            LIBRARY.functions("no.such.body")

    def test_unset_storage_reads_zero(self, chain):
        assert chain.get(0x1).read(99) == 0

    def test_snapshot_is_independent(self, chain):
        copied = chain.snapshot()
        copied.contracts[0x1].committed_storage[1] = 100
        assert chain.get(0x1).read(1) == 7


class TestLocking:
    def test_unlocked_lockable_contract_passes(self, chain):
        check_lock(chain.get(0x1), 5)

    def test_nonlockable(self, chain):
        with pytest.raises(LockFault) as exc:
            check_lock(chain.get(0x2), 5)
        assert exc.value.kind == LockFaultKind.NONLOCKABLE

    @pytest.mark.parametrize("tx_id", [5, 6])
    def test_already_locked_even_by_same_transaction(self, chain, tx_id):
        lock_and_stage(chain.get(0x1), {1: 8}, 5)
        with pytest.raises(LockFault) as exc:
            check_lock(chain.get(0x1), tx_id)
        assert exc.value.kind == LockFaultKind.ALREADY_LOCKED
        assert exc.value.owner == 5

    def test_commit_applies_provisional_state(self, chain):
        c = lock_and_stage(chain.get(0x1), {1: 8, 2: 3}, 5)
        assert c.lock_owner == 5
        assert c.read(1) == 7
        unlock_commit(c)
        assert c.lock_owner is None
        assert c.provisional_overlay is None
        assert c.committed_storage == {1: 8, 2: 3}

    def test_discard_keeps_committed_state(self, chain):
        c = lock_and_stage(chain.get(0x1), {1: 8}, 5)
        unlock_discard(c)
        assert c.lock_owner is None
        assert c.committed_storage == {1: 7}

    @pytest.mark.parametrize("unlock", [unlock_commit, unlock_discard])
    def test_unlock_without_lock(self, chain, unlock):
        with pytest.raises(NotLocked):
            unlock(chain.get(0x1))

    def test_lock_set_includes_lockable_target_and_writes(self, chain):
        assert lock_set(chain, 0x1, []) == [0x1]
        assert lock_set(chain, 0x2, [0x1]) == [0x1]
        assert lock_set(chain, 0x2, []) == []


class TestTrialExecution:
    def _build(self, func_b_chains, coordination):
        env = build_crosschain_tx(
            CallPayload("funcB", (1,)), 2, EXAMPLE_B, func_b_chains, coordination, seed=3, sender=EOA,
        )
        return env.body

    def test_expected_parameters_match(self, func_b_chains, coordination):
        root = self._build(func_b_chains, coordination)
        result = execute_trial(
            func_b_chains[2].get(EXAMPLE_B), root.data, trial_context(2), root.subordinates, {0: 6},
            chain=func_b_chains[2],
        )
        assert result.ok, result.describe()
        assert result.consumed_subordinates == 2
        assert result.writes == {EXAMPLE_B: {3: 10}}

    def test_changed_view_result_is_a_param_mismatch(self, func_b_chains, coordination):
        root = self._build(func_b_chains, coordination)
        result = execute_trial(
            func_b_chains[2].get(EXAMPLE_B), root.data, trial_context(2), root.subordinates, {0: 7},
            chain=func_b_chains[2],
        )
        assert result.reason == RevertReason.PARAM_MISMATCH
        assert result.writes == {}

    def test_tampered_subordinate_argument(self, func_b_chains, coordination):
        root = self._build(func_b_chains, coordination)
        tampered = root.replace_at((1,), replace(root.subordinates[1], data=CallPayload("funcD", (11,))))
        result = execute_trial(
            func_b_chains[2].get(EXAMPLE_B), tampered.data, trial_context(2), tampered.subordinates, {0: 6},
            chain=func_b_chains[2],
        )
        assert result.reason == RevertReason.PARAM_MISMATCH

    def test_state_change_leaves_subordinates_unconsumed(self, func_b_chains, coordination):
        root = self._build(func_b_chains, coordination)
        func_b_chains[2].get(EXAMPLE_B).committed_storage[1] = 1
        result = execute_trial(
            func_b_chains[2].get(EXAMPLE_B), root.data, trial_context(2), root.subordinates, {0: 6},
            chain=func_b_chains[2],
        )
        assert result.reason == RevertReason.UNCONSUMED_SUBORDINATE
        assert result.consumed_subordinates == 0

    def test_missing_view_result(self, func_b_chains, coordination):
        root = self._build(func_b_chains, coordination)
        result = execute_trial(
            func_b_chains[2].get(EXAMPLE_B), root.data, trial_context(2), root.subordinates, {},
            chain=func_b_chains[2],
        )
        assert result.reason == RevertReason.MISSING_VIEW_RESULT

    def test_leaf_subordinate_runs_alone(self, func_b_chains, coordination):
        root = self._build(func_b_chains, coordination)
        leaf = root.subordinates[1]
        assert leaf.tx_type == TxType.SUBORDINATE
        result = execute_trial(func_b_chains[4].get(EXAMPLE_D), leaf.data, trial_context(4), (), {})
        assert result.ok
        assert result.writes == {EXAMPLE_D: {1: 10}}

    def test_contract_fault_discards_writes(self):
        state = ChainState(1)
        state.deploy(0x5, True, LIBRARY.functions("travel.inventory"), {3: 0}, body_name="travel.inventory")
        result = run_call(state, 0x5, CallPayload("reserve", (3,)), trial_context(1), _NoCrosschain())
        assert result.reason == RevertReason.CONTRACT_FAULT
        assert result.writes == {}


class TestContractBodies:
    @pytest.fixture
    def payments(self):
        state = ChainState(3)
        router, payer_slot, vendor_slot = 0x300, 0x301, 0x302
        state.deploy(router, False, LIBRARY.functions("erc20.router"), {0: 2, 1: payer_slot, 2: vendor_slot},
                     body_name="erc20.router")
        state.deploy(payer_slot, True, LIBRARY.functions("erc20.slot"), {0: EOA, 1: 100, 2: router},
                     body_name="erc20.slot")
        state.deploy(vendor_slot, True, LIBRARY.functions("erc20.slot"), {0: 0x77, 1: 0, 2: router},
                     body_name="erc20.slot")
        return state

    def test_router_moves_funds_between_slots(self, payments):
        result = run_call(payments, 0x300, CallPayload("transfer", (0x77, 40)), trial_context(3), _NoCrosschain())
        assert result.ok, result.describe()
        assert result.writes == {0x301: {SLOT_BALANCE: 60}, 0x302: {SLOT_BALANCE: 40}}
        assert lock_set(payments, 0x300, result.writes) == [0x301, 0x302]

    def test_router_skips_locked_slots(self, payments):
        lock_and_stage(payments.get(0x301), {}, 9)
        result = run_call(payments, 0x300, CallPayload("transfer", (0x77, 40)), trial_context(3), _NoCrosschain())
        assert result.reason == RevertReason.CONTRACT_FAULT

    def test_slots_only_accept_calls_from_the_router(self, payments):
        result = run_call(payments, 0x301, CallPayload("debit", (10,)), trial_context(3), _NoCrosschain())
        assert result.reason == RevertReason.CONTRACT_FAULT
        assert "router" in result.detail

    def test_balance_view(self, payments):
        result = run_call(payments, 0x300, CallPayload("balance", (EOA,)), trial_context(3), _NoCrosschain())
        assert result.return_value == 100

    @pytest.mark.parametrize("from_address, from_chain, originating_chain, ok", [
        (0xA1, 1, 1, True),
        (0xA2, 1, 1, False),
        (0xA1, 5, 1, False),
        (0xA1, 1, 5, False),
    ])
    def test_guarded_update_checks_caller_fields(self, from_address, from_chain, originating_chain, ok):
        state = ChainState(2)
        state.deploy(0x200, True, LIBRARY.functions("auth.guarded"), {100: 0xA1, 101: 1, 102: 1},
                     body_name="auth.guarded")
        ctx = trial_context(2, from_address=from_address, from_chain=from_chain, originating_chain=originating_chain)
        result = run_call(state, 0x200, CallPayload("update", (9,)), ctx, _NoCrosschain())
        assert result.ok is ok
        if ok:
            assert result.writes == {0x200: {1: 9}}
