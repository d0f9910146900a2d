"""
Contract bodies used by the packaged scenarios

Contracts keep their wiring (peer chain ids and addresses) in storage so the same
body can be deployed in different topologies.
"""
from .library import LIBRARY
from .runtime import CallFrame

# Shared storage slots
OWNER = 0
PEER_CHAIN = 10
PEER_ADDRESS = 11
SECOND_PEER_CHAIN = 12
SECOND_PEER_ADDRESS = 13
LOCAL_PEER = 30
BOOKINGS_BASE = 100

# Expected-parameter example
STATE1 = 1
STATE2 = 2
LAST_VALUE = 3

# Routers: slot 0 holds the item count, slots 1..count the item addresses
ITEM_COUNT = 0
PAYMENT_ROUTER = 50
VENDOR_ACCOUNT = 51
HOTEL_PRICE = 20
TRAIN_PRICE = 21

# Payment slots
SLOT_OWNER = 0
SLOT_BALANCE = 1
SLOT_ROUTER = 2

# Authorised caller constants
AUTH_FROM_ADDRESS = 100
AUTH_FROM_CHAIN = 101
AUTH_ORIGINATING_CHAIN = 102


# Expected-parameter example: funcB views funcC and then calls funcD with the derived value

@LIBRARY.function("example.root", "start", arity=1)
def example_root_start(vm: CallFrame, param: int) -> None:
    vm.store(1, param)
    vm.crosschain_transaction(vm.load(PEER_CHAIN), vm.load(PEER_ADDRESS), "funcB", param)


@LIBRARY.function("example.funcB", "funcB", arity=1)
def example_func_b(vm: CallFrame, param1: int) -> None:
    state1 = vm.load(STATE1)
    state2 = vm.load(STATE2)
    if state1 != 1:
        v = vm.crosschain_view(vm.load(PEER_CHAIN), vm.load(PEER_ADDRESS), "funcC", param1)
        vm.crosschain_transaction(vm.load(SECOND_PEER_CHAIN), vm.load(SECOND_PEER_ADDRESS), "funcD", v + state2)
        vm.store(LAST_VALUE, v + state2)


@LIBRARY.function("example.funcC", "funcC", arity=1)
def example_func_c(vm: CallFrame, x: int) -> int:
    return vm.load(1) + x


@LIBRARY.function("example.funcD", "funcD", arity=1)
def example_func_d(vm: CallFrame, x: int) -> None:
    vm.store(1, x)


# Attribution example: c1 calls c2 on the same chain, c2 calls c3 on another chain

@LIBRARY.function("example.c1", "run", arity=1)
def example_c1_run(vm: CallFrame, x: int) -> None:
    vm.call(vm.load(LOCAL_PEER), "forward", x)


@LIBRARY.function("example.c2", "forward", arity=1)
def example_c2_forward(vm: CallFrame, x: int) -> None:
    vm.crosschain_transaction(vm.load(PEER_CHAIN), vm.load(PEER_ADDRESS), "record", x)


@LIBRARY.function("example.c3", "record", arity=1)
def example_c3_record(vm: CallFrame, x: int) -> None:
    vm.store(1, x)


# Travel agency

@LIBRARY.function("travel.agent", "book", arity=1)
def travel_agent_book(vm: CallFrame, day: int) -> None:
    vm.require(vm.ctx.msg_sender == vm.load(OWNER), "only the agency account may book")
    vm.crosschain_transaction(vm.load(PEER_CHAIN), vm.load(PEER_ADDRESS), "reserve", day)
    vm.crosschain_transaction(vm.load(SECOND_PEER_CHAIN), vm.load(SECOND_PEER_ADDRESS), "reserve", day)
    vm.store(BOOKINGS_BASE + day, vm.load(BOOKINGS_BASE + day) + 1)


@LIBRARY.function("travel.router_agent", "book", arity=1)
def travel_router_agent_book(vm: CallFrame, day: int) -> None:
    vm.require(vm.ctx.msg_sender == vm.load(OWNER), "only the agency account may book")
    vm.crosschain_transaction(vm.load(PEER_CHAIN), vm.load(PEER_ADDRESS), "book", day, vm.load(HOTEL_PRICE))
    vm.crosschain_transaction(
        vm.load(SECOND_PEER_CHAIN), vm.load(SECOND_PEER_ADDRESS), "book", day, vm.load(TRAIN_PRICE)
    )
    vm.store(BOOKINGS_BASE + day, vm.load(BOOKINGS_BASE + day) + 1)


@LIBRARY.function("travel.inventory", "reserve", arity=1)
def travel_inventory_reserve(vm: CallFrame, day: int) -> None:
    free = vm.load(day)
    vm.require(free > 0, f"nothing free on day {day}")
    vm.store(day, free - 1)


@LIBRARY.function("travel.inventory", "available", arity=1)
def travel_inventory_available(vm: CallFrame, day: int) -> int:
    return vm.load(day)


@LIBRARY.function("travel.item_router", "book", arity=2)
def travel_item_router_book(vm: CallFrame, day: int, price: int) -> int:
    for i in range(1, vm.load(ITEM_COUNT) + 1):
        item = vm.load(i)
        if not vm.is_locked(item) and vm.load_at(item, day) > 0:
            vm.call(item, "reserve", day)
            vm.call(vm.load(PAYMENT_ROUTER), "transfer", vm.load(VENDOR_ACCOUNT), price)
            return item
    vm.require(False, f"no unlocked item free on day {day}")
    return 0


# ERC 20 split into a nonlockable router and lockable payment slots

def _slots(vm: CallFrame):
    return [vm.load(i) for i in range(1, vm.load(ITEM_COUNT) + 1)]


@LIBRARY.function("erc20.router", "transfer", arity=2)
def erc20_router_transfer(vm: CallFrame, to_owner: int, amount: int) -> None:
    payer = vm.ctx.tx_origin
    source = dest = None
    for slot in _slots(vm):
        if vm.is_locked(slot):
            continue
        owner = vm.load_at(slot, SLOT_OWNER)
        if source is None and owner == payer and vm.load_at(slot, SLOT_BALANCE) >= amount:
            source = slot
        elif dest is None and owner == to_owner:
            dest = slot
    vm.require(source is not None, f"no unlocked payment slot of {payer} holds {amount}")
    vm.require(dest is not None, f"no unlocked payment slot for {to_owner}")
    vm.call(source, "debit", amount)
    vm.call(dest, "credit", amount)


@LIBRARY.function("erc20.router", "balance", arity=1)
def erc20_router_balance(vm: CallFrame, owner: int) -> int:
    return sum(vm.load_at(slot, SLOT_BALANCE) for slot in _slots(vm) if vm.load_at(slot, SLOT_OWNER) == owner)


@LIBRARY.function("erc20.slot", "debit", arity=1)
def erc20_slot_debit(vm: CallFrame, amount: int) -> None:
    vm.require(vm.ctx.msg_sender == vm.load(SLOT_ROUTER), "only the router moves funds")
    balance = vm.load(SLOT_BALANCE)
    vm.require(balance >= amount, "insufficient balance")
    vm.store(SLOT_BALANCE, balance - amount)


@LIBRARY.function("erc20.slot", "credit", arity=1)
def erc20_slot_credit(vm: CallFrame, amount: int) -> None:
    vm.require(vm.ctx.msg_sender == vm.load(SLOT_ROUTER), "only the router moves funds")
    vm.store(SLOT_BALANCE, vm.load(SLOT_BALANCE) + amount)


# Call graph that revisits a contract: conX -> conY -> conX

@LIBRARY.function("repeat.conX", "start", arity=0)
def repeat_con_x_start(vm: CallFrame) -> None:
    vm.store(1, vm.load(1) + 1)
    vm.crosschain_transaction(vm.load(PEER_CHAIN), vm.load(PEER_ADDRESS), "relay")


@LIBRARY.function("repeat.conX", "finish", arity=0)
def repeat_con_x_finish(vm: CallFrame) -> None:
    vm.store(2, vm.load(2) + 1)


@LIBRARY.function("repeat.conY", "relay", arity=0)
def repeat_con_y_relay(vm: CallFrame) -> None:
    vm.store(1, vm.load(1) + 1)
    vm.crosschain_transaction(vm.load(PEER_CHAIN), vm.load(PEER_ADDRESS), "finish")


# Caller authentication through the crosschain precompile fields

@LIBRARY.function("auth.caller", "invoke", arity=1)
def auth_caller_invoke(vm: CallFrame, value: int) -> None:
    vm.crosschain_transaction(vm.load(PEER_CHAIN), vm.load(PEER_ADDRESS), "update", value)


@LIBRARY.function("auth.relay", "invoke", arity=1)
def auth_relay_invoke(vm: CallFrame, value: int) -> None:
    vm.crosschain_transaction(vm.load(PEER_CHAIN), vm.load(PEER_ADDRESS), "invoke", value)


@LIBRARY.function("auth.guarded", "update", arity=1)
def auth_guarded_update(vm: CallFrame, value: int) -> None:
    vm.require(vm.ctx.from_address == vm.load(AUTH_FROM_ADDRESS), "fromAddr is not the authorised caller")
    vm.require(vm.ctx.from_chain == vm.load(AUTH_FROM_CHAIN), "fromBcId is not the authorised chain")
    vm.require(vm.ctx.originating_chain == vm.load(AUTH_ORIGINATING_CHAIN), "origBcId is not semi-trusted")
    vm.store(1, value)
