"""
Deterministic contract execution with crosschain-call interception
"""
import enum
from dataclasses import dataclass, field, replace
from typing import Dict, Mapping, Optional, Protocol, Sequence

from ..txcore.types import Address, CallPayload, ChainId, CrosschainTransaction, TxType
from ..utils.errors import CrosschainError
from .errors import ContractFault
from .state import ChainState, ContractInstance


class ExecMode(str, enum.Enum):
    CONSTRUCTION = "Construction"
    TRIAL = "Trial"


@dataclass(frozen=True)
class ExecContext:
    """Transaction fields visible to contract code (msg/tx globals plus the crosschain precompile)"""
    msg_sender: Address
    tx_origin: Address
    from_address: Address
    from_chain: ChainId
    originating_chain: ChainId
    this_chain: ChainId
    mode: ExecMode

    @classmethod
    def for_transaction(cls, tx: CrosschainTransaction, mode: ExecMode) -> "ExecContext":
        # Every nested element is a separately signed transaction from the EOA
        return cls(
            msg_sender=tx.sender,
            tx_origin=tx.sender,
            from_address=tx.from_address,
            from_chain=tx.from_chain,
            originating_chain=tx.originating_chain,
            this_chain=tx.chain_id,
            mode=mode,
        )


class Outcome(str, enum.Enum):
    OK = "Ok"
    REVERTED = "Reverted"


class RevertReason(str, enum.Enum):
    PARAM_MISMATCH = "ParamMismatch"
    UNCONSUMED_SUBORDINATE = "UnconsumedSubordinate"
    MISSING_VIEW_RESULT = "MissingViewResult"
    CONTRACT_FAULT = "ContractFault"


@dataclass
class TrialResult:
    outcome: Outcome
    reason: Optional[RevertReason] = None
    detail: str = ""
    reads: Dict[Address, Dict[int, int]] = field(default_factory=dict)
    writes: Dict[Address, Dict[int, int]] = field(default_factory=dict)
    consumed_subordinates: int = 0
    return_value: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.outcome == Outcome.OK

    def describe(self) -> str:
        if self.ok:
            return "Ok"
        return f"Reverted({self.reason.value if self.reason else '?'}: {self.detail})"


class TrialRevert(Exception):
    """Raised inside an execution to abort it with a protocol-level reason"""

    def __init__(self, reason: RevertReason, detail: str):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason.value}: {detail}")


class CrosschainInterceptor(Protocol):
    def transaction(self, caller: "CallFrame", chain: ChainId, address: Address, payload: CallPayload) -> None:
        ...

    def view(self, caller: "CallFrame", chain: ChainId, address: Address, payload: CallPayload) -> int:
        ...


class Execution:
    """One top-level call on one chain: shared write buffer for every nested same-chain call"""

    def __init__(self, chain: ChainState, interceptor: CrosschainInterceptor):
        self.chain = chain
        self.interceptor = interceptor
        self.reads: Dict[Address, Dict[int, int]] = {}
        self.writes: Dict[Address, Dict[int, int]] = {}

    def read(self, address: Address, key: int) -> int:
        staged = self.writes.get(address)
        if staged is not None and key in staged:
            return staged[key]
        contract = self.chain.get(address)
        value = contract.read(key) if contract is not None else 0
        self.reads.setdefault(address, {})[key] = value
        return value

    def write(self, address: Address, key: int, value: int) -> None:
        self.writes.setdefault(address, {})[key] = value

    def invoke(self, address: Address, payload: CallPayload, ctx: ExecContext) -> Optional[int]:
        contract = self.chain.get(address)
        if contract is None:
            raise ContractFault(f"no contract at {address} on chain {self.chain.chain_id}")
        function = contract.functions.get(payload.function_name)
        if function is None:
            raise ContractFault(f"contract {address} has no function {payload.function_name}")
        if len(payload.args) != function.arity:
            raise ContractFault(
                f"{payload.function_name} takes {function.arity} args, got {len(payload.args)}"
            )
        return function.body(CallFrame(self, address, ctx), *payload.args)


class CallFrame:
    """Host interface handed to contract bodies"""

    def __init__(self, execution: Execution, address: Address, ctx: ExecContext):
        self._execution = execution
        self.address = address
        self.ctx = ctx

    @property
    def chain_id(self) -> ChainId:
        return self._execution.chain.chain_id

    def load(self, key: int) -> int:
        return self._execution.read(self.address, key)

    def store(self, key: int, value: int) -> None:
        self._execution.write(self.address, key, value)

    def load_at(self, address: Address, key: int) -> int:
        """Read another contract on this chain"""
        return self._execution.read(address, key)

    def is_locked(self, address: Address) -> bool:
        contract = self._execution.chain.get(address)
        return contract is not None and contract.locked

    def call(self, address: Address, function: str, *args: int) -> Optional[int]:
        """Same-chain call; the callee sees this contract as msg.sender"""
        ctx = replace(self.ctx, msg_sender=self.address)
        return self._execution.invoke(address, CallPayload(function, args), ctx)

    def crosschain_transaction(self, chain: ChainId, address: Address, function: str, *args: int) -> None:
        self._execution.interceptor.transaction(self, chain, address, CallPayload(function, args))

    def crosschain_view(self, chain: ChainId, address: Address, function: str, *args: int) -> int:
        return self._execution.interceptor.view(self, chain, address, CallPayload(function, args))

    def require(self, condition: bool, reason: str = "require failed") -> None:
        if not condition:
            raise ContractFault(reason)


def run_call(chain: ChainState, address: Address, payload: CallPayload, ctx: ExecContext,
             interceptor: CrosschainInterceptor) -> TrialResult:
    """Execute one call; reverts discard every write"""
    execution = Execution(chain, interceptor)
    try:
        value = execution.invoke(address, payload, ctx)
    except TrialRevert as e:
        return TrialResult(Outcome.REVERTED, e.reason, e.detail, reads=execution.reads)
    except ContractFault as e:
        return TrialResult(Outcome.REVERTED, RevertReason.CONTRACT_FAULT, str(e), reads=execution.reads)
    except CrosschainError:
        raise
    except Exception as e:
        return TrialResult(
            Outcome.REVERTED, RevertReason.CONTRACT_FAULT, f"{type(e).__name__}: {e}", reads=execution.reads
        )
    return TrialResult(Outcome.OK, reads=execution.reads, writes=execution.writes, return_value=value)


class SubordinateMatcher:
    """Checks crosschain calls against the signed subordinate list, in order"""

    def __init__(self, subordinates: Sequence[CrosschainTransaction], cached_view_results: Mapping[int, int]):
        self.subordinates = list(subordinates)
        self.cached_view_results = cached_view_results
        self.consumed = 0

    def _match(self, expected_type: TxType, chain: ChainId, address: Address, payload: CallPayload) -> int:
        actual = (chain, address, payload.function_name, payload.args)
        if self.consumed >= len(self.subordinates):
            raise TrialRevert(
                RevertReason.PARAM_MISMATCH,
                f"call {payload.function_name}{list(payload.args)} on chain {chain} has no signed subordinate",
            )
        position = self.consumed
        sub = self.subordinates[position]
        expected = (sub.chain_id, sub.to, sub.data.function_name, sub.data.args)
        if sub.tx_type != expected_type or actual != expected:
            raise TrialRevert(
                RevertReason.PARAM_MISMATCH,
                f"call {payload.function_name}{list(payload.args)} on chain {chain} != "
                f"subordinate {position} {sub.tx_type.value} {sub.data.function_name}{list(sub.data.args)}",
            )
        self.consumed += 1
        return position

    def transaction(self, caller: CallFrame, chain: ChainId, address: Address, payload: CallPayload) -> None:
        self._match(TxType.SUBORDINATE, chain, address, payload)

    def view(self, caller: CallFrame, chain: ChainId, address: Address, payload: CallPayload) -> int:
        position = self._match(TxType.VIEW, chain, address, payload)
        if position not in self.cached_view_results:
            raise TrialRevert(RevertReason.MISSING_VIEW_RESULT, f"no cached result for view {position}")
        return self.cached_view_results[position]


def execute_trial(c: ContractInstance, call: CallPayload, ctx: ExecContext,
                  subordinates: Sequence[CrosschainTransaction], cached_view_results: Mapping[int, int],
                  chain: Optional[ChainState] = None) -> TrialResult:
    """
    Trial-execute a call against committed state, checking expected vs actual subordinate calls

    Args:
        c: Target contract
        call: Function name and actual arguments
        ctx: Execution context (mode Trial)
        subordinates: Direct subordinates of the transaction, in signed order
        cached_view_results: Threshold-verified view results keyed by subordinate position
        chain: Chain the contract lives on, for same-chain calls (defaults to c alone)

    Returns:
        TrialResult; any subordinate left unconsumed reverts the trial
    """
    if chain is None:
        chain = ChainState(ctx.this_chain)
        chain.contracts[c.address] = c

    matcher = SubordinateMatcher(subordinates, cached_view_results)
    result = run_call(chain, c.address, call, ctx, matcher)
    result.consumed_subordinates = matcher.consumed
    if result.ok and matcher.consumed < len(matcher.subordinates):
        return TrialResult(
            Outcome.REVERTED,
            RevertReason.UNCONSUMED_SUBORDINATE,
            f"{len(matcher.subordinates) - matcher.consumed} signed subordinates never called",
            reads=result.reads,
            consumed_subordinates=matcher.consumed,
        )
    return result
