"""
Nested crosschain transaction data model
"""
import enum
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence, Tuple

ChainId = int
Address = int
CrosschainTxId = int

# Depth-first location of a nested element; the root is ()
TxPath = Tuple[int, ...]


class TxType(str, enum.Enum):
    """Kinds of nested transaction elements"""
    ORIGINATING = "Originating"
    SUBORDINATE = "Subordinate"
    VIEW = "View"
    SIGNALLING = "Signalling"
    SINGLE_CHAIN = "SingleChain"


TX_TYPE_CODES = {
    TxType.ORIGINATING: 1,
    TxType.SUBORDINATE: 2,
    TxType.VIEW: 3,
    TxType.SIGNALLING: 4,
    TxType.SINGLE_CHAIN: 5,
}
TX_TYPES_BY_CODE = {code: tx_type for tx_type, code in TX_TYPE_CODES.items()}

# Fields that must be identical across every element of one nest
SHARED_FIELDS = (
    "coordination_chain",
    "coordination_contract",
    "timeout_block",
    "crosschain_tx_id",
    "originating_chain",
)


@dataclass(frozen=True)
class CallPayload:
    """Function name plus ordered 64-bit integer arguments"""
    function_name: str
    args: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class CrosschainTransaction:
    tx_type: TxType
    nonce: int
    gas_price: int
    gas_limit: int
    to: Address
    value: int
    data: CallPayload
    chain_id: ChainId
    sender: Address
    coordination_chain: ChainId
    coordination_contract: Address
    timeout_block: int
    crosschain_tx_id: CrosschainTxId
    originating_chain: ChainId
    from_chain: ChainId
    from_address: Address
    subordinates: Tuple["CrosschainTransaction", ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "subordinates", tuple(self.subordinates))

    @property
    def is_view(self) -> bool:
        return self.tx_type == TxType.VIEW

    def walk(self, path: TxPath = ()) -> Iterator[Tuple[TxPath, "CrosschainTransaction"]]:
        """Depth-first, pre-order traversal yielding (path, element)"""
        yield path, self
        for i, sub in enumerate(self.subordinates):
            yield from sub.walk(path + (i,))

    def at(self, path: Sequence[int]) -> "CrosschainTransaction":
        element = self
        for i in path:
            element = element.subordinates[i]
        return element

    def replace_at(self, path: Sequence[int], new: "CrosschainTransaction") -> "CrosschainTransaction":
        if not path:
            return new
        head, rest = path[0], path[1:]
        subs = list(self.subordinates)
        subs[head] = subs[head].replace_at(rest, new)
        return replace(self, subordinates=tuple(subs))

    def chains(self) -> Tuple[ChainId, ...]:
        """Every chain the nest touches, sorted"""
        return tuple(sorted({element.chain_id for _, element in self.walk()}))


@dataclass(frozen=True)
class SignedEnvelope:
    """A nest plus the submitting account's signature over its canonical encoding"""
    body: CrosschainTransaction
    eoa_signature: bytes

    @property
    def tx_id(self) -> CrosschainTxId:
        return self.body.crosschain_tx_id

    def element(self, path: Sequence[int]) -> CrosschainTransaction:
        return self.body.at(path)


@dataclass(frozen=True)
class CoordinationParams:
    """Where and until when a crosschain transaction is coordinated"""
    chain: ChainId
    contract: Address
    timeout_block: int
