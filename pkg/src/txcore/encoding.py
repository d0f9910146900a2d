"""
Canonical byte encoding of crosschain transactions

Integers are 8-byte big-endian (call arguments signed, every other field unsigned);
strings and lists carry a 4-byte big-endian count. Fields follow the declaration
order of CrosschainTransaction, subordinates encoded recursively.
"""
import json
import struct
from typing import Any, Dict, List

from .errors import MalformedEncoding
from .types import TX_TYPE_CODES, TX_TYPES_BY_CODE, CallPayload, CrosschainTransaction

U64 = struct.Struct(">Q")
I64 = struct.Struct(">q")
U32 = struct.Struct(">I")

MAX_DEPTH = 64

# tx_type..value (6 ints), name count, args count, chain_id..from_address (9 ints), subordinate count
MIN_TX_SIZE = 6 * 8 + 4 + 4 + 9 * 8 + 4


class Serializer:
    def __init__(self):
        self._parts: List[bytes] = []

    def u64(self, value: int) -> None:
        if not 0 <= value < 1 << 64:
            raise ValueError(f"{value} does not fit an unsigned 64-bit field")
        self._parts.append(U64.pack(value))

    def i64(self, value: int) -> None:
        if not -(1 << 63) <= value < 1 << 63:
            raise ValueError(f"{value} does not fit a signed 64-bit field")
        self._parts.append(I64.pack(value))

    def count(self, value: int) -> None:
        self._parts.append(U32.pack(value))

    def string(self, value: str) -> None:
        raw = value.encode("utf-8")
        self.count(len(raw))
        self._parts.append(raw)

    def output(self) -> bytes:
        return b"".join(self._parts)


class Deserializer:
    def __init__(self, data: bytes):
        self._data = data
        self._offset = 0

    def remaining(self) -> int:
        return len(self._data) - self._offset

    def _take(self, size: int) -> bytes:
        if self.remaining() < size:
            raise MalformedEncoding(
                f"truncated: need {size} bytes at offset {self._offset}, {self.remaining()} left"
            )
        chunk = self._data[self._offset:self._offset + size]
        self._offset += size
        return chunk

    def u64(self) -> int:
        return U64.unpack(self._take(8))[0]

    def i64(self) -> int:
        return I64.unpack(self._take(8))[0]

    def count(self, element_size: int) -> int:
        value = U32.unpack(self._take(4))[0]
        if value * element_size > self.remaining():
            raise MalformedEncoding(f"count {value} exceeds the {self.remaining()} remaining bytes")
        return value

    def string(self) -> str:
        raw = self._take(self.count(1))
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise MalformedEncoding(f"invalid utf-8 in string field: {e}") from e


def _write_tx(out: Serializer, tx: CrosschainTransaction) -> None:
    out.u64(TX_TYPE_CODES[tx.tx_type])
    out.u64(tx.nonce)
    out.u64(tx.gas_price)
    out.u64(tx.gas_limit)
    out.u64(tx.to)
    out.u64(tx.value)
    out.string(tx.data.function_name)
    out.count(len(tx.data.args))
    for arg in tx.data.args:
        out.i64(arg)
    out.u64(tx.chain_id)
    out.u64(tx.sender)
    out.u64(tx.coordination_chain)
    out.u64(tx.coordination_contract)
    out.u64(tx.timeout_block)
    out.u64(tx.crosschain_tx_id)
    out.u64(tx.originating_chain)
    out.u64(tx.from_chain)
    out.u64(tx.from_address)
    out.count(len(tx.subordinates))
    for sub in tx.subordinates:
        _write_tx(out, sub)


def _read_tx(src: Deserializer, depth: int) -> CrosschainTransaction:
    if depth > MAX_DEPTH:
        raise MalformedEncoding(f"nesting deeper than {MAX_DEPTH}")
    code = src.u64()
    if code not in TX_TYPES_BY_CODE:
        raise MalformedEncoding(f"unknown tx_type code {code}")
    nonce = src.u64()
    gas_price = src.u64()
    gas_limit = src.u64()
    to = src.u64()
    value = src.u64()
    function_name = src.string()
    args = tuple(src.i64() for _ in range(src.count(8)))
    chain_id = src.u64()
    sender = src.u64()
    coordination_chain = src.u64()
    coordination_contract = src.u64()
    timeout_block = src.u64()
    crosschain_tx_id = src.u64()
    originating_chain = src.u64()
    from_chain = src.u64()
    from_address = src.u64()
    subordinates = tuple(_read_tx(src, depth + 1) for _ in range(src.count(MIN_TX_SIZE)))
    return CrosschainTransaction(
        tx_type=TX_TYPES_BY_CODE[code],
        nonce=nonce,
        gas_price=gas_price,
        gas_limit=gas_limit,
        to=to,
        value=value,
        data=CallPayload(function_name, args),
        chain_id=chain_id,
        sender=sender,
        coordination_chain=coordination_chain,
        coordination_contract=coordination_contract,
        timeout_block=timeout_block,
        crosschain_tx_id=crosschain_tx_id,
        originating_chain=originating_chain,
        from_chain=from_chain,
        from_address=from_address,
        subordinates=subordinates,
    )


def encode(tx: CrosschainTransaction) -> bytes:
    out = Serializer()
    _write_tx(out, tx)
    return out.output()


def decode(data: bytes) -> CrosschainTransaction:
    src = Deserializer(data)
    tx = _read_tx(src, 0)
    if src.remaining():
        raise MalformedEncoding(f"{src.remaining()} trailing bytes after transaction")
    return tx


def to_debug_dict(tx: CrosschainTransaction) -> Dict[str, Any]:
    """JSON-ready rendering: field names as declared, integers as decimal strings"""
    return {
        "tx_type": tx.tx_type.value,
        "nonce": str(tx.nonce),
        "gas_price": str(tx.gas_price),
        "gas_limit": str(tx.gas_limit),
        "to": str(tx.to),
        "value": str(tx.value),
        "data": {
            "function_name": tx.data.function_name,
            "args": [str(arg) for arg in tx.data.args],
        },
        "chain_id": str(tx.chain_id),
        "sender": str(tx.sender),
        "coordination_chain": str(tx.coordination_chain),
        "coordination_contract": str(tx.coordination_contract),
        "timeout_block": str(tx.timeout_block),
        "crosschain_tx_id": str(tx.crosschain_tx_id),
        "originating_chain": str(tx.originating_chain),
        "from_chain": str(tx.from_chain),
        "from_address": str(tx.from_address),
        "subordinates": [to_debug_dict(sub) for sub in tx.subordinates],
    }


def render_json(tx: CrosschainTransaction, indent: int = 2) -> str:
    return json.dumps(to_debug_dict(tx), indent=indent)
