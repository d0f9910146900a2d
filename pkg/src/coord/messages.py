"""
Byte strings that validators threshold-sign

Each message is an ASCII tag followed by 8-byte big-endian fields. View result
values are signed 64-bit; every other field is unsigned.
"""
import struct

from ..txcore.types import ChainId, CrosschainTxId

_U64 = struct.Struct(">Q")
_I64 = struct.Struct(">q")


def _fields(*values: int) -> bytes:
    return b"".join(_U64.pack(value) for value in values)


def start_message(tx_id: CrosschainTxId, timeout_block: int, originating_chain: ChainId) -> bytes:
    return b"START" + _fields(tx_id, timeout_block, originating_chain)


def commit_message(tx_id: CrosschainTxId) -> bytes:
    return b"COMMIT" + _fields(tx_id)


def ignore_message(tx_id: CrosschainTxId) -> bytes:
    return b"IGNORE" + _fields(tx_id)


def ready_message(tx_id: CrosschainTxId, chain: ChainId) -> bytes:
    return b"READY" + _fields(tx_id, chain)


def view_result_message(tx_id: CrosschainTxId, chain: ChainId, block_number: int, value: int) -> bytes:
    return b"VIEWRESULT" + _fields(tx_id, chain, block_number) + _I64.pack(value)
