"""
Nested crosschain transactions: data model, canonical encoding, consistency rules

The construction-time builder depends on the contract runtime and lives in
src.txcore.builder.
"""
from .errors import TxCoreError, MalformedEncoding, ConstructionFault
from .types import (
    ChainId,
    Address,
    CrosschainTxId,
    TxPath,
    TxType,
    SHARED_FIELDS,
    CallPayload,
    CrosschainTransaction,
    SignedEnvelope,
    CoordinationParams,
)
from .encoding import encode, decode, to_debug_dict, render_json
from .signing import account_key, sign_transaction, verify_envelope
from .validation import Violation, ViolationKind, validate_nesting

__all__ = [
    # Errors
    "TxCoreError",
    "MalformedEncoding",
    "ConstructionFault",

    # Types
    "ChainId",
    "Address",
    "CrosschainTxId",
    "TxPath",
    "TxType",
    "SHARED_FIELDS",
    "CallPayload",
    "CrosschainTransaction",
    "SignedEnvelope",
    "CoordinationParams",

    # Encoding
    "encode",
    "decode",
    "to_debug_dict",
    "render_json",

    # Signing
    "account_key",
    "sign_transaction",
    "verify_envelope",

    # Validation
    "Violation",
    "ViolationKind",
    "validate_nesting",
]
