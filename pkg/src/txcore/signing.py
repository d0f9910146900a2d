"""
Externally-owned account signatures (keyed hash over the canonical encoding)
"""
import hashlib
import hmac

from .encoding import encode
from .types import Address, CrosschainTransaction, SignedEnvelope


def account_key(address: Address) -> bytes:
    """Deterministic per-account signing key for simulated EOAs"""
    return hashlib.sha256(b"act/eoa-key/" + address.to_bytes(8, "big")).digest()


def sign_transaction(tx: CrosschainTransaction) -> SignedEnvelope:
    signature = hmac.new(account_key(tx.sender), encode(tx), hashlib.sha256).digest()
    return SignedEnvelope(body=tx, eoa_signature=signature)


def verify_envelope(envelope: SignedEnvelope) -> bool:
    expected = hmac.new(account_key(envelope.body.sender), encode(envelope.body), hashlib.sha256).digest()
    return hmac.compare_digest(expected, envelope.eoa_signature)
