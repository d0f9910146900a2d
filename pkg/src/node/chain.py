"""
A simulated blockchain: contract state, validator set, threshold key and lock ledger
"""
from typing import TYPE_CHECKING, Dict, List, Optional, Tuple

from ..contractvm import ChainState
from ..coord import KeyRegistryEntry
from ..tsig import ThresholdConfig, ThresholdSignature, combine_verified, dealer_keygen, verify_share
from ..txcore.types import Address, ChainId, CrosschainTxId
from ..utils.logger import setup_logger
from ..utils.rng import rng_stream

if TYPE_CHECKING:
    from .validator import ValidatorNode

logger = setup_logger("node")


class Blockchain:
    """
    One chain of the simulation

    Validators hold the key shares of the chain's current threshold key. The lock
    ledger records, per crosschain transaction, every contract this chain locked for it.
    """

    def __init__(self, chain_id: ChainId, cfg: ThresholdConfig):
        cfg.validate()
        self.chain_id = chain_id
        self.cfg = cfg
        self.state = ChainState(chain_id)
        self.validators: List["ValidatorNode"] = []
        self.public_key = 0
        self.key_version = 0
        self.locks: Dict[CrosschainTxId, List[Address]] = {}

    def deal_keys(self, seed: int) -> KeyRegistryEntry:
        """Trusted-dealer (re)keying; returns the registry entry for the new version"""
        version = self.key_version + 1
        dealer_seed = rng_stream(seed, f"node/keys/{self.chain_id}/{version}").next_u64()
        keys = dealer_keygen(self.cfg, dealer_seed)
        for validator, share in zip(self.validators, keys.shares):
            if not verify_share(share, keys.commitments):
                raise ValueError(f"dealer produced an invalid share for validator {validator.node_id}")
            validator.key_share = share
        self.public_key = keys.public_key
        self.key_version = version
        logger.debug(f"chain {self.chain_id} dealt key version {version}")
        return KeyRegistryEntry(self.chain_id, version, keys.public_key, self.cfg)

    def threshold_sign(self, msg: bytes) -> Optional[Tuple[ThresholdSignature, int]]:
        """Gather shares from every validator that answers; (signature, key version) or None"""
        shares = [share for share in (v.signature_share(msg) for v in self.validators) if share is not None]
        sig = combine_verified(shares, self.cfg, self.public_key, msg)
        if sig is None:
            return None
        return sig, self.key_version

    def live_validators(self) -> List["ValidatorNode"]:
        return [v for v in self.validators if v.alive]

    def record_locks(self, tx_id: CrosschainTxId, addresses: List[Address]) -> None:
        held = self.locks.setdefault(tx_id, [])
        held.extend(a for a in addresses if a not in held)
