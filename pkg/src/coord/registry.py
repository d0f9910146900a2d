"""
Blockchain public key registry held by the coordination chain
"""
from dataclasses import dataclass
from typing import Dict, Optional

from ..tsig import GroupScalar, ThresholdConfig
from ..txcore.types import ChainId
from .errors import StaleVersion, UnknownKeyVersion


@dataclass(frozen=True)
class KeyRegistryEntry:
    chain: ChainId
    version: int
    public_key: GroupScalar
    threshold_cfg: ThresholdConfig


class KeyRegistry:
    """Versioned public keys per chain; versions only move forward"""

    def __init__(self):
        self._entries: Dict[ChainId, Dict[int, KeyRegistryEntry]] = {}

    def register_key(self, entry: KeyRegistryEntry) -> None:
        latest = self.latest(entry.chain)
        if latest is not None and entry.version <= latest.version:
            raise StaleVersion(
                f"chain {entry.chain} key version {entry.version} does not advance {latest.version}"
            )
        self._entries.setdefault(entry.chain, {})[entry.version] = entry

    def get(self, chain: ChainId, version: int) -> KeyRegistryEntry:
        try:
            return self._entries[chain][version]
        except KeyError:
            raise UnknownKeyVersion(f"no key version {version} registered for chain {chain}") from None

    def latest(self, chain: ChainId) -> Optional[KeyRegistryEntry]:
        versions = self._entries.get(chain)
        if not versions:
            return None
        return versions[max(versions)]
