"""
End-of-run snapshot of every chain and the coordination contract
"""
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .errors import TraceFormatError


@dataclass
class FinalState:
    """
    Attributes:
        chains: chain id -> contract address -> contract dump (storage, lock owner)
        coordination: tx id -> resolved coordination status at the final block
        submissions: submission label -> tx id (None when the nest was never built)
        faults: applied faults in fault-string form
        max_fault_delay: largest extra delay the faults can add to one message
    """
    chains: Dict[str, Dict[str, Dict[str, Any]]]
    coordination: Dict[str, str]
    current_block: int
    end_tick: int
    quiescent: bool
    outside_assumptions: bool = False
    submissions: Dict[str, Optional[int]] = field(default_factory=dict)
    faults: List[str] = field(default_factory=list)
    max_fault_delay: int = 0

    def status_of(self, label: str) -> str:
        tx_id = self.submissions.get(label)
        if tx_id is None:
            return "NotStarted"
        return self.coordination.get(str(tx_id), "NotStarted")

    def storage(self, chain: int, address: int) -> Dict[int, int]:
        dump = self.chains[str(chain)][str(address)]
        return {int(key): value for key, value in dump["storage"].items()}

    def lock_owner(self, chain: int, address: int) -> Optional[int]:
        return self.chains[str(chain)][str(address)]["lock_owner"]

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "FinalState":
        try:
            return cls(**json.loads(text))
        except (json.JSONDecodeError, TypeError) as e:
            raise TraceFormatError(f"invalid final state: {e}") from e

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FinalState":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise TraceFormatError(f"cannot read final state {path}: {e}") from e
        return cls.from_json(text)
