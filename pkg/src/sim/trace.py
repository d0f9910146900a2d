"""
Run trace: one JSON object per line, keys sorted
"""
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from .errors import TraceFormatError

TRACE_FIELDS = ("seq", "tick", "chain", "node", "kind", "tx_id", "details")


@dataclass(frozen=True)
class TraceRecord:
    seq: int
    tick: int
    chain: Optional[int]
    node: Optional[int]
    kind: str
    tx_id: Optional[int]
    details: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TraceRecord":
        missing = [name for name in TRACE_FIELDS if name not in data]
        if missing:
            raise TraceFormatError(f"trace record lacks {missing}")
        if not isinstance(data["details"], dict):
            raise TraceFormatError("trace record details must be an object")
        return cls(**{name: data[name] for name in TRACE_FIELDS})


def dumps_trace(records: Iterable[TraceRecord]) -> str:
    return "".join(record.to_json() + "\n" for record in records)


def write_trace(records: Iterable[TraceRecord], path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_trace(records), encoding="utf-8")


def loads_trace(text: str) -> List[TraceRecord]:
    records = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            raise TraceFormatError(f"line {number}: {e}") from e
        if not isinstance(data, dict):
            raise TraceFormatError(f"line {number}: expected an object")
        records.append(TraceRecord.from_dict(data))
    return records


def read_trace(path: Union[str, Path]) -> List[TraceRecord]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise TraceFormatError(f"cannot read trace {path}: {e}") from e
    return loads_trace(text)
