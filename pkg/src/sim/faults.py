"""
Fault specifications

Fault strings:
    crash:<Point>[@<chain>]
    byzantine:<count>[:crash|corrupt][@<chain>]
    loss:<rate>[:<kind>,<kind>...]
    delay:<min>-<max>
"""
import enum
from typing import TYPE_CHECKING, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..node import ByzantineStyle, CrashPoint, MessageKind
from ..utils.rng import SplitMix64
from .errors import ConfigError

if TYPE_CHECKING:
    from .config import ScenarioConfig


class FaultKind(str, enum.Enum):
    CRASH_COORDINATOR = "CrashCoordinator"
    BYZANTINE_VALIDATORS = "ByzantineValidators"
    MESSAGE_LOSS = "MessageLoss"
    MESSAGE_DELAY = "MessageDelay"


class FaultSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: FaultKind
    point: Optional[CrashPoint] = None
    chain: Optional[int] = None
    count: int = Field(default=0, ge=0)
    style: ByzantineStyle = ByzantineStyle.CRASH
    rate: float = Field(default=0.0, ge=0.0, le=1.0)
    message_kinds: Tuple[MessageKind, ...] = ()
    min_delay: int = Field(default=0, ge=0)
    max_delay: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_kind_fields(self) -> "FaultSpec":
        if self.kind == FaultKind.CRASH_COORDINATOR and self.point is None:
            raise ValueError("a crash fault needs a crash point")
        if self.kind == FaultKind.BYZANTINE_VALIDATORS and self.count < 1:
            raise ValueError("a byzantine fault needs at least one validator")
        if self.kind == FaultKind.MESSAGE_DELAY and self.min_delay > self.max_delay:
            raise ValueError(f"delay range {self.min_delay}-{self.max_delay} is empty")
        if self.kind in (FaultKind.MESSAGE_LOSS, FaultKind.MESSAGE_DELAY) and self.chain is not None:
            raise ValueError(f"{self.kind.value} applies to every chain and takes no site")
        return self

    def applies_to(self, kind: MessageKind) -> bool:
        return not self.message_kinds or kind in self.message_kinds

    def describe(self) -> str:
        """Fault-string form, parseable by parse_fault"""
        site = f"@{self.chain}" if self.chain is not None else ""
        if self.kind == FaultKind.CRASH_COORDINATOR:
            return f"crash:{self.point.value}{site}"
        if self.kind == FaultKind.BYZANTINE_VALIDATORS:
            return f"byzantine:{self.count}:{self.style.value}{site}"
        if self.kind == FaultKind.MESSAGE_LOSS:
            kinds = ",".join(kind.value for kind in self.message_kinds)
            return f"loss:{self.rate}" + (f":{kinds}" if kinds else "")
        return f"delay:{self.min_delay}-{self.max_delay}"


def parse_fault(text: str) -> FaultSpec:
    """
    Parse one fault string

    Raises:
        ConfigError: unknown fault kind or malformed fields
    """
    head, _, site = text.strip().partition("@")
    parts = head.split(":")
    name = parts[0].lower()
    try:
        chain = int(site) if site else None
        if name == "crash" and len(parts) == 2:
            return FaultSpec(kind=FaultKind.CRASH_COORDINATOR, point=CrashPoint(parts[1]), chain=chain)
        if name == "byzantine" and len(parts) in (2, 3):
            style = ByzantineStyle(parts[2]) if len(parts) == 3 else ByzantineStyle.CRASH
            return FaultSpec(kind=FaultKind.BYZANTINE_VALIDATORS, count=int(parts[1]), style=style, chain=chain)
        if name == "loss" and len(parts) in (2, 3):
            kinds = tuple(MessageKind(kind) for kind in parts[2].split(",")) if len(parts) == 3 else ()
            return FaultSpec(kind=FaultKind.MESSAGE_LOSS, rate=float(parts[1]), message_kinds=kinds, chain=chain)
        if name == "delay" and len(parts) == 2:
            low, _, high = parts[1].partition("-")
            return FaultSpec(kind=FaultKind.MESSAGE_DELAY, min_delay=int(low), max_delay=int(high), chain=chain)
    except ValueError as e:
        # covers pydantic ValidationError too
        raise ConfigError(f"invalid fault '{text}': {e}") from e
    raise ConfigError(f"unknown fault '{text}'")


def max_fault_delay(faults: List[FaultSpec]) -> int:
    return sum(fault.max_delay for fault in faults if fault.kind == FaultKind.MESSAGE_DELAY)


def random_fault_plan(rng: SplitMix64, config: "ScenarioConfig") -> List[FaultSpec]:
    """A fault plan that stays within the protocol's assumptions"""
    plan: List[FaultSpec] = []
    if rng.chance(0.5):
        plan.append(FaultSpec(kind=FaultKind.CRASH_COORDINATOR, point=rng.choice(list(CrashPoint))))

    rate = rng.draw_range(0, 30) / 100
    if rate > 0:
        plan.append(FaultSpec(kind=FaultKind.MESSAGE_LOSS, rate=rate))

    if rng.chance(0.5):
        low = rng.draw_range(0, 3)
        plan.append(FaultSpec(kind=FaultKind.MESSAGE_DELAY, min_delay=low, max_delay=low + rng.draw_range(0, 5)))

    if rng.chance(0.5):
        chain = rng.choice(config.chains)
        if chain.threshold > 1:
            plan.append(FaultSpec(
                kind=FaultKind.BYZANTINE_VALIDATORS,
                chain=chain.chain_id,
                count=rng.draw_range(1, chain.threshold - 1),
                style=rng.choice(list(ByzantineStyle)),
            ))
    return plan
