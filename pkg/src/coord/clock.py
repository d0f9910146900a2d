"""
Coordination chain block clock
"""
from dataclasses import dataclass


@dataclass
class CoordClock:
    """Maps simulation ticks to coordination block numbers, one block per ticks_per_block"""
    ticks_per_block: int = 10
    current_block: int = 0
    carry: int = 0

    def __post_init__(self):
        if self.ticks_per_block < 1:
            raise ValueError(f"ticks_per_block must be positive, got {self.ticks_per_block}")

    def advance_clock(self, ticks: int) -> int:
        if ticks < 0:
            raise ValueError(f"cannot advance the clock by {ticks} ticks")
        blocks, self.carry = divmod(self.carry + ticks, self.ticks_per_block)
        self.current_block += blocks
        return self.current_block

    def advance_to_tick(self, tick: int) -> int:
        """Catch up with an absolute tick counted from block 0"""
        elapsed = self.current_block * self.ticks_per_block + self.carry
        if tick > elapsed:
            self.advance_clock(tick - elapsed)
        return self.current_block

    def timeout_tick(self, timeout_block: int) -> int:
        """First tick at which a record with this time-out block resolves as Ignored"""
        return (timeout_block + 1) * self.ticks_per_block
