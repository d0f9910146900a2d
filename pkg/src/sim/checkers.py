"""
Post-hoc safety and liveness checks over a trace and final state
"""
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from ..utils.logger import setup_logger
from .config import ScenarioConfig
from .state import FinalState
from .trace import TraceRecord

logger = setup_logger("sim")

UNLOCK_OUTCOME = {"commit": "Committed", "discard": "Ignored"}


@dataclass(frozen=True)
class Finding:
    kind: str
    tx_id: Optional[int]
    detail: str

    def __str__(self) -> str:
        subject = f"tx {self.tx_id}: " if self.tx_id is not None else ""
        return f"{self.kind}: {subject}{self.detail}"


@dataclass
class Verdict:
    check: str
    findings: List[Finding] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.findings

    def add(self, kind: str, tx_id: Optional[int], detail: str) -> None:
        self.findings.append(Finding(kind, tx_id, detail))

    def summary(self) -> str:
        if self.passed:
            return f"{self.check}: pass"
        return f"{self.check}: {len(self.findings)} violation(s); first: {self.findings[0]}"


def check_safety(trace: List[TraceRecord], final_state: FinalState) -> Verdict:
    """
    Every chain that staged state for a transaction resolved it the same way, and
    that way agrees with the coordination contract
    """
    verdict = Verdict("safety")
    unlocks: Dict[int, Dict[str, List[Tuple[Optional[int], int]]]] = defaultdict(lambda: defaultdict(list))
    decisions: Dict[int, Set[str]] = defaultdict(set)
    staged: Dict[int, Set[Tuple[Optional[int], int]]] = defaultdict(set)

    for record in trace:
        if record.kind == "lock":
            staged[record.tx_id].add((record.chain, record.details.get("address")))
        elif record.kind == "unlock":
            unlocks[record.tx_id][record.details.get("mode")].append((record.chain, record.details.get("address")))
            staged[record.tx_id].discard((record.chain, record.details.get("address")))
        elif record.kind in ("commit_accepted", "ignore_accepted"):
            decisions[record.tx_id].add(record.kind)

    for tx_id in sorted(unlocks):
        modes = unlocks[tx_id]
        if len(modes) > 1:
            where = {mode: sorted(sites) for mode, sites in sorted(modes.items())}
            verdict.add("MixedResolution", tx_id, f"contracts resolved differently: {where}")
        status = final_state.coordination.get(str(tx_id), "NotStarted")
        for mode in sorted(modes):
            if UNLOCK_OUTCOME.get(mode) != status:
                verdict.add("ResolutionMismatch", tx_id, f"unlocked with {mode} while the coordination status is {status}")

    for tx_id in sorted(decisions):
        if len(decisions[tx_id]) > 1:
            verdict.add("ConflictingDecision", tx_id, "both Commit and Ignore were accepted")
        accepted = "Committed" if "commit_accepted" in decisions[tx_id] else "Ignored"
        status = final_state.coordination.get(str(tx_id), "NotStarted")
        if status != accepted:
            verdict.add("TerminalChanged", tx_id, f"accepted {accepted} but final status is {status}")

    if final_state.quiescent:
        for tx_id, status in sorted(final_state.coordination.items()):
            if status == "Started":
                verdict.add("StartedAtQuiescence", int(tx_id), "still Started with no pending events")
        # A quiet run has nothing left that could resolve a staged update
        for tx_id in sorted(staged):
            for chain, address in sorted(staged[tx_id], key=lambda site: (str(site[0]), site[1])):
                verdict.add("StagedNeverResolved", tx_id,
                            f"contract {address} on chain {chain} staged state that was never committed or discarded")

    if not verdict.passed:
        logger.warning(verdict.summary())
    return verdict


def slack(config: ScenarioConfig, final_state: FinalState) -> int:
    """Ticks a resolution may trail the time-out plus timer jitter"""
    timing = config.timing
    return timing.mining_delay + timing.network_latency + final_state.max_fault_delay + timing.ticks_per_block


def check_liveness(trace: List[TraceRecord], final_state: FinalState, config: ScenarioConfig) -> Verdict:
    """
    The run went quiet by itself, released every lock, resolved every started
    transaction, settled every timer, and unlocked within the time-out bound
    """
    verdict = Verdict("liveness")
    if not final_state.quiescent or any(record.kind == "max_ticks" for record in trace):
        verdict.add("NotQuiescent", None, f"events still pending at tick {final_state.end_tick}")

    held: Dict[Tuple[Optional[int], int], Set[int]] = defaultdict(set)
    timers: Dict[Tuple[Optional[int], Optional[int], int], int] = {}
    crashed: Set[Tuple[Optional[int], Optional[int]]] = set()
    timeout_blocks: Dict[int, int] = {}
    unlock_ticks: List[TraceRecord] = []

    for record in trace:
        site = (record.chain, record.node, record.tx_id)
        if record.kind == "lock":
            held[(record.chain, record.details.get("address"))].add(record.tx_id)
        elif record.kind == "unlock":
            held[(record.chain, record.details.get("address"))].discard(record.tx_id)
            unlock_ticks.append(record)
        elif record.kind == "timer_set":
            timers[site] = record.tick
        elif record.kind in ("timer_fire", "timer_cancel"):
            timers.pop(site, None)
        elif record.kind == "crash":
            crashed.add((record.chain, record.node))
        elif record.kind == "start_accepted":
            timeout_blocks[record.tx_id] = record.details.get("timeout_block")

    for (chain, address), owners in sorted(held.items(), key=lambda item: (str(item[0][0]), item[0][1])):
        for tx_id in sorted(owners):
            verdict.add("LockNeverReleased", tx_id, f"contract {address} on chain {chain} stays locked")

    for chain, contracts in sorted(final_state.chains.items()):
        for address, dump in sorted(contracts.items()):
            if dump.get("lock_owner") is not None:
                verdict.add("LockHeld", dump["lock_owner"], f"contract {address} on chain {chain} ends locked")

    for tx_id, status in sorted(final_state.coordination.items()):
        if status == "Started":
            verdict.add("Unresolved", int(tx_id), "coordination status still Started")

    for (chain, node, tx_id) in sorted(timers, key=lambda key: (str(key[0]), str(key[1]), key[2])):
        if (chain, node) not in crashed:
            verdict.add("TimerPending", tx_id, f"timer of node {chain}/{node} neither fired nor cancelled")

    ticks_per_block = config.timing.ticks_per_block
    extra = config.timing.timer_jitter + slack(config, final_state)
    for record in unlock_ticks:
        timeout_block = timeout_blocks.get(record.tx_id)
        if timeout_block is None:
            continue
        bound = (timeout_block + 1) * ticks_per_block + extra
        if record.tick > bound:
            verdict.add("LateResolution", record.tx_id,
                        f"chain {record.chain} unlocked at tick {record.tick}, bound {bound}")

    if not verdict.passed:
        logger.warning(verdict.summary())
    return verdict
