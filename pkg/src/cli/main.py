"""
Command-line entry point

    python -m src.cli.main list
    python -m src.cli.main run --scenario travel_agent_single --seed 1
    python -m src.cli.main check --trace trace.jsonl --state state.json --scenario travel_agent_single
    python -m src.cli.main fuzz --scenario auth_checks --runs 200
    python -m src.cli.main history

Exit codes: 0 every checker passed, 1 a checker failed, 2 configuration or runtime error.
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from rich.console import Console
from rich.table import Table

from ..config import RECORD_RUNS
from ..sim import (
    ConfigError,
    FinalState,
    ScenarioConfig,
    TraceRecord,
    Verdict,
    check_liveness,
    check_safety,
    load_scenario_file,
    parse_fault,
    random_fault_plan,
    read_trace,
    rng_stream,
    run,
    write_trace,
)
from ..utils.errors import CrosschainError
from ..utils.logger import setup_logger
from . import ledger
from .scenarios import list_scenarios, load_scenario

logger = setup_logger("cli")
console = Console(highlight=False)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2


def _scenario(args: argparse.Namespace) -> ScenarioConfig:
    if args.config:
        return load_scenario_file(args.config)
    if args.scenario:
        return load_scenario(args.scenario)
    raise ConfigError("give --scenario or --config")


def _print_verdicts(*verdicts: Verdict) -> None:
    for verdict in verdicts:
        style = "green" if verdict.passed else "red"
        console.print(f"[{style}]{verdict.summary()}[/{style}]")
        for finding in verdict.findings[1:]:
            console.print(f"  {finding}")


def _check(trace: List[TraceRecord], final: FinalState, config: ScenarioConfig) -> Tuple[Verdict, Verdict]:
    return check_safety(trace, final), check_liveness(trace, final, config)


def cmd_run(args: argparse.Namespace) -> int:
    config = _scenario(args)
    faults = [parse_fault(text) for text in args.faults]
    record = args.record or RECORD_RUNS
    run_id = ledger.record_start(config.name, args.seed, [f.describe() for f in faults]) if record else None

    try:
        trace, final = run(config, args.seed, faults, allow_outside=args.allow_outside)
    except CrosschainError as e:
        if run_id is not None:
            ledger.record_failure(run_id, str(e))
        raise

    if args.trace:
        write_trace(trace, args.trace)
    if args.state:
        final.save(args.state)
    safety, liveness = _check(trace, final, config)
    if run_id is not None:
        ledger.record_finish(run_id, config, final, safety, liveness, args.trace, args.state)

    table = Table(title=f"{config.name} (seed {args.seed})")
    table.add_column("submission", no_wrap=True)
    table.add_column("tx id")
    table.add_column("expected")
    table.add_column("status")
    for sub in config.submissions:
        tx_id = final.submissions.get(sub.label)
        table.add_row(sub.label, "-" if tx_id is None else str(tx_id), sub.expected_status or "-",
                      final.status_of(sub.label))
    console.print(table)
    console.print(f"ended at tick {final.end_tick}, block {final.current_block}, "
                  f"{'quiescent' if final.quiescent else 'max_ticks reached'}")
    _print_verdicts(safety, liveness)

    if final.outside_assumptions:
        console.print("[yellow]run is outside the protocol's assumptions[/yellow]")
        return EXIT_OK
    return EXIT_OK if safety.passed and liveness.passed else EXIT_VIOLATION


def cmd_check(args: argparse.Namespace) -> int:
    config = _scenario(args)
    trace = read_trace(args.trace)
    final = FinalState.load(args.state)
    safety, liveness = _check(trace, final, config)
    _print_verdicts(safety, liveness)
    return EXIT_OK if safety.passed and liveness.passed else EXIT_VIOLATION


def cmd_list(args: argparse.Namespace) -> int:
    table = Table(title="Scenarios")
    table.add_column("name", no_wrap=True)
    table.add_column("description")
    for name, description in list_scenarios():
        table.add_row(name, description)
    console.print(table)
    return EXIT_OK


def cmd_fuzz(args: argparse.Namespace) -> int:
    """Runs with random in-assumption fault plans; every run must pass both checkers"""
    config = _scenario(args)
    failures = []
    for i in range(args.runs):
        rng = rng_stream(args.seed, f"fuzz/{config.name}/{i}")
        faults = random_fault_plan(rng, config)
        seed = rng.next_u64()
        trace, final = run(config, seed, faults)
        safety, liveness = _check(trace, final, config)
        if not (safety.passed and liveness.passed):
            failures.append((seed, [f.describe() for f in faults], safety, liveness))
            logger.warning(f"fuzz run {i} (seed {seed}) failed: {safety.summary()}; {liveness.summary()}")

    console.print(f"{config.name}: {args.runs - len(failures)}/{args.runs} runs passed")
    for seed, faults, safety, liveness in failures:
        console.print(f"[red]seed {seed} faults {faults}[/red]")
        _print_verdicts(safety, liveness)
    return EXIT_OK if not failures else EXIT_VIOLATION


def cmd_history(args: argparse.Namespace) -> int:
    table = Table(title="Recorded runs")
    for column in ("id", "scenario", "seed", "status", "safety", "liveness", "started"):
        table.add_column(column)
    for entry in ledger.recent_runs(args.limit):
        table.add_row(
            str(entry.id), entry.scenario, entry.seed, entry.status.value,
            _verdict_cell(entry.safety_passed), _verdict_cell(entry.liveness_passed),
            entry.started_at.strftime("%Y-%m-%d %H:%M:%S") if entry.started_at else "-",
        )
    console.print(table)
    return EXIT_OK


def _verdict_cell(passed: Optional[bool]) -> str:
    if passed is None:
        return "-"
    return "pass" if passed else "FAIL"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Atomic crosschain transaction simulator")
    commands = parser.add_subparsers(dest="command", required=True)

    def add_scenario_args(sub: argparse.ArgumentParser) -> None:
        source = sub.add_mutually_exclusive_group()
        source.add_argument("--scenario", help="Packaged scenario name (see the list command)")
        source.add_argument("--config", type=Path, help="Path to a scenario JSON file")

    run_parser = commands.add_parser("run", help="Run a scenario and check the result")
    add_scenario_args(run_parser)
    run_parser.add_argument("--seed", type=int, default=1, help="Run seed (default: 1)")
    run_parser.add_argument("--faults", action="append", default=[],
                            help="Fault string, e.g. crash:AfterCommit, loss:0.3:ready, delay:0-4; repeatable")
    run_parser.add_argument("--trace", type=Path, help="Write the JSON-lines trace here")
    run_parser.add_argument("--state", type=Path, help="Write the final state JSON here")
    run_parser.add_argument("--allow-outside", action="store_true",
                            help="Run even when byzantine validators reach a chain's threshold")
    run_parser.add_argument("--record", action="store_true", help="Record the run in the ledger")
    run_parser.set_defaults(handler=cmd_run)

    check_parser = commands.add_parser("check", help="Re-run the checkers on a stored trace and final state")
    add_scenario_args(check_parser)
    check_parser.add_argument("--trace", type=Path, required=True)
    check_parser.add_argument("--state", type=Path, required=True)
    check_parser.set_defaults(handler=cmd_check)

    list_parser = commands.add_parser("list", help="List packaged scenarios")
    list_parser.set_defaults(handler=cmd_list)

    fuzz_parser = commands.add_parser("fuzz", help="Run a scenario under random fault plans")
    add_scenario_args(fuzz_parser)
    fuzz_parser.add_argument("--runs", type=int, default=200, help="Number of runs (default: 200)")
    fuzz_parser.add_argument("--seed", type=int, default=1, help="Seed of the fault plans (default: 1)")
    fuzz_parser.set_defaults(handler=cmd_fuzz)

    history_parser = commands.add_parser("history", help="Show recorded runs")
    history_parser.add_argument("--limit", type=int, default=20)
    history_parser.set_defaults(handler=cmd_history)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except CrosschainError as e:
        logger.error(f"{args.command} failed: {e}")
        console.print(f"[red]error:[/red] {e}")
        return EXIT_ERROR
    except Exception as e:
        logger.error(f"unexpected error in {args.command}: {e}", exc_info=True)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
