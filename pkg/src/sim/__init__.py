"""
Deterministic simulator: scenario schema, faults, event loop, trace and checkers
"""
from ..utils.rng import SplitMix64, rng_stream
from .errors import SimulationError, ConfigError, UnknownSite, TraceFormatError
from .faults import FaultKind, FaultSpec, parse_fault, random_fault_plan, max_fault_delay
from .config import (
    ContractConfig,
    ChainConfig,
    MultichainNodeConfig,
    CallConfig,
    TamperConfig,
    StorageOverride,
    SubmissionConfig,
    TimingConfig,
    CoordinationConfig,
    ScenarioConfig,
    parse_scenario,
    load_scenario_file,
)
from .trace import TraceRecord, dumps_trace, loads_trace, write_trace, read_trace
from .state import FinalState
from .engine import SimEvent, Simulation, run
from .checkers import Finding, Verdict, check_safety, check_liveness, slack

__all__ = [
    # Randomness
    "SplitMix64",
    "rng_stream",

    # Errors
    "SimulationError",
    "ConfigError",
    "UnknownSite",
    "TraceFormatError",

    # Faults
    "FaultKind",
    "FaultSpec",
    "parse_fault",
    "random_fault_plan",
    "max_fault_delay",

    # Configuration
    "ContractConfig",
    "ChainConfig",
    "MultichainNodeConfig",
    "CallConfig",
    "TamperConfig",
    "StorageOverride",
    "SubmissionConfig",
    "TimingConfig",
    "CoordinationConfig",
    "ScenarioConfig",
    "parse_scenario",
    "load_scenario_file",

    # Trace and final state
    "TraceRecord",
    "dumps_trace",
    "loads_trace",
    "write_trace",
    "read_trace",
    "FinalState",

    # Engine
    "SimEvent",
    "Simulation",
    "run",

    # Checkers
    "Finding",
    "Verdict",
    "check_safety",
    "check_liveness",
    "slack",
]
