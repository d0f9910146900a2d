"""
Packaged scenario catalog
"""
from pathlib import Path
from typing import List, Optional, Tuple

from ..config import SCENARIO_DIR
from ..sim import ConfigError, ScenarioConfig, load_scenario_file

# Listing order; scenario files not named here follow alphabetically
CATALOG = (
    "travel_agent_single",
    "travel_agent_two_agents",
    "erc20_router_two_agents",
    "repeated_contract_abort",
    "auth_checks",
    "crash_point_1",
    "crash_point_2",
    "crash_point_3",
    "crash_point_4",
    "nested_four_chain",
    "nested_params",
    "param_mismatch",
    "stale_param_state",
)


def scenario_names(directory: Optional[Path] = None) -> List[str]:
    directory = Path(directory or SCENARIO_DIR)
    available = {path.stem for path in directory.glob("*.json")}
    ordered = [name for name in CATALOG if name in available]
    return ordered + sorted(available.difference(CATALOG))


def load_scenario(name: str, directory: Optional[Path] = None) -> ScenarioConfig:
    """
    Load a packaged scenario by name

    Raises:
        ConfigError: no scenario of that name, or the file does not validate
    """
    path = Path(directory or SCENARIO_DIR) / f"{name}.json"
    if not path.is_file():
        raise ConfigError(f"unknown scenario '{name}'; try the list command")
    return load_scenario_file(path)


def list_scenarios(directory: Optional[Path] = None) -> List[Tuple[str, str]]:
    """(name, description) for every scenario, in catalog order"""
    return [(name, load_scenario(name, directory).description) for name in scenario_names(directory)]
