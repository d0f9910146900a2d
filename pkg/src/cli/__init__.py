"""
Command-line scenario runner and trace tooling

The entry point is src.cli.main; it is not imported here so `python -m src.cli.main`
runs it cleanly.
"""
from .scenarios import CATALOG, scenario_names, load_scenario, list_scenarios

__all__ = [
    "CATALOG",
    "scenario_names",
    "load_scenario",
    "list_scenarios",
]
