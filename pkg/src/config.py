"""
Environment-driven settings for the crosschain simulator
"""
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


# Logging
LOG_LEVEL = os.getenv("ACT_LOG_LEVEL", "INFO").upper()
LOG_DIR = os.getenv("ACT_LOG_DIR", "logs")
LOG_TO_FILE = _flag("ACT_LOG_TO_FILE", "true")

# Run ledger
DATABASE_URL = os.getenv("ACT_DATABASE_URL", "sqlite:///./act_runs.db")
RECORD_RUNS = _flag("ACT_RECORD_RUNS", "false")

# Packaged scenarios live next to the code unless overridden
SCENARIO_DIR = Path(os.getenv("ACT_SCENARIO_DIR", str(Path(__file__).parent / "scenarios")))
