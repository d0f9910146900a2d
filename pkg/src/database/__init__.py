"""
Database package: the simulation run ledger
"""
from .database import (
    engine,
    SessionLocal,
    get_db_context,
    init_db,
    drop_all_tables,
    reset_database
)

from .models import (
    Base,
    RunStatus,
    SimulationRun,
)

__all__ = [
    # Database functions
    "engine",
    "SessionLocal",
    "get_db_context",
    "init_db",
    "drop_all_tables",
    "reset_database",

    # Models
    "Base",
    "RunStatus",
    "SimulationRun",
]
