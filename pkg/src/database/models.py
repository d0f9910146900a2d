"""
Database models for the simulation run ledger
"""
from datetime import datetime
import enum

from sqlalchemy import Boolean, Column, DateTime, Enum, Integer, String, Text
from sqlalchemy.orm import declarative_base

Base = declarative_base()


class RunStatus(str, enum.Enum):
    """Lifecycle of a recorded run"""
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


class SimulationRun(Base):
    """One `run` or `fuzz` iteration of the simulator"""
    __tablename__ = "simulation_runs"

    id = Column(Integer, primary_key=True, index=True)

    scenario = Column(String(200), nullable=False, index=True)
    seed = Column(String(32), nullable=False)  # u64 does not fit a signed INTEGER
    faults = Column(Text, nullable=True)  # JSON list of fault strings

    status = Column(Enum(RunStatus), default=RunStatus.RUNNING, nullable=False)
    error_message = Column(Text, nullable=True)

    # Verdicts
    safety_passed = Column(Boolean, nullable=True)
    liveness_passed = Column(Boolean, nullable=True)
    outside_assumptions = Column(Boolean, default=False)
    final_statuses = Column(Text, nullable=True)  # JSON: submission label -> status

    # Artifacts
    trace_path = Column(String(500), nullable=True)
    state_path = Column(String(500), nullable=True)

    started_at = Column(DateTime, default=datetime.utcnow, index=True)
    completed_at = Column(DateTime, nullable=True)

    @property
    def passed(self) -> bool:
        return bool(self.safety_passed) and bool(self.liveness_passed)
