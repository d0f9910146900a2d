"""
Recording runs in the ledger database
"""
import json
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Union

from ..database import RunStatus, SimulationRun, get_db_context, init_db
from ..sim import FinalState, ScenarioConfig, Verdict


def record_start(scenario: str, seed: int, faults: List[str]) -> int:
    init_db()
    with get_db_context() as db:
        run = SimulationRun(scenario=scenario, seed=str(seed), faults=json.dumps(faults), status=RunStatus.RUNNING)
        db.add(run)
        db.commit()
        return run.id


def record_finish(run_id: int, config: ScenarioConfig, final: FinalState, safety: Verdict, liveness: Verdict,
                  trace_path: Optional[Union[str, Path]] = None,
                  state_path: Optional[Union[str, Path]] = None) -> None:
    statuses = {sub.label: final.status_of(sub.label) for sub in config.submissions}
    with get_db_context() as db:
        run = db.query(SimulationRun).filter(SimulationRun.id == run_id).first()
        if run is None:
            return
        # Use setattr to avoid SQLAlchemy Column type issues
        setattr(run, "status", RunStatus.COMPLETED)
        setattr(run, "faults", json.dumps(final.faults))
        setattr(run, "safety_passed", safety.passed)
        setattr(run, "liveness_passed", liveness.passed)
        setattr(run, "outside_assumptions", final.outside_assumptions)
        setattr(run, "final_statuses", json.dumps(statuses, sort_keys=True))
        setattr(run, "trace_path", str(trace_path) if trace_path else None)
        setattr(run, "state_path", str(state_path) if state_path else None)
        setattr(run, "completed_at", datetime.utcnow())
        db.commit()


def record_failure(run_id: int, error: str) -> None:
    with get_db_context() as db:
        run = db.query(SimulationRun).filter(SimulationRun.id == run_id).first()
        if run is None:
            return
        setattr(run, "status", RunStatus.FAILED)
        setattr(run, "error_message", error)
        setattr(run, "completed_at", datetime.utcnow())
        db.commit()


def recent_runs(limit: int = 20) -> List[SimulationRun]:
    init_db()
    with get_db_context() as db:
        runs = db.query(SimulationRun).order_by(SimulationRun.id.desc()).limit(limit).all()
        db.expunge_all()
        return runs
