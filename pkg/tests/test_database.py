"""
Run ledger tests against the temporary sqlite database set up in conftest
"""
import json

import pytest

from src.cli import ledger
from src.cli.scenarios import load_scenario
from src.database import RunStatus, SimulationRun, get_db_context, init_db
from src.database.init_db import main as init_db_main
from src.sim import check_liveness, check_safety, run


@pytest.fixture
def travel():
    return load_scenario("travel_agent_single")


def fetch(run_id: int) -> SimulationRun:
    with get_db_context() as db:
        entry = db.query(SimulationRun).filter(SimulationRun.id == run_id).first()
        db.expunge_all()
        return entry


class TestLedger:
    def test_start_records_a_running_entry(self):
        run_id = ledger.record_start("travel_agent_single", 2**64 - 1, ["delay:0-2"])
        entry = fetch(run_id)
        assert entry.status == RunStatus.RUNNING
        assert entry.seed == str(2**64 - 1)
        assert json.loads(entry.faults) == ["delay:0-2"]
        assert not entry.passed

    def test_finish_stores_verdicts_and_statuses(self, travel, tmp_artifacts):
        trace_path, state_path = tmp_artifacts
        run_id = ledger.record_start(travel.name, 1, [])
        trace, final = run(travel, 1)
        safety, liveness = check_safety(trace, final), check_liveness(trace, final, travel)
        ledger.record_finish(run_id, travel, final, safety, liveness, trace_path, state_path)

        entry = fetch(run_id)
        assert entry.status == RunStatus.COMPLETED
        assert entry.passed
        assert not entry.outside_assumptions
        assert json.loads(entry.final_statuses) == {"booking": "Committed"}
        assert entry.trace_path == str(trace_path)
        assert entry.completed_at is not None

    def test_failure(self):
        run_id = ledger.record_start("travel_agent_single", 1, ["byzantine:3@2"])
        ledger.record_failure(run_id, "outside assumptions")
        entry = fetch(run_id)
        assert entry.status == RunStatus.FAILED
        assert entry.error_message == "outside assumptions"

    def test_unknown_run_ids_are_ignored(self):
        init_db()
        ledger.record_failure(10_000_000, "nothing")
        assert fetch(10_000_000) is None

    def test_recent_runs_newest_first(self):
        first = ledger.record_start("a", 1, [])
        second = ledger.record_start("b", 2, [])
        ids = [entry.id for entry in ledger.recent_runs(limit=2)]
        assert ids == [second, first]


def test_init_db_entry_point():
    assert init_db_main([]) == 0
    ledger.record_start("travel_agent_single", 1, [])
    assert init_db_main(["--reset"]) == 0
    assert ledger.recent_runs() == []
