import pytest
from sqlalchemy import text

from app.arbiter_core import UNLIMITED, ArbiterConfig
from app.arbiter_enums import Policy, WorkloadKind
from app.database import DatabaseHandler
from app.models import SimulationRun
from app.workload import WorkloadSpec

REPORT = {
    "grants_per_port": [3, 3],
    "turn_hits": 6,
    "turn_misses": 0,
    "max_wait_per_port": [1, 1],
    "utilization": 1.0,
    "jain_index": 1.0,
    "total_cycles": 6,
    "lost_cycles": 0,
}


@pytest.fixture
def db_url(tmp_path):
    return f"sqlite:///{tmp_path / 'runs.db'}"


def test_requires_a_url(monkeypatch):
    monkeypatch.setattr("config.settings.DATABASE_URI", None)
    with pytest.raises(ValueError):
        DatabaseHandler()


def test_not_connected():
    handler = DatabaseHandler("sqlite://")
    with pytest.raises(RuntimeError):
        handler.record_run(ArbiterConfig(2), WorkloadSpec(), REPORT)


def test_record_and_fetch_runs(db_url):
    with DatabaseHandler(db_url) as database_handler:
        database_handler.record_run(
            ArbiterConfig(2, time_slice=2),
            WorkloadSpec(WorkloadKind.BERNOULLI, length=6, seed=12),
            REPORT
        )
        database_handler.record_run(
            ArbiterConfig(2, UNLIMITED, Policy.TOKENROTATE),
            WorkloadSpec(WorkloadKind.EXPLICIT, length=None, trace_path="t.csv"),
            dict(REPORT, turn_misses=4, jain_index=0.5)
        )

    with DatabaseHandler(db_url) as database_handler:
        runs = list(database_handler.fetch_runs())
        assert [run.policy for run in runs] == [Policy.SKIPSCAN, Policy.TOKENROTATE]
        first, second = runs
        assert first.time_slice == 2
        assert first.seed == 12
        assert first.workload is WorkloadKind.BERNOULLI
        assert first.grants_per_port == [3, 3]
        assert second.time_slice is None
        assert second.seed is None
        assert second.trace_path == "t.csv"
        assert second.jain_index == 0.5

        only_rotate = list(database_handler.fetch_runs("tokenrotate"))
        assert [run.id for run in only_rotate] == [second.id]

        row = second.to_dict()
        assert row["policy"] == "tokenrotate"
        assert row["workload"] == "explicit"
        assert row["turn_misses"] == 4

        stored = database_handler.session.execute(
            text('SELECT policy FROM "SimulationRun" ORDER BY id')
        ).scalars().all()
        assert stored == ["skipscan", "tokenrotate"]


def test_exception_rolls_back_pending_rows(db_url):
    with pytest.raises(KeyError):
        with DatabaseHandler(db_url) as database_handler:
            run = SimulationRun(
                num_ports=2,
                policy=Policy.SKIPSCAN,
                time_slice=1,
                workload=WorkloadKind.SATURATED,
            )
            run.apply_report(REPORT)
            database_handler.session.add(run)
            raise KeyError("boom")

    with DatabaseHandler(db_url) as database_handler:
        assert list(database_handler.fetch_runs()) == []


def test_report_key_mapping_covers_report():
    assert set(SimulationRun.get_report_key_mapping()) == set(REPORT)
