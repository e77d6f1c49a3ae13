
import pytest

from app.arbiter_core import ArbiterConfig, new_arbiter, run


@pytest.fixture
def simulate():
    """ Run a trace through a fresh arbiter built from ArbiterConfig kwargs. """
    def _simulate(trace, **config_kwargs):
        return run(new_arbiter(ArbiterConfig(**config_kwargs)), trace)
    return _simulate


@pytest.fixture
def write_csv(tmp_path):
    """ Write `text` to a CSV file under tmp_path and return its path. """
    def _write_csv(text, name="trace.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write_csv
