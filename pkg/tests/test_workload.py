import pytest

from app.arbiter_enums import WorkloadKind
from app.arbiter_errors import (
    ConfigurationError,
    DimensionError,
    TraceDimensionError,
    TraceParseError,
)
from app.signals import RequestVector
from app.workload import (
    TraceRecord,
    WorkloadSpec,
    generate,
    read_trace,
    write_grants,
    write_trace,
)


def test_saturated_requests_every_port():
    records = generate(WorkloadSpec(WorkloadKind.SATURATED, length=5), 3)
    assert [r.cycle for r in records] == [0, 1, 2, 3, 4]
    assert all(r.requests == RequestVector.full(3) for r in records)
    assert not any(r.reset for r in records)


def test_bernoulli_is_deterministic_in_seed():
    spec = WorkloadSpec(WorkloadKind.BERNOULLI, length=200, seed=42, p=0.3)
    assert generate(spec, 5) == generate(spec, 5)
    other = WorkloadSpec(WorkloadKind.BERNOULLI, length=200, seed=43, p=0.3)
    assert generate(spec, 5) != generate(other, 5)


@pytest.mark.parametrize("p, expected", [(0.0, 0), (1.0, 0b1111)])
def test_bernoulli_extremes(p, expected):
    records = generate(WorkloadSpec(WorkloadKind.BERNOULLI, length=50, p=p), 4)
    assert {r.requests.mask for r in records} == {expected}


def test_onoff_duty_cycle():
    spec = WorkloadSpec(WorkloadKind.ONOFF, length=20, seed=9, burst_len=2, idle_len=3)
    records = generate(spec, 6)
    for port in range(6):
        column = [r.requests[port] for r in records]
        assert sum(column) == 8
        # periodic with period burst + idle
        assert column[:15] == column[5:20]


def test_persistent_ports_and_reset_cycles():
    spec = WorkloadSpec(
        WorkloadKind.BERNOULLI,
        length=30,
        p=0.0,
        persistent_ports=(1,),
        reset_cycles=3
    )
    records = generate(spec, 3)
    assert [r.reset for r in records[:4]] == [True, True, True, False]
    assert all(not r.requests.any() for r in records[:3])
    assert all(r.requests.ports() == [1] for r in records[3:])


@pytest.mark.parametrize("spec", [
    WorkloadSpec(WorkloadKind.SATURATED, length=-1),
    WorkloadSpec(WorkloadKind.BERNOULLI, length=10, p=1.5),
    WorkloadSpec(WorkloadKind.BERNOULLI, length=10, seed=-1),
    WorkloadSpec(WorkloadKind.BERNOULLI, length=10, seed=2**64),
    WorkloadSpec(WorkloadKind.ONOFF, length=10, burst_len=0),
    WorkloadSpec(WorkloadKind.EXPLICIT, length=None),
    WorkloadSpec(WorkloadKind.SATURATED, length=10, persistent_ports=(4,)),
    WorkloadSpec("poisson", length=10),
])
def test_invalid_specs(spec):
    with pytest.raises(ConfigurationError):
        generate(spec, 4)


def test_reset_cycles_drop_requests():
    records = generate(WorkloadSpec(length=2, reset_cycles=1), 2)
    assert records == [
        TraceRecord(0, True, RequestVector.zeros(2)),
        TraceRecord(1, False, RequestVector.full(2)),
    ]

################################################################################
# trace files

def test_read_trace(write_csv):
    path = write_csv("cycle,reset,req0,req1,req2\n0,1,0,0,0\n1,0,1,0,1\n")
    records = read_trace(path)
    assert records == [
        TraceRecord(0, True, RequestVector.zeros(3)),
        TraceRecord(1, False, RequestVector.from_string("101")),
    ]


def test_header_only_trace_is_empty(write_csv):
    assert read_trace(write_csv("cycle,reset,req0,req1\n")) == []


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("cycle,reset\n", 1),
    ("cycle,rst,req0\n0,0,1\n", 1),
    ("cycle,reset,req0,req1\n0,0,1,0\n1,0,1,2\n", 3),
    ("cycle,reset,req0\n0,0,1\n2,0,1\n", 3),
    ("cycle,reset,req0\nzero,0,1\n", 2),
    ("cycle,reset,req0\n0,yes,1\n", 2),
    ("cycle,reset,req0\n+0,0,1\n", 2),
    ("cycle,reset,req0\n 0,0,1\n", 2),
    ("cycle,reset,req0\n0,0,1\n0_1,0,1\n", 3),
])
def test_trace_parse_errors_carry_line(write_csv, text, line):
    with pytest.raises(TraceParseError) as excinfo:
        read_trace(write_csv(text))
    assert excinfo.value.line == line
    assert str(excinfo.value).startswith(f"line {line}:")


@pytest.mark.parametrize("data, line", [
    (b"cycle,reset,req0,req1\n0,0,1,0\n1,0,1,\xff\n", 3),
    (b"cycle,reset,req0,req1\n0,0,1,\x00\n", 2),
    (b"cycle,reset,req\xe9\n", 1),
])
def test_undecodable_bytes_are_parse_errors(tmp_path, data, line):
    path = tmp_path / "trace.csv"
    path.write_bytes(data)
    with pytest.raises(TraceParseError) as excinfo:
        read_trace(path)
    assert excinfo.value.line == line


def test_wrong_column_count_is_a_dimension_error(write_csv):
    path = write_csv("cycle,reset,req0,req1\n0,0,1,0\n1,0,1\n")
    with pytest.raises(TraceDimensionError) as excinfo:
        read_trace(path)
    assert excinfo.value.line == 3
    assert isinstance(excinfo.value, DimensionError)


def test_explicit_workload_truncates(write_csv):
    path = write_csv("cycle,reset,req0,req1\n0,0,1,0\n1,0,0,1\n2,0,1,1\n")
    spec = WorkloadSpec(WorkloadKind.EXPLICIT, length=2, trace_path=path)
    assert [r.requests.mask for r in generate(spec, 2)] == [0b01, 0b10]
    with pytest.raises(ConfigurationError):
        generate(spec, 3)


def test_written_trace_reads_back(tmp_path):
    spec = WorkloadSpec(WorkloadKind.BERNOULLI, length=40, seed=5, reset_cycles=2)
    records = generate(spec, 4)
    path = tmp_path / "trace.csv"
    write_trace(records, path)
    assert read_trace(path) == records
    assert b"\r\n" not in path.read_bytes()


def test_write_empty_trace_needs_width(tmp_path):
    with pytest.raises(ConfigurationError):
        write_trace([], tmp_path / "empty.csv")
    write_trace([], tmp_path / "empty.csv", num_ports=2)
    assert (tmp_path / "empty.csv").read_text() == "cycle,reset,req0,req1\n"


def test_write_grants(tmp_path, simulate):
    records = generate(WorkloadSpec(length=3), 2)
    outputs = simulate(records, num_ports=2)
    path = tmp_path / "grants.csv"
    write_grants(outputs, path)
    assert path.read_text() == (
        "cycle,gnt0,gnt1,event,port\n"
        "0,1,0,turn_hit,0\n"
        "1,0,1,turn_hit,1\n"
        "2,1,0,turn_hit,0\n"
    )
