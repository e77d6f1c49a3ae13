# app/workload.py

import csv
import re
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np

from app.arbiter_enums import WorkloadKind
from app.arbiter_errors import (
    ConfigurationError,
    TraceParseError,
    TraceDimensionError,
)
from app.arbiter_logger import logger_names
from app.signals import RequestVector

module_logger = logging.getLogger(logger_names.WORKLOAD)

CYCLE_COLUMN = "cycle"
RESET_COLUMN = "reset"
REQUEST_PREFIX = "req"
GRANT_PREFIX = "gnt"
EVENT_COLUMN = "event"
PORT_COLUMN = "port"

MAX_SEED = 2**64
# cycle column: ASCII decimal digits only
DECIMAL = re.compile(r"[0-9]+")

@dataclass(frozen=True)
class TraceRecord:
    """ One cycle of a request trace. """
    cycle: int
    reset: bool
    requests: RequestVector


@dataclass(frozen=True)
class WorkloadSpec:
    """
    Description of a request trace to generate.

    kind
        SATURATED, BERNOULLI, ONOFF or EXPLICIT.
    length
        Number of cycles. For EXPLICIT traces, None keeps the whole file.
    seed
        PRNG seed, 0 <= seed < 2**64.
    p
        BERNOULLI per-port, per-cycle request probability.
    burst_len, idle_len
        ONOFF run lengths, each port starts at a seeded phase.
    trace_path
        EXPLICIT source file.
    persistent_ports
        Ports forced to request on every non-reset cycle.
    reset_cycles
        Leading cycles driven with reset=1 and no requests.
    """
    kind: WorkloadKind = WorkloadKind.SATURATED
    length: Optional[int] = 0
    seed: int = 0
    p: float = 0.5
    burst_len: int = 1
    idle_len: int = 1
    trace_path: Optional[str] = None
    persistent_ports: Tuple[int, ...] = field(default_factory=tuple)
    reset_cycles: int = 0

    def validate(self, num_ports: Optional[int] = None) -> None:
        """ Raise ConfigurationError if the spec cannot be generated. """
        try:
            kind = WorkloadKind.from_value(self.kind)
        except ValueError as e:
            raise ConfigurationError(str(e)) from e
        if kind is not WorkloadKind.EXPLICIT or self.length is not None:
            if not isinstance(self.length, int) or self.length < 0:
                raise ConfigurationError(
                    f"length must be a non-negative integer, not {self.length!r}"
                )
        if not isinstance(self.seed, int) or not 0 <= self.seed < MAX_SEED:
            raise ConfigurationError(
                f"seed must be an integer in [0, 2**64), not {self.seed!r}"
            )
        if kind is WorkloadKind.BERNOULLI and not 0.0 <= self.p <= 1.0:
            raise ConfigurationError(f"p must be in [0, 1], not {self.p!r}")
        if kind is WorkloadKind.ONOFF and (self.burst_len < 1 or self.idle_len < 1):
            raise ConfigurationError(
                "burst and idle lengths must be >= 1, not"
                + f" {self.burst_len!r}/{self.idle_len!r}"
            )
        if kind is WorkloadKind.EXPLICIT and not self.trace_path:
            raise ConfigurationError("an explicit workload needs a trace file")
        if self.reset_cycles < 0:
            raise ConfigurationError(
                f"reset_cycles must be >= 0, not {self.reset_cycles!r}"
            )
        if num_ports is not None:
            for port in self.persistent_ports:
                if not 0 <= port < num_ports:
                    raise ConfigurationError(
                        f"persistent port {port} not in [0, {num_ports})"
                    )


def _request_matrix(spec: WorkloadSpec, num_ports: int) -> np.ndarray:
    """ (length, num_ports) boolean matrix of request bits. """
    length = spec.length
    kind = WorkloadKind.from_value(spec.kind)
    if kind is WorkloadKind.SATURATED:
        return np.ones((length, num_ports), dtype=bool)

    seed_sequence = np.random.SeedSequence(spec.seed)
    if kind is WorkloadKind.BERNOULLI:
        rng = np.random.Generator(np.random.PCG64(seed_sequence))
        # drawn in row-major (cycle, port) order
        return rng.random((length, num_ports)) < spec.p

    # ONOFF: each port gets its own child stream for its phase
    period = spec.burst_len + spec.idle_len
    cycles = np.arange(length)[:, np.newaxis]
    phases = np.array([
        np.random.Generator(np.random.PCG64(child)).integers(0, period)
        for child in seed_sequence.spawn(num_ports)
    ], dtype=np.int64)
    return (cycles + phases[np.newaxis, :]) % period < spec.burst_len


def generate(spec: WorkloadSpec, num_ports: int) -> List[TraceRecord]:
    """
    Build the trace described by `spec` for an arbiter with `num_ports`
    ports. Deterministic in (spec, num_ports).
    """
    if not isinstance(num_ports, int) or num_ports < 1:
        raise ConfigurationError(
            f"num_ports must be a positive integer, not {num_ports!r}"
        )
    spec.validate(num_ports)
    kind = WorkloadKind.from_value(spec.kind)

    if kind is WorkloadKind.EXPLICIT:
        records = read_trace(spec.trace_path)
        if records and len(records[0].requests) != num_ports:
            raise ConfigurationError(
                f"trace {spec.trace_path} has {len(records[0].requests)} ports,"
                + f" expected {num_ports}"
            )
        if spec.length is not None:
            records = records[:spec.length]
        return records

    matrix = _request_matrix(spec, num_ports)
    persistent = RequestVector.from_ports(spec.persistent_ports, num_ports).mask

    records = []
    for cycle in range(spec.length):
        if cycle < spec.reset_cycles:
            records.append(
                TraceRecord(cycle, True, RequestVector.zeros(num_ports))
            )
            continue
        mask = RequestVector.from_bits(matrix[cycle].tolist()).mask | persistent
        records.append(
            TraceRecord(cycle, False, RequestVector(mask, num_ports))
        )

    module_logger.debug(
        "Generated %s %s-cycle trace for %s ports (seed %s)",
        kind,
        spec.length,
        num_ports,
        spec.seed
    )
    return records

################################################################################
# CSV files

def _parse_bit(value: str, column: str, line: int) -> bool:
    if value == "1":
        return True
    if value == "0":
        return False
    raise TraceParseError(
        f"column {column} must be 0 or 1, not {value!r}",
        line
    )


def _decoded_lines(trace_file):
    """ Decode a binary file line by line so bad UTF-8 reports its line. """
    for line, raw in enumerate(trace_file, start=1):
        try:
            yield raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise TraceParseError(
                f"not valid UTF-8 ({e.reason} at byte {e.start})",
                line
            ) from None


def _parse_rows(reader) -> List[TraceRecord]:
    header = next(reader, None)
    if header is None:
        raise TraceParseError("missing header", 1)
    num_ports = len(header) - 2
    expected = [CYCLE_COLUMN, RESET_COLUMN] + [
        f"{REQUEST_PREFIX}{i}" for i in range(num_ports)
    ]
    if num_ports < 1 or header != expected:
        raise TraceParseError(
            f"header must be {','.join(expected[:2])},"
            + f"{REQUEST_PREFIX}0,...; got {','.join(header)}",
            1
        )

    records = []
    for row in reader:
        line = reader.line_num
        if not row:
            raise TraceParseError("empty row", line)
        if len(row) != len(header):
            raise TraceDimensionError(
                f"expected {len(header)} columns ({num_ports} request"
                + f" bits), got {len(row)}",
                line
            )
        if not DECIMAL.fullmatch(row[0]):
            raise TraceParseError(
                f"cycle must be a decimal integer, not {row[0]!r}",
                line
            )
        cycle = int(row[0])
        if cycle != len(records):
            raise TraceParseError(
                f"expected cycle {len(records)}, got {cycle}",
                line
            )
        reset = _parse_bit(row[1], RESET_COLUMN, line)
        bits = [
            _parse_bit(value, header[2 + i], line)
            for i, value in enumerate(row[2:])
        ]
        records.append(
            TraceRecord(cycle, reset, RequestVector.from_bits(bits))
        )
    return records


def read_trace(path) -> List[TraceRecord]:
    """
    Read a trace CSV (`cycle,reset,req0,...,req{N-1}`). Cycles must start
    at 0 and increase by one per row. Every malformed input, undecodable
    bytes included, raises TraceParseError with the 1-based line.
    """
    with open(path, "rb") as trace_file:
        reader = csv.reader(_decoded_lines(trace_file))
        try:
            records = _parse_rows(reader)
        except csv.Error as e:
            raise TraceParseError(str(e), reader.line_num) from e

    module_logger.info("Read %s cycles from %s", len(records), path)
    return records


def write_trace(records: Sequence[TraceRecord], path, num_ports=None) -> None:
    """
    Write a trace CSV, UTF-8 with LF line endings. `num_ports` is only
    needed to write the header of an empty trace.
    """
    if num_ports is None:
        if not records:
            raise ConfigurationError("num_ports is needed for an empty trace")
        num_ports = len(records[0].requests)
    with open(path, "w", newline="", encoding="utf-8") as trace_file:
        writer = csv.writer(trace_file, lineterminator="\n")
        writer.writerow(
            [CYCLE_COLUMN, RESET_COLUMN]
            + [f"{REQUEST_PREFIX}{i}" for i in range(num_ports)]
        )
        for record in records:
            if len(record.requests) != num_ports:
                raise TraceDimensionError(
                    f"cycle {record.cycle} has {len(record.requests)} request"
                    + f" bits, expected {num_ports}"
                )
            writer.writerow(
                [record.cycle, int(record.reset)] + list(record.requests.bits())
            )


def write_grants(outputs, path, num_ports=None) -> None:
    """
    Write the per-cycle grant CSV: `cycle,gnt0,...,gnt{N-1},event,port`.
    `port` is empty when the cycle's event has none.
    """
    if num_ports is None:
        if not outputs:
            raise ConfigurationError("num_ports is needed for an empty run")
        num_ports = len(outputs[0].grant)
    with open(path, "w", newline="", encoding="utf-8") as grants_file:
        writer = csv.writer(grants_file, lineterminator="\n")
        writer.writerow(
            [CYCLE_COLUMN]
            + [f"{GRANT_PREFIX}{i}" for i in range(num_ports)]
            + [EVENT_COLUMN, PORT_COLUMN]
        )
        for cycle, output in enumerate(outputs):
            port = output.event.port
            writer.writerow(
                [cycle]
                + list(output.grant.bits())
                + [str(output.event.kind), "" if port is None else port]
            )
