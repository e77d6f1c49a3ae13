# app/metrics.py

from dataclasses import dataclass, asdict
from typing import Any, Dict, List, NamedTuple, Sequence
import logging

import numpy as np

from app.arbiter_enums import EventKind
from app.arbiter_errors import ConfigurationError, DimensionError
from app.arbiter_logger import logger_names

module_logger = logging.getLogger(logger_names.METRICS)

@dataclass(frozen=True)
class SimReport:
    """
    Summary of one simulation.

    grants_per_port
        Cycles each port held the grant.
    turn_hits, turn_misses
        Count of TurnHit / TurnMiss events.
    max_wait_per_port
        Longest waiting run per port: consecutive cycles with reset=0, the
        port's request up and its grant down, counted from the first such
        cycle up to (not including) the cycle that ends the run.
    utilization
        Granted cycles over cycles with reset=0 and any request up; 0.0
        when there are no such cycles.
    jain_index
        (sum g)^2 / (N * sum g^2) over grants_per_port; 1.0 when nothing
        was granted.
    total_cycles
        Number of cycles analyzed.
    lost_cycles
        Cycles with reset=0 and a request up but no grant.
    """
    grants_per_port: List[int]
    turn_hits: int
    turn_misses: int
    max_wait_per_port: List[int]
    utilization: float
    jain_index: float
    total_cycles: int
    lost_cycles: int

    def to_dict(self) -> Dict[str, Any]:
        """ Flat dict with the field names as keys, ready for json.dump. """
        return asdict(self)


class StarvationViolation(NamedTuple):
    port: int
    start_cycle: int
    length: int


def jain_index(shares: Sequence[int]) -> float:
    """ Jain's fairness index; 1.0 by convention for all-zero shares. """
    values = np.asarray(shares, dtype=np.float64)
    total = values.sum()
    if total == 0:
        return 1.0
    return float(total * total / (len(values) * np.square(values).sum()))


def _check_lengths(trace, outputs) -> None:
    if len(trace) != len(outputs):
        raise DimensionError(
            f"trace has {len(trace)} cycles but there are {len(outputs)}"
            + " step outputs"
        )


def _matrices(trace, outputs):
    """ Boolean (cycles, N) request and grant matrices plus reset column. """
    num_ports = len(trace[0].requests)
    requests = np.zeros((len(trace), num_ports), dtype=bool)
    grants = np.zeros((len(trace), num_ports), dtype=bool)
    resets = np.zeros(len(trace), dtype=bool)
    for cycle, (record, output) in enumerate(zip(trace, outputs)):
        if len(record.requests) != num_ports or len(output.grant) != num_ports:
            raise DimensionError(
                f"cycle {cycle} does not have {num_ports} ports"
            )
        requests[cycle] = record.requests.bits()
        grants[cycle] = output.grant.bits()
        resets[cycle] = record.reset
    return requests, grants, resets


def _waiting_runs(waiting: np.ndarray):
    """ Yield (port, start_cycle, length) for every run of True per column. """
    cycles, num_ports = waiting.shape
    for port in range(num_ports):
        column = waiting[:, port].astype(np.int8)
        edges = np.diff(np.concatenate(([0], column, [0])))
        starts = np.flatnonzero(edges == 1)
        ends = np.flatnonzero(edges == -1)
        for start, end in zip(starts, ends):
            yield port, int(start), int(end - start)


def analyze(trace: Sequence, outputs: Sequence) -> SimReport:
    """
    Compute the SimReport for a trace and the arbiter outputs it produced.
    `trace` items need `.reset` and `.requests`, `outputs` items `.grant`
    and `.event`.
    """
    _check_lengths(trace, outputs)
    hits = sum(1 for output in outputs if output.event.kind is EventKind.TURN_HIT)
    misses = sum(1 for output in outputs if output.event.kind is EventKind.TURN_MISS)
    if not trace:
        return SimReport([], hits, misses, [], 0.0, 1.0, 0, 0)

    requests, grants, resets = _matrices(trace, outputs)
    num_ports = requests.shape[1]
    live = ~resets[:, np.newaxis]

    grants_per_port = grants.sum(axis=0).astype(int).tolist()
    max_wait = [0] * num_ports
    for port, _, length in _waiting_runs(requests & ~grants & live):
        max_wait[port] = max(max_wait[port], length)

    pending = requests.any(axis=1) & ~resets
    granted = grants.any(axis=1) & pending
    n_pending = int(pending.sum())
    utilization = float(granted.sum()) / n_pending if n_pending else 0.0

    report = SimReport(
        grants_per_port=grants_per_port,
        turn_hits=hits,
        turn_misses=misses,
        max_wait_per_port=max_wait,
        utilization=utilization,
        jain_index=jain_index(grants_per_port),
        total_cycles=len(trace),
        lost_cycles=n_pending - int(granted.sum()),
    )
    module_logger.info(
        "Analyzed %s cycles: jain=%.4f utilization=%.4f hits=%s misses=%s",
        report.total_cycles,
        report.jain_index,
        report.utilization,
        report.turn_hits,
        report.turn_misses
    )
    return report


def starvation_check(
        trace: Sequence,
        outputs: Sequence,
        bound: int
    ) -> List[StarvationViolation]:
    """
    Every waiting run (request up, no grant, no reset) longer than `bound`
    cycles, sorted by start cycle then port.
    """
    if not isinstance(bound, int) or bound < 1:
        raise ConfigurationError(f"bound must be an integer >= 1, not {bound!r}")
    _check_lengths(trace, outputs)
    if not trace:
        return []
    requests, grants, resets = _matrices(trace, outputs)
    violations = [
        StarvationViolation(port, start, length)
        for port, start, length in _waiting_runs(
            requests & ~grants & ~resets[:, np.newaxis]
        )
        if length > bound
    ]
    violations.sort(key=lambda v: (v.start_cycle, v.port))
    for violation in violations:
        module_logger.warning(
            "Port %s waited %s cycles from cycle %s (bound %s)",
            violation.port,
            violation.length,
            violation.start_cycle,
            bound
        )
    return violations
