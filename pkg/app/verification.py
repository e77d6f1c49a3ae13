# app/verification.py
#
# Equivalence suites between the production arbiter, the gate models and
# the reference oracles. Each check returns the first Counterexample it
# finds, or None.

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
from typing import Any, Dict, List, Optional
import logging
import random

from app.arbiter_core import (
    UNLIMITED,
    ArbiterConfig,
    ArbiterState,
    new_arbiter,
    step,
)
from app.arbiter_enums import Policy
from app.arbiter_logger import logger_names
from app.netlist_model import build_chain, build_tree, grant_port
from app.oracle import (
    FixedPriorityState,
    fixed_priority_step,
    scan_next,
    token_rotate_reference,
)
from app.signals import RequestVector

module_logger = logging.getLogger(logger_names.VERIFY)

# probability of a reset cycle in the random traces
RESET_PROBABILITY = 0.05
SLICE_CHOICES = (1, 2, 3, UNLIMITED)

@dataclass(frozen=True)
class Counterexample:
    suite: str
    num_ports: int
    token_index: Optional[int]
    requests: str
    expected: Optional[int]
    actual: Optional[int]
    trace_index: Optional[int] = None
    cycle: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _all_requests(num_ports: int):
    for mask in range(1 << num_ports):
        yield RequestVector(mask, num_ports)


def _random_trace(rng: random.Random, num_ports: int, length: int):
    trace = []
    for _ in range(length):
        reset = rng.random() < RESET_PROBABILITY
        trace.append((reset, RequestVector(rng.getrandbits(num_ports), num_ports)))
    return trace


def check_scan_equivalence(num_ports: int) -> Optional[Counterexample]:
    """
    Fresh SkipScan grant from every token position for every request
    vector, against the literal cyclic scan.
    """
    config = ArbiterConfig(num_ports, policy=Policy.SKIPSCAN)
    for token_index in range(num_ports):
        state = ArbiterState(config, token_index=token_index)
        for requests in _all_requests(num_ports):
            _, output = step(state, requests)
            expected = scan_next(token_index, requests)
            if output.grant.port != expected:
                return Counterexample(
                    "scan", num_ports, token_index, str(requests),
                    expected, output.grant.port
                )
    return None


def check_fixed_priority_equivalence(
        num_ports: int,
        traces: int,
        length: int,
        seed: int = 0
    ) -> Optional[Counterexample]:
    """
    SkipScan with the token pinned at 0 and an unlimited slice, step for
    step against the fixed-priority ASM on random traces.
    """
    config = ArbiterConfig(
        num_ports,
        time_slice=UNLIMITED,
        policy=Policy.SKIPSCAN,
        rotate=False
    )
    rng = random.Random(seed * 1000 + num_ports)
    for trace_index in range(traces):
        state = new_arbiter(config)
        reference = FixedPriorityState()
        for cycle, (reset, requests) in enumerate(
                _random_trace(rng, num_ports, length)):
            state, output = step(state, requests, reset)
            reference, expected = fixed_priority_step(reference, requests, reset)
            if output.grant != expected:
                return Counterexample(
                    "fixed_priority", num_ports, state.token_index,
                    str(requests), expected.port, output.grant.port,
                    trace_index, cycle
                )
    return None


def check_token_rotate_equivalence(
        num_ports: int,
        traces: int,
        length: int,
        seed: int = 0
    ) -> Optional[Counterexample]:
    """ TokenRotate policy against the longhand token-slot model. """
    rng = random.Random(seed * 1000 + num_ports + 500)
    for trace_index in range(traces):
        time_slice = rng.choice(SLICE_CHOICES)
        config = ArbiterConfig(
            num_ports,
            time_slice=time_slice,
            policy=Policy.TOKENROTATE
        )
        trace = _random_trace(rng, num_ports, length)
        expected_ports = token_rotate_reference(num_ports, time_slice, trace)
        state = new_arbiter(config)
        for cycle, ((reset, requests), expected) in enumerate(
                zip(trace, expected_ports)):
            token_index = state.token_index
            state, output = step(state, requests, reset)
            if output.grant.port != expected:
                return Counterexample(
                    "token_rotate", num_ports, token_index, str(requests),
                    expected, output.grant.port, trace_index, cycle
                )
    return None


def check_gate_equivalence(num_ports: int) -> Optional[Counterexample]:
    """ Chain and tree gate graphs against the cyclic scan, all inputs. """
    graphs = [build_chain(num_ports), build_tree(num_ports)]
    for token_index in range(num_ports):
        for requests in _all_requests(num_ports):
            expected = scan_next(token_index, requests)
            for graph in graphs:
                actual = grant_port(graph, token_index, requests)
                if actual != expected:
                    return Counterexample(
                        graph.structure, num_ports,
                        token_index, str(requests), expected, actual
                    )
    return None


def verify_ports(
        num_ports: int,
        traces: int,
        length: int,
        seed: int = 0
    ) -> List[Counterexample]:
    """ Every suite for one port count; at most one counterexample each. """
    results = [
        check_scan_equivalence(num_ports),
        check_fixed_priority_equivalence(num_ports, traces, length, seed),
        check_token_rotate_equivalence(num_ports, traces, length, seed),
        check_gate_equivalence(num_ports),
    ]
    failures = [result for result in results if result is not None]
    if failures:
        module_logger.warning("N=%s: %s suite(s) failed", num_ports, len(failures))
    else:
        module_logger.info("N=%s: all suites passed", num_ports)
    return failures


def verify_all(
        max_ports: int,
        traces: int,
        length: int,
        seed: int = 0,
        jobs: int = 1
    ) -> List[Counterexample]:
    """
    Run every suite for N = 1 .. max_ports. Port counts are independent and
    fan out over `jobs` threads; results come back in port order.
    """
    port_counts = range(1, max_ports + 1)
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        per_port = executor.map(
            lambda n: verify_ports(n, traces, length, seed),
            port_counts
        )
        return [failure for failures in per_port for failure in failures]
