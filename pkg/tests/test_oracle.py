import random

import pytest

from app.arbiter_core import UNLIMITED
from app.arbiter_enums import FsmState
from app.arbiter_errors import DimensionError
from app.oracle import (
    FixedPriorityState,
    fixed_priority_step,
    scan_next,
    token_rotate_reference,
)
from app.signals import RequestVector
from app.verification import (
    check_fixed_priority_equivalence,
    check_gate_equivalence,
    check_scan_equivalence,
    check_token_rotate_equivalence,
)

from helpers import requests_from


def test_scan_next_wraps_around():
    requests = RequestVector.from_string("01001")
    assert scan_next(0, requests) == 1
    assert scan_next(2, requests) == 4
    assert scan_next(4, requests) == 4
    assert scan_next(3, RequestVector.zeros(5)) is None


def test_fixed_priority_holds_then_falls_to_lowest():
    state = FixedPriorityState()
    grants = []
    for _, requests in requests_from("011", "111", "101", "100", "000"):
        state, grant = fixed_priority_step(state, requests)
        grants.append(grant.port)
    # port 1 holds while up, then port 0 wins on the release edge
    assert grants == [1, 1, 0, 0, None]
    assert state.fsm is FsmState.IDLE


def test_fixed_priority_reset_forces_idle():
    state, _ = fixed_priority_step(FixedPriorityState(), RequestVector.full(3))
    state, grant = fixed_priority_step(state, RequestVector.full(3), reset=True)
    assert state == FixedPriorityState()
    assert grant.port is None


def test_fixed_priority_width_check():
    with pytest.raises(DimensionError):
        fixed_priority_step(FixedPriorityState(), RequestVector.full(3), num_ports=4)


def test_token_rotate_reference_slot_by_slot():
    trace = requests_from("010", "010", "000", "000", "001", "001", "001")
    assert token_rotate_reference(3, UNLIMITED, trace) == [
        None, 1, None, None, None, None, 2
    ]
    assert token_rotate_reference(3, 1, requests_from(*["111"] * 4)) == [0, 1, 2, 0]

################################################################################
# equivalence with the production arbiter

@pytest.mark.parametrize("num_ports", range(1, 7))
def test_scan_equivalence_exhaustive(num_ports):
    assert check_scan_equivalence(num_ports) is None


@pytest.mark.parametrize("num_ports", range(1, 7))
def test_fixed_priority_equivalence(num_ports):
    assert check_fixed_priority_equivalence(num_ports, traces=1000, length=50) is None


@pytest.mark.parametrize("num_ports", range(1, 7))
def test_token_rotate_equivalence(num_ports):
    assert check_token_rotate_equivalence(num_ports, traces=1000, length=50) is None


@pytest.mark.parametrize("num_ports", range(1, 7))
def test_gate_equivalence_exhaustive(num_ports):
    assert check_gate_equivalence(num_ports) is None
