# app/oracle.py
#
# Reference models used as ground truth for the arbiter. They are written
# with plain lists and explicit loops and share no code with
# app.arbiter_core, so agreement between the two means something.

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from app.arbiter_enums import FsmState
from app.arbiter_errors import DimensionError
from app.signals import RequestVector, GrantVector

def scan_next(token_index: int, requests: RequestVector) -> Optional[int]:
    """
    Look at ports token_index, token_index+1, ... (mod N) one at a time and
    return the first one that is requesting, or None if none are.
    """
    bits = list(requests.bits())
    n = len(bits)
    port = token_index
    for _ in range(n):
        if bits[port] == 1:
            return port
        port = port + 1
        if port == n:
            port = 0
    return None


@dataclass(frozen=True)
class FixedPriorityState:
    """ Idle, or Gnt(k) with `port` = k. """
    fsm: FsmState = FsmState.IDLE
    port: Optional[int] = None


def _decision_boxes(bits: List[int]) -> Optional[int]:
    """ Test r0, then r1, ... ; box k is reached only if r0..r(k-1) are 0. """
    for k in range(len(bits)):
        if bits[k] == 1:
            return k
    return None


def fixed_priority_step(
        state: FixedPriorityState,
        requests: RequestVector,
        reset: bool = False,
        num_ports: Optional[int] = None
    ) -> Tuple[FixedPriorityState, GrantVector]:
    """
    One clock edge of the fixed-priority ASM chart.

    Idle moves to Gnt(k) for the lowest-index request k. Gnt(k) stays put as
    long as r_k = 1. When r_k = 0 the chart returns to Idle and Idle's
    decision boxes are resolved on the same edge, so the machine rests in
    Idle only when no request is up. Reset forces Idle.
    """
    bits = list(requests.bits())
    n = len(bits) if num_ports is None else num_ports
    if len(bits) != n:
        raise DimensionError(
            f"Request vector has {len(bits)} bits, expected {n}"
        )

    if reset:
        return FixedPriorityState(), GrantVector.zeros(n)

    if state.fsm is FsmState.GRANTED and bits[state.port] == 1:
        return state, GrantVector.one_hot(state.port, n)

    k = _decision_boxes(bits)
    if k is None:
        return FixedPriorityState(), GrantVector.zeros(n)
    return FixedPriorityState(FsmState.GRANTED, k), GrantVector.one_hot(k, n)


def token_rotate_reference(
        num_ports: int,
        time_slice: Optional[int],
        trace: Sequence[Tuple[bool, RequestVector]]
    ) -> List[Optional[int]]:
    """
    Strict token-slot model written out longhand. Returns the granted port
    (or None) for every cycle of `trace`.

    A token holder that requests is granted for up to `time_slice` cycles
    (None = until it drops its request). A holder that does not request is
    skipped and the token moves on one port per cycle. A grantee that
    drops its request gives up the cycle on which it drops it.
    """
    token = [0] * num_ports
    token[0] = 1
    holder = None
    used = 0
    grants = []
    for reset, requests in trace:
        bits = list(requests.bits())
        if reset:
            token = [0] * num_ports
            token[0] = 1
            holder = None
            used = 0
            grants.append(None)
            continue

        if holder is not None:
            if bits[holder] == 0:
                # released: pass the token on, nobody granted this cycle
                token[holder] = 0
                token[(holder + 1) % num_ports] = 1
                holder = None
                used = 0
                grants.append(None)
                continue
            if time_slice is None or used < time_slice:
                used = used + 1
                grants.append(holder)
                continue
            # slice ran out: pass the token on and decide for the new holder
            token[holder] = 0
            token[(holder + 1) % num_ports] = 1
            holder = None
            used = 0

        current = token.index(1)
        if token[current] == 1 and bits[current] == 1:
            holder = current
            used = 1
            grants.append(holder)
        else:
            token[current] = 0
            token[(current + 1) % num_ports] = 1
            grants.append(None)
    return grants
