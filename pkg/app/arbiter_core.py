# app/arbiter_core.py

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Any, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union
import logging

from app.arbiter_enums import Policy, FsmState, EventKind
from app.arbiter_errors import ConfigurationError, DimensionError
from app.arbiter_logger import logger_names
from app.signals import Bit, RequestVector, GrantVector

module_logger = logging.getLogger(logger_names.ARBITER)

# time_slice value meaning "hold the grant until the request drops"
UNLIMITED = None

@dataclass(frozen=True)
class ArbiterConfig:
    """
    Static configuration of one arbiter instance.

    num_ports
        Number of requesting devices N, ports are numbered 0 .. N-1.
    time_slice
        Cycles a grantee may hold the bus, counting the granted cycle
        itself. None (UNLIMITED) holds the grant until the request drops.
    policy
        Policy.SKIPSCAN (default) or Policy.TOKENROTATE.
    rotate
        False pins the token at port 0, turning the arbiter into a fixed
        priority arbiter.
    """
    num_ports: int
    time_slice: Optional[int] = 1
    policy: Policy = Policy.SKIPSCAN
    rotate: bool = True

    def __post_init__(self):
        if not isinstance(self.num_ports, int) or self.num_ports < 1:
            raise ConfigurationError(
                f"num_ports must be a positive integer, not {self.num_ports!r}"
            )
        if self.time_slice is not UNLIMITED and (
                not isinstance(self.time_slice, int) or self.time_slice < 1):
            raise ConfigurationError(
                "time_slice must be a positive integer or UNLIMITED, not"
                + f" {self.time_slice!r}"
            )
        try:
            object.__setattr__(self, "policy", Policy.from_value(self.policy))
        except ValueError as e:
            raise ConfigurationError(str(e)) from e


class Event(NamedTuple):
    """ An arbitration event and the port it concerns. """
    kind: EventKind = EventKind.NONE
    port: Optional[int] = None

    def __str__(self):
        if self.port is None:
            return str(self.kind)
        return f"{self.kind}({self.port})"

NO_EVENT = Event()


@dataclass(frozen=True)
class ArbiterState:
    """
    Registered state of the arbiter between two clock edges. In the token
    view, token[i] = 1 iff i == token_index.
    """
    config: ArbiterConfig
    token_index: int = 0
    fsm: FsmState = FsmState.IDLE
    granted_port: Optional[int] = None
    # 0 while idle; None while holding an unlimited grant
    slice_remaining: Optional[int] = 0
    cycle_count: int = 0

    def __post_init__(self):
        n = self.config.num_ports
        if not 0 <= self.token_index < n:
            raise ValueError(f"token_index {self.token_index} not in [0, {n})")
        if self.fsm is FsmState.GRANTED:
            if self.granted_port is None or not 0 <= self.granted_port < n:
                raise ValueError(
                    f"granted_port {self.granted_port} not in [0, {n})"
                )
        elif self.granted_port is not None or self.slice_remaining:
            raise ValueError("An idle arbiter holds no grant and no slice")

    @property
    def tokens(self) -> Tuple[int, ...]:
        """ The token register as N bits, one-hot at token_index. """
        return tuple(
            int(i == self.token_index) for i in range(self.config.num_ports)
        )

    def __str__(self):
        if self.fsm is FsmState.GRANTED:
            fsm = f"granted({self.granted_port})"
        else:
            fsm = "idle"
        return (f"<ArbiterState(cycle={self.cycle_count},"
                + f" token={self.token_index}, fsm={fsm},"
                + f" slice_remaining={self.slice_remaining})>")


@dataclass(frozen=True)
class StepOutput:
    """
    What the arbiter drives on one clock edge.

    grant
        One-hot or all-zero grant vector.
    event
        TurnHit(q) for a fresh grant, TurnMiss(t) for a denied token
        holder; otherwise the termination if one happened; otherwise none.
    termination
        SliceExpired(p) or ReleasedByRequest(p) when the previous grant
        ended on this edge, else None.
    """
    grant: GrantVector
    event: Event = NO_EVENT
    termination: Optional[Event] = None

    def __post_init__(self):
        if self.termination is not None and (
                not self.termination.kind
                or self.termination.kind not in EventKind.TERMINATION):
            raise ValueError(
                f"{self.termination} does not end a grant"
            )


class AckResult(NamedTuple):
    port: int
    token: bool
    request: bool
    ack: bool
    event: EventKind

    @property
    def message(self) -> str:
        if self.ack:
            return f"Access Permitted on Port No. {self.port}"
        return f"Access Denied on Port No. {self.port}"


# (reset, requests) pairs or objects with .reset and .requests (TraceRecord)
TraceItem = Union[Tuple[bool, RequestVector], Any]

################################################################################
# combinational helpers

def compute_ack(token: Bit, request: Bit) -> bool:
    """ ack = token AND request; True is a turn hit, False a turn miss. """
    return bool(token) and bool(request)


def ack_scan(
        tokens: Sequence[Bit],
        requests: Sequence[Bit]
    ) -> List[AckResult]:
    """
    Walk the ports in index order and classify each one as a turn hit or a
    turn miss from its token and request bits.
    """
    if len(tokens) != len(requests):
        raise DimensionError(
            f"{len(tokens)} token bits but {len(requests)} request bits"
        )
    results = []
    for port, (token, request) in enumerate(zip(tokens, requests)):
        ack = compute_ack(token, request)
        results.append(AckResult(
            port,
            bool(token),
            bool(request),
            ack,
            EventKind.TURN_HIT if ack else EventKind.TURN_MISS
        ))
    return results


def select_grant(token_index: int, requests: RequestVector) -> Optional[int]:
    """
    First requesting port in cyclic order token_index, token_index+1, ...
    (mod N), or None when nobody requests.
    """
    mask = requests.mask
    if not mask:
        return None
    upper = mask >> token_index
    if upper:
        return token_index + (upper & -upper).bit_length() - 1
    return (mask & -mask).bit_length() - 1


@lru_cache(maxsize=None)
def get_policy(policy: Policy):
    """ Policy plugin instance, loaded once per policy. """
    # imported here; the policy plugins import this module
    from app.plugin_loader import load_policy_class
    return load_policy_class(policy)()

################################################################################
# state machine

def new_arbiter(config: ArbiterConfig) -> ArbiterState:
    """ Arbiter in reset: Idle, token at port 0, no cycles taken. """
    if not isinstance(config, ArbiterConfig):
        raise ConfigurationError(f"Expected an ArbiterConfig, got {config!r}")
    get_policy(config.policy)
    module_logger.debug(
        "New %s arbiter: %s ports, time slice %s, rotate=%s",
        config.policy,
        config.num_ports,
        "unlimited" if config.time_slice is UNLIMITED else config.time_slice,
        config.rotate
    )
    return ArbiterState(config)


def _rounded(config: ArbiterConfig, port: int) -> int:
    """ Token index after `port` terminates: the next port in circular order. """
    if not config.rotate:
        return 0
    return (port + 1) % config.num_ports


def step(
        state: ArbiterState,
        requests: RequestVector,
        reset: bool = False
    ) -> Tuple[ArbiterState, StepOutput]:
    """
    Advance the arbiter by one positive clock edge.

    Arguments
    ---------
        state
            Current registered state.
        requests
            Request bits sampled on this edge, one per port.
        reset
            Synchronous, active-high reset. Dominates every request.

    Returns
    -------
        The next state and the StepOutput driven on this edge.
    """
    config = state.config
    n = config.num_ports
    if len(requests) != n:
        raise DimensionError(
            f"Request vector has {len(requests)} bits, arbiter has {n} ports"
        )
    cycle = state.cycle_count + 1

    if reset:
        return (
            ArbiterState(config, cycle_count=cycle),
            StepOutput(GrantVector.zeros(n))
        )

    policy = get_policy(config.policy)
    termination = None
    token = state.token_index

    if state.fsm is FsmState.GRANTED:
        port = state.granted_port
        if not requests[port]:
            termination = Event(EventKind.RELEASED_BY_REQUEST, port)
        elif state.slice_remaining is not UNLIMITED and state.slice_remaining <= 1:
            termination = Event(EventKind.SLICE_EXPIRED, port)
        else:
            remaining = state.slice_remaining
            if remaining is not UNLIMITED:
                remaining -= 1
            return (
                replace(state, slice_remaining=remaining, cycle_count=cycle),
                StepOutput(GrantVector.one_hot(port, n))
            )

        token = _rounded(config, port)
        if (termination.kind is EventKind.RELEASED_BY_REQUEST
                and not policy.regrants_on_release):
            # the released slot still holds the token with request 0
            return (
                ArbiterState(config, token_index=token, cycle_count=cycle),
                StepOutput(
                    GrantVector.zeros(n),
                    Event(EventKind.TURN_MISS, port),
                    termination
                )
            )

    decision = policy.arbitrate(token, requests)
    next_token = decision.next_token if config.rotate else 0

    if decision.port is None:
        if decision.event is EventKind.NONE:
            event = termination or NO_EVENT
        else:
            event = Event(decision.event, decision.event_port)
        return (
            ArbiterState(config, token_index=next_token, cycle_count=cycle),
            StepOutput(GrantVector.zeros(n), event, termination)
        )

    next_state = ArbiterState(
        config,
        token_index=next_token,
        fsm=FsmState.GRANTED,
        granted_port=decision.port,
        slice_remaining=config.time_slice,
        cycle_count=cycle
    )
    return (
        next_state,
        StepOutput(
            GrantVector.one_hot(decision.port, n),
            Event(decision.event, decision.event_port),
            termination
        )
    )


def _unpack(item) -> Tuple[bool, RequestVector]:
    if isinstance(item, tuple) and len(item) == 2:
        reset, requests = item
        return bool(reset), requests
    return bool(item.reset), item.requests


def iter_steps(
        state: ArbiterState,
        trace: Iterable[TraceItem]
    ) -> Iterable[Tuple[ArbiterState, StepOutput]]:
    """ Fold `step` over a trace, yielding (state after edge, output). """
    for index, item in enumerate(trace):
        reset, requests = _unpack(item)
        try:
            state, output = step(state, requests, reset)
        except DimensionError as e:
            raise DimensionError(str(e), cycle=index) from e
        yield state, output


def run_with_state(
        state: ArbiterState,
        trace: Iterable[TraceItem]
    ) -> Tuple[ArbiterState, List[StepOutput]]:
    """ Drive a whole trace; return the final state and every output. """
    outputs = []
    for state, output in iter_steps(state, trace):
        outputs.append(output)
    return state, outputs


def run(state: ArbiterState, trace: Iterable[TraceItem]) -> List[StepOutput]:
    """ One StepOutput per trace cycle, equivalent to folding `step`. """
    return run_with_state(state, trace)[1]
