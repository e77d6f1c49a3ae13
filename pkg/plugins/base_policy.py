# plugins/base_policy.py

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

from app.arbiter_enums import Policy as PolicyName, EventKind
from app.signals import RequestVector

@dataclass(frozen=True)
class Arbitration:
    """
    Outcome of one fresh arbitration decision.

    port
        The port granted this cycle, or None.
    event
        EventKind.TURN_HIT, EventKind.TURN_MISS or EventKind.NONE.
    event_port
        The port the event refers to (the grantee on a hit, the denied
        token holder on a miss).
    next_token
        Token index the arbiter holds after this decision.
    """
    port: Optional[int]
    event: EventKind
    event_port: Optional[int]
    next_token: int

    def __post_init__(self):
        # NONE is contained in every flag combination
        if self.event not in EventKind.ARBITRATION:
            raise ValueError(
                f"{self.event} is not an arbitration outcome"
            )
        if (self.port is None) == (self.event is EventKind.TURN_HIT):
            raise ValueError(
                f"{self.event} does not match granted port {self.port}"
            )


class BasePolicy(ABC):
    """
    Abstract Base Class for arbitration policies.
    Defines how the arbiter picks a grantee when no grant is held, and how
    it behaves on the clock edge where a grantee drops its request. Slice
    accounting, reset and rounding stay in `app.arbiter_core`.
    """
    name: PolicyName

    # whether a grant may be issued on the same clock edge a grantee
    # released the bus by dropping its request
    regrants_on_release: bool = True

    @abstractmethod
    def arbitrate(
            self,
            token_index: int,
            requests: RequestVector
        ) -> Arbitration:
        """
        Make a fresh grant decision.

        Parameters
        ----------
            token_index
                The port whose turn it is, in [0, N).
            requests
                Request bits sampled this cycle.

        Results
        -------
            An Arbitration naming the grantee (or None), the hit/miss
            event and the token index to carry forward.
        """
        pass
