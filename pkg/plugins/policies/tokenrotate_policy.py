# plugins/policies/tokenrotate_policy.py

from app.arbiter_core import compute_ack
from app.arbiter_enums import Policy as PolicyName, EventKind
from app.signals import RequestVector
from plugins.base_policy import BasePolicy, Arbitration

class Policy(BasePolicy):
    """
    Strict token slots: only the token holder may be acknowledged
    (ack = token AND request). A holder that is not requesting is a turn
    miss and the token moves to the next port for the following cycle.
    """
    name = PolicyName.TOKENROTATE
    regrants_on_release = False

    def arbitrate(
            self,
            token_index: int,
            requests: RequestVector
        ) -> Arbitration:
        if compute_ack(True, requests[token_index]):
            return Arbitration(
                token_index,
                EventKind.TURN_HIT,
                token_index,
                token_index
            )
        next_token = (token_index + 1) % len(requests)
        return Arbitration(None, EventKind.TURN_MISS, token_index, next_token)
