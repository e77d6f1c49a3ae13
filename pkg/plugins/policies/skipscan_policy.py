# plugins/policies/skipscan_policy.py

from app.arbiter_core import select_grant
from app.arbiter_enums import Policy as PolicyName, EventKind
from app.signals import RequestVector
from plugins.base_policy import BasePolicy, Arbitration

class Policy(BasePolicy):
    """
    Cyclic search policy: starting at the token, grant the first port that
    is requesting and skip the ones that are not. Never wastes a cycle while
    any request is up, including the edge on which a grantee releases.
    """
    name = PolicyName.SKIPSCAN
    regrants_on_release = True

    def arbitrate(
            self,
            token_index: int,
            requests: RequestVector
        ) -> Arbitration:
        port = select_grant(token_index, requests)
        if port is None:
            # token pointer stays put while nobody is asking
            return Arbitration(None, EventKind.NONE, None, token_index)
        return Arbitration(port, EventKind.TURN_HIT, port, port)
