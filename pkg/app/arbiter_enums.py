# app/arbiter_enums.py

from typing import Union
from enum import Flag, auto, Enum

class BaseEnum(Enum):
    def __str__(self):
        """ Change the str representation to be the lowercased self.name """
        return self.name.lower()

    @classmethod
    def from_value(cls, value: Union["BaseEnum", str]):
        """
        Look up a member by itself, by its name (any case) or by its value.
        Raises ValueError naming the accepted choices otherwise.
        """
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            member = cls.__members__.get(value.strip().upper())
            if member is not None:
                return member
            for member in cls:
                if member.value == value:
                    return member
        raise ValueError(
            f"Given value ({value!r}) does not match a {cls.__name__}."
            + f" Choices are: {', '.join(str(m) for m in cls)}"
        )


class Policy(str, BaseEnum):
    """
    Arbitration policies. The lowercased name doubles as the stem of the
    plugin module, e.g. SKIPSCAN is served by
    `plugins/policies/skipscan_policy.py`.
    """
    SKIPSCAN = "skipscan"
    TOKENROTATE = "tokenrotate"

    def __str__(self):
        return self.value


class FsmState(BaseEnum):
    """ Arbiter state machine states; GRANTED carries its port separately """
    IDLE = auto()
    GRANTED = auto()


class EventKind(Flag):
    """ Per-cycle arbitration events """
    NONE = 0
    TURN_HIT = auto()
    TURN_MISS = auto()
    SLICE_EXPIRED = auto()
    RELEASED_BY_REQUEST = auto()

    # flag combinations
    ARBITRATION = TURN_HIT | TURN_MISS
    TERMINATION = SLICE_EXPIRED | RELEASED_BY_REQUEST

    def __str__(self):
        return self.name.lower()


class GateKind(Flag):
    """ Node kinds of the gate-level grant logic graph """
    AND = auto()
    OR = auto()
    NOT = auto()
    INPUT = auto()
    REG = auto()

    # flag combinations
    SOURCE = INPUT | REG
    COMBINATIONAL = AND | OR | NOT

    def __str__(self):
        return self.name

    @classmethod
    def get_flag(cls, kind: str):
        member = cls.__members__.get(kind.upper())
        if member is None or member in (cls.SOURCE, cls.COMBINATIONAL):
            raise ValueError(f"Given gate kind ({kind}) is not a gate.")
        return member


class WorkloadKind(str, BaseEnum):
    """ Request trace families """
    SATURATED = "saturated"
    BERNOULLI = "bernoulli"
    ONOFF = "onoff"
    EXPLICIT = "explicit"

    def __str__(self):
        return self.value


class TokenEncoding(BaseEnum):
    """
    How a gate graph stores the token register. ONE_HOT holds token[i]
    directly, THERMOMETER holds mask[i] = 1 iff i >= token index.
    """
    ONE_HOT = auto()
    THERMOMETER = auto()
