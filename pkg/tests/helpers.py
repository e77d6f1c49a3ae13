# tests/helpers.py

import random

from app.signals import RequestVector


def requests_from(*bit_strings):
    """ (reset=False, RequestVector) pairs from bit strings, port 0 first. """
    return [(False, RequestVector.from_string(bits)) for bits in bit_strings]


def random_trace(rng: random.Random, num_ports: int, length: int, reset_p=0.0):
    trace = []
    for _ in range(length):
        reset = rng.random() < reset_p
        trace.append((reset, RequestVector(rng.getrandbits(num_ports), num_ports)))
    return trace
