# app/signals.py

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Tuple, Union

Bit = Union[bool, int]

@dataclass(frozen=True)
class _BitVector:
    """
    Immutable N-bit vector backed by an int mask. Bit i belongs to port i;
    string forms list port 0 first.
    """
    mask: int
    width: int

    def __post_init__(self):
        if self.width < 0:
            raise ValueError(f"Width must be non-negative, not {self.width}")
        if self.mask < 0 or self.mask >> self.width:
            raise ValueError(
                f"Mask {self.mask:#x} does not fit in {self.width} bits"
            )

    @classmethod
    def from_bits(cls, bits: Iterable[Bit]):
        mask = 0
        width = 0
        for i, bit in enumerate(bits):
            if bit not in (0, 1, True, False):
                raise ValueError(f"Bit {i} is {bit!r}, expected 0 or 1")
            if bit:
                mask |= 1 << i
            width = i + 1
        return cls(mask, width)

    @classmethod
    def from_string(cls, text: str):
        """ Parse a bit string such as "0101" (port 0 first). """
        return cls.from_bits(int(ch) for ch in text.strip())

    @classmethod
    def zeros(cls, width: int):
        return cls(0, width)

    def __len__(self) -> int:
        return self.width

    def __getitem__(self, index: int) -> bool:
        if not -self.width <= index < self.width:
            raise IndexError(f"Port {index} out of range for width {self.width}")
        return bool(self.mask >> (index % self.width) & 1)

    def __iter__(self) -> Iterator[bool]:
        return (bool(self.mask >> i & 1) for i in range(self.width))

    def __str__(self) -> str:
        return "".join("1" if bit else "0" for bit in self)

    def bits(self) -> Tuple[int, ...]:
        return tuple(int(bit) for bit in self)

    def ports(self) -> List[int]:
        """ Indices of the set bits, ascending. """
        return [i for i in range(self.width) if self.mask >> i & 1]

    def any(self) -> bool:
        return self.mask != 0


@dataclass(frozen=True)
class RequestVector(_BitVector):
    """ Request bits sampled on one clock edge. """

    @classmethod
    def from_ports(cls, ports: Iterable[int], width: int) -> "RequestVector":
        mask = 0
        for port in ports:
            if not 0 <= port < width:
                raise ValueError(f"Port {port} out of range for width {width}")
            mask |= 1 << port
        return cls(mask, width)

    @classmethod
    def full(cls, width: int) -> "RequestVector":
        return cls((1 << width) - 1, width)


@dataclass(frozen=True)
class GrantVector(_BitVector):
    """ Grant/acknowledge output: one-hot or all-zero. """

    def __post_init__(self):
        super().__post_init__()
        if self.mask & (self.mask - 1):
            raise ValueError(
                f"Grant vector {self.mask:#x} has more than one bit set"
            )

    @classmethod
    def one_hot(cls, port: int, width: int) -> "GrantVector":
        if not 0 <= port < width:
            raise ValueError(f"Port {port} out of range for width {width}")
        return cls(1 << port, width)

    @property
    def port(self) -> Optional[int]:
        """ The granted port, or None when nothing is granted. """
        if not self.mask:
            return None
        return self.mask.bit_length() - 1
