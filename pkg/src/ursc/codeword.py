"""Fixed-length binary vectors packed into Python integers.

Bit ``r`` of :attr:`BitVector.value` holds position ``r`` of the vector, so
position 0 is the least significant bit. Python integers are arbitrary
precision, which gives word-parallel AND/OR and a native popcount
(:meth:`int.bit_count`) without any manual word bookkeeping.

Cyclic shifts follow the convention ``shift(x, i)[r] == x[(r + i) mod t]``
for every integer ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class LengthMismatch(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class BitVector:
    """Immutable binary vector of ``length`` positions."""

    length: int
    value: int = 0

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError(f"length must be >= 1, got {self.length}")
        if self.value < 0 or self.value >> self.length:
            raise ValueError("value has bits outside the vector length")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitVector:
        value = 0
        length = 0
        for r, b in enumerate(bits):
            if b not in (0, 1, True, False):
                raise ValueError(f"bit {r} is {b!r}, expected 0 or 1")
            if b:
                value |= 1 << r
            length = r + 1
        return cls(length, value)

    @classmethod
    def from_string(cls, s: str) -> BitVector:
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a bit string: {s!r}")
        # position 0 first, so reverse before parsing as base 2
        return cls(len(s), int(s[::-1], 2))

    @classmethod
    def from_positions(cls, length: int, positions: Iterable[int]) -> BitVector:
        value = 0
        for p in positions:
            if not 0 <= p < length:
                raise IndexError(f"position {p} outside [0, {length})")
            value |= 1 << p
        return cls(length, value)

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length, 0)

    @classmethod
    def ones(cls, length: int) -> BitVector:
        return cls(length, (1 << length) - 1)

    @property
    def mask(self) -> int:
        return (1 << self.length) - 1

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, r: int) -> int:
        if not -self.length <= r < self.length:
            raise IndexError(r)
        return (self.value >> (r % self.length)) & 1

    def __iter__(self):
        v = self.value
        for _ in range(self.length):
            yield v & 1
            v >>= 1

    def __and__(self, other: BitVector) -> BitVector:
        _check_same(self, other)
        return BitVector(self.length, self.value & other.value)

    def __or__(self, other: BitVector) -> BitVector:
        _check_same(self, other)
        return BitVector(self.length, self.value | other.value)

    def to_string(self) -> str:
        return format(self.value, f"0{self.length}b")[::-1]

    def positions(self) -> list[int]:
        return [r for r, b in enumerate(self) if b]

    def __str__(self) -> str:
        return self.to_string()


def _check_same(a: BitVector, b: BitVector) -> None:
    if a.length != b.length:
        raise LengthMismatch(f"lengths differ: {a.length} vs {b.length}")


def weight(x: BitVector) -> int:
    return x.value.bit_count()


def window_mask(b1: int, b2: int) -> int:
    """Integer mask with ones at positions ``b1..b2`` inclusive."""
    return ((1 << (b2 - b1 + 1)) - 1) << b1


def interval_weight(x: BitVector, b1: int, b2: int) -> int:
    """Number of ones among positions ``b1..b2`` (both inclusive)."""
    if not 0 <= b1 <= b2 < x.length:
        raise IndexError(f"interval [{b1}, {b2}] invalid for length {x.length}")
    return (x.value & window_mask(b1, b2)).bit_count()


def rotate(value: int, i: int, t: int) -> int:
    """Raw-integer form of :func:`cyclic_shift`."""
    i %= t
    if i == 0:
        return value
    return ((value >> i) | (value << (t - i))) & ((1 << t) - 1)


def cyclic_shift(x: BitVector, i: int) -> BitVector:
    return BitVector(x.length, rotate(x.value, i, x.length))


def slip(value: int, t: int) -> int:
    """Raw-integer form of :func:`slipped`."""
    return rotate(value, -1, t) | value | rotate(value, 1, t)


def slipped(z: BitVector) -> BitVector:
    """``z(-1) | z | z(1)``: every one widens to a cyclic run of three."""
    return BitVector(z.length, slip(z.value, z.length))


def superposition(parts: Sequence[tuple[BitVector, int]], t: int | None = None) -> BitVector:
    """Bitwise OR of the given vectors, each cyclically shifted by its offset."""
    if not parts:
        if t is None:
            raise ValueError("t is required for an empty superposition")
        return BitVector.zeros(t)
    length = parts[0][0].length if t is None else t
    acc = 0
    for x, i in parts:
        if x.length != length:
            raise LengthMismatch(f"lengths differ: {x.length} vs {length}")
        acc |= rotate(x.value, i, length)
    return BitVector(length, acc)


def concat(parts: Iterable[BitVector]) -> BitVector:
    value = 0
    offset = 0
    for x in parts:
        value |= x.value << offset
        offset += x.length
    return BitVector(offset, value)
