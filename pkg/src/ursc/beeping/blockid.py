"""Framed Manchester block identifiers and their substitution into codewords."""

from __future__ import annotations

from functools import lru_cache

from ursc.codeword import BitVector, concat

PREFIX = (1, 1, 1, 0, 0, 0, 1)


def id_width(n: int) -> int:
    """Bits needed for ``v - 1`` with ``1 <= v <= n``."""
    if n < 1:
        raise ValueError(f"id universe must be positive, got {n}")
    return (n - 1).bit_length()


def block_length(n: int) -> int:
    return len(PREFIX) + 2 * id_width(n)


def block_id(v: int, n: int) -> BitVector:
    """``1110001`` followed by ``v - 1`` written most significant bit first,
    each 0 sent as ``01`` and each 1 as ``10``."""
    if not 1 <= v <= n:
        raise ValueError(f"id {v} outside [1, {n}]")
    w = id_width(n)
    bits = list(PREFIX)
    for b in range(w - 1, -1, -1):
        bits.extend((1, 0) if (v - 1) >> b & 1 else (0, 1))
    return BitVector.from_bits(bits)


@lru_cache(maxsize=64)
def decode_table(n: int) -> dict[int, int]:
    """Map from block-ID integer value to id."""
    return {block_id(v, n).value: v for v in range(1, n + 1)}


def decode_block_id(window: BitVector, n: int) -> int | None:
    if window.length != block_length(n):
        raise ValueError(f"window length {window.length} != {block_length(n)}")
    return decode_table(n).get(window.value)


def expand_codeword(code: BitVector, bid: BitVector) -> BitVector:
    """Replace every 1 of ``code`` by ``bid`` and every 0 by a zero block."""
    zero = BitVector.zeros(bid.length)
    return concat(bid if b else zero for b in code)
