import itertools

import pytest

from ursc.beeping.blockid import block_id, block_length, decode_block_id, expand_codeword, id_width
from ursc.codeword import BitVector, concat, weight


@pytest.mark.parametrize(
    "v,n,bits",
    [(1, 4, "11100010101"), (4, 4, "11100011010"), (2, 2, "111000110"), (3, 5, "1110001011001")],
)
def test_examples(v, n, bits):
    assert block_id(v, n).to_string() == bits


def test_width_and_length():
    assert [id_width(n) for n in (1, 2, 3, 4, 5, 64, 65)] == [0, 1, 2, 2, 3, 6, 7]
    assert block_length(4) == 11
    with pytest.raises(ValueError):
        block_id(5, 4)
    with pytest.raises(ValueError):
        block_id(0, 4)


@pytest.mark.parametrize("n", [2, 3, 7, 16, 33])
def test_round_trip(n):
    assert all(decode_block_id(block_id(v, n), n) == v for v in range(1, n + 1))


def test_rejections():
    n = 4
    assert decode_block_id(BitVector.from_string("11100010001"), n) is None  # 00 pair
    assert decode_block_id(BitVector.from_string("01100010101"), n) is None  # prefix
    assert decode_block_id(BitVector.from_string("11100011111"), n) is None  # 11 pair
    with pytest.raises(ValueError):
        decode_block_id(BitVector.zeros(10), n)


def test_ids_beyond_n_do_not_decode():
    # width 3 leaves room for 8 ids; only the first 5 are valid when n = 5
    stray = BitVector.from_string("1110001" + "100110")  # v - 1 = 6
    assert decode_block_id(stray, 5) is None


def test_expand():
    bid = block_id(2, 2)
    assert expand_codeword(BitVector.from_string("10"), bid).to_string() == "111000110" + "0" * 9
    assert expand_codeword(BitVector.zeros(3), bid) == BitVector.zeros(27)


@pytest.mark.parametrize("code", ["1", "0110", "10011", "111"])
def test_expansion_weight_is_multiplicative(code):
    c = BitVector.from_string(code)
    bid = block_id(3, 6)
    assert weight(expand_codeword(c, bid)) == weight(c) * weight(bid)


@pytest.mark.parametrize("n", [2, 5, 12])
def test_misaligned_windows_never_decode(n):
    lb = block_length(n)
    zero = BitVector.zeros(lb)
    for u in range(1, n + 1):
        s = list(concat([zero, block_id(u, n), zero]))
        for start in range(len(s) - lb + 1):
            got = decode_block_id(BitVector.from_bits(s[start : start + lb]), n)
            assert got == (u if start == lb else None)


def test_pairwise_distance_small():
    n = 9
    for a, b in itertools.combinations(range(1, n + 1), 2):
        assert (block_id(a, n).value ^ block_id(b, n).value).bit_count() >= 2
