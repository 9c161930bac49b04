from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ursc.codes.params import (
    ConstructionParams,
    NoSupportedK,
    bit_probability,
    elongation_bounds,
    max_supported_k,
    parse_rational,
)

# values frozen from a 50-digit mpmath evaluation of the formulas
FROZEN = [
    # n, c, alpha, k, block_len, blocks, t, tau1, tau2
    (8, "4/1", "1/1", 2, 3, 256, 768, 0, 33),
    (8, "4/1", "1/1", 8, 3, 256, 768, 8, 532),
    (32, "64/1", "1/1", 4, 4, 65536, 262144, 55, 3548),
    (10, "1/1", "3/4", 3, 3, 206, 618, 0, 42),
    (16, "1/1", "1/1", 5, 3, 256, 768, 1, 69),
]


@pytest.mark.parametrize("n,c,alpha,k,L,B,t,tau1,tau2", FROZEN)
def test_dimensions_and_elongation(n, c, alpha, k, L, B, t, tau1, tau2):
    p = ConstructionParams(n, alpha, "1/2", c)
    assert (p.block_len, p.block_count, p.t) == (L, B, t)
    e = elongation_bounds(p, k)
    assert (e.tau1, e.tau2) == (tau1, tau2)


def test_rationals():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("2") == 2
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("a/b")


@pytest.mark.parametrize(
    "kw",
    [dict(n=1), dict(alpha="0/1"), dict(alpha="3/2"), dict(eps="0/1"), dict(c="-1/1")],
)
def test_invalid_params(kw):
    base = dict(n=4, alpha="1/1", eps="1/2", c="1/1")
    base.update(kw)
    with pytest.raises(ValueError):
        ConstructionParams(**base)


def test_elongation_is_clamped_to_length():
    p = ConstructionParams(4, "1/1", "1/2", "6/1", length=20)
    e = elongation_bounds(p, 4)
    assert e.tau2 == 19
    with pytest.raises(ValueError):
        elongation_bounds(p, 1)
    with pytest.raises(ValueError):
        elongation_bounds(p, 5)


def test_bit_probability_per_block():
    p = ConstructionParams(16, "1/1", "1/2", "1/1")
    assert p.block_len == 3
    assert [bit_probability(p, r) for r in (0, 2, 3, 5, 6)] == pytest.approx([1, 1, 2**-0.5, 2**-0.5, 3**-0.5], rel=1e-15)
    with pytest.raises(IndexError):
        bit_probability(p, p.t)


def test_max_supported_k():
    p = ConstructionParams(4, "1/1", "1/2", "6/1")
    # tau2(4) = floor(6 * 16 * ln 4) = 133, tau2(3) = 74
    assert max_supported_k(p, 133) == 4
    assert max_supported_k(p, 132) == 3
    with pytest.raises(NoSupportedK):
        max_supported_k(p, 10)


@given(
    st.integers(2, 60),
    st.fractions(min_value=Fraction(1, 8), max_value=1, max_denominator=8),
    st.fractions(min_value=Fraction(1, 16), max_value=4, max_denominator=16),
    st.data(),
)
def test_elongation_ordering(n, alpha, c, data):
    p = ConstructionParams(n, alpha, "1/2", c)
    k = data.draw(st.integers(2, n))
    e = elongation_bounds(p, k)
    assert 0 <= e.tau1 <= e.tau2 < p.t
    if k < n:
        assert elongation_bounds(p, k + 1).tau2 >= e.tau2
