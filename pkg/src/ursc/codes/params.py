"""Construction parameters, block layout and the elongation window formulas."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

SEED_MASK = (1 << 64) - 1


class NoSupportedK(ValueError):
    """Raised when a code length cannot host even k = 2."""


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``p/q`` (or a bare integer) into an exact fraction; q must be positive."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = text.strip()
    if "/" in s:
        p, q = s.split("/", 1)
        num, den = int(p), int(q)
        if den <= 0:
            raise ValueError(f"denominator must be positive in {text!r}")
        return Fraction(num, den)
    return Fraction(int(s))


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ConstructionParams:
    """Inputs of the random matrix construction.

    ``length`` overrides the default row count ``block_count * block_len``;
    it is used by length-parameterized codes and by hand-built fixtures.
    """

    n: int
    alpha: Fraction
    eps: Fraction
    c: Fraction
    seed: int | None = 0
    length: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", parse_rational(self.alpha))
        object.__setattr__(self, "eps", parse_rational(self.eps))
        object.__setattr__(self, "c", parse_rational(self.c))
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.c <= 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if self.seed is not None and not 0 <= self.seed <= SEED_MASK:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.length is not None and self.length < 1:
            raise ValueError("length must be positive")

    @property
    def scale(self) -> float:
        """``c / alpha**(2 + eps)`` in floating point."""
        return float(self.c) / float(self.alpha) ** (2 + float(self.eps))

    @property
    def block_len(self) -> int:
        return max(1, math.ceil(math.log(self.n)))

    @property
    def block_count(self) -> int:
        if self.length is not None:
            return -(-self.length // self.block_len)
        return max(1, math.ceil(self.scale * self.n * self.n))

    @property
    def t(self) -> int:
        if self.length is not None:
            return self.length
        return self.block_count * self.block_len

    def with_seed(self, seed: int | None) -> ConstructionParams:
        return replace(self, seed=None if seed is None else seed & SEED_MASK)

    def with_length(self, length: int | None) -> ConstructionParams:
        return replace(self, length=length)


@dataclass(frozen=True, order=True)
class ElongationPair:
    tau1: int
    tau2: int

    def validate(self, t: int) -> None:
        if not 0 <= self.tau1 <= self.tau2 <= t - 1:
            raise ValueError(f"invalid window {self} for length {t}")


def raw_tau1(params: ConstructionParams, k: int) -> int:
    return math.floor(float(params.c) / 64 * k * k * math.log(params.n))


def raw_tau2(params: ConstructionParams, k: int) -> int:
    return math.floor(params.scale * k * k * math.log(params.n))


def elongation_bounds(params: ConstructionParams, k: int) -> ElongationPair:
    """Upper/lower segment boundary and elongation for ``k`` contenders, clamped to the code."""
    if not 2 <= k <= params.n:
        raise ValueError(f"k must lie in [2, {params.n}], got {k}")
    last = params.t - 1
    tau1 = min(max(raw_tau1(params, k), 0), last)
    tau2 = min(max(raw_tau2(params, k), 0), last)
    return ElongationPair(tau1, max(tau1, tau2))


def bit_probability(params: ConstructionParams, r: int) -> float:
    """Probability that row ``r`` of a sampled column is 1."""
    if not 0 <= r < params.t:
        raise IndexError(f"row {r} outside [0, {params.t})")
    return 1.0 / math.sqrt(r // params.block_len + 1)


def max_supported_k(params: ConstructionParams, t_target: int) -> int:
    """Largest k <= n whose unclamped elongation fits in ``t_target`` rows."""
    if t_target < 1:
        raise ValueError("t_target must be positive")
    best = None
    for k in range(2, params.n + 1):
        if raw_tau2(params, k) <= t_target:
            best = k
        else:
            break
    if best is None:
        raise NoSupportedK(
            f"length {t_target} cannot host k=2 (needs {raw_tau2(params, 2)})"
        )
    return best
