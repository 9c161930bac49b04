"""Code matrices: sampling from the block-decaying distribution and the text file format."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from ursc.codeword import BitVector
from ursc.codes.params import ConstructionParams, format_rational, parse_rational

MAGIC = "URSC 1"


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class CodeMatrix:
    """A t x n binary matrix stored column-wise; column j is codeword j."""

    params: ConstructionParams
    columns: tuple[BitVector, ...]

    def __post_init__(self) -> None:
        cols = tuple(self.columns)
        object.__setattr__(self, "columns", cols)
        if len(cols) != self.params.n:
            raise ValueError(f"expected {self.params.n} columns, got {len(cols)}")
        for j, col in enumerate(cols):
            if col.length != self.params.t:
                raise ValueError(f"column {j} has length {col.length}, expected {self.params.t}")

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def t(self) -> int:
        return self.params.t

    @cached_property
    def array(self) -> np.ndarray:
        """``(n, t)`` uint8 array, row j = column j of the matrix."""
        out = np.zeros((self.n, self.t), dtype=np.uint8)
        for j, col in enumerate(self.columns):
            out[j] = np.fromiter(col, dtype=np.uint8, count=self.t)
        return out

    @classmethod
    def from_array(cls, params: ConstructionParams, bits: np.ndarray) -> CodeMatrix:
        bits = np.asarray(bits)
        cols = []
        for row in bits:
            packed = np.packbits(row.astype(np.uint8), bitorder="little").tobytes()
            cols.append(BitVector(params.t, int.from_bytes(packed, "little")))
        return cls(params, tuple(cols))

    @classmethod
    def from_strings(
        cls,
        columns: Sequence[str],
        *,
        alpha: Fraction | str = Fraction(1),
        eps: Fraction | str = Fraction(1, 2),
        c: Fraction | str = Fraction(1),
        seed: int | None = None,
    ) -> CodeMatrix:
        """Hand-built fixture: column bit strings, position 0 first."""
        vecs = tuple(BitVector.from_string(s) for s in columns)
        params = ConstructionParams(
            n=len(vecs), alpha=alpha, eps=eps, c=c, seed=seed, length=vecs[0].length
        )
        return cls(_canonical_params(params), vecs)


def _canonical_params(params: ConstructionParams) -> ConstructionParams:
    # drop a length override that equals the formula's own length
    if params.length is not None and params.length == params.with_length(None).t:
        return params.with_length(None)
    return params


def row_probabilities(params: ConstructionParams) -> np.ndarray:
    rows = np.arange(params.t)
    return 1.0 / np.sqrt(rows // params.block_len + 1)


def sample_columns(params: ConstructionParams, rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw ``count`` independent columns as a ``(count, t)`` bool array.

    Draws are taken column by column from ``rng``; rows of probability one
    (the first block) always come out as ones.
    """
    p = row_probabilities(params)
    return rng.random((count, params.t)) < p


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_matrix(params: ConstructionParams) -> CodeMatrix:
    if params.seed is None:
        raise ValueError("sampling needs a seed")
    bits = sample_columns(params, rng_for(params.seed), params.n)
    return CodeMatrix.from_array(params, bits)


def dumps(m: CodeMatrix) -> str:
    p = m.params
    seed = "none" if p.seed is None else str(p.seed)
    lines = [
        MAGIC,
        f"n={p.n} t={p.t} alpha={format_rational(p.alpha)} eps={format_rational(p.eps)} "
        f"c={format_rational(p.c)} seed={seed}",
    ]
    lines.extend(col.to_string() for col in m.columns)
    return "\n".join(lines) + "\n"


def loads(text: str) -> CodeMatrix:
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise FormatError("missing 'URSC 1' header")
    if len(lines) < 2:
        raise FormatError("missing parameter line")
    fields = {}
    for tok in lines[1].split():
        key, sep, val = tok.partition("=")
        if not sep:
            raise FormatError(f"bad parameter token {tok!r}")
        fields[key] = val
    missing = {"n", "t", "alpha", "eps", "c", "seed"} - fields.keys()
    if missing:
        raise FormatError(f"missing parameters: {sorted(missing)}")
    try:
        n, t = int(fields["n"]), int(fields["t"])
        seed = None if fields["seed"] == "none" else int(fields["seed"])
        params = ConstructionParams(
            n=n,
            alpha=parse_rational(fields["alpha"]),
            eps=parse_rational(fields["eps"]),
            c=parse_rational(fields["c"]),
            seed=seed,
            length=t,
        )
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    body = [ln.strip() for ln in lines[2:] if ln.strip()]
    if len(body) != n:
        raise FormatError(f"expected {n} column lines, found {len(body)}")
    cols = []
    for j, ln in enumerate(body):
        if len(ln) != t:
            raise FormatError(f"column {j} has {len(ln)} characters, expected {t}")
        if set(ln) - {"0", "1"}:
            raise FormatError(f"column {j} contains characters outside {{0,1}}")
        cols.append(BitVector.from_string(ln))
    return CodeMatrix(_canonical_params(params), tuple(cols))


def write_code(m: CodeMatrix, path: str | Path) -> None:
    Path(path).write_text(dumps(m), encoding="ascii")


def read_code(path: str | Path) -> CodeMatrix:
    return loads(Path(path).read_text(encoding="ascii"))
