"""Abstract delta sequences and their tau functions.

A delta sequence is a finite list of (position, value) pairs with strictly
increasing integer positions and nonzero integer values, the first of which
is positive. Only the order of positions matters for tau functions and graded
roots; actual integers are kept so that semigroup positions embed directly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Iterable, Sequence

from hfsurgery.errors import InvalidSequenceError, InvalidSplitError


def _sign(v: int) -> int:
    return 1 if v > 0 else -1


@dataclass(frozen=True)
class DeltaSequence:
    positions: tuple[int, ...] = ()
    values: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(int(x) for x in self.positions))
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.positions) != len(self.values):
            raise InvalidSequenceError("positions and values differ in length")
        if any(b <= a for a, b in zip(self.positions, self.positions[1:])):
            raise InvalidSequenceError("positions must be strictly increasing")
        if any(v == 0 for v in self.values):
            raise InvalidSequenceError("values must be nonzero")
        if self.values and self.values[0] < 0:
            raise InvalidSequenceError("value at the minimal position must be positive")

    @classmethod
    def from_values(cls, values: Iterable[int], start: int = 0) -> "DeltaSequence":
        values = tuple(values)
        return cls(tuple(range(start, start + len(values))), values)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(zip(self.positions, self.values))

    @property
    def positive_positions(self) -> tuple[int, ...]:
        return tuple(x for x, v in self if v > 0)

    @property
    def negative_positions(self) -> tuple[int, ...]:
        return tuple(x for x, v in self if v < 0)

    def value_at(self, position: int) -> int:
        return self.values[self.positions.index(position)]

    def to_json(self) -> dict:
        return {"positions": list(self.positions), "values": list(self.values)}

    @classmethod
    def from_json(cls, data: dict) -> "DeltaSequence":
        return cls(tuple(data["positions"]), tuple(data["values"]))

    def __str__(self):
        return "<" + ", ".join(str(v) for v in self.values) + ">"


@dataclass(frozen=True)
class TauFunction:
    """Partial sums of a delta sequence; ``values[0] == 0`` and the final index is z+."""

    values: tuple[int, ...] = (0,)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if not self.values or self.values[0] != 0:
            raise InvalidSequenceError("tau must start at 0")

    def __len__(self):
        return len(self.values)

    @property
    def minimum(self) -> int:
        return min(self.values)

    @property
    def maximum(self) -> int:
        return max(self.values)

    def differences(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.values, self.values[1:]))


@dataclass(frozen=True)
class ReducedForm:
    sequence: DeltaSequence
    quotient: dict = field(default_factory=dict, compare=False)


def tau(seq: DeltaSequence) -> TauFunction:
    return TauFunction((0, *accumulate(seq.values)))


def reduce(seq: DeltaSequence) -> ReducedForm:
    """Merge maximal same-sign runs.

    A positive run is retained at its largest position, a negative run at its
    smallest; the retained value is the run total.
    """
    positions: list[int] = []
    values: list[int] = []
    quotient: dict[int, int] = {}
    run: list[int] = []
    total = 0

    def flush():
        keep = run[-1] if total > 0 else run[0]
        positions.append(keep)
        values.append(total)
        for x in run:
            quotient[x] = keep

    for x, v in seq:
        if run and _sign(v) != _sign(total):
            flush()
            run, total = [], 0
        run.append(x)
        total += v
    if run:
        flush()
    return ReducedForm(DeltaSequence(tuple(positions), tuple(values)), quotient)


def refine(seq: DeltaSequence, position: int, parts: Sequence[int]) -> DeltaSequence:
    """Split the entry at ``position`` into consecutive entries carrying ``parts``.

    The first part stays at ``position``; later parts take the next integers,
    and subsequent positions are shifted only if there is no room.
    """
    idx = seq.positions.index(position)
    z = seq.values[idx]
    parts = [int(a) for a in parts]
    if len(parts) < 2 or len(parts) > abs(z):
        raise InvalidSplitError(f"need between 2 and {abs(z)} parts, got {len(parts)}")
    if sum(parts) != z or any(a == 0 or _sign(a) != _sign(z) for a in parts):
        raise InvalidSplitError(f"parts {parts} must share the sign of {z} and sum to it")
    new_pos = [position + k for k in range(len(parts))]
    tail = list(seq.positions[idx + 1:])
    if tail and tail[0] <= new_pos[-1]:
        shift = new_pos[-1] + 1 - tail[0]
        tail = [x + shift for x in tail]
    return DeltaSequence(
        tuple(seq.positions[:idx]) + tuple(new_pos) + tuple(tail),
        seq.values[:idx] + tuple(parts) + seq.values[idx + 1:],
    )


def merge(seq: DeltaSequence, index: int, count: int) -> DeltaSequence:
    """Merge ``count`` consecutive same-sign entries starting at ``index`` into one.

    The merged entry sits at the first merged position.
    """
    block = seq.values[index:index + count]
    if count < 2 or len(block) != count:
        raise InvalidSplitError("merge needs at least two existing entries")
    if len({_sign(v) for v in block}) != 1:
        raise InvalidSplitError("merged entries must share a sign")
    return DeltaSequence(
        seq.positions[:index + 1] + seq.positions[index + count:],
        seq.values[:index] + (sum(block),) + seq.values[index + count:],
    )


def negate(values: Iterable[int] | DeltaSequence) -> list[int]:
    vals = values.values if isinstance(values, DeltaSequence) else values
    return [-int(v) for v in vals]


def reverse(values: Iterable[int] | DeltaSequence) -> list[int]:
    vals = values.values if isinstance(values, DeltaSequence) else values
    return [int(v) for v in reversed(list(vals))]


def _as_pairs(obj) -> tuple[list[int], list[int]]:
    if isinstance(obj, DeltaSequence):
        return list(obj.positions), list(obj.values)
    vals = [int(v) for v in obj]
    return list(range(len(vals))), vals


def join(first, second) -> DeltaSequence:
    """Concatenate two sequences (or raw value lists), keeping ``first`` in front.

    Positions of ``second`` are kept when they already lie beyond ``first``;
    otherwise they are translated to follow it.
    """
    pa, va = _as_pairs(first)
    pb, vb = _as_pairs(second)
    if pa and pb and pb[0] <= pa[-1]:
        shift = pa[-1] + 1 - pb[0]
        pb = [x + shift for x in pb]
    return DeltaSequence(tuple(pa + pb), tuple(va + vb))


def symmetrize(seq: DeltaSequence, total: int | None = None) -> DeltaSequence:
    """Return ``seq * (-reverse(seq))``.

    The mirrored half sits at positions ``total - x``; by default ``total`` is
    ``2 * last + 1`` so the halves never collide.
    """
    if not seq.values:
        return seq
    if total is None:
        total = 2 * seq.positions[-1] + 1
    mirrored = tuple(total - x for x in reversed(seq.positions))
    if mirrored[0] <= seq.positions[-1]:
        raise InvalidSequenceError(f"mirror total {total} overlaps the first half")
    return DeltaSequence(seq.positions + mirrored, seq.values + tuple(negate(reverse(seq))))


def is_sinking(seq: DeltaSequence) -> bool:
    vals = reduce(seq).sequence.values
    if not vals or vals[-1] > 0:
        return False
    for a, b in zip(vals[0::2], vals[1::2]):
        if a > -b:
            return False
    return vals[-2] < -vals[-1]


def rank_formulas(seq: DeltaSequence) -> tuple[int, int]:
    """Dimensions of the level-zero homology and of the kernel of U there."""
    t = tau(reduce(seq).sequence).values
    crossings = [i for i in range(1, len(t)) if t[i - 1] > 0 and t[i] <= 0]
    dim_h0 = len(crossings) + 1
    dim_ker = sum(1 for i in crossings if t[i] == 0) + 1
    return dim_h0, dim_ker


def creature_sequence(p: int) -> DeltaSequence:
    """The creature sequence for even ``p >= 4``, read off its tau pattern."""
    if p < 4 or p % 2:
        raise ValueError(f"creature sequence needs even p >= 4, got {p}")
    xi = (p - 2) // 2
    # tau pattern: 0, xi, 0, xi-1, ..., 0, 1, -1, 0, -2, 0, -3, ..., 0, -(xi+1)
    levels = [0]
    for k in range(xi, 0, -1):
        levels += [k, 0]
    levels[-1] = -1
    for k in range(2, xi + 2):
        levels += [0, -k]
    diffs = [b - a for a, b in zip(levels, levels[1:])]
    return DeltaSequence.from_values(diffs)


def random_delta_sequence(rng: random.Random, max_len: int = 12, max_abs: int = 4) -> DeltaSequence:
    """Random valid sequence (not necessarily reduced), for property tests."""
    n = rng.randint(0, max_len)
    vals = []
    for i in range(n):
        v = rng.randint(1, max_abs)
        vals.append(v if i == 0 or rng.random() < 0.5 else -v)
    pos = sorted(rng.sample(range(4 * max_len + 4), n))
    return DeltaSequence(tuple(pos), tuple(vals))


def random_sinking_sequence(rng: random.Random, max_pairs: int = 8, max_abs: int = 6) -> DeltaSequence:
    """Random reduced sinking sequence drawn by rejection sampling."""
    while True:
        pairs = rng.randint(1, max_pairs)
        vals = []
        for _ in range(pairs):
            a = rng.randint(1, max_abs)
            b = rng.randint(1, max_abs + 2)
            vals += [a, -b]
        seq = DeltaSequence.from_values(vals)
        if is_sinking(seq):
            return seq
