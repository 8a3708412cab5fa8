"""Brieskorn spheres: semigroup windows, delta sequences and Seifert data.

Also hosts the verification harness for the family Y_p = Sigma(p, 2p-1, 2p+1),
whose reduced delta sequence splits into a sinking prefix and a creature.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from hfsurgery.delta import (
    DeltaSequence,
    creature_sequence,
    is_sinking,
    join,
    reduce,
    symmetrize,
)
from hfsurgery.errors import DecompositionError, InternalInconsistencyError

INT64_MAX = 2**63 - 1
# largest semigroup window we are willing to allocate
MAX_WINDOW = 200_000_000


@dataclass(frozen=True)
class BrieskornParams:
    p: int
    q: int
    r: int

    def __post_init__(self):
        p, q, r = self.p, self.q, self.r
        if not (2 <= p < q < r):
            raise ValueError(f"need 2 <= p < q < r, got ({p}, {q}, {r})")
        if gcd(p, q) != 1 or gcd(p, r) != 1 or gcd(q, r) != 1:
            raise ValueError(f"({p}, {q}, {r}) are not pairwise coprime")
        if p * q * r > INT64_MAX:
            raise ValueError("pqr overflows 64-bit integers")

    @classmethod
    def of(cls, *xs: int) -> "BrieskornParams":
        a, b, c = sorted(int(x) for x in xs)
        return cls(a, b, c)

    @classmethod
    def family(cls, p: int) -> "BrieskornParams":
        """Y_p = Sigma(p, 2p-1, 2p+1)."""
        return cls(p, 2 * p - 1, 2 * p + 1)

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.p, self.q, self.r)

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "r": self.r}

    def __str__(self):
        return f"Sigma({self.p},{self.q},{self.r})"


@dataclass(frozen=True)
class FamilyConstants:
    """Derived constants of Y_p used by the decomposition."""

    p: int
    r_minus: int
    r_plus: int
    w: int
    xi: int
    cutoff: int

    @classmethod
    def of(cls, p: int) -> "FamilyConstants":
        rm, rp = p * (2 * p - 1), p * (2 * p + 1)
        xi = (p - 2) // 2
        return cls(p, rm, rp, (2 * p - 1) * (2 * p + 1), xi, (xi - 1) * rm + xi * rp)


@dataclass(frozen=True)
class SemigroupWindow:
    generators: tuple[int, ...]
    bound: int
    elements: tuple[int, ...]

    def to_json(self) -> dict:
        return {"generators": list(self.generators), "bound": self.bound, "elements": list(self.elements)}

    @classmethod
    def from_json(cls, data: dict) -> "SemigroupWindow":
        return cls(tuple(data["generators"]), data["bound"], tuple(data["elements"]))


@dataclass(frozen=True)
class SeifertInvariants:
    e0: int
    fractions: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {"e0": self.e0, "fractions": [list(f) for f in self.fractions]}


def n_value(params: BrieskornParams) -> int:
    p, q, r = params.triple
    return p * q * r - p * q - p * r - q * r


def reachable(generators, bound: int) -> np.ndarray:
    """Boolean array ``m`` of length ``bound+1`` with ``m[x]`` iff x is a sum of generators."""
    if bound < 0:
        return np.zeros(0, dtype=bool)
    if bound > MAX_WINDOW:
        raise ValueError(f"semigroup window of size {bound} exceeds {MAX_WINDOW}")
    member = np.zeros(bound + 1, dtype=bool)
    member[0] = True
    for g in generators:
        # unbounded knapsack for one generator: prefix-or along residue classes mod g
        rows = -(-(bound + 1) // g)
        padded = np.zeros(rows * g, dtype=bool)
        padded[: bound + 1] = member
        grid = padded.reshape(rows, g)
        np.logical_or.accumulate(grid, axis=0, out=grid)
        member = padded[: bound + 1]
    return member


def semigroup_window(params: BrieskornParams) -> SemigroupWindow:
    p, q, r = params.triple
    gens = (p * q, p * r, q * r)
    n = n_value(params)
    elems = tuple(int(x) for x in np.flatnonzero(reachable(gens, n)))
    return SemigroupWindow(gens, n, elems)


def delta_sequence(params: BrieskornParams) -> DeltaSequence:
    """Expanded delta sequence: +1 on the semigroup window, -1 on its reflection."""
    win = semigroup_window(params)
    n = win.bound
    s = np.asarray(win.elements, dtype=np.int64)
    q = n - s
    if np.intersect1d(s, q).size:
        raise InternalInconsistencyError(f"{params}: semigroup window meets its reflection")
    pos = np.concatenate([s, q])
    val = np.concatenate([np.ones(len(s), dtype=np.int64), -np.ones(len(q), dtype=np.int64)])
    order = np.argsort(pos, kind="stable")
    return DeltaSequence(tuple(pos[order].tolist()), tuple(val[order].tolist()))


def seifert_invariants(params: BrieskornParams) -> SeifertInvariants:
    """Unique e0 and 0 < b_i < a_i with e0*pqr + sum b_i * pqr/a_i = -1."""
    alphas = params.triple
    prod = alphas[0] * alphas[1] * alphas[2]
    betas = []
    for a in alphas:
        rest = prod // a
        betas.append((-pow(rest, -1, a)) % a)
    num = -1 - sum(b * (prod // a) for a, b in zip(alphas, betas))
    if num % prod:
        raise InternalInconsistencyError(f"{params}: Seifert equation has no integral e0")
    e0 = num // prod
    if any(not 0 < b < a for a, b in zip(alphas, betas)):
        raise InternalInconsistencyError(f"{params}: Seifert invariants out of range")
    return SeifertInvariants(e0, tuple(zip(alphas, betas)))


@dataclass(frozen=True)
class CreatureDecomposition:
    p: int
    cutoff: int
    prefix: DeltaSequence
    creature: DeltaSequence

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "cutoff": self.cutoff,
            "prefix": self.prefix.to_json(),
            "creature": self.creature.to_json(),
            "prefix_sinking": is_sinking(self.prefix),
        }


def _first_mismatch(a, b) -> int:
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    return min(len(a), len(b))


def decompose_creature(p: int, reduced: DeltaSequence | None = None) -> CreatureDecomposition:
    """Split the reduced sequence of Y_p into a sinking prefix and the creature.

    Raises DecompositionError, carrying the first offending position, if any of
    the expected properties fails.
    """
    if p < 4 or p % 2:
        raise ValueError(f"decomposition needs even p >= 4, got {p}")
    params = BrieskornParams.family(p)
    c = FamilyConstants.of(p)
    n = n_value(params)
    if reduced is None:
        reduced = reduce(delta_sequence(params)).sequence
    pairs = list(reduced)
    z = [(x, v) for x, v in pairs if x < c.cutoff]
    w = [(x, v) for x, v in pairs if c.cutoff <= x and 2 * x <= n]
    prefix = DeltaSequence(tuple(x for x, _ in z), tuple(v for _, v in z))
    tail = DeltaSequence(tuple(x for x, _ in w), tuple(v for _, v in w))

    expected = creature_sequence(p).values
    if tail.values != expected:
        i = _first_mismatch(tail.values, expected)
        where = tail.positions[i] if i < len(tail) else None
        raise DecompositionError(f"p={p}: creature part differs at index {i}", where)
    if not is_sinking(prefix):
        raise DecompositionError(f"p={p}: prefix is not sinking", prefix.positions[-1] if prefix.values else None)
    rebuilt = symmetrize(join(prefix, tail), total=n)
    if rebuilt != reduced:
        i = _first_mismatch(list(rebuilt), pairs)
        where = pairs[i][0] if i < len(pairs) else None
        raise DecompositionError(f"p={p}: symmetrization does not reassemble the sequence", where)
    return CreatureDecomposition(p, c.cutoff, prefix, tail)


@dataclass
class StructuralReport:
    p: int
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"p": self.p, "ok": self.ok, "checks": dict(self.checks), "details": dict(self.details)}


def _sub_semigroup(gens, bound) -> list[int]:
    return np.flatnonzero(reachable(gens, bound)).tolist()


def representation_counts(generators, bound: int) -> np.ndarray:
    """Number of ways to write each x in [0, bound] as a non-negative combination of generators."""
    count = np.zeros(bound + 1, dtype=np.int64)
    count[0] = 1
    for g in generators:
        rows = -(-(bound + 1) // g)
        padded = np.zeros(rows * g, dtype=np.int64)
        padded[: bound + 1] = count
        grid = padded.reshape(rows, g)
        np.cumsum(grid, axis=0, out=grid)
        count = padded[: bound + 1]
    return count


def structural_checks(p: int, expanded: DeltaSequence | None = None) -> StructuralReport:
    """Verify the lattice-point facts underlying the decomposition of Y_p."""
    if p < 4 or p % 2:
        raise ValueError(f"structural checks need even p >= 4, got {p}")
    params = BrieskornParams.family(p)
    c = FamilyConstants.of(p)
    rm, rp, w = c.r_minus, c.r_plus, c.w
    n = n_value(params)
    rep = StructuralReport(p)
    if expanded is None:
        expanded = delta_sequence(params)
    red = reduce(expanded).sequence
    red_map = dict(red)
    top = (p - 1) * rp
    window = 2 * rm + (p - 3) * rp

    # the two-generator semigroup up to (p-1)r+ is the pyramid read row by row
    two = _sub_semigroup((rm, rp), top)
    pyramid = [a * rm + (k - a) * rp for k in range(p) for a in range(k, -1, -1)]
    rep.checks["pyramid_order"] = pyramid == sorted(pyramid) == two
    coeff = {a * rm + (k - a) * rp: (a, k - a) for k in range(p) for a in range(k + 1)}

    s_low = [x for x, v in expanded if v > 0 and x <= top]
    counts = representation_counts((rm, rp, w), top)
    rep.checks["unique_representation"] = bool(np.all(counts[s_low] == 1))

    # each pyramid point x = a r- + b r+ is preceded by exactly min(a, b) consecutive integers of S,
    # and these runs exhaust S up to (p-1)r+
    runs = set()
    for x in pyramid:
        a, b = coeff[x]
        runs.update(range(x - min(a, b), x + 1))
    rep.checks["consecutive_runs"] = runs == set(s_low)

    rep.checks["inequality_lower"] = (p - 1) * rm + (p - 3) * rp < n
    rep.checks["inequality_upper"] = (p - 2) * rm + (p - 2) * rp > n

    # separating reflected points and the positive run around each small pyramid point
    index = {x: i for i, x in enumerate(expanded.positions)}
    vals = expanded.values
    pos = expanded.positions
    sep_ok = runs_ok = True
    exceptional = {(p - 2) * rp, (p - 1) * rm}
    for x in pyramid:
        if x > window:
            continue
        a, b = coeff[x]
        i = index[x]
        nxt = next((pos[j] for j in range(i + 1, len(pos)) if vals[j] > 0), None)
        y = n - (p - a - 1) * rm - (p - b - 3) * rp
        if nxt is None or not x < y < nxt:
            sep_ok = False
        lo = hi = i
        while lo > 0 and vals[lo - 1] > 0:
            lo -= 1
        while hi + 1 < len(vals) and vals[hi + 1] > 0:
            hi += 1
        block = list(pos[lo:hi + 1])
        want = sorted(exceptional) if x in exceptional else list(range(x - min(a, b), x + 1))
        if block != want:
            runs_ok = False
            rep.details.setdefault("run_mismatch", []).append(x)
    rep.checks["intervals_separation"] = sep_ok
    rep.checks["intervals_runs"] = runs_ok

    # reduced positives up to 2r- + (p-3)r+ are the pyramid minus (p-2)r+, valued min(a, b) + 1,
    # except (p-1)r- which carries 2
    got = {x: v for x, v in red_map.items() if v > 0 and x <= window}
    want = {x: min(coeff[x]) + 1 for x in pyramid if x <= window and x != (p - 2) * rp}
    if (p - 1) * rm <= window:
        want[(p - 1) * rm] = 2
    rep.checks["reduced_structure"] = got == want
    if got != want:
        rep.details["reduced_structure_mismatch"] = sorted(set(got.items()) ^ set(want.items()))[:10]

    rep.checks["endpoints_retained"] = red.positions[0] == 0 and red.positions[-1] == n
    return rep


def endpoints_retained(params: BrieskornParams) -> bool:
    """Both 0 and N survive reduction whenever the window is nonempty."""
    n = n_value(params)
    if n < 0:
        return True
    red = reduce(delta_sequence(params)).sequence
    return red.positions[0] == 0 and red.positions[-1] == n
