"""The 1/n-surgery mapping cone for an L-space knot in S^3.

Columns are indexed by a single integer l = s*n + (i-1), so that A_l maps to
B_l by v_s = U^{V_s} and to B_{l+1} by h_s = U^{H_s}, where s = floor(l/n).
Every column is a tower; only finitely many columns and gradings are kept.

Both truncations are exact in the gradings we report: outside the kept
columns every pairing A_l -> B_l (far right) or A_l -> B_{l+1} (far left) is an
isomorphism, and dropping gradings above a cap leaves a subcomplex whose
homology is unchanged at or below the cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from hfsurgery import gf2
from hfsurgery.errors import HypothesisNotMetError, TruncationInstabilityError
from hfsurgery.graded_root import FUModule, decompose_from_ranks


class MonotonicityError(ValueError):
    pass


@dataclass(frozen=True)
class SurgeryKnotData:
    V: tuple[int, ...] = ()
    n: int = 1

    def __post_init__(self):
        object.__setattr__(self, "V", tuple(int(v) for v in self.V))
        if self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if any(v < 0 for v in self.V):
            raise ValueError("V entries must be non-negative")
        seq = self.V + (0,)
        for s, (a, b) in enumerate(zip(seq, seq[1:])):
            if a - b not in (0, 1):
                raise MonotonicityError(f"V_{s} - V_{s + 1} = {a - b} is not 0 or 1")

    @property
    def g(self) -> int:
        return len(self.V)

    def V_at(self, s: int) -> int:
        if s < 0:
            return self.V_at(-s) - s
        return self.V[s] if s < len(self.V) else 0

    def H_at(self, s: int) -> int:
        return self.V_at(-s)

    def to_json(self) -> dict:
        return {"V": list(self.V), "n": self.n}

    @classmethod
    def from_json(cls, data: dict) -> "SurgeryKnotData":
        return cls(tuple(data.get("V", ())), int(data.get("n", 1)))


def validate(V, n: int = 1) -> SurgeryKnotData:
    return SurgeryKnotData(tuple(V), n)


@dataclass(frozen=True)
class ConeConfig:
    """Truncation radius (in s) and U-depth; None picks the defaults from the data."""

    radius: int | None = None
    depth: int | None = None

    def resolve(self, data: SurgeryKnotData) -> tuple[int, int]:
        b = data.g + 1 if self.radius is None else self.radius
        v0 = data.V_at(0)
        m = 2 * (v0 + data.g + data.n + 4) if self.depth is None else self.depth
        return b, m


@dataclass
class ConeComplex:
    data: SurgeryKnotData
    radius: int
    depth: int
    a_bottom: dict[int, int] = field(default_factory=dict)
    b_bottom: dict[int, int] = field(default_factory=dict)
    cap: int = 0

    @property
    def lo_index(self) -> int:
        return -self.radius * self.data.n

    @property
    def hi_index(self) -> int:
        return self.radius * self.data.n + self.data.n - 1

    def s_of(self, ell: int) -> int:
        return ell // self.data.n

    def column(self, ell: int) -> tuple[int, int]:
        """(s, i) label of linear index ``ell``."""
        return ell // self.data.n, ell % self.data.n + 1

    def index(self, s: int, i: int) -> int:
        return s * self.data.n + (i - 1)

    def v_power(self, ell: int) -> int:
        return self.data.V_at(self.s_of(ell))

    def h_power(self, ell: int) -> int:
        return self.data.H_at(self.s_of(ell))

    def basis(self, kind: str, k: int) -> list[int]:
        """Columns of ``kind`` ('A' or 'B') carrying an element in grading k."""
        key = (kind, k)
        cache = self.__dict__.setdefault("_basis", {})
        if key not in cache:
            bottoms = self.a_bottom if kind == "A" else self.b_bottom
            cache[key] = [] if k > self.cap else [ell for ell, b in bottoms.items() if k >= b and (k - b) % 2 == 0]
        return cache[key]

    def level(self, kind: str, ell: int, k: int) -> int:
        bottoms = self.a_bottom if kind == "A" else self.b_bottom
        return (k - bottoms[ell]) // 2

    def differential(self, k: int) -> tuple[list[int], list[int], list[int]]:
        """Phi from grading k (A side) to k-1 (B side) as column bitmasks."""
        src = self.basis("A", k)
        dst = self.basis("B", k - 1)
        pos = {ell: t for t, ell in enumerate(dst)}
        images = []
        for ell in src:
            j = self.level("A", ell, k)
            img = 0
            # v: A_l -> B_l lowers the tower level by V_s, h: A_l -> B_{l+1} by H_s
            if j >= self.v_power(ell) and ell in pos:
                img ^= 1 << pos[ell]
            if j >= self.h_power(ell) and ell + 1 in pos:
                img ^= 1 << pos[ell + 1]
            images.append(img)
        return src, dst, images


def build_cone(data: SurgeryKnotData, config: ConeConfig | None = None) -> ConeComplex:
    b, depth = (config or ConeConfig()).resolve(data)
    cone = ConeComplex(data, b, depth)
    lo, hi = cone.lo_index, cone.hi_index
    # anchor: bottom of B_0 sits in grading -1, each map lowers grading by one
    gb = {0: -1}
    ga = {}
    for ell in range(0, hi + 1):
        ga[ell] = gb[ell] - 2 * cone.v_power(ell) + 1
        gb[ell + 1] = ga[ell] + 2 * cone.h_power(ell) - 1
    for ell in range(-1, lo - 1, -1):
        ga[ell] = gb[ell + 1] - 2 * cone.h_power(ell) + 1
        gb[ell] = ga[ell] + 2 * cone.v_power(ell) - 1
    cone.a_bottom = {ell: ga[ell] for ell in range(lo, hi + 1)}
    cone.b_bottom = {ell: gb[ell] for ell in range(lo + 1, hi + 1)}
    top = max(max(cone.a_bottom.values()), max(cone.b_bottom.values()))
    cap = top + 2 * depth
    cone.cap = cap if cap % 2 == 0 else cap + 1
    return cone


@dataclass
class ConeHomology:
    """Homology of a truncated cone together with the induced U-action."""

    cone: ConeComplex
    _ker: dict = field(default_factory=dict)
    _img: dict = field(default_factory=dict)
    _rank: dict = field(default_factory=dict)

    @cached_property
    def window(self) -> tuple[int, int]:
        lo = min(min(self.cone.a_bottom.values()), min(self.cone.b_bottom.values()))
        return lo, self.cone.cap

    def kernel(self, k: int) -> tuple[list[int], list[int]]:
        """(A-side basis columns, kernel vectors) in even grading k."""
        if k not in self._ker:
            src, _, images = self.cone.differential(k)
            self._ker[k] = (src, gf2.kernel(images))
        return self._ker[k]

    def image(self, k: int) -> tuple[list[int], gf2.Echelon]:
        """(B-side basis columns, echelon form of Phi(A_{k+1})) in odd grading k."""
        if k not in self._img:
            _, dst, images = self.cone.differential(k + 1)
            self._img[k] = (dst, gf2.Echelon(images))
        return self._img[k]

    def dim(self, k: int) -> int:
        if k % 2 == 0:
            return len(self.kernel(k)[1])
        dst, ech = self.image(k)
        return len(dst) - len(ech)

    def _push(self, kind: str, vec: int, cols: list[int], k: int, j: int) -> int:
        """Apply U^j to a vector over the columns ``cols`` in grading k."""
        target = {ell: t for t, ell in enumerate(self.cone.basis(kind, k - 2 * j))}
        out = 0
        t = 0
        while vec:
            if vec & 1:
                ell = cols[t]
                if self.cone.level(kind, ell, k) >= j:
                    out ^= 1 << target[ell]
            vec >>= 1
            t += 1
        return out

    def rank(self, k: int, j: int) -> int:
        """Rank of U^j from H_k to H_{k-2j}."""
        if (k, j) not in self._rank:
            self._rank[k, j] = self._compute_rank(k, j)
        return self._rank[k, j]

    def _compute_rank(self, k: int, j: int) -> int:
        if j == 0:
            return self.dim(k)
        if k % 2 == 0:
            cols, ker = self.kernel(k)
            return gf2.rank(self._push("A", v, cols, k, j) for v in ker)
        dst, _ = self.image(k)
        _, low = self.image(k - 2 * j)
        span = gf2.Echelon(low.vectors())
        base = len(span)
        for t in range(len(dst)):
            span.add(self._push("B", 1 << t, dst, k, j))
        return len(span) - base

    def stable_top(self) -> int:
        """An even grading above which the homology is the tower alone.

        Scanning down from the cap, the first even k where H_k, H_{k-2} are not
        both one-dimensional with U an isomorphism between them bounds the
        tower bottom and every even finite summand; odd summands end below the
        last odd grading with homology.
        """
        lo, cap = self.window
        k = cap
        while k - 2 >= lo and self.dim(k) == 1 and self.dim(k - 2) == 1 and self.rank(k, 1) == 1:
            k -= 2
        odd = [g for g in range(cap - 1, lo - 1, -2) if self.dim(g)]
        top = k + 2
        if odd:
            top = max(top, odd[0] + 3)
        if top > cap:
            raise TruncationInstabilityError("homology is not stable below the truncation cap")
        return top

    def module(self) -> FUModule:
        lo, _ = self.window
        return decompose_from_ranks(self.rank, lo, self.stable_top(), absolute=True)

    def in_u_image(self, k: int, vec: int, power: int) -> bool:
        """Whether the even-grading cycle ``vec`` (over A-columns in grading k) lies in U^power H."""
        cols, ker = self.kernel(k + 2 * power)
        imgs = gf2.Echelon(self._push("A", v, cols, k + 2 * power, power) for v in ker)
        return vec in imgs


def cone_homology(data: SurgeryKnotData, config: ConeConfig | None = None, check: bool = True) -> FUModule:
    """HF+ of 1/n surgery, checked for stability under a larger truncation."""
    cfg = config or ConeConfig()
    b, depth = cfg.resolve(data)
    m = ConeHomology(build_cone(data, ConeConfig(b, depth))).module()
    if check:
        m2 = ConeHomology(build_cone(data, ConeConfig(b + 1, depth + 4))).module()
        if m != m2:
            raise TruncationInstabilityError(f"cone homology changed under enlarged truncation: {m} vs {m2}")
    return m


@dataclass(frozen=True)
class WitnessReport:
    column: tuple[int, int]
    level: int
    x_grading: int
    x_is_cycle: bool
    Ux_nonzero: bool
    escape_depth: int | None
    checked_depth: int
    y_escapes_U_image: bool

    @property
    def found(self) -> bool:
        return self.x_grading == 0 and self.x_is_cycle and self.Ux_nonzero and self.y_escapes_U_image

    def to_json(self) -> dict:
        return {
            "column": list(self.column),
            "level": self.level,
            "x_grading": self.x_grading,
            "x_is_cycle": self.x_is_cycle,
            "Ux_nonzero": self.Ux_nonzero,
            "escape_depth": self.escape_depth,
            "checked_depth": self.checked_depth,
            "y_escapes_U_image": self.y_escapes_U_image,
            "found": self.found,
        }


def obstruction_witness(data: SurgeryKnotData, config: ConeConfig | None = None) -> WitnessReport:
    """Locate x in grading 0 with Ux nonzero and not in the image of high U-powers.

    x sits at level V_2 - 1 of A_2 when n = 1, and at level V_1 - 1 of A_{1,2}
    when n > 1.
    """
    if data.V_at(0) < 4:
        raise HypothesisNotMetError(f"witness needs V_0 >= 4, got {data.V_at(0)}")
    cone = build_cone(data, config)
    h = ConeHomology(cone)
    s, i = (2, 1) if data.n == 1 else (1, 2)
    ell = cone.index(s, i)
    level = data.V_at(s) - 1
    kx = cone.a_bottom[ell] + 2 * level
    cols, ker = h.kernel(kx)
    x = 1 << cols.index(ell)
    _, _, images = cone.differential(kx)
    is_cycle = gf2.apply(images, x) == 0
    y = h._push("A", x, cols, kx, 1)
    ky = kx - 2
    y_nonzero = y != 0
    module = h.module()
    longest = max((n for _, n in module.summands), default=0)
    depth = (cone.cap - ky) // 2
    escape = None
    for power in range(1, depth + 1):
        if not h.in_u_image(ky, y, power):
            escape = power
            break
    escapes = y_nonzero and escape is not None and depth > longest
    return WitnessReport((s, i), level, kx, is_cycle, y_nonzero, escape, depth, escapes)
