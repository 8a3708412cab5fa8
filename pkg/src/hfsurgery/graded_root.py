"""Graded roots and their homology as graded F[U]-modules.

The root of a tau function glues the rays [tau(n), infinity) of consecutive
indices along their common part. Its vertices at level c are the maximal
index intervals on which tau <= c. Homology is spanned by vertices in
grading 2 chi, and U sends a vertex to the sum of its children one level
down, so the tower runs upward along the trunk.

Homology is computed twice: by peeling the explicit tree, and directly from
tau by the elder rule on sublevel sets. The two routes are independent.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Callable

from hfsurgery.delta import TauFunction
from hfsurgery.errors import (
    InternalInconsistencyError,
    ParityMismatchError,
    RelativeGradingError,
)


@dataclass(frozen=True)
class FUModule:
    """A tower with bottom ``tower_bottom`` plus finite cyclic summands.

    Each summand is ``(top, length)``: generators in gradings
    ``top, top-2, ..., top-2(length-1)``, with U lowering grading by 2.
    """

    tower_bottom: int
    summands: tuple[tuple[int, int], ...] = ()
    absolute: bool = False

    def __post_init__(self):
        summ = tuple(sorted((int(t), int(n)) for t, n in self.summands))
        if any(n < 1 for _, n in summ):
            raise ValueError("summand lengths must be positive")
        object.__setattr__(self, "summands", summ)

    @property
    def grading_kind(self) -> str:
        return "absolute" if self.absolute else "relative"

    @property
    def d(self) -> int:
        return self.tower_bottom

    @staticmethod
    def bottom_of(summand: tuple[int, int]) -> int:
        top, n = summand
        return top - 2 * (n - 1)

    def is_pure_tower(self) -> bool:
        return not self.summands

    def dim(self, g: int) -> int:
        tower = int(g >= self.tower_bottom and (g - self.tower_bottom) % 2 == 0)
        return tower + self.red_dim(g)

    def red_dim(self, g: int) -> int:
        return sum(1 for s in self.summands if self.bottom_of(s) <= g <= s[0] and (s[0] - g) % 2 == 0)

    def ker_u_dim(self, g: int) -> int:
        return int(g == self.tower_bottom) + sum(1 for s in self.summands if self.bottom_of(s) == g)

    def red_gradings(self) -> list[int]:
        return sorted({g for s in self.summands for g in range(self.bottom_of(s), s[0] + 1, 2)})

    def shifted(self, delta: int, absolute: bool | None = None) -> "FUModule":
        return FUModule(
            self.tower_bottom + delta,
            tuple((t + delta, n) for t, n in self.summands),
            self.absolute if absolute is None else absolute,
        )

    def truncated(self, g: int) -> Counter:
        """Multiset of (top, length) for the submodule in gradings <= g (all finite)."""
        out = Counter()
        for t, n in self.summands:
            b = t - 2 * (n - 1)
            if b <= g:
                top = min(t, g - ((g - t) % 2))
                out[(top, (top - b) // 2 + 1)] += 1
        if self.tower_bottom <= g:
            top = g - ((g - self.tower_bottom) % 2)
            out[(top, (top - self.tower_bottom) // 2 + 1)] += 1
        return out

    def to_json(self) -> dict:
        return {
            "tower_bottom": self.tower_bottom,
            "summands": [{"top": t, "length": n} for t, n in self.summands],
            "grading": self.grading_kind,
        }

    @classmethod
    def from_json(cls, data: dict) -> "FUModule":
        return cls(
            data["tower_bottom"],
            tuple((s["top"], s["length"]) for s in data["summands"]),
            data.get("grading", "relative") == "absolute",
        )

    def pretty(self) -> str:
        """Render as T+_(d) (+) F_(g) ...; F[U]/U^k_(g) has its bottom in grading g."""
        parts = [f"T+_({self.tower_bottom})"]
        for s in sorted(self.summands, key=lambda s: (self.bottom_of(s), s[1])):
            b = self.bottom_of(s)
            parts.append(f"F_({b})" if s[1] == 1 else f"F[U]/U^{s[1]}_({b})")
        return " + ".join(parts)

    def __str__(self):
        return self.pretty()


@dataclass(frozen=True)
class GradedRoot:
    """Finite part of a graded root.

    Vertices are numbered so that children precede parents. ``parent[top]``
    is -1; the infinite trunk continues upward from ``top``. ``left[v]`` is the
    smallest tau index in the interval a vertex represents.
    """

    chi: tuple[int, ...]
    parent: tuple[int, ...]
    left: tuple[int, ...]
    top: int

    def __len__(self):
        return len(self.chi)

    def children(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.chi]
        for v, u in enumerate(self.parent):
            if u >= 0:
                out[u].append(v)
        for c in out:
            c.sort(key=lambda v: self.left[v])
        return out

    def leaves(self) -> list[int]:
        has_child = {u for u in self.parent if u >= 0}
        return [v for v in range(len(self.chi)) if v not in has_child]

    def level_counts(self) -> Counter:
        return Counter(self.chi)

    def validate(self) -> None:
        for v, u in enumerate(self.parent):
            if u >= 0 and self.chi[u] != self.chi[v] + 1:
                raise InternalInconsistencyError(f"edge {v}->{u} does not raise chi by one")
            if u >= 0 and u <= v:
                raise InternalInconsistencyError("children must precede parents")
        if self.parent[self.top] != -1 or self.chi[self.top] != max(self.chi):
            raise InternalInconsistencyError("trunk vertex is not the unique top")
        if list(self.parent).count(-1) != 1:
            raise InternalInconsistencyError("root is not connected")

    def to_json(self) -> dict:
        return {"chi": list(self.chi), "parent": list(self.parent), "left": list(self.left), "top": self.top}

    @classmethod
    def from_json(cls, data: dict) -> "GradedRoot":
        return cls(tuple(data["chi"]), tuple(data["parent"]), tuple(data["left"]), data["top"])


def build_root(t: TauFunction) -> GradedRoot:
    vals = t.values
    L = len(vals)
    by_level: dict[int, list[int]] = defaultdict(list)
    for i, v in enumerate(vals):
        by_level[v].append(i)
    uf = list(range(L))
    active = [False] * L

    def find(i):
        while uf[i] != i:
            uf[i] = uf[uf[i]]
            i = uf[i]
        return i

    chi: list[int] = []
    parent: list[int] = []
    left: list[int] = []
    roots: set[int] = set()
    vertex_of: dict[int, int] = {}
    for c in range(min(vals), max(vals) + 1):
        prev = vertex_of
        for i in by_level.get(c, ()):
            active[i] = True
            roots.add(i)
            for j in (i - 1, i + 1):
                if 0 <= j < L and active[j]:
                    a, b = find(i), find(j)
                    if a != b:
                        # the root is always the leftmost index of its interval
                        lo, hi = (a, b) if a < b else (b, a)
                        uf[hi] = lo
                        roots.discard(hi)
        vertex_of = {}
        for r in sorted(roots):
            vertex_of[r] = len(chi)
            chi.append(c)
            parent.append(-1)
            left.append(r)
        for r_old, v in prev.items():
            parent[v] = vertex_of[find(r_old)]
    root = GradedRoot(tuple(chi), tuple(parent), tuple(left), len(chi) - 1)
    return root


def homology(root: GradedRoot) -> FUModule:
    """Peel branches from the tree: at each merge, every child but the deepest ends.

    A branch whose deepest leaf has level a and which joins at a vertex of level
    m contributes a summand with gradings 2a .. 2(m-1). Ties in depth keep the
    leftmost branch alive.
    """
    kids = root.children()
    best: list[tuple[int, int]] = [(0, 0)] * len(root)
    summands = []
    for v in range(len(root)):
        if not kids[v]:
            best[v] = (root.chi[v], root.left[v])
            continue
        cands = sorted((best[c] for c in kids[v]))
        best[v] = cands[0]
        m = root.chi[v]
        for a, _ in cands[1:]:
            summands.append((2 * (m - 1), m - a))
    return FUModule(2 * best[root.top][0], tuple(summands))


def tau_homology(t: TauFunction) -> FUModule:
    """Homology straight from tau via 0-dimensional sublevel persistence on a path."""
    vals = t.values
    L = len(vals)
    order = sorted(range(L), key=lambda i: (vals[i], i))
    uf = list(range(L))
    birth = list(vals)
    active = [False] * L

    def find(i):
        while uf[i] != i:
            uf[i] = uf[uf[i]]
            i = uf[i]
        return i

    summands = []
    for i in order:
        active[i] = True
        for j in (i - 1, i + 1):
            if 0 <= j < L and active[j]:
                a, b = find(i), find(j)
                if a == b:
                    continue
                # elder rule: the component born later dies at this level
                if (birth[a], a) > (birth[b], b):
                    a, b = b, a
                m = vals[i]
                if birth[b] < m:
                    summands.append((2 * (m - 1), m - birth[b]))
                uf[b] = a
    return FUModule(2 * min(vals), tuple(summands))


def shift_to_absolute(m: FUModule, d: int) -> FUModule:
    if m.absolute:
        raise ValueError("module is already absolutely graded")
    delta = d - m.tower_bottom
    if delta % 2:
        raise ParityMismatchError(f"cannot move tower bottom {m.tower_bottom} to {d} by an even shift")
    return m.shifted(delta, absolute=True)


def u_kills_red_at(m: FUModule, g: int) -> bool:
    """True iff U vanishes on the reduced part in grading g.

    Equivalently no summand has top >= g and bottom <= g-2.
    """
    return not any(t >= g and m.bottom_of((t, n)) <= g - 2 for t, n in m.summands)


def mirror(m: FUModule) -> int:
    """d of the orientation reversal."""
    if not m.absolute:
        raise RelativeGradingError("mirror needs an absolutely graded module")
    return -m.tower_bottom


def decompose_from_ranks(rank: Callable[[int, int], int], lo: int, hi: int, absolute: bool = True) -> FUModule:
    """Recover a module from the ranks r(k, j) of U^j : H_k -> H_{k-2j}.

    Gradings of each parity are read in ``[lo, hi]``; everything below ``lo``
    must vanish. Summands reaching the top of their parity window are treated
    as infinite; exactly one such summand (the tower) must exist overall.
    """
    finite = []
    towers = []
    for par in (0, 1):
        top = hi if (hi - par) % 2 == 0 else hi - 1
        bot = lo if (lo - par) % 2 == 0 else lo + 1
        if top < bot:
            continue

        def cover(t, b):
            # number of summands containing both t and b (b <= t)
            if b < bot or t > top:
                return 0
            return rank(t, (t - b) // 2)

        for t in range(bot, top + 1, 2):
            for b in range(bot, t + 1, 2):
                if t == top:
                    cnt = cover(t, b) - cover(t, b - 2)
                else:
                    cnt = cover(t, b) - cover(t + 2, b) - cover(t, b - 2) + cover(t + 2, b - 2)
                if cnt < 0:
                    raise InternalInconsistencyError(f"negative multiplicity at top {t}, bottom {b}")
                if t == top:
                    towers += [b] * cnt
                else:
                    finite += [(t, (t - b) // 2 + 1)] * cnt
    if len(towers) != 1:
        raise InternalInconsistencyError(f"expected exactly one tower, found bottoms {towers}")
    return FUModule(towers[0], tuple(finite), absolute)


def canonical_form(root: GradedRoot, table: dict | None = None) -> int:
    """Interned id of the isomorphism class of the chi-graded rooted tree."""
    if table is None:
        table = {}
    kids = root.children()
    code = [0] * len(root)
    for v in range(len(root)):
        key = (root.chi[v], tuple(sorted(code[c] for c in kids[v])))
        code[v] = table.setdefault(key, len(table))
    return code[root.top]


def isomorphic(a: GradedRoot, b: GradedRoot) -> bool:
    table: dict = {}
    return canonical_form(a, table) == canonical_form(b, table)


def root_to_dot(root: GradedRoot, shift: int | None = None, name: str = "root") -> str:
    """DOT text; labels read "chi" or "chi, (absolute grading)" when ``shift`` is given.

    The absolute grading of a vertex is ``2*chi + shift``.
    """
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle, fontsize=10];"]
    for v, c in enumerate(root.chi):
        label = f"{c}" if shift is None else f"{c}, ({2 * c + shift})"
        lines.append(f'  v{v} [label="{label}"];')
    for v, u in enumerate(root.parent):
        if u >= 0:
            lines.append(f"  v{v} -> v{u};")
    lines.append('  trunk [shape=none, label="..."];')
    lines.append(f"  v{root.top} -> trunk [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
