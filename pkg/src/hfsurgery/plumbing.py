"""Negative-definite plumbing trees and their d-invariants.

For a plumbing X with boundary -Y and s vertices,

    d(-Y) = max over characteristic K of (K^2 + s) / 4,

where K is recorded by its pairings k_v = K.[v] and K^2 = k^T M^{-1} k.

Three searches are provided. ``box_search`` enumerates the normalized box
v^2 + 2 <= k_v <= -v^2 exhaustively. ``descent_search`` climbs from a few
starting vectors by the moves K -> K +- 2 PD[v]. ``tree_search`` is exact:
in dual coordinates x = M^{-1} k it minimizes x^T (-M) x by dynamic
programming over the tree, with coordinate bounds taken from a descent
incumbent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from hfsurgery.brieskorn import BrieskornParams, seifert_invariants
from hfsurgery.errors import InternalInconsistencyError, NotNegativeDefiniteError, SearchOverflowError

# exhaustive searches beyond this many lattice points are refused
DEFAULT_MAX_POINTS = 2 * 10**10
# per-edge table size allowed in the tree dynamic program
MAX_DP_TABLE = 6 * 10**7


@dataclass(frozen=True)
class PlumbingGraph:
    weights: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    orientation: str = "-Y"

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        s = len(self.weights)
        if s == 0:
            raise ValueError("a plumbing graph needs at least one vertex")
        if len(self.edges) != s - 1:
            raise ValueError("plumbing graph must be a tree")
        seen = {0}
        stack = [0]
        adj = self.adjacency()
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) != s:
            raise ValueError("plumbing graph must be connected")

    def __len__(self):
        return len(self.weights)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.weights]
        for a, b in self.edges:
            if a == b or not (0 <= a < len(adj) and 0 <= b < len(adj)):
                raise ValueError(f"bad edge ({a}, {b})")
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def matrix(self) -> np.ndarray:
        m = np.diag(np.asarray(self.weights, dtype=np.int64))
        for a, b in self.edges:
            m[a, b] = m[b, a] = 1
        return m

    def pivots(self) -> list[Fraction]:
        """Exact pivots of the intersection form, eliminating leaves toward vertex 0."""
        order, parent = _bfs(self.adjacency(), 0)
        piv = [Fraction(w) for w in self.weights]
        for v in reversed(order[1:]):
            if piv[v] == 0:
                return piv
            piv[parent[v]] -= 1 / piv[v]
        return piv

    def is_negative_definite(self) -> bool:
        return all(x < 0 for x in self.pivots())

    def determinant(self) -> int:
        det = Fraction(1)
        for x in self.pivots():
            det *= x
        if det.denominator != 1:
            raise InternalInconsistencyError("integer matrix with non-integral determinant")
        return int(det)

    def relabeled(self, perm) -> "PlumbingGraph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        w = [0] * len(self)
        for v, x in enumerate(self.weights):
            w[perm[v]] = x
        return PlumbingGraph(tuple(w), tuple((perm[a], perm[b]) for a, b in self.edges), self.orientation)

    def to_json(self) -> dict:
        return {"weights": list(self.weights), "edges": [list(e) for e in self.edges], "orientation": self.orientation}

    @classmethod
    def from_json(cls, data: dict) -> "PlumbingGraph":
        return cls(tuple(data["weights"]), tuple(tuple(e) for e in data["edges"]), data.get("orientation", "-Y"))


@dataclass(frozen=True)
class CharVector:
    pairings: tuple[int, ...]

    def is_characteristic(self, graph: PlumbingGraph) -> bool:
        return len(self.pairings) == len(graph) and all((k + w) % 2 == 0 for k, w in zip(self.pairings, graph.weights))

    def square(self, graph: PlumbingGraph) -> Fraction:
        return _exact_quadratic(graph.matrix(), self.pairings)


def _bfs(adj, root):
    order = [root]
    parent = {root: -1}
    for u in order:
        for v in adj[u]:
            if v not in parent:
                parent[v] = u
                order.append(v)
    return order, parent


def _exact_quadratic(m: np.ndarray, k) -> Fraction:
    """k^T m^{-1} k by exact Gaussian elimination."""
    n = len(k)
    a = [[Fraction(int(m[i, j])) for j in range(n)] + [Fraction(int(k[i]))] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    x = [a[i][n] / a[i][i] for i in range(n)]
    return sum(Fraction(int(ki)) * xi for ki, xi in zip(k, x))


def continued_fraction(m: int, n: int) -> list[int]:
    """The expansion m/n = a1 - 1/(a2 - 1/(...)) with every a_i >= 2."""
    if not (m > n >= 1) or math.gcd(m, n) != 1:
        raise ValueError(f"need coprime m > n >= 1, got ({m}, {n})")
    out = []
    while n:
        a = -(-m // n)
        out.append(a)
        m, n = n, a * n - m
    return out


def plumbing_graph(params: BrieskornParams) -> PlumbingGraph:
    """Star-shaped plumbing: center e0, one arm per fiber with weights -a_i from a/a'."""
    inv = seifert_invariants(params)
    weights = [inv.e0]
    edges = []
    for alpha, beta in inv.fractions:
        prev = 0
        for a in continued_fraction(alpha, beta):
            weights.append(-a)
            edges.append((prev, len(weights) - 1))
            prev = len(weights) - 1
    return PlumbingGraph(tuple(weights), tuple(edges))


def _unimodular_inverse(graph: PlumbingGraph) -> np.ndarray:
    if not graph.is_negative_definite():
        raise NotNegativeDefiniteError("intersection form is not negative definite")
    if abs(graph.determinant()) != 1:
        raise ValueError("d-invariant search supports integer homology spheres only (det must be +-1)")
    m = graph.matrix()
    inv = np.round(np.linalg.inv(m.astype(float))).astype(np.int64)
    if not (inv @ m == np.eye(len(m), dtype=np.int64)).all():
        inv = np.array(_exact_inverse(m), dtype=np.int64)
    return inv


def _exact_inverse(m: np.ndarray) -> list[list[int]]:
    n = len(m)
    a = [[Fraction(int(m[i, j])) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        a[c] = [x / a[c][c] for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    out = [[a[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in out for x in row):
        raise InternalInconsistencyError("unimodular matrix with non-integral inverse")
    return [[int(x) for x in row] for row in out]


def box_ranges(graph: PlumbingGraph) -> list[np.ndarray]:
    """Normalized box v^2 + 2 <= k_v <= -v^2, stepping by 2."""
    return [np.arange(w + 2, -w + 1, 2, dtype=np.int64) for w in graph.weights]


def wide_ranges(graph: PlumbingGraph, margin: int = 6) -> list[np.ndarray]:
    """Widened box v^2 - margin <= k_v <= -v^2 + margin."""
    if margin % 2:
        raise ValueError("margin must be even to preserve parity")
    return [np.arange(w - margin, -w + margin + 1, 2, dtype=np.int64) for w in graph.weights]


def box_size(graph: PlumbingGraph) -> int:
    return math.prod(len(r) for r in box_ranges(graph))


def grid_search(graph: PlumbingGraph, vals: list[np.ndarray],
                max_points: int = DEFAULT_MAX_POINTS) -> tuple[int, CharVector]:
    """Exhaustive maximum of K^2 over the product of per-vertex value ranges.

    Splits the vertices into two halves, enumerates each half's grid, and
    combines them with a blocked matrix product. Returns (max K^2, argmax).
    """
    inv = _unimodular_inverse(graph)
    p = -inv
    total = math.prod(len(v) for v in vals)
    if total > max_points:
        raise SearchOverflowError(f"search grid has {total} points (limit {max_points})", total)
    s = len(graph)
    order = sorted(range(s), key=lambda v: -len(vals[v]))
    half_a, half_b = [], []
    pa = pb = 1
    for v in order:
        if pa <= pb:
            half_a.append(v)
            pa *= len(vals[v])
        else:
            half_b.append(v)
            pb *= len(vals[v])
    kmax = max(int(np.abs(v).max()) for v in vals)
    if kmax * kmax * s * s * int(np.abs(p).max()) >= 2**52:
        raise SearchOverflowError("grid search values exceed the exact float range", total)

    def grid(idx):
        if not idx:
            return np.zeros((1, 0))
        mesh = np.meshgrid(*[vals[v] for v in idx], indexing="ij")
        return np.stack([g.ravel() for g in mesh], axis=1).astype(np.float64)

    ka, kb = grid(half_a), grid(half_b)
    paa = p[np.ix_(half_a, half_a)].astype(float)
    pbb = p[np.ix_(half_b, half_b)].astype(float)
    pab = p[np.ix_(half_a, half_b)].astype(float)
    qa = np.einsum("ij,jk,ik->i", ka, paa, ka)
    qb = np.einsum("ij,jk,ik->i", kb, pbb, kb)
    cross = 2 * kb @ pab.T
    best = math.inf
    arg = (0, 0)
    chunk = max(1, int(2e7 // max(1, len(kb))))
    for i in range(0, len(ka), chunk):
        g = ka[i:i + chunk] @ cross.T
        g += qb[None, :]
        g += qa[i:i + chunk, None]
        j = int(np.argmin(g))
        if g.flat[j] < best:
            best = float(g.flat[j])
            arg = (i + j // g.shape[1], j % g.shape[1])
    k = np.zeros(s, dtype=np.int64)
    for col, v in enumerate(half_a):
        k[v] = int(ka[arg[0], col])
    for col, v in enumerate(half_b):
        k[v] = int(kb[arg[1], col])
    k2 = int(k @ inv @ k)
    if k2 != -round(best):
        raise InternalInconsistencyError("grid search lost exactness")
    return k2, CharVector(tuple(int(t) for t in k))


def box_search(graph: PlumbingGraph, max_points: int = DEFAULT_MAX_POINTS) -> tuple[int, CharVector]:
    return grid_search(graph, box_ranges(graph), max_points)


def wide_box_search(graph: PlumbingGraph, margin: int = 6,
                    max_points: int = DEFAULT_MAX_POINTS) -> tuple[int, CharVector]:
    return grid_search(graph, wide_ranges(graph, margin), max_points)


def _climb(m: np.ndarray, inv: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Apply the best improving move K -> K +- 2 PD[v] until none is left."""
    w = np.diag(m)
    while True:
        up = k + w  # gain 4*(k_v + v^2) for K + 2 PD[v]
        down = w - k  # gain 4*(v^2 - k_v) for K - 2 PD[v]
        v_up, v_down = int(np.argmax(up)), int(np.argmax(down))
        if up[v_up] <= 0 and down[v_down] <= 0:
            return k
        if up[v_up] >= down[v_down]:
            k = k + 2 * m[v_up]
        else:
            k = k - 2 * m[v_down]


def descent_search(graph: PlumbingGraph) -> tuple[int, CharVector]:
    """Best local maximum of K^2 reached from a few starting vectors (a lower bound)."""
    inv = _unimodular_inverse(graph)
    m = graph.matrix()
    w = np.diag(m)
    starts = [w % 2, w + 2, -w, np.where(w % 2 == 0, 0, -1)]
    best = None
    for k0 in starts:
        k = _climb(m, inv, np.asarray(k0, dtype=np.int64))
        k2 = int(k @ inv @ k)
        if best is None or k2 > best[0]:
            best = (k2, CharVector(tuple(int(x) for x in k)))
    return best


def _tree_dp(m: np.ndarray, inv: np.ndarray, adj, bound: int) -> tuple[int, np.ndarray] | None:
    """Minimize x^T (-M) x over x = x0 (mod 2) with every |x_v| <= sqrt(bound * P_vv).

    Returns (energy, x), or None when the box holds no admissible point.
    """
    s = len(m)
    p = -inv
    x0 = (inv @ (np.diag(m) % 2)) % 2
    rng = []
    for v in range(s):
        b = math.isqrt(int(bound * p[v, v]))
        lo = -b if (-b - x0[v]) % 2 == 0 else -b + 1
        r = np.arange(lo, b + 1, 2, dtype=np.int64)
        if not len(r):
            return None
        rng.append(r)
    order, parent = _bfs(adj, 0)
    a = -np.diag(m)
    acc = [np.zeros(len(r), dtype=np.int64) for r in rng]
    choice = {}
    for v in reversed(order[1:]):
        u = parent[v]
        size = len(rng[v]) * len(rng[u])
        if size > MAX_DP_TABLE:
            raise SearchOverflowError(f"dynamic program table {len(rng[v])}x{len(rng[u])} too large", size)
        xv = rng[v][:, None]
        xu = rng[u][None, :]
        cost = a[v] * xv * xv - 2 * m[u, v] * xv * xu + acc[v][:, None]
        pick = cost.argmin(axis=0)
        choice[v] = pick
        acc[u] += cost[pick, np.arange(len(rng[u]))]
    total = a[0] * rng[0] * rng[0] + acc[0]
    i0 = int(total.argmin())
    idx = {0: i0}
    for v in order[1:]:
        idx[v] = int(choice[v][idx[parent[v]]])
    x = np.array([rng[v][idx[v]] for v in range(s)], dtype=np.int64)
    return int(total[i0]), x


def tree_search(graph: PlumbingGraph, incumbent: int | None = None) -> tuple[int, CharVector]:
    """Exact maximum of K^2 by dynamic programming over the tree.

    With Q = -M and x = M^{-1} k, characteristic vectors correspond to
    x in x0 + 2Z^s and K^2 = -x^T Q x. Any x with x^T Q x <= R satisfies
    |x_v| <= sqrt(R * (Q^{-1})_vv), so the program over that box is exact as
    soon as its optimum is <= R. R grows geometrically up to the energy of
    the descent incumbent, which always qualifies.
    """
    inv = _unimodular_inverse(graph)
    m = graph.matrix()
    adj = graph.adjacency()
    if incumbent is None:
        incumbent = descent_search(graph)[0]
    cap = -incumbent
    bound = min(1, cap)
    while True:
        res = _tree_dp(m, inv, adj, bound)
        if res is not None and res[0] <= bound:
            break
        if bound >= cap:
            raise InternalInconsistencyError("tree search missed the descent incumbent")
        bound = min(4 * bound, cap)
    energy, x = res
    k = m @ x
    k2 = int(x @ m @ x)
    if k2 != -energy or k2 < incumbent:
        raise InternalInconsistencyError("tree search disagrees with its own bound")
    return k2, CharVector(tuple(int(t) for t in k))


def max_char_square(graph: PlumbingGraph, method: str = "tree") -> tuple[int, CharVector]:
    if method == "tree":
        return tree_search(graph)
    if method == "box":
        return box_search(graph)
    if method == "descent":
        return descent_search(graph)
    raise ValueError(f"unknown search method {method!r}")


def d_invariant(graph: PlumbingGraph, method: str = "tree") -> int:
    """d of the oriented boundary -Y of the plumbing (callers negate for Y)."""
    k2, _ = max_char_square(graph, method)
    num = k2 + len(graph)
    if num % 4:
        raise InternalInconsistencyError(f"(K^2 + s) = {num} is not divisible by 4")
    return num // 4


def canonical_square(graph: PlumbingGraph) -> int:
    """K^2 of the canonical class, K.v = -v^2 - 2."""
    inv = _unimodular_inverse(graph)
    k = -np.asarray(graph.weights, dtype=np.int64) - 2
    return int(k @ inv @ k)


def graph_to_dot(graph: PlumbingGraph, name: str = "plumbing") -> str:
    lines = [f"graph {name} {{", "  node [shape=circle, fontsize=10];"]
    for v, w in enumerate(graph.weights):
        lines.append(f'  v{v} [label="{w}"];')
    for a, b in graph.edges:
        lines.append(f"  v{a} -- v{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
