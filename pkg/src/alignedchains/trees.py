"""Finite trees with exact integer geometry.

Vertices are the integers 0..n-1.  All distances, geodesics, nearest-point
projections and convex hulls are computed combinatorially, so every result
is exact.  Trees are immutable once built and safe to share between tasks;
the per-source BFS distance cache only grows.
"""

from __future__ import annotations

import heapq
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .limits import DEFAULT_VERTEX_CAP, CapExceeded


@dataclass(frozen=True)
class Tree:
    """Adjacency-list view of a finite tree on vertices 0..n-1."""

    adjacency: tuple[tuple[int, ...], ...]
    _dist_cache: dict[int, list[int]] = field(
        default_factory=dict, compare=False, repr=False
    )

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    def vertices(self) -> range:
        return range(len(self.adjacency))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def distances_from(self, source: int) -> list[int]:
        """All distances from `source`, memoized per source."""
        cached = self._dist_cache.get(source)
        if cached is not None:
            return cached
        dist = [-1] * len(self.adjacency)
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            du = dist[u]
            for w in self.adjacency[u]:
                if dist[w] < 0:
                    dist[w] = du + 1
                    queue.append(w)
        self._dist_cache[source] = dist
        return dist

    def distance(self, u: int, v: int) -> int:
        return self.distances_from(u)[v]


def build_tree(edges: Iterable[tuple[int, int]], vertex_count: int | None = None) -> Tree:
    """Validate an edge list and return the tree it spans.

    The ids must cover a contiguous range 0..n-1; the edges must form a
    connected acyclic graph.  `vertex_count` is only needed for the
    single-vertex tree, which has no edges.
    """
    edge_list = [(int(a), int(b)) for a, b in edges]
    for a, b in edge_list:
        if a == b:
            raise ValueError(f"self-loop at vertex {a}")
        if a < 0 or b < 0:
            raise ValueError(f"negative vertex id in edge ({a}, {b})")
    if not edge_list:
        if vertex_count is None:
            vertex_count = 1
        if vertex_count != 1:
            raise ValueError("an edgeless tree must have exactly one vertex")
        return Tree(((),))
    n = max(max(a, b) for a, b in edge_list) + 1
    if vertex_count is not None and vertex_count != n:
        raise ValueError(f"vertex_count {vertex_count} does not match ids (max id {n - 1})")
    if len(edge_list) != n - 1:
        raise ValueError(f"{len(edge_list)} edges on {n} vertices cannot form a tree")
    seen_pairs: set[tuple[int, int]] = set()
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edge_list:
        key = (min(a, b), max(a, b))
        if key in seen_pairs:
            raise ValueError(f"duplicate edge ({a}, {b})")
        seen_pairs.add(key)
        adj[a].append(b)
        adj[b].append(a)
    tree = Tree(tuple(tuple(sorted(ns)) for ns in adj))
    # Edge count is right, so connectivity also rules out cycles.
    reached = sum(1 for d in tree.distances_from(0) if d >= 0)
    if reached != n:
        raise ValueError("edges do not form a connected tree (missing or isolated ids)")
    return tree


def parse_edge_list(text: str) -> list[tuple[int, int]]:
    """Parse the edge-list text format: one `u v` pair per line, # comments."""
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two vertex ids, got {raw!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: non-integer vertex id in {raw!r}") from exc
    return edges


def load_tree(path: str) -> Tree:
    with open(path, "r", encoding="utf-8") as handle:
        return build_tree(parse_edge_list(handle.read()))


def path_tree(length: int) -> Tree:
    """Path with `length` vertices 0-1-...-(length-1)."""
    if length < 1:
        raise ValueError("a path needs at least one vertex")
    return build_tree([(i, i + 1) for i in range(length - 1)], vertex_count=length)


def regular_ball(branching: int, radius: int, vertex_cap: int = DEFAULT_VERTEX_CAP) -> Tree:
    """Ball of the given radius in the `branching`-regular tree.

    Every non-leaf vertex has degree `branching`; leaves sit exactly at
    distance `radius` from the root.  Ids are assigned in BFS order with
    the root at 0, so the layout is deterministic.
    """
    if branching < 3:
        raise ValueError("branching must be at least 3")
    if radius < 0:
        raise ValueError("radius must be non-negative")
    count = 1
    layer = branching
    for _ in range(radius):
        count += layer
        layer *= branching - 1
    if count > vertex_cap:
        raise CapExceeded(f"regular ball would have {count} vertices (cap {vertex_cap})")
    if radius == 0:
        return Tree(((),))
    edges: list[tuple[int, int]] = []
    next_id = 1
    frontier = [0]
    for depth in range(radius):
        children_each = branching if depth == 0 else branching - 1
        new_frontier = []
        for parent in frontier:
            for _ in range(children_each):
                edges.append((parent, next_id))
                new_frontier.append(next_id)
                next_id += 1
        frontier = new_frontier
    return build_tree(edges, vertex_count=next_id)


def random_tree(n: int, seed: int | str) -> Tree:
    """Uniform random labeled tree on n vertices via a Prufer sequence."""
    if n < 1:
        raise ValueError("need at least one vertex")
    if n == 1:
        return Tree(((),))
    if n == 2:
        return build_tree([(0, 1)])
    rng = random.Random(seed)
    seq = [rng.randrange(n) for _ in range(n - 2)]
    return tree_from_pruefer(seq)


def tree_from_pruefer(seq: Sequence[int]) -> Tree:
    """Decode a Prufer sequence over 0..n-1 (n = len(seq) + 2)."""
    n = len(seq) + 2
    degree = [1] * n
    for s in seq:
        if not 0 <= s < n:
            raise ValueError(f"sequence entry {s} out of range for n={n}")
        degree[s] += 1
    edges: list[tuple[int, int]] = []
    # Always join the smallest current leaf to the next sequence entry.
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for s in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, s))
        degree[s] -= 1
        if degree[s] == 1:
            heapq.heappush(leaves, s)
    # The two unconsumed leaves form the final edge.
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return build_tree(edges, vertex_count=n)


def nonisomorphic_trees(n: int) -> Iterator[Tree]:
    """All unlabeled trees on n vertices, one representative each."""
    import networkx as nx

    if n < 1:
        raise ValueError("need at least one vertex")
    if n == 1:
        yield Tree(((),))
        return
    if n == 2:
        yield build_tree([(0, 1)])
        return
    for g in nx.nonisomorphic_trees(n):
        yield build_tree(list(g.edges()), vertex_count=n)


def geodesic(t: Tree, u: int, v: int) -> list[int]:
    """Vertices of the unique path from u to v, inclusive."""
    dist_v = t.distances_from(v)
    path = [u]
    cur = u
    while cur != v:
        target = dist_v[cur] - 1
        for w in t.adjacency[cur]:
            if dist_v[w] == target:
                cur = w
                break
        path.append(cur)
    return path


def project_to_segment(t: Tree, w: int, u: int, v: int) -> int:
    """Nearest point to w on the segment [u, v]."""
    duv = t.distance(u, v)
    dwu = t.distances_from(w)[u]
    dwv = t.distances_from(w)[v]
    # Offset of the meet point from u along [u, v].
    offset = (dwu + duv - dwv) // 2
    if offset == 0:
        return u
    if offset == duv:
        return v
    return geodesic(t, u, v)[offset]


@dataclass(frozen=True)
class ConvexHull:
    """Vertex set of the subtree spanned by a tuple, plus its leaves."""

    vertices: frozenset[int]
    leaves: frozenset[int]


def convex_hull(t: Tree, tup: Sequence[int]) -> ConvexHull:
    if not tup:
        raise ValueError("hull of an empty tuple is undefined")
    points = sorted(set(tup))
    verts: set[int] = {points[0]}
    for a, b in combinations(points, 2):
        verts.update(geodesic(t, a, b))
    leaves = set()
    for v in verts:
        inside = sum(1 for w in t.adjacency[v] if w in verts)
        if inside <= 1:
            leaves.add(v)
    return ConvexHull(frozenset(verts), frozenset(leaves))


def is_aligned(t: Tree, tup: Sequence[int]) -> bool:
    """True when all entries lie on one geodesic segment."""
    points = list(dict.fromkeys(tup))
    if len(points) <= 2:
        return True
    best = (0, points[0], points[0])
    for a, b in combinations(points, 2):
        d = t.distance(a, b)
        if d > best[0]:
            best = (d, a, b)
    dmax, a, b = best
    da = t.distances_from(a)
    db = t.distances_from(b)
    return all(da[p] + db[p] == dmax for p in points)


def aligned_tuples(t: Tree, size: int) -> list[tuple[int, ...]]:
    """All canonical (sorted, distinct) aligned tuples with `size` entries.

    Each aligned vertex set is generated once, from its extremal pair.
    """
    if size < 1:
        raise ValueError("size must be positive")
    if size == 1:
        return [(v,) for v in t.vertices()]
    out: list[tuple[int, ...]] = []
    n = t.vertex_count
    for u in range(n):
        du = t.distances_from(u)
        for v in range(u + 1, n):
            if du[v] < size - 1:
                continue
            interior = geodesic(t, u, v)[1:-1]
            for combo in combinations(interior, size - 2):
                out.append(tuple(sorted((u, v) + combo)))
    out.sort()
    return out


class PartialIsometry:
    """Injective, distance-preserving map between subsets of a tree."""

    def __init__(self, mapping: dict[int, int]):
        self.mapping = dict(mapping)

    def __len__(self) -> int:
        return len(self.mapping)

    def __contains__(self, v: int) -> bool:
        return v in self.mapping

    def apply(self, v: int) -> int:
        return self.mapping[v]

    def domain(self) -> set[int]:
        return set(self.mapping)

    def image(self) -> set[int]:
        return set(self.mapping.values())

    def validate(self, t: Tree) -> None:
        """Raise ValueError unless injective and distance-preserving on t."""
        items = sorted(self.mapping.items())
        if len({b for _, b in items}) != len(items):
            raise ValueError("mapping is not injective")
        for i, (a1, b1) in enumerate(items):
            d1 = t.distances_from(a1)
            e1 = t.distances_from(b1)
            for a2, b2 in items[i + 1 :]:
                if d1[a2] != e1[b2]:
                    raise ValueError(
                        f"distance mismatch: d({a1},{a2})={d1[a2]} but d({b1},{b2})={e1[b2]}"
                    )

    def max_displacement(self, t: Tree) -> int:
        return max((t.distance(a, b) for a, b in self.mapping.items()), default=0)

    def has_even_displacement(self, t: Tree) -> bool:
        return all(t.distance(a, b) % 2 == 0 for a, b in self.mapping.items())


def extend_partial_isometry(
    t: Tree, seed: PartialIsometry | dict[int, int], targets: Iterable[int]
) -> PartialIsometry | None:
    """Greedily extend a partial isometry until it covers `targets`.

    Unmapped vertices are processed outward from the current domain along
    the paths leading to the targets; each one takes the lowest-id image
    that preserves every pairwise distance.  Returns None when some vertex
    has no valid image (degree or boundary obstruction).
    """
    mapping = dict(seed.mapping if isinstance(seed, PartialIsometry) else seed)
    if not mapping:
        raise ValueError("seed must map at least one vertex")
    PartialIsometry(mapping).validate(t)
    target_set = set(targets)
    pending = target_set - mapping.keys()
    # Vertices to traverse: every vertex on a path from a target to the
    # nearest mapped vertex, ordered by distance from the domain.
    needed: set[int] = set()
    for tv in pending:
        dists = t.distances_from(tv)
        anchor = min(mapping, key=lambda m: (dists[m], m))
        needed.update(geodesic(t, tv, anchor))
    needed -= mapping.keys()
    used = set(mapping.values())
    while needed:
        # Next vertex adjacent to the mapped region, lowest id first.
        frontier = sorted(
            w for w in needed if any(nb in mapping for nb in t.adjacency[w])
        )
        if not frontier:
            return None
        w = frontier[0]
        anchor = next(nb for nb in t.adjacency[w] if nb in mapping)
        dw = t.distances_from(w)
        image = None
        for cand in t.adjacency[mapping[anchor]]:
            if cand in used:
                continue
            dc = t.distances_from(cand)
            if all(dw[a] == dc[b] for a, b in mapping.items()):
                image = cand
                break
        if image is None:
            return None
        mapping[w] = image
        used.add(image)
        needed.discard(w)
    return PartialIsometry(mapping)
