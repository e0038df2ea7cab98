"""Finite graphs, Cartesian products, convexity checks and plane windows."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, NamedTuple, Sequence

from .farey import (
    PeriodicAxis,
    Slope,
    Unimodular,
    farey_distance,
    is_farey_edge,
    is_geodesic,
    mobius_apply,
)

DEFAULT_GEODESIC_BUDGET = 10**6


class FiniteGraph:
    def __init__(self, vertices: Iterable[Hashable], edges: Iterable[tuple]):
        self.vertices = list(dict.fromkeys(vertices))
        self.adj = {v: set() for v in self.vertices}
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u!r}")
            if u not in self.adj or v not in self.adj:
                raise ValueError(f"edge ({u!r}, {v!r}) references a missing vertex")
            self.adj[u].add(v)
            self.adj[v].add(u)

    @property
    def edges(self) -> set[frozenset]:
        return {frozenset((u, v)) for u in self.adj for v in self.adj[u]}

    def degree(self, v) -> int:
        return len(self.adj[v])

    def bfs(self, source, allowed=None) -> dict:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w not in dist and (allowed is None or w in allowed):
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def is_connected(self) -> bool:
        return not self.vertices or len(self.bfs(self.vertices[0])) == len(self.vertices)

    def to_document(self) -> dict:
        return {
            "vertices": [str(v) for v in self.vertices],
            "edges": sorted(sorted(str(x) for x in e) for e in self.edges),
        }


class ProductVertex(NamedTuple):
    first: Slope
    second: Slope

    def __str__(self):
        return f"({self.first}, {self.second})"


def product_adjacent(u: ProductVertex, v: ProductVertex) -> bool:
    return (u.first == v.first and is_farey_edge(u.second, v.second)) or (
        u.second == v.second and is_farey_edge(u.first, v.first)
    )


def product_distance(u: ProductVertex, v: ProductVertex) -> int:
    return farey_distance(u.first, v.first) + farey_distance(u.second, v.second)


def cartesian_product(g1: FiniteGraph, g2: FiniteGraph) -> FiniteGraph:
    verts = [(a, b) for a in g1.vertices for b in g2.vertices]
    edges = []
    for a in g1.vertices:
        for b in g2.vertices:
            edges += [((a, b), (a, c)) for c in g2.adj[b]]
            edges += [((a, b), (c, b)) for c in g1.adj[a]]
    return FiniteGraph(verts, edges)


def build_grid_plane(l1: Sequence[Slope], l2: Sequence[Slope]) -> FiniteGraph:
    for name, line in (("L1", l1), ("L2", l2)):
        if not line or not is_geodesic(list(line)):
            raise ValueError(f"{name} is not a geodesic Farey path")
    verts = [ProductVertex(a, b) for a in l1 for b in l2]
    edges = []
    for i, a in enumerate(l1):
        for j, b in enumerate(l2):
            if i + 1 < len(l1):
                edges.append((ProductVertex(a, b), ProductVertex(l1[i + 1], b)))
            if j + 1 < len(l2):
                edges.append((ProductVertex(a, b), ProductVertex(a, l2[j + 1])))
    g = FiniteGraph(verts, edges)
    # Sanity: the edges are exactly the product adjacencies among the vertices.
    for u, v in combinations(verts, 2):
        if product_adjacent(u, v) != (v in g.adj[u]):
            raise ValueError("axes are not embedded Farey lines")
    return g


@dataclass
class ConvexityReport:
    verdict: bool
    pairs_checked: int
    witness: tuple | None = None
    detail: str = ""

    def to_document(self) -> dict:
        return {
            "verdict": self.verdict,
            "pairs_checked": self.pairs_checked,
            "witness": None if self.witness is None else [str(x) for x in self.witness],
            "detail": self.detail,
        }


def check_convex(g: FiniteGraph, subset: Iterable) -> ConvexityReport:
    """Does every pair in the subset have a geodesic of g inside the subset?"""
    s = list(dict.fromkeys(subset))
    allowed = set(s)
    checked = 0
    for i, u in enumerate(s):
        full = g.bfs(u)
        inner = g.bfs(u, allowed)
        for v in s[i + 1:]:
            checked += 1
            if inner.get(v) != full.get(v):
                return ConvexityReport(False, checked, (u, v), "no geodesic inside the subset")
    return ConvexityReport(True, checked)


@dataclass
class GeodesicReport:
    verdict: bool | None
    pairs_checked: int
    geodesics_enumerated: int
    budget: int
    budget_exceeded: bool = False
    witness: list | None = None

    def to_document(self) -> dict:
        return {
            "verdict": self.verdict,
            "pairs_checked": self.pairs_checked,
            "geodesics_enumerated": self.geodesics_enumerated,
            "budget": self.budget,
            "budget_exceeded": self.budget_exceeded,
            "witness": None if self.witness is None else [str(x) for x in self.witness],
        }


class BudgetExceeded(Exception):
    pass


def geodesic_dag(g: FiniteGraph, u) -> tuple[dict, dict]:
    """BFS distances from u and the predecessor lists of the geodesic DAG."""
    dist = {u: 0}
    preds = {u: []}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in g.adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                preds[y] = [x]
                queue.append(y)
            elif dist[y] == dist[x] + 1:
                preds[y].append(x)
    return dist, preds


def iter_geodesics(preds: dict, target, budget: int):
    """Yield every geodesic ending at target (as a list from the source)."""
    produced = 0
    stack = [(target, [target])]
    while stack:
        x, tail = stack.pop()
        if not preds[x]:
            produced += 1
            if produced > budget:
                raise BudgetExceeded
            yield tail[::-1]
            continue
        for p in sorted(preds[x], key=repr, reverse=True):
            stack.append((p, tail + [p]))


def check_totally_geodesic(g: FiniteGraph, subset: Iterable, budget: int = DEFAULT_GEODESIC_BUDGET) -> GeodesicReport:
    s = list(dict.fromkeys(subset))
    allowed = set(s)
    total, checked = 0, 0
    for i, u in enumerate(s):
        dist, preds = geodesic_dag(g, u)
        for v in s[i + 1:]:
            if v not in dist:
                continue
            checked += 1
            try:
                for path in iter_geodesics(preds, v, budget - total):
                    total += 1
                    if any(x not in allowed for x in path):
                        return GeodesicReport(False, checked, total, budget, witness=path)
            except BudgetExceeded:
                return GeodesicReport(None, checked, total, budget, budget_exceeded=True)
    return GeodesicReport(True, checked, total, budget)


@dataclass
class PlaneWindow:
    origin: ProductVertex
    axis1: list[Slope]
    axis2: list[Slope]
    extent: int

    def vertices(self) -> list[ProductVertex]:
        return [ProductVertex(a, b) for a in self.axis1 for b in self.axis2]

    def to_document(self) -> dict:
        return {
            "origin": [str(self.origin.first), str(self.origin.second)],
            "axis1": [str(s) for s in self.axis1],
            "axis2": [str(s) for s in self.axis2],
            "extent": self.extent,
        }


@dataclass
class TranslationReport:
    shift: tuple[int, int] | None
    square_shift: tuple[int, int] | None
    axis_powers: tuple[int, int]
    constant: bool
    checked_vertices: int
    notes: list[str] = field(default_factory=list)

    def to_document(self) -> dict:
        return {
            "shift": None if self.shift is None else list(self.shift),
            "square_shift": None if self.square_shift is None else list(self.square_shift),
            "axis_powers": list(self.axis_powers),
            "constant": self.constant,
            "checked_vertices": self.checked_vertices,
            "notes": self.notes,
        }


def _shift(axis: PeriodicAxis, m: Unimodular, extent: int) -> int | None:
    """Index shift of m along the axis, if constant over the window."""
    search = 4 * (extent + axis.period) + 8
    shifts = set()
    for i in range(-extent, extent + 1):
        j = axis.index_of(mobius_apply(m, axis.vertex(i)), search + abs(i))
        if j is None:
            return None
        shifts.add(j - i)
    return shifts.pop() if len(shifts) == 1 else None


def invariant_plane_window(m1: Unimodular, m2: Unimodular, extent: int):
    if extent < 0:
        raise ValueError("extent must be non-negative")
    ax1, ax2 = PeriodicAxis(m1), PeriodicAxis(m2)
    window = PlaneWindow(
        ProductVertex(ax1.vertex(0), ax2.vertex(0)), ax1.window(extent), ax2.window(extent), extent
    )
    s1, s2 = _shift(ax1, m1, extent), _shift(ax2, m2, extent)
    q1, q2 = _shift(ax1, m1 @ m1, extent), _shift(ax2, m2 @ m2, extent)
    shift = None if s1 is None or s2 is None else (s1, s2)
    square = None if q1 is None or q2 is None else (q1, q2)
    notes = []
    if shift is None:
        notes.append("single application does not preserve the axes; see axis_powers")
    report = TranslationReport(
        shift, square, (ax1.power, ax2.power), square is not None, (2 * extent + 1) ** 2, notes
    )
    # Coordinatewise check on every window vertex.
    if square is not None:
        mm1, mm2 = m1 @ m1, m2 @ m2
        for i in range(-extent, extent + 1):
            for j in range(-extent, extent + 1):
                image = (mobius_apply(mm1, ax1.vertex(i)), mobius_apply(mm2, ax2.vertex(j)))
                if image != (ax1.vertex(i + square[0]), ax2.vertex(j + square[1])):
                    report.constant = False
    return window, report


def grid_metric_is_l1(g: FiniteGraph, l1: Sequence, l2: Sequence) -> bool:
    """Induced path metric of the plane graph equals |di| + |dj|."""
    for i, a in enumerate(l1):
        for j, b in enumerate(l2):
            dist = g.bfs(ProductVertex(a, b))
            for k, c in enumerate(l1):
                for m, d in enumerate(l2):
                    if dist.get(ProductVertex(c, d)) != abs(i - k) + abs(j - m):
                        return False
    return True


def random_connected_graph(rng: random.Random, n: int, extra: int) -> FiniteGraph:
    verts = list(range(n))
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    for _ in range(extra):
        u, v = rng.sample(verts, 2)
        edges.append((u, v))
    return FiniteGraph(verts, edges)


def random_convex_subset(rng: random.Random, g: FiniteGraph) -> list:
    """Grow a subset by adding geodesic-closing vertices until convex."""
    start = rng.choice(g.vertices)
    subset = [start]
    target = rng.randint(1, len(g.vertices))
    while len(subset) < target:
        cand = [v for v in g.vertices if v not in subset and any(w in g.adj[v] for w in subset)]
        if not cand:
            break
        trial = subset + [rng.choice(cand)]
        if check_convex(g, trial).verdict:
            subset = trial
        else:
            break
    return subset


@dataclass
class ConvexityTrial:
    seed: int
    sizes: tuple[int, int]
    subset_sizes: tuple[int, int]
    factors_convex: bool
    product_convex: bool
    witness: tuple | None

    def to_document(self) -> dict:
        return {
            "seed": self.seed,
            "sizes": list(self.sizes),
            "subset_sizes": list(self.subset_sizes),
            "factors_convex": self.factors_convex,
            "product_convex": self.product_convex,
            "witness": None if self.witness is None else [str(x) for x in self.witness],
        }


def convexity_trial(seed: int) -> ConvexityTrial:
    rng = random.Random(seed)
    g1 = random_connected_graph(rng, rng.randint(3, 8), rng.randint(0, 5))
    g2 = random_connected_graph(rng, rng.randint(3, 8), rng.randint(0, 5))
    s1, s2 = random_convex_subset(rng, g1), random_convex_subset(rng, g2)
    factors = check_convex(g1, s1).verdict and check_convex(g2, s2).verdict
    report = check_convex(cartesian_product(g1, g2), [(a, b) for a in s1 for b in s2])
    return ConvexityTrial(
        seed, (len(g1.vertices), len(g2.vertices)), (len(s1), len(s2)), factors, report.verdict, report.witness
    )
