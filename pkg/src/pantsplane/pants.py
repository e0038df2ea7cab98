"""Pants decompositions of the instantiated model and their elementary moves.

A vertex is a triple (s1, s2, t): the handle curves of slopes s1 in Y1 and
s2 in Y2, plus the curve of slope t in the sphere window W(s1, s2). When
t = 1/0 the third curve is q itself and the vertex lies in the subgraph of
decompositions containing q.

Moves are only generated inside instantiated windows: the two handle
windows (when q is present) and the sphere window W(s1, s2). Moves in
windows cut out by a handle curve together with a crossing sphere curve
are not modelled, so searches explore a subgraph of the pants graph.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .farey import INF, Slope, farey_distance, farey_neighbors, slopes_within
from .handles import (
    Q,
    Y1,
    Y2,
    CurveLabel,
    HandleSystem,
    Window,
    curve_label,
    intersection_in_window,
    sphere_window,
)
from .surface import NormalCurveError, cut_pieces

KAPPA = 3


class PantsVertex(NamedTuple):
    s1: Slope
    s2: Slope
    t: Slope = INF

    @property
    def in_pq(self) -> bool:
        return self.t == INF

    def curves(self) -> tuple[CurveLabel, CurveLabel, CurveLabel]:
        return (
            curve_label(Y1, self.s1),
            curve_label(Y2, self.s2),
            curve_label(sphere_window(self.s1, self.s2), self.t),
        )

    def slopes_within(self, bound: int) -> bool:
        return all(abs(s.p) <= bound and s.q <= bound for s in self)

    def __str__(self) -> str:
        return f"({self.s1}, {self.s2}, {'q' if self.in_pq else self.t})"

    def to_document(self) -> dict:
        return {"s1": str(self.s1), "s2": str(self.s2), "t": str(self.t)}

    @classmethod
    def from_document(cls, doc: dict) -> "PantsVertex":
        return cls(Slope.parse(doc["s1"]), Slope.parse(doc["s2"]), Slope.parse(doc.get("t", "1/0")))


class PantsError(ValueError):
    pass


def pants_vector(system: HandleSystem, v: PantsVertex) -> tuple[int, ...]:
    return system.multicurve_vector(v.curves())


def validate_pants(system: HandleSystem, weights: Sequence[int]) -> PantsVertex:
    """Check maximality of a weight vector and name it as a vertex of the model."""
    try:
        mc = system.normalize(weights)
    except NormalCurveError as err:
        raise PantsError(f"not a multicurve: {err}") from err
    if len(mc) != KAPPA:
        raise PantsError(f"expected {KAPPA} components, found {len(mc)}")
    bad = [p.kind for p in cut_pieces(system.model, mc.weights) if p.complexity != 0]
    if bad:
        raise PantsError(f"complement contains non-pants pieces: {bad}")
    return decode_pants(system, [c.weights for c in mc.components])


def decode_pants(system: HandleSystem, components: Sequence[Sequence[int]]) -> PantsVertex:
    """Name three component vectors as a model vertex, or raise PantsError."""
    comps = [tuple(c) for c in components]
    qv = system.vector(Q)
    handles, rest = {}, []
    for c in comps:
        if c == qv:
            continue
        for w in (Y1, Y2):
            if system.contains(w, c):
                try:
                    handles[w.kind] = system.slope_in_chart(w, c)
                except ValueError as err:
                    raise PantsError(str(err)) from err
                break
        else:
            rest.append(c)
    if set(handles) != {"Y1", "Y2"}:
        raise PantsError("decomposition lies outside the instantiated model (no curve in each handle)")
    if not rest:
        if qv not in comps:
            raise PantsError("decomposition lies outside the instantiated model")
        return PantsVertex(handles["Y1"], handles["Y2"])
    if len(rest) != 1:
        raise PantsError("decomposition lies outside the instantiated model")
    w = sphere_window(handles["Y1"], handles["Y2"])
    try:
        t = system.slope_in_chart(w, rest[0])
    except ValueError as err:
        raise PantsError(f"sphere curve not recognised: {err}") from err
    return PantsVertex(handles["Y1"], handles["Y2"], t)


@dataclass(frozen=True)
class MoveCertificate:
    shared: tuple[CurveLabel, CurveLabel]
    removed: CurveLabel
    added: CurveLabel
    window: Window
    intersection: int

    def to_document(self) -> dict:
        return {
            "shared": [str(x) for x in self.shared],
            "removed": str(self.removed),
            "added": str(self.added),
            "window": self.window.name,
            "intersection": self.intersection,
        }


def window_of(shared: Iterable[CurveLabel]) -> Window | None:
    """The instantiated complexity-1 window cut out by two disjoint curves."""
    shared = set(shared)
    handle = {x.window.kind: x.slope for x in shared if x.window is not None and x.window.is_torus}
    if Q in shared and len(handle) == 1:
        return Y2 if "Y1" in handle else Y1
    if set(handle) == {"Y1", "Y2"}:
        return sphere_window(handle["Y1"], handle["Y2"])
    return None


def is_elementary_move(mu: PantsVertex, nu: PantsVertex) -> MoveCertificate | None:
    a, b = set(mu.curves()), set(nu.curves())
    shared = a & b
    if len(shared) != KAPPA - 1:
        return None
    window = window_of(shared)
    if window is None:
        return None
    (removed,), (added,) = a - b, b - a
    n = intersection_in_window(window, _chart_slope(removed, window), _chart_slope(added, window))
    if n != (1 if window.is_torus else 2):
        return None
    return MoveCertificate(tuple(sorted(shared, key=str)), removed, added, window, n)


def _chart_slope(label: CurveLabel, window: Window) -> Slope:
    return INF if label == Q else label.slope


@lru_cache(maxsize=None)
def _nbrs(s: Slope, bound: int) -> tuple[Slope, ...]:
    return tuple(farey_neighbors(s, bound))


def neighbors(v: PantsVertex, bound: int) -> list[PantsVertex]:
    """Adjacent vertices whose chart slopes stay within bound, in sorted order."""
    out = []
    if v.in_pq:
        out.extend(PantsVertex(s, v.s2) for s in _nbrs(v.s1, bound))
        out.extend(PantsVertex(v.s1, s) for s in _nbrs(v.s2, bound))
    out.extend(PantsVertex(v.s1, v.s2, t) for t in _nbrs(v.t, bound))
    return sorted(out)


def enumerate_moves(v: PantsVertex, bound: int) -> list[tuple[PantsVertex, MoveCertificate]]:
    out = []
    for w in neighbors(v, bound):
        cert = is_elementary_move(v, w)
        if cert is None:
            raise AssertionError(f"generated non-move {v} -> {w}")
        out.append((w, cert))
    return out


@dataclass
class BoundedDistance:
    distance: int | None
    bound: int
    max_len: int
    geodesic_vertices: list[PantsVertex] = field(default_factory=list)
    geodesic_count: int = 0
    layers: list[list[PantsVertex]] = field(default_factory=list)

    def to_document(self) -> dict:
        return {
            "distance": self.distance,
            "bound": self.bound,
            "max_len": self.max_len,
            "geodesic_vertex_count": len(self.geodesic_vertices),
            "geodesic_count": self.geodesic_count,
        }


def bounded_pants_distance(
    mu: PantsVertex, nu: PantsVertex, bound: int, max_len: int, geodesics: bool = False
) -> BoundedDistance:
    """Distance in the bounded move graph, searched from both ends.

    With geodesics=True the result also lists every vertex lying on some
    geodesic, grouped by layer, and the number of geodesics.
    """
    if mu == nu:
        return BoundedDistance(0, bound, max_len, [mu], 1, [[mu]])
    da, db = {mu: 0}, {nu: 0}
    fa, fb = [mu], [nu]
    ra = rb = 0
    found = None
    while ra + rb < max_len:
        # Grow the smaller frontier.
        grow_a = len(fa) <= len(fb)
        dist, frontier, r = (da, fa, ra) if grow_a else (db, fb, rb)
        nxt = []
        for v in frontier:
            for w in neighbors(v, bound):
                if w not in dist:
                    dist[w] = r + 1
                    nxt.append(w)
        if grow_a:
            fa, ra = nxt, ra + 1
        else:
            fb, rb = nxt, rb + 1
        if any(w in db for w in fa) if grow_a else any(w in da for w in fb):
            found = ra + rb
            break
        if not nxt:
            break
    if found is None:
        return BoundedDistance(None, bound, max_len)
    result = BoundedDistance(found, bound, max_len)
    if not geodesics:
        return result
    # Middle layer: exact distances from both ends add up.
    middle = sorted(w for w, x in da.items() if x == ra and db.get(w) == rb)
    layers = {ra: middle}
    for k in range(ra - 1, -1, -1):
        above = set(layers[k + 1])
        layers[k] = sorted(v for v, x in da.items() if x == k and any(w in above for w in neighbors(v, bound)))
    for k in range(ra + 1, found + 1):
        below = set(layers[k - 1])
        layers[k] = sorted(
            v for v, x in db.items() if x == found - k and any(w in below for w in neighbors(v, bound))
        )
    ordered = [layers[k] for k in range(found + 1)]
    counts = {mu: 1}
    for k in range(1, found + 1):
        prev = set(ordered[k - 1])
        for v in ordered[k]:
            counts[v] = sum(counts[w] for w in neighbors(v, bound) if w in prev)
    result.layers = ordered
    result.geodesic_vertices = [v for layer in ordered for v in layer]
    result.geodesic_count = counts[nu]
    return result


def random_handle_vertex(rng: random.Random, bound: int) -> PantsVertex:
    pool = slopes_within(bound)
    return PantsVertex(rng.choice(pool), rng.choice(pool))


def random_walk_path(
    start: PantsVertex, length: int, bound: int, seed: int, end_in_pq: bool = False
) -> list[PantsVertex]:
    """Seeded random walk along elementary moves.

    With end_in_pq the walk only takes steps from which q can still be
    reached in the remaining number of moves, so the last vertex contains q.
    """
    rng = random.Random(seed)
    path = [start]
    for step in range(length):
        options = neighbors(path[-1], bound)
        if end_in_pq:
            left = length - step - 1
            options = [w for w in options if farey_distance(w.t, INF) <= left]
        if not options:
            raise PantsError(f"walk stuck at {path[-1]}")
        path.append(rng.choice(options))
    return path


def validate_path(path: Sequence[PantsVertex]) -> list[MoveCertificate]:
    certs = []
    for i, (a, b) in enumerate(zip(path, path[1:])):
        cert = is_elementary_move(a, b)
        if cert is None:
            raise PantsError(f"step {i}: {a} -> {b} is not an elementary move")
        certs.append(cert)
    return certs
