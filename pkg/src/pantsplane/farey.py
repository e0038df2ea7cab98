"""Exact Farey graph arithmetic.

Vertices are reduced slopes p/q with q >= 0 and infinity written 1/0. Two
slopes span an edge when |p*s - q*r| = 1. Everything here is integer-only.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


@dataclass(frozen=True, order=True)
class Slope:
    # Field order doubles as the geodesic tiebreak: denominator, then numerator.
    q: int
    p: int

    def __init__(self, p: int, q: int):
        if (p, q) == (0, 0):
            raise ValueError("0/0 is not a slope")
        g = gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    def __repr__(self) -> str:
        return f"Slope({self.p}/{self.q})"

    @property
    def height(self) -> int:
        return max(abs(self.p), self.q)

    @classmethod
    def parse(cls, text: str) -> "Slope":
        parts = text.strip().split("/")
        if len(parts) == 1:
            return cls(int(parts[0]), 1)
        if len(parts) != 2:
            raise ValueError(f"bad slope {text!r}")
        return cls(int(parts[0]), int(parts[1]))


INF = Slope(1, 0)
ZERO = Slope(0, 1)


def canonical_slope(p: int, q: int) -> Slope:
    return Slope(p, q)


def det(a: Slope, b: Slope) -> int:
    return a.p * b.q - a.q * b.p


def is_farey_edge(a: Slope, b: Slope) -> bool:
    return abs(det(a, b)) == 1


@dataclass(frozen=True)
class Unimodular:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if abs(self.a * self.d - self.b * self.c) != 1:
            raise ValueError(f"determinant of {self.rows()} is not +-1")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Unimodular":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    @property
    def trace(self) -> int:
        return self.a + self.d

    @property
    def determinant(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "Unimodular") -> "Unimodular":
        return Unimodular(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Unimodular":
        e = self.determinant
        return Unimodular(e * self.d, -e * self.b, -e * self.c, e * self.a)

    def power(self, k: int) -> "Unimodular":
        base = self if k >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(k)):
            out = out @ base
        return out

    def __call__(self, s: Slope) -> Slope:
        return mobius_apply(self, s)


IDENTITY = Unimodular(1, 0, 0, 1)


def mobius_apply(m: Unimodular, s: Slope) -> Slope:
    return Slope(m.a * s.p + m.b * s.q, m.c * s.p + m.d * s.q)


def _ext_gcd(a: int, b: int):
    """Return (g, x, y) with a*x + b*y = g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def sending_to_infinity(a: Slope) -> Unimodular:
    """A unimodular matrix mapping a to 1/0."""
    # Bottom row (-q, p) kills a; top row (u, v) with u*p + v*q = 1.
    _, v, u = _ext_gcd(a.q, a.p)
    return Unimodular(u, v, -a.q, a.p)


def farey_neighbors(a: Slope, denom_bound: int) -> list[Slope]:
    """Farey neighbours of a whose numerator and denominator are within the bound."""
    if denom_bound < 1:
        return []
    found = set()
    if a.q == 0:
        for n in range(-denom_bound, denom_bound + 1):
            found.add(Slope(n, 1))
    else:
        # Every neighbour is +-(r0, s0) + k(p, q) where p*s0 - q*r0 = 1.
        _, s0, r0 = _ext_gcd(a.p, -a.q)
        for sign in (1, -1):
            r1, s1 = sign * r0, sign * s0
            lo = (-denom_bound - s1) // a.q - 1
            hi = (denom_bound - s1) // a.q + 1
            for k in range(lo, hi + 1):
                r, s = r1 + k * a.p, s1 + k * a.q
                if (r, s) == (0, 0):
                    continue
                b = Slope(r, s)
                if b.height <= denom_bound:
                    found.add(b)
    return sorted(b for b in found if is_farey_edge(a, b))


def nicf_digits(x: int, y: int) -> list[int]:
    """Nearest-integer continued fraction digits of x/y (y > 0).

    x/y = c1 - 1/(c2 - 1/(c3 - ...)) with |c_i| >= 2 for i >= 2.
    """
    digits = []
    while True:
        c = _nearest(x, y)
        digits.append(c)
        x, y = x - c * y, y
        if x == 0:
            return digits
        # x/y - c = x'/y with |x'| <= y/2; continue with -y/x'.
        x, y = -y, x
        if y < 0:
            x, y = -x, -y


def _nearest(x: int, y: int) -> int:
    # Ties resolve downward; ties only occur at the final digit.
    return (2 * x + y) // (2 * y) if (2 * x + y) % (2 * y) else (2 * x + y) // (2 * y) - 1


def _distance_from_infinity(b: Slope) -> int:
    if b.q == 0:
        return 0
    return len(nicf_digits(b.p, b.q))


def farey_distance(a: Slope, b: Slope) -> int:
    if a == b:
        return 0
    return _distance_from_infinity(mobius_apply(sending_to_infinity(a), b))


def _geodesic_steps(cur: Slope, b: Slope, d: int) -> list[Slope]:
    """Neighbours of cur lying on some geodesic to b (d = distance(cur, b))."""
    m = sending_to_infinity(cur)
    target = mobius_apply(m, b)
    minv = m.inverse()
    lo = target.p // target.q
    out = []
    for n in range(lo - 2, lo + 4):
        if _distance_from_infinity(Slope(*_sub(target, n))) + 1 == d:
            out.append(mobius_apply(minv, Slope(n, 1)))
    return out


def _sub(t: Slope, n: int):
    # The geodesic from n to t has the length of the one from 1/0 to 1/(n - t).
    return (t.q, n * t.q - t.p)


def farey_geodesic(a: Slope, b: Slope) -> list[Slope]:
    """Geodesic from a to b; at each step the smallest next vertex is taken."""
    path = [a]
    d = farey_distance(a, b)
    cur = a
    while d > 0:
        if d == 1:
            nxt = b
        else:
            nxt = min(_geodesic_steps(cur, b, d))
        path.append(nxt)
        cur, d = nxt, d - 1
    return path


def is_farey_path(path: Sequence[Slope]) -> bool:
    return all(is_farey_edge(x, y) for x, y in zip(path, path[1:]))


def is_geodesic(path: Sequence[Slope]) -> bool:
    return is_farey_path(path) and farey_distance(path[0], path[-1]) == len(path) - 1


def is_hyperbolic(m: Unimodular) -> bool:
    return abs(m.trace) >= 3


class PeriodicAxis:
    """A bi-infinite Farey path invariant under a power of a hyperbolic matrix.

    ``vertex(i)`` is defined for every integer i; ``period`` consecutive
    vertices form a fundamental segment and ``matrix**power`` shifts the
    index by ``period``.
    """

    def __init__(self, m: Unimodular):
        if not is_hyperbolic(m):
            raise ValueError(f"matrix {m.rows()} is not hyperbolic (|trace| < 3)")
        self.matrix = m
        self.power, self.segment = self._find_segment(m)
        self.period = len(self.segment)
        self.generator = m.power(self.power)
        self._cache = {}

    @staticmethod
    def _find_segment(m: Unimodular):
        candidates = sorted(
            {Slope(p, q) for q in range(0, 4) for p in range(-3, 4) if (p, q) != (0, 0)}
        )
        for k in range(1, 5):
            mk = m.power(k)
            for v0 in candidates:
                path = farey_geodesic(v0, mobius_apply(mk, v0))
                seg = path[:-1]
                if not seg:
                    continue
                probe = PeriodicAxis.__new__(PeriodicAxis)
                probe.segment, probe.period, probe.generator, probe._cache = seg, len(seg), mk, {}
                if probe._locally_geodesic(span=8):
                    return k, seg
        raise ValueError(f"no periodic geodesic axis found for {m.rows()}")

    def _locally_geodesic(self, span: int) -> bool:
        n = self.period
        verts = [self.vertex(i) for i in range(-span, n + span + 1)]
        if not is_farey_path(verts):
            return False
        if len(set(verts)) != len(verts):
            return False
        for i in range(len(verts)):
            for j in range(i + 1, min(len(verts), i + span + 1)):
                if farey_distance(verts[i], verts[j]) != j - i:
                    return False
        return True

    def vertex(self, i: int) -> Slope:
        if i in self._cache:
            return self._cache[i]
        k, r = divmod(i, self.period)
        v = mobius_apply(self.generator.power(k), self.segment[r])
        self._cache[i] = v
        return v

    def window(self, extent: int) -> list[Slope]:
        return [self.vertex(i) for i in range(-extent, extent + 1)]

    def index_of(self, s: Slope, search: int) -> int | None:
        for i in range(-search, search + 1):
            if self.vertex(i) == s:
                return i
        return None


def periodic_axis(m: Unimodular, window: int) -> list[Slope]:
    if window < 0:
        raise ValueError("window must be non-negative")
    return PeriodicAxis(m).window(window)


def slopes_within(bound: int) -> list[Slope]:
    """All slopes with |p|, q <= bound, in canonical order."""
    out = {Slope(1, 0)}
    for q in range(1, bound + 1):
        for p in range(-bound, bound + 1):
            if gcd(p, q) == 1:
                out.add(Slope(p, q))
    return sorted(out)


class BoundedFareyOracle:
    """Breadth-first search in the Farey graph restricted to |p|, q <= bound."""

    def __init__(self, bound: int):
        self.bound = bound
        self.vertices = slopes_within(bound)
        self.index = {s: i for i, s in enumerate(self.vertices)}
        self.adj = [[self.index[b] for b in farey_neighbors(s, bound)] for s in self.vertices]

    def bfs(self, source: Slope):
        src = self.index[source]
        dist = [-1] * len(self.vertices)
        parent = [-1] * len(self.vertices)
        dist[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in self.adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
        return dist, parent

    def path(self, parent, target: Slope) -> list[Slope]:
        out = []
        v = self.index[target]
        while v >= 0:
            out.append(self.vertices[v])
            v = parent[v]
        return out[::-1]


def certified_oracle_distances(sources: Iterable[Slope], bound: int, margin: int = 4):
    """Oracle distances between slopes in ``sources``.

    A pair is certified when the BFS path at ``bound`` is a genuine Farey path
    of the reported length and BFS at ``margin * bound`` finds nothing shorter.
    Returns {(a, b): distance} for certified pairs and the list of
    uncertified pairs.
    """
    sources = list(sources)
    small = BoundedFareyOracle(bound)
    large = BoundedFareyOracle(margin * bound)
    certified, uncertified = {}, []
    for a in sources:
        dist_s, parent_s = small.bfs(a)
        dist_l, _ = large.bfs(a)
        for b in sources:
            ds = dist_s[small.index[b]]
            dl = dist_l[large.index[b]]
            path = small.path(parent_s, b) if ds >= 0 else []
            ok = (
                ds >= 0
                and len(path) == ds + 1
                and path[0] == a
                and path[-1] == b
                and is_farey_path(path)
                and dl == ds
            )
            if ok:
                certified[(a, b)] = ds
            else:
                uncertified.append((a, b))
    return certified, uncertified
