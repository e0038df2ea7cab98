"""Projections to the handle windows and the audits built on them."""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .farey import INF, Slope, det, farey_distance, farey_geodesic, farey_neighbors, is_farey_edge, slopes_within
from .handles import (
    Q,
    Y1,
    Y2,
    CurveLabel,
    HandleSystem,
    WaveDescriptor,
    Window,
    wave_intersection,
    wave_projection,
)
from .pants import (
    PantsError,
    PantsVertex,
    bounded_pants_distance,
    is_elementary_move,
    random_handle_vertex,
    random_walk_path,
    validate_path,
)


def instance_rng(seed: int, index: int) -> random.Random:
    """Independent stream per sampled instance, so worker count never changes results."""
    return random.Random(f"{seed}:{index}")


def _pool_map(fn, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


class HandleVertex(NamedTuple):
    s1: Slope
    s2: Slope

    def pants(self) -> PantsVertex:
        return PantsVertex(self.s1, self.s2)

    def __str__(self) -> str:
        return f"({self.s1}, {self.s2})"


class PreconditionError(ValueError):
    pass


def dq(a: HandleVertex, b: HandleVertex) -> int:
    """Distance in the subgraph containing q: the product of two Farey metrics."""
    return farey_distance(a.s1, b.s1) + farey_distance(a.s2, b.s2)


def _labels(nu) -> list[CurveLabel]:
    if isinstance(nu, PantsVertex):
        return list(nu.curves())
    return list(nu)


def project_to_window(system: HandleSystem, nu, window: Window) -> set[Slope]:
    out = set()
    for label in _labels(nu):
        for fp in system.footprints(label, window):
            out.add(wave_projection(fp) if isinstance(fp, WaveDescriptor) else fp.slope)
    return out


def project_to_handle(system: HandleSystem, nu) -> set[HandleVertex]:
    # Displayed comprehension: empty as soon as either factor is empty.
    p1 = project_to_window(system, nu, Y1)
    p2 = project_to_window(system, nu, Y2)
    return {HandleVertex(a, b) for a in p1 for b in p2}


def _sorted_pq(points: Iterable[HandleVertex]) -> list[HandleVertex]:
    return sorted(points)


# -- disjoint pairs in one window -------------------------------------------

def _footprint_slope(x) -> Slope:
    return wave_projection(x) if isinstance(x, WaveDescriptor) else x.slope


def footprint_intersection(x, y) -> int:
    """Intersection of two footprints (curves or waves) in the same torus window."""
    r, s = _footprint_slope(x), _footprint_slope(y)
    wx, wy = isinstance(x, WaveDescriptor), isinstance(y, WaveDescriptor)
    if wx and wy:
        return wave_intersection(r, s)
    return abs(det(r, s))


def lemma4_gap(x, y, context: Sequence[CurveLabel] = (Q,)) -> int:
    """Distance between the completions of two disjoint footprints.

    Both completions share the context multicurve; they differ only in the
    curve of the window, so the gap is the Farey distance between the two
    projections.
    """
    wx = x.window if isinstance(x, WaveDescriptor) else x.window.name
    wy = y.window if isinstance(y, WaveDescriptor) else y.window.name
    if wx != wy:
        raise PreconditionError("footprints lie in different windows")
    if footprint_intersection(x, y):
        raise PreconditionError("footprints are not disjoint")
    a, b = _footprint_slope(x), _footprint_slope(y)
    return farey_distance(a, b)


# -- elementary moves and the handle projection ------------------------------

def lemma5_refine(
    system: HandleSystem, omega0: HandleVertex, nu0: PantsVertex, nu1: PantsVertex
) -> HandleVertex | None:
    """A projection of nu1 within one step of omega0, when one shares a handle curve with it.

    Raises AssertionError if the hypothesis holds and no such vertex
    exists; callers treat that as a falsification event.
    """
    if is_elementary_move(nu0, nu1) is None:
        raise PreconditionError("nu0 and nu1 are not related by an elementary move")
    if omega0 not in project_to_handle(system, nu0):
        raise PreconditionError("omega0 is not in the projection of nu0")
    proj1 = project_to_handle(system, nu1)
    if not any(w.s1 == omega0.s1 or w.s2 == omega0.s2 for w in proj1):
        return None
    # Least candidate in increasing distance order.
    ranked = sorted(proj1, key=lambda w: (dq(omega0, w), w))
    best = ranked[0]
    if dq(omega0, best) > 1:
        raise AssertionError(f"no projection of {nu1} within distance 1 of {omega0}")
    return best


@dataclass
class StepWitness:
    shared: list[CurveLabel]
    footprints_y1: list
    footprints_y2: list
    holds: bool

    def to_document(self) -> dict:
        return {
            "shared": [str(x) for x in self.shared],
            "footprints_y1": len(self.footprints_y1),
            "footprints_y2": len(self.footprints_y2),
            "holds": self.holds,
        }


def lemma6_witness(
    system: HandleSystem,
    nu0: PantsVertex,
    nu1: PantsVertex,
    nu2: PantsVertex,
    omega0: HandleVertex,
    bound: int = 8,
) -> StepWitness:
    validate_path([nu0, nu1, nu2])
    if bounded_pants_distance(nu0, nu2, bound, 2).distance != 2:
        raise PreconditionError("triple is not a geodesic at this bound")
    if omega0 not in project_to_handle(system, nu0):
        raise PreconditionError("omega0 is not in the projection of nu0")
    if any(w.s1 == omega0.s1 or w.s2 == omega0.s2 for w in project_to_handle(system, nu1)):
        raise PreconditionError("some projection of nu1 shares a handle curve with omega0")
    shared = sorted(set(nu0.curves()) & set(nu1.curves()) & set(nu2.curves()), key=str)
    f1 = [fp for x in shared for fp in system.footprints(x, Y1)]
    f2 = [fp for x in shared for fp in system.footprints(x, Y2)]
    return StepWitness(shared, f1, f2, bool(f1 and f2) and len(shared) >= 1)


# -- waypoint traces ---------------------------------------------------------

@dataclass
class WaypointStep:
    start: int
    stop: int
    bound: int
    branch: str
    member: bool
    intermediate: HandleVertex | None = None
    intermediate_member: bool | None = None

    @property
    def j(self) -> int:
        return self.stop - self.start

    def to_document(self) -> dict:
        doc = {"from": self.start, "to": self.stop, "j": self.j, "dq": self.bound, "branch": self.branch,
               "member": self.member}
        if self.intermediate is not None:
            doc["intermediate"] = str(self.intermediate)
            doc["intermediate_member"] = self.intermediate_member
        return doc


@dataclass
class WaypointTrace:
    path_length: int
    indices: list[int]
    waypoints: list[HandleVertex]
    steps: list[WaypointStep]
    failures: list[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(s.bound for s in self.steps)

    def check(self) -> list[str]:
        problems = list(self.failures)
        for s in self.steps:
            if not 0 < s.j <= 2:
                problems.append(f"step {s.start}->{s.stop}: j = {s.j}")
            if s.bound > s.j:
                problems.append(f"step {s.start}->{s.stop}: dq {s.bound} > j {s.j}")
            if not s.member:
                problems.append(f"waypoint {s.stop} not in the projection")
        if self.total > self.path_length:
            problems.append(f"telescoped total {self.total} exceeds path length {self.path_length}")
        if self.waypoints and dq(self.waypoints[0], self.waypoints[-1]) > self.total:
            problems.append("triangle inequality violated along waypoints")
        return problems

    def to_document(self) -> dict:
        return {
            "path_length": self.path_length,
            "indices": self.indices,
            "waypoints": [str(w) for w in self.waypoints],
            "steps": [s.to_document() for s in self.steps],
            "total": self.total,
            "failures": self.check(),
        }


def theorem2_project_path(
    system: HandleSystem, path: Sequence[PantsVertex], start: HandleVertex | None = None, bound: int = 8
) -> WaypointTrace:
    """Follow a path with waypoints in the handle projections of its vertices."""
    if not path:
        raise PreconditionError("empty path")
    validate_path(path)
    if not path[-1].in_pq:
        raise PreconditionError("path must end at a decomposition containing q")
    first = _sorted_pq(project_to_handle(system, path[0]))
    if not first:
        raise PreconditionError("projection of the first vertex is empty")
    omega = start if start is not None else first[0]
    n = len(path) - 1
    trace = WaypointTrace(n, [0], [omega], [])
    k = 0
    while k < n:
        try:
            nxt = lemma5_refine(system, omega, path[k], path[k + 1])
        except AssertionError as err:
            trace.failures.append(str(err))
            return trace
        if nxt is not None:
            trace.steps.append(WaypointStep(k, k + 1, dq(omega, nxt), "refine", True))
            omega, k = nxt, k + 1
        elif k + 2 <= n:
            step, nxt = _two_step(system, omega, path, k, bound)
            trace.steps.append(step)
            omega, k = nxt, k + 2
        else:
            trace.failures.append(f"no admissible step at index {k}")
            return trace
        trace.indices.append(k)
        trace.waypoints.append(omega)
    return trace


def _two_step(system, omega, path, k, bound):
    witness = lemma6_witness(system, path[k], path[k + 1], path[k + 2], omega, bound)
    fps = sorted(witness.footprints_y1), sorted(witness.footprints_y2)
    mid = None
    if fps[0] and fps[1]:
        mid = HandleVertex(_footprint_slope(fps[0][0]), _footprint_slope(fps[1][0]))
    cands = sorted(project_to_handle(system, path[k + 2]), key=lambda w: (dq(omega, w), w))
    nxt = cands[0]
    member_mid = mid in project_to_handle(system, path[k + 1]) if mid else None
    return WaypointStep(k, k + 2, dq(omega, nxt), "witness", True, mid, member_mid), nxt


# -- shortening ----------------------------------------------------------------

def pq_geodesic(a: HandleVertex, b: HandleVertex) -> list[PantsVertex]:
    """Product geodesic: first coordinate, then second."""
    out = [PantsVertex(s, a.s2) for s in farey_geodesic(a.s1, b.s1)]
    out += [PantsVertex(b.s1, s) for s in farey_geodesic(a.s2, b.s2)[1:]]
    return out


def theorem1_shorten_path(system: HandleSystem, path: Sequence[PantsVertex]) -> list[PantsVertex]:
    """Replace a path that leaves the q-subgraph by a strictly shorter one."""
    path = list(path)
    if len(path) < 2 or not (path[0].in_pq and path[-1].in_pq):
        raise PreconditionError("endpoints must contain q")
    exits = [i for i, v in enumerate(path) if not v.in_pq]
    if not exits:
        raise PreconditionError("path never leaves the q-subgraph")
    validate_path(path)
    i = exits[0]
    tail = path[i - 1:]
    trace = theorem2_project_path(system, tail, start=HandleVertex(path[i - 1].s1, path[i - 1].s2))
    problems = trace.check()
    if problems:
        raise AssertionError(f"waypoint trace failed: {problems}")
    out = path[:i]
    for a, b in zip(trace.waypoints, trace.waypoints[1:]):
        out += pq_geodesic(a, b)[1:]
    if out[-1] != path[-1]:
        raise AssertionError("shortened path does not reach the original endpoint")
    validate_path(out)
    if len(out) >= len(path):
        raise AssertionError(f"shortening failed: {len(out) - 1} >= {len(path) - 1}")
    return out


# -- audits --------------------------------------------------------------------

def random_pq_pair(rng: random.Random, bound: int, dq_max: int) -> tuple[HandleVertex, HandleVertex]:
    pool = slopes_within(bound)
    while True:
        a = HandleVertex(rng.choice(pool), rng.choice(pool))
        b = HandleVertex(rng.choice(pool), rng.choice(pool))
        if 0 < dq(a, b) <= dq_max:
            return a, b


@dataclass
class GeodesyReport:
    pairs: int
    dq_max: int
    bound: int
    max_len: int
    seed: int
    budget: int
    checked: int = 0
    shortcuts: list = field(default_factory=list)
    escapes: list = field(default_factory=list)
    unresolved: list = field(default_factory=list)
    bounded_excess: int = 0
    budget_exceeded: int = 0
    geodesics_total: int = 0
    distance_histogram: dict = field(default_factory=dict)
    runtime: float = 0.0

    @property
    def falsifications(self) -> int:
        return len(self.shortcuts) + len(self.escapes)

    def to_document(self) -> dict:
        return {
            "seed": self.seed,
            "bounds": {"slope_bound": self.bound, "max_len": self.max_len, "geodesic_budget": self.budget},
            "pairs": self.pairs,
            "dq_max": self.dq_max,
            "checked": self.checked,
            "verdict": "no counterexample within bound" if not self.falsifications else "falsified",
            "falsifications": self.falsifications,
            "shortcuts": self.shortcuts,
            "escapes": self.escapes,
            "unresolved": self.unresolved,
            "bounded_excess": self.bounded_excess,
            "budget_exceeded": self.budget_exceeded,
            "geodesics_total": self.geodesics_total,
            "distance_histogram": {str(k): v for k, v in sorted(self.distance_histogram.items())},
            "runtime": round(self.runtime, 3),
        }


def check_pair(a: HandleVertex, b: HandleVertex, bound: int, max_len: int, budget: int) -> dict:
    res = bounded_pants_distance(a.pants(), b.pants(), bound, max_len, geodesics=True)
    off = [str(v) for v in res.geodesic_vertices if not v.in_pq]
    return {
        "a": str(a),
        "b": str(b),
        "dq": dq(a, b),
        "distance": res.distance,
        "geodesics": res.geodesic_count,
        "budget_exceeded": res.geodesic_count > budget,
        "off_subgraph": off,
    }


def _geodesy_instance(args) -> dict:
    seed, index, bound, dq_max, max_len, budget = args
    a, b = random_pq_pair(instance_rng(seed, index), bound, dq_max)
    return check_pair(a, b, bound, max_len, budget)


def audit_total_geodesy(
    system: HandleSystem | None = None,
    pair_count: int = 100,
    dq_max: int = 5,
    bound: int = 8,
    max_len: int = 10,
    seed: int = 0,
    budget: int = 10**6,
    workers: int = 1,
) -> GeodesyReport:
    """Compare bounded ambient distances with product distances on sampled pairs.

    Every vertex of the geodesic layer structure is inspected, so a
    geodesic leaving the subgraph cannot be missed even when the number of
    geodesics exceeds the enumeration budget.
    """
    t0 = time.perf_counter()
    rep = GeodesyReport(pair_count, dq_max, bound, max_len, seed, budget)
    jobs = [(seed, i, bound, dq_max, max_len, budget) for i in range(pair_count)]
    for row in _pool_map(_geodesy_instance, jobs, workers):
        rep.checked += 1
        rep.distance_histogram[row["dq"]] = rep.distance_histogram.get(row["dq"], 0) + 1
        if row["distance"] is None:
            rep.unresolved.append(row)
            continue
        rep.geodesics_total += row["geodesics"]
        rep.budget_exceeded += row["budget_exceeded"]
        if row["distance"] < row["dq"]:
            rep.shortcuts.append(row)
        elif row["distance"] > row["dq"]:
            rep.bounded_excess += 1
        if row["off_subgraph"]:
            rep.escapes.append(row)
    rep.runtime = time.perf_counter() - t0
    return rep


@dataclass
class WaypointReport:
    paths: int
    length: int
    bound: int
    seed: int
    failures: list = field(default_factory=list)
    branches: dict = field(default_factory=dict)
    steps: dict = field(default_factory=dict)
    runtime: float = 0.0

    def to_document(self) -> dict:
        return {
            "seed": self.seed,
            "bounds": {"slope_bound": self.bound, "max_len": self.length},
            "paths": self.paths,
            "failures": self.failures,
            "branches": self.branches,
            "step_sizes": {str(k): v for k, v in sorted(self.steps.items())},
            "verdict": "all certificates hold" if not self.failures else "falsified",
            "runtime": round(self.runtime, 3),
        }


def sample_returning_path(rng: random.Random, max_length: int, bound: int) -> list[PantsVertex]:
    start = random_handle_vertex(rng, bound)
    length = rng.randint(1, max_length)
    return random_walk_path(start, length, bound, rng.randrange(2**32), end_in_pq=True)


_SYSTEM = None


def _shared_system() -> HandleSystem:
    global _SYSTEM
    if _SYSTEM is None:
        _SYSTEM = HandleSystem()
    return _SYSTEM


def _waypoint_instance(args):
    seed, index, length, bound = args
    path = sample_returning_path(instance_rng(seed, index), length, bound)
    trace = theorem2_project_path(_shared_system(), path, bound=bound)
    return trace.check(), [(s.branch, s.j) for s in trace.steps]


def audit_waypoints(system: HandleSystem | None = None, paths: int = 1000, length: int = 8, bound: int = 8,
                   seed: int = 0, workers: int = 1) -> WaypointReport:
    global _SYSTEM
    if system is not None:
        _SYSTEM = system
    t0 = time.perf_counter()
    rep = WaypointReport(paths, length, bound, seed)
    jobs = [(seed, n, length, bound) for n in range(paths)]
    for n, (problems, steps) in enumerate(_pool_map(_waypoint_instance, jobs, workers)):
        if problems:
            rep.failures.append({"path": n, "problems": problems})
        for branch, j in steps:
            rep.branches[branch] = rep.branches.get(branch, 0) + 1
            rep.steps[j] = rep.steps.get(j, 0) + 1
    rep.runtime = time.perf_counter() - t0
    return rep


def sample_disjoint_pair(system: HandleSystem, rng: random.Random, window: Window, bound: int):
    """Two disjoint footprints in a torus window, drawn from curves inside or crossing it."""
    pool = slopes_within(bound)
    crossing = [s for s in pool if s != INF]

    def footprint(slope):
        if rng.random() < 0.3:
            return CurveLabel(window, slope)
        fixed = rng.choice(pool)
        s1, s2 = (slope, fixed) if window == Y1 else (fixed, slope)
        x = PantsVertex(s1, s2, rng.choice(crossing)).curves()[2]
        return system.footprints(x, window)[0]

    while True:
        r = rng.choice(pool)
        s = rng.choice(farey_neighbors(r, bound)) if rng.random() < 0.5 else r
        x, y = footprint(r), footprint(s)
        if footprint_intersection(x, y) == 0:
            return x, y


def audit_footprint_gaps(system: HandleSystem, samples: int = 500, bound: int = 8, seed: int = 0) -> dict:
    t0 = time.perf_counter()
    out = {"seed": seed, "bounds": {"slope_bound": bound}, "samples": samples, "windows": {}}
    failures = []
    for w, window in enumerate((Y1, Y2)):
        gaps = {0: 0, 1: 0}
        for i in range(samples):
            x, y = sample_disjoint_pair(system, instance_rng(seed, w * samples + i), window, bound)
            g = lemma4_gap(x, y)
            if g not in (0, 1):
                failures.append({"window": window.name, "x": repr(x), "y": repr(y), "gap": g})
                continue
            a, b = _footprint_slope(x), _footprint_slope(y)
            if g == 1 and not is_farey_edge(a, b):
                failures.append({"window": window.name, "x": repr(x), "y": repr(y), "gap": g})
            gaps[g] += 1
        out["windows"][window.name] = {str(k): v for k, v in gaps.items()}
    out["failures"] = failures
    out["verdict"] = "all gaps in {0, 1}" if not failures else "falsified"
    out["runtime"] = round(time.perf_counter() - t0, 3)
    return out


def central_slice(axis: Sequence[Slope], k: int) -> list[Slope]:
    """The k consecutive axis slopes around the middle, where entries are smallest."""
    k = min(k, len(axis))
    start = (len(axis) - k + 1) // 2
    return list(axis[start:start + k])


def check_plane_embedding(axis1: Sequence[Slope], axis2: Sequence[Slope], bound: int = 8,
                          max_len: int = 10) -> dict:
    """Bounded ambient distances between grid vertices versus the grid metric."""
    t0 = time.perf_counter()
    points = [(i, j, HandleVertex(a, b)) for i, a in enumerate(axis1) for j, b in enumerate(axis2)]
    mismatches, pairs = [], 0
    for x, (i, j, u) in enumerate(points):
        for k, m, v in points[x + 1:]:
            pairs += 1
            d = bounded_pants_distance(u.pants(), v.pants(), bound, max_len).distance
            if d != abs(i - k) + abs(j - m):
                mismatches.append({"a": str(u), "b": str(v), "ambient": d, "grid": abs(i - k) + abs(j - m)})
    return {
        "size": [len(axis1), len(axis2)],
        "bounds": {"slope_bound": bound, "max_len": max_len},
        "pairs": pairs,
        "mismatches": mismatches,
        "isometric": not mismatches,
        "runtime": round(time.perf_counter() - t0, 3),
    }
