"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line."""

import random
import time

from pantsplane.farey import (
    INF,
    Slope,
    Unimodular,
    certified_oracle_distances,
    farey_distance,
    farey_geodesic,
    farey_neighbors,
    is_farey_edge,
    slopes_within,
)
from pantsplane.graph_metric import build_grid_plane, grid_metric_is_l1, invariant_plane_window, convexity_trial
from pantsplane.handles import HandleSystem, Q, Y1, Y2, sphere_window
from pantsplane.pants import PantsVertex, validate_path
from pantsplane.projection import (
    HandleVertex,
    audit_footprint_gaps,
    audit_waypoints,
    audit_total_geodesy,
    central_slice,
    check_plane_embedding,
    instance_rng,
    pq_geodesic,
    project_to_handle,
    theorem1_shorten_path,
)
from pantsplane.surface import trace, validate_surface_model

H = HandleSystem()
M = Unimodular(3, -1, 1, 0)


def report(record_property, number, title, ok, detail):
    record_property("acceptance", (number, title, detail))
    print(f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}: {detail}")
    assert ok, detail


def test_c01_oracle_equivalence(record_property):
    t0 = time.perf_counter()
    pool = slopes_within(8)
    certified, uncertified = certified_oracle_distances(pool, 32)
    mismatches = [(a, b) for a in pool for b in pool if certified.get((a, b)) != farey_distance(a, b)]
    dt = time.perf_counter() - t0
    ok = not mismatches and not uncertified and dt < 60
    report(record_property, 1, "Farey oracle equivalence", ok,
           f"{len(pool) ** 2} pairs, {len(mismatches)} mismatches, {len(uncertified)} uncertified, {dt:.1f}s")


def test_c02_geodesic_soundness(record_property):
    rng = random.Random(2)
    pool = slopes_within(32)
    failures = 0
    for _ in range(1000):
        a, b = rng.choice(pool), rng.choice(pool)
        path = farey_geodesic(a, b)
        good = (path[0] == a and path[-1] == b and len(path) - 1 == farey_distance(a, b)
                and all(is_farey_edge(x, y) for x, y in zip(path, path[1:])))
        failures += not good
    report(record_property, 2, "geodesic soundness", failures == 0, f"1000 pairs, {failures} failures")


def test_c03_model_fixture_suite(record_property):
    t0 = time.perf_counter()
    problems = []
    rep = validate_surface_model(H.model)
    if not rep.ok:
        problems.append(f"model: {rep.reasons}")
    comps, _ = trace(H.model, H.doc["base_pants_weights"])
    if len(comps) != 3:
        problems.append(f"base pants traces to {len(comps)} components")
    pieces = H.cut_along([Q])
    if sorted((p.genus, p.boundary) for p in pieces) != [(1, 1), (1, 1)]:
        problems.append(f"cut along q: {[p.classification for p in pieces]}")
    trips = 0
    windows = (Y1, Y2, sphere_window(Slope(2, 1), Slope(-1, 3)))
    for window in windows:
        for s in slopes_within(5):
            trips += 1
            curve = H.curve_from_chart_slope(window, s)
            back = H.slope_in_chart(window, curve.weights)
            if back != s:
                problems.append(f"{window.name}: {s} -> {back}")
    dt = time.perf_counter() - t0
    ok = not problems and dt < 60
    report(record_property, 3, "model fixture suite", ok,
           f"{trips} chart round trips over 3 windows, {len(problems)} problems, {dt:.1f}s")


def test_c04_projection_identity(record_property):
    pool = slopes_within(8)
    failures = 0
    for i in range(200):
        rng = instance_rng(4, i)
        v = HandleVertex(rng.choice(pool), rng.choice(pool))
        failures += project_to_handle(H, v.pants()) != {v}
    report(record_property, 4, "handle projection is the identity on the q-subgraph", failures == 0,
           f"200 vertices, {failures} failures")


def test_c05_disjoint_footprint_gaps(record_property):
    rep = audit_footprint_gaps(H, samples=500, bound=8, seed=5)
    ok = not rep["failures"] and all(sum(rep["windows"][w].values()) == 500 for w in ("Y1", "Y2"))
    report(record_property, 5, "disjoint footprints give gaps in {0, 1}", ok,
           f"gaps {rep['windows']}, {len(rep['failures'])} failures")


def test_c06_waypoint_audit(record_property):
    rep = audit_waypoints(H, paths=1000, length=8, bound=8, seed=6)
    ok = not rep.failures and rep.runtime < 600
    report(record_property, 6, "waypoint traces", ok,
           f"1000 paths, branches {rep.branches}, {len(rep.failures)} failures, {rep.runtime:.1f}s")


def test_c07_total_geodesy_audit(record_property):
    rep = audit_total_geodesy(None, pair_count=100, dq_max=5, bound=8, max_len=10, seed=7, budget=10**6)
    doc = rep.to_document()
    ok = rep.falsifications == 0 and not rep.unresolved and rep.runtime < 1800
    report(record_property, 7, "bounded total geodesy", ok,
           f"{doc['verdict']}; {rep.checked} pairs, histogram {doc['distance_histogram']}, "
           f"{rep.geodesics_total} geodesics, bounded excess {rep.bounded_excess}, "
           f"budget exceeded {rep.budget_exceeded}, {rep.runtime:.1f}s")


def constructed_detour(rng: random.Random) -> list[PantsVertex]:
    """A q-subgraph prefix, an excursion through the sphere window, then a q-subgraph suffix."""
    pool = slopes_within(8)
    a = HandleVertex(rng.choice(pool), rng.choice(pool))
    b = HandleVertex(rng.choice(pool), rng.choice(pool))
    mid = HandleVertex(rng.choice([a.s1, b.s1]), rng.choice([a.s2, b.s2]))
    path = pq_geodesic(a, mid)
    here = path[-1]
    depth = rng.randint(1, 3)
    out = [INF]
    for _ in range(depth):
        options = [s for s in farey_neighbors(out[-1], 8) if s != INF and s not in out]
        if not options:
            break
        out.append(rng.choice(options))
    back = farey_geodesic(out[-1], INF)[1:]
    for t in out[1:] + back:
        path.append(PantsVertex(here.s1, here.s2, t))
    return path + pq_geodesic(mid, b)[1:]


def test_c08_detour_shortening(record_property):
    failures = []
    for i in range(200):
        path = constructed_detour(instance_rng(8, i))
        try:
            validate_path(path)
            short = theorem1_shorten_path(H, path)
            validate_path(short)
            if not (len(short) < len(path) and short[0] == path[0] and short[-1] == path[-1]):
                failures.append(i)
        except (AssertionError, ValueError) as err:
            failures.append(f"{i}: {err}")
    report(record_property, 8, "detour shortening", not failures, f"200 detours, {len(failures)} failures")


def test_c09_product_convexity(record_property):
    bad = [seed for seed in range(100) if not (t := convexity_trial(seed)).factors_convex or not t.product_convex]
    report(record_property, 9, "convex product subsets", not bad, f"100 trials, {len(bad)} failures")


def test_c10_plane_window(record_property):
    t0 = time.perf_counter()
    window, shift = invariant_plane_window(M, M, 5)
    grid = build_grid_plane(window.axis1, window.axis2)
    l1 = grid_metric_is_l1(grid, window.axis1, window.axis2)
    embed = check_plane_embedding(central_slice(window.axis1, 4), central_slice(window.axis2, 4),
                                  bound=8, max_len=10)
    dt = time.perf_counter() - t0
    ok = len(grid.vertices) == 121 and l1 and shift.constant and embed["isometric"] and dt < 600
    report(record_property, 10, "plane window", ok,
           f"{len(grid.vertices)} vertices, l1 {l1}, constant square shift {shift.constant}, "
           f"4x4 embedding {embed['pairs']} pairs with {len(embed['mismatches'])} mismatches, {dt:.1f}s")
