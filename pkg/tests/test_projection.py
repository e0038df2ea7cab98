import pytest
from hypothesis import given, settings, strategies as st

from pantsplane.farey import INF, ZERO, Slope, Unimodular, farey_distance
from pantsplane.graph_metric import invariant_plane_window
from pantsplane.handles import HandleSystem, Q, Y1, Y2, CurveLabel, WaveDescriptor
from pantsplane.pants import PantsError, PantsVertex, random_walk_path, validate_path
from pantsplane.projection import (
    HandleVertex,
    PreconditionError,
    audit_footprint_gaps,
    audit_waypoints,
    audit_total_geodesy,
    check_pair,
    check_plane_embedding,
    dq,
    instance_rng,
    lemma4_gap,
    lemma5_refine,
    lemma6_witness,
    pq_geodesic,
    project_to_handle,
    project_to_window,
    sample_returning_path,
    theorem1_shorten_path,
    theorem2_project_path,
)

S = Slope.parse
H = HandleSystem()
P0 = PantsVertex(ZERO, ZERO)
O0 = HandleVertex(ZERO, ZERO)

small = st.builds(lambda p, q: Slope(p, q) if (p, q) != (0, 0) else INF, st.integers(-6, 6), st.integers(0, 6))


def test_projection_examples():
    assert project_to_handle(H, P0) == {O0}
    v = PantsVertex(S("2/1"), S("-1/3"), S("3/2"))
    assert project_to_window(H, v, Y1) == {S("2/1")}
    assert project_to_handle(H, v) == {HandleVertex(S("2/1"), S("-1/3"))}
    assert project_to_handle(H, [Q]) == set()
    # A sphere curve alone still lands on both handle slopes.
    assert project_to_window(H, [v.curves()[2]], Y2) == {S("-1/3")}


@settings(max_examples=40, deadline=None)
@given(small, small)
def test_projection_is_identity_on_q_subgraph(s1, s2):
    assert project_to_handle(H, PantsVertex(s1, s2)) == {HandleVertex(s1, s2)}


def test_disjoint_footprint_gap_examples():
    a = CurveLabel(Y1, ZERO)
    assert lemma4_gap(a, a) == 0
    wave0 = WaveDescriptor("Y1", ZERO, "x", 0)
    wave_inf = WaveDescriptor("Y1", INF, "y", 0)
    assert lemma4_gap(wave0, a) == 0
    assert lemma4_gap(wave0, wave_inf) == 1
    with pytest.raises(PreconditionError, match="not disjoint"):
        lemma4_gap(a, CurveLabel(Y1, INF))
    with pytest.raises(PreconditionError, match="different windows"):
        lemma4_gap(a, CurveLabel(Y2, ZERO))
    with pytest.raises(PreconditionError, match="not disjoint"):
        lemma4_gap(wave0, WaveDescriptor("Y1", S("2/1"), "y", 0))


def test_refine_examples():
    assert lemma5_refine(H, O0, P0, PantsVertex(INF, ZERO)) == HandleVertex(INF, ZERO)
    assert lemma5_refine(H, O0, P0, PantsVertex(ZERO, ZERO, S("4/1"))) == O0
    with pytest.raises(PreconditionError, match="elementary move"):
        lemma5_refine(H, O0, P0, PantsVertex(S("2/1"), ZERO))
    with pytest.raises(PreconditionError, match="projection"):
        lemma5_refine(H, HandleVertex(INF, INF), P0, PantsVertex(INF, ZERO))


def test_two_step_witness_preconditions():
    back = [P0, PantsVertex(ZERO, ZERO, S("2/1")), P0]
    with pytest.raises(PreconditionError, match="geodesic"):
        lemma6_witness(H, *back, O0)
    geo = [P0, PantsVertex(INF, ZERO), PantsVertex(INF, INF)]
    with pytest.raises(PreconditionError, match="shares a handle curve"):
        lemma6_witness(H, *geo, O0)
    with pytest.raises(PantsError):
        lemma6_witness(H, P0, PantsVertex(S("3/1"), ZERO), P0, O0)


def test_waypoints_inside_q_subgraph():
    path = pq_geodesic(O0, HandleVertex(S("5/2"), S("-1/3")))
    trace = theorem2_project_path(H, path)
    assert trace.check() == []
    assert trace.total == len(path) - 1 == dq(O0, HandleVertex(S("5/2"), S("-1/3")))
    assert all(s.branch == "refine" for s in trace.steps)


def test_waypoints_out_and_back():
    path = [P0, PantsVertex(ZERO, ZERO, S("3/1")), PantsVertex(ZERO, ZERO, S("2/1")), P0]
    trace = theorem2_project_path(H, path)
    assert trace.check() == []
    assert trace.waypoints == [O0] * 4 and trace.total == 0


def test_waypoints_need_q_at_the_end():
    with pytest.raises(PreconditionError, match="end"):
        theorem2_project_path(H, [P0, PantsVertex(ZERO, ZERO, S("1/1"))])
    with pytest.raises(PreconditionError, match="empty"):
        theorem2_project_path(H, [])


def test_waypoints_telescope_on_samples():
    for i in range(200):
        path = sample_returning_path(instance_rng(7, i), 8, 8)
        trace = theorem2_project_path(H, path)
        assert trace.check() == []
        assert trace.indices == sorted(set(trace.indices)) and trace.indices[-1] == len(path) - 1
        assert sum(s.j for s in trace.steps) == len(path) - 1
        assert dq(trace.waypoints[0], trace.waypoints[-1]) <= trace.total <= len(path) - 1


def test_shorten_two_step_detour():
    path = [P0, PantsVertex(ZERO, ZERO, S("-2/1")), P0]
    assert theorem1_shorten_path(H, path) == [P0]


def test_shorten_six_step_detour():
    a, b = PantsVertex(INF, ZERO), PantsVertex(INF, INF)
    path = [P0, a, PantsVertex(INF, ZERO, S("2/1")), PantsVertex(INF, ZERO, S("5/2")),
            PantsVertex(INF, ZERO, S("3/1")), a, b]
    validate_path(path)
    short = theorem1_shorten_path(H, path)
    assert short == [P0, a, b]


def test_shorten_random_detours():
    for seed in range(40):
        mid = random_walk_path(P0, 5, 8, seed, end_in_pq=True)
        if all(v.in_pq for v in mid):
            continue
        short = theorem1_shorten_path(H, mid)
        assert len(short) < len(mid) and short[0] == mid[0] and short[-1] == mid[-1]
        assert all(v.in_pq for v in short)


def test_shorten_preconditions():
    with pytest.raises(PreconditionError, match="never leaves"):
        theorem1_shorten_path(H, [P0, PantsVertex(INF, ZERO)])
    with pytest.raises(PreconditionError, match="endpoints"):
        theorem1_shorten_path(H, [P0, PantsVertex(ZERO, ZERO, S("1/1"))])


def test_pq_geodesic_is_product():
    a, b = HandleVertex(S("1/3"), S("-2/1")), HandleVertex(S("4/1"), S("3/5"))
    path = pq_geodesic(a, b)
    validate_path(path)
    assert len(path) - 1 == farey_distance(a.s1, b.s1) + farey_distance(a.s2, b.s2)


def test_check_pair_adjacent():
    row = check_pair(O0, HandleVertex(INF, ZERO), 4, 4, 10)
    assert row["distance"] == row["dq"] == 1 and row["geodesics"] == 1 and row["off_subgraph"] == []


def test_total_geodesy_small_audit():
    rep = audit_total_geodesy(None, pair_count=10, dq_max=1, bound=4, max_len=4, seed=3)
    doc = rep.to_document()
    assert doc["verdict"] == "no counterexample within bound"
    assert doc["checked"] == 10 and doc["distance_histogram"] == {"1": 10}
    assert doc["bounded_excess"] == 0 and doc["unresolved"] == []
    assert {"seed", "bounds", "shortcuts", "escapes", "budget_exceeded"} <= set(doc)


def test_waypoint_audit_workers_agree():
    one = audit_waypoints(H, paths=30, length=6, bound=8, seed=2, workers=1).to_document()
    two = audit_waypoints(None, paths=30, length=6, bound=8, seed=2, workers=2).to_document()
    one.pop("runtime"), two.pop("runtime")
    assert one == two and one["verdict"] == "all certificates hold"


def test_footprint_gap_audit_small():
    rep = audit_footprint_gaps(H, samples=40, bound=8, seed=1)
    assert rep["failures"] == []
    for w in ("Y1", "Y2"):
        assert sum(rep["windows"][w].values()) == 40


def test_instance_rng_is_per_index():
    assert instance_rng(1, 2).random() == instance_rng(1, 2).random()
    assert instance_rng(1, 2).random() != instance_rng(1, 3).random()


def test_small_plane_embedding():
    m = Unimodular(3, -1, 1, 0)
    window, _ = invariant_plane_window(m, m, 1)
    rep = check_plane_embedding(window.axis1[:2], window.axis2[:2], bound=8, max_len=6)
    assert rep["isometric"] and rep["pairs"] == 6
