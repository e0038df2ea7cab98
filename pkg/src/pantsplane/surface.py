"""Triangulated surfaces and normal multicurves.

Edges carry labels 0..n-1; a triangle lists three oriented labels, where
``~i`` (that is ``-i - 1``) denotes edge i traversed backwards. A normal
multicurve is a vector of edge weights. Tracing turns the weights into
explicit closed components, and cutting along them classifies the
complementary pieces by Euler characteristic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence


def index(label: int) -> int:
    return label if label >= 0 else ~label


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry, key=repr)] = min(rx, ry, key=repr)

    def classes(self, items):
        out = {}
        for it in items:
            out.setdefault(self.find(it), []).append(it)
        return list(out.values())


@dataclass(frozen=True)
class SurfaceModel:
    triangles: tuple[tuple[int, int, int], ...]
    edge_names: tuple[str, ...] = ()

    @property
    def num_edges(self) -> int:
        return 1 + max(index(x) for t in self.triangles for x in t)

    def names(self) -> list[str]:
        return list(self.edge_names) if self.edge_names else [f"e{i}" for i in range(self.num_edges)]

    def sides(self):
        """Yield (triangle, position, label) for every triangle side."""
        for t, tri in enumerate(self.triangles):
            for k, lab in enumerate(tri):
                yield t, k, lab

    def to_document(self) -> dict:
        return {"triangles": [list(t) for t in self.triangles], "edge_names": self.names()}

    @classmethod
    def from_document(cls, doc: dict) -> "SurfaceModel":
        return cls(tuple(tuple(t) for t in doc["triangles"]), tuple(doc.get("edge_names", ())))


@dataclass
class ModelReport:
    ok: bool
    reasons: list[str] = field(default_factory=list)
    vertices: int = 0
    edges: int = 0
    faces: int = 0
    euler_characteristic: int = 0
    genus: int | None = None
    complexity: int | None = None

    def to_document(self) -> dict:
        return dict(self.__dict__)


def _vertex_classes(model: SurfaceModel):
    """Union the endpoints of oriented edges around every triangle corner."""
    uf = _UnionFind()
    for tri in model.triangles:
        for k in range(3):
            x, y = tri[k], tri[(k + 1) % 3]
            # head(x) meets tail(y) at the corner between consecutive sides.
            uf.union(_head(x), _tail(y))
    ends = [end for i in range(model.num_edges) for end in (_tail(i), _head(i))]
    return uf.classes(ends)


def _tail(label: int):
    return (index(label), 0 if label >= 0 else 1)


def _head(label: int):
    return (index(label), 1 if label >= 0 else 0)


def validate_surface_model(model: SurfaceModel, expected_euler: int | None = -2) -> ModelReport:
    reasons = []
    n = model.num_edges
    faces = len(model.triangles)
    uses = {}
    for _, _, lab in model.sides():
        uses.setdefault(index(lab), []).append(lab)
    for i in range(n):
        labs = uses.get(i, [])
        if len(labs) != 2:
            reasons.append(f"edge {i} is used {len(labs)} times (expected 2)")
        elif (labs[0] >= 0) == (labs[1] >= 0):
            reasons.append(f"orientability failure: edge {i} glued with matching parity")
    uf = _UnionFind()
    for t, _, lab in model.sides():
        uf.union(("t", t), ("e", index(lab)))
    if len(uf.classes([("t", t) for t in range(faces)])) != 1:
        reasons.append("connectivity failure: triangles fall into several components")
    if reasons:
        return ModelReport(False, reasons, edges=n, faces=faces)
    verts = len(_vertex_classes(model))
    chi = verts - n + faces
    genus = (2 - chi) // 2
    report = ModelReport(True, [], verts, n, faces, chi, genus, 3 * genus - 3)
    if verts != 1:
        report.reasons.append(f"expected a single vertex, found {verts}")
    if expected_euler is not None and chi != expected_euler:
        report.reasons.append(f"Euler characteristic {chi} != {expected_euler}")
    report.ok = not report.reasons
    return report


class NormalCurveError(ValueError):
    pass


def corner_counts(model: SurfaceModel, weights: Sequence[int]):
    """Per triangle, the number of normal arcs cutting each corner.

    Corner k sits between side k and side k+1.
    """
    out = []
    for t, tri in enumerate(model.triangles):
        w = [weights[index(x)] for x in tri]
        row = []
        for k in range(3):
            twice = w[k] + w[(k + 1) % 3] - w[(k + 2) % 3]
            if twice < 0:
                raise NormalCurveError(f"triangle {t}: weights {w} violate the triangle inequality")
            if twice % 2:
                raise NormalCurveError(f"triangle {t}: weights {w} have odd sum")
            row.append(twice // 2)
        out.append(row)
    return out


def check_normal(model: SurfaceModel, weights: Sequence[int]) -> list[str]:
    problems = []
    if len(weights) != model.num_edges:
        return [f"expected {model.num_edges} weights, got {len(weights)}"]
    if any(w < 0 for w in weights):
        problems.append("negative weight")
        return problems
    try:
        corner_counts(model, weights)
    except NormalCurveError as err:
        problems.append(str(err))
    return problems


def _point(label: int, k: int, weights) -> tuple[int, int]:
    """Crossing point k counted from the tail of an oriented side."""
    i = index(label)
    return (i, k) if label >= 0 else (i, weights[i] - 1 - k)


def _arcs(model: SurfaceModel, weights, corners):
    """Normal arcs as (triangle, corner, depth, point_a, point_b)."""
    arcs = []
    for t, tri in enumerate(model.triangles):
        for k in range(3):
            x, y = tri[k], tri[(k + 1) % 3]
            wx = weights[index(x)]
            for depth in range(corners[t][k]):
                pa = _point(x, wx - 1 - depth, weights)
                pb = _point(y, depth, weights)
                arcs.append((t, k, depth, pa, pb))
    return arcs


@dataclass
class TracedComponent:
    weights: tuple[int, ...]
    arcs: list  # indices into the arc list, in traversal order


def trace(model: SurfaceModel, weights: Sequence[int]):
    """Split a normal multicurve into its closed components.

    Returns (components, arcs) where each component lists arc indices in
    order and carries its own weight vector.
    """
    problems = check_normal(model, weights)
    if problems:
        raise NormalCurveError("; ".join(problems))
    weights = list(weights)
    corners = corner_counts(model, weights)
    arcs = _arcs(model, weights, corners)
    at_point = {}
    for a, (_, _, _, pa, pb) in enumerate(arcs):
        at_point.setdefault(pa, []).append(a)
        at_point.setdefault(pb, []).append(a)
    seen = [False] * len(arcs)
    comps = []
    for start in range(len(arcs)):
        if seen[start]:
            continue
        order, cur, came_from = [], start, arcs[start][3]
        while not seen[cur]:
            seen[cur] = True
            order.append(cur)
            _, _, _, pa, pb = arcs[cur]
            nxt_point = pb if pa == came_from else pa
            pair = at_point[nxt_point]
            cur = pair[0] if pair[1] == cur else pair[1]
            came_from = nxt_point
        vec = [0] * model.num_edges
        for a in order:
            vec[arcs[a][3][0]] += 1
            vec[arcs[a][4][0]] += 1
        # Each crossing point is the endpoint of two arcs.
        comps.append(TracedComponent(tuple(v // 2 for v in vec), order))
    return comps, arcs


def vertex_link(model: SurfaceModel) -> tuple[int, ...]:
    """Weights of the small loop around the single vertex."""
    vec = [0] * model.num_edges
    for tri in model.triangles:
        for x in tri:
            vec[index(x)] += 1
    return tuple(vec)


@dataclass
class Piece:
    genus: int
    boundary: int
    euler_characteristic: int
    contains_vertex: bool
    chart: dict | None = None

    @property
    def complexity(self) -> int:
        return 3 * self.genus + self.boundary - 3

    @property
    def classification(self) -> tuple[int, int, int]:
        return (self.genus, self.boundary, self.complexity)

    @property
    def kind(self) -> str:
        names = {(1, 1, 1): "1-holed torus", (0, 4, 1): "4-holed sphere", (0, 3, 0): "pair of pants"}
        return names.get(self.classification, f"genus {self.genus} with {self.boundary} boundary")

    def to_document(self) -> dict:
        doc = {
            "genus": self.genus,
            "boundary": self.boundary,
            "complexity": self.complexity,
            "euler_characteristic": self.euler_characteristic,
            "kind": self.kind,
        }
        if self.chart is not None:
            doc["chart"] = self.chart
        return doc


def cut_pieces(model: SurfaceModel, weights: Sequence[int]) -> list[Piece]:
    """Complementary pieces of a normal multicurve (vertex is an ordinary point)."""
    weights = list(weights)
    comps, arcs = trace(model, weights)
    corners = corner_counts(model, weights)
    uf = _UnionFind()

    def region(t, k_side, seg):
        # Region of triangle t adjacent to segment seg (from the tail) of side k_side.
        tri = model.triangles[t]
        w = weights[index(tri[k_side])]
        before = corners[t][(k_side + 2) % 3]  # corner (previous side, this side)
        after = corners[t][k_side]  # corner (this side, next side)
        if seg < before:
            return (t, (k_side + 2) % 3, seg)
        if w - seg < after:
            return (t, k_side, w - seg)
        return (t, "C")

    segments = {}
    for t, k, lab in model.sides():
        i, w = index(lab), weights[index(lab)]
        for s in range(w + 1):
            seg = s if lab >= 0 else w - s
            segments.setdefault((i, seg), []).append(region(t, k, s))
    all_regions = set()
    for regs in segments.values():
        uf.union(regs[0], regs[1])
        all_regions.update(regs)
    for t in range(len(model.triangles)):
        all_regions.add((t, "C"))
        for k in range(3):
            for depth in range(corners[t][k]):
                all_regions.add((t, k, depth))
    for r in all_regions:
        uf.find(r)
    roots = sorted({uf.find(r) for r in all_regions}, key=repr)
    chi = {r: 0 for r in roots}
    for r in all_regions:
        chi[uf.find(r)] += 1
    for (i, seg), regs in segments.items():
        chi[uf.find(regs[0])] -= 1
    # Depth-0 corner regions touch the vertex; they all share one root.
    vroot = uf.find((0, 0, 0) if corners[0][0] else (0, "C"))
    chi[vroot] += 1
    boundary = {r: 0 for r in roots}
    for comp in comps:
        t, k, depth, _, _ = arcs[comp.arcs[0]]
        inner = (t, k, depth)
        outer = (t, k, depth + 1) if depth + 1 < corners[t][k] else (t, "C")
        boundary[uf.find(inner)] += 1
        boundary[uf.find(outer)] += 1
    pieces = []
    for r in roots:
        b, x = boundary[r], chi[r]
        g2 = 2 - x - b
        if g2 % 2:
            raise NormalCurveError("inconsistent Euler characteristic")
        pieces.append(Piece(g2 // 2, b, x, r == vroot))
    return sorted(pieces, key=lambda p: (p.genus, p.boundary))


@dataclass(frozen=True)
class CurveComponent:
    index: int
    weights: tuple[int, ...]


@dataclass(frozen=True)
class NormalMulticurve:
    weights: tuple[int, ...]
    components: tuple[CurveComponent, ...]

    def __len__(self) -> int:
        return len(self.components)

    def component_vectors(self) -> list[tuple[int, ...]]:
        return [c.weights for c in self.components]


def normalize_multicurve(model: SurfaceModel, weights: Sequence[int]) -> NormalMulticurve:
    """Trace weights into components, rejecting trivial or repeated curves.

    Components come back sorted lexicographically by weight vector, so two
    constructions of the same multicurve compare equal.
    """
    weights = tuple(int(w) for w in weights)
    comps, _ = trace(model, weights)
    vectors = sorted(c.weights for c in comps)
    link = vertex_link(model)
    if link in vectors:
        raise NormalCurveError("vertex-linking component (bounds a disc)")
    if len(set(vectors)) != len(vectors):
        raise NormalCurveError("parallel components: multicurve curves must be distinct")
    if vectors:
        for piece in cut_pieces(model, weights):
            if piece.genus == 0 and piece.boundary == 1:
                raise NormalCurveError("trivial component (bounds a disc)")
            if piece.genus == 0 and piece.boundary == 2:
                raise NormalCurveError("parallel components: an annulus separates two curves")
    return NormalMulticurve(weights, tuple(CurveComponent(i, v) for i, v in enumerate(vectors)))
