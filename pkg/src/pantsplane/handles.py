"""Window charts on the bundled genus-2 model.

The surface is cut by the separating curve q into two one-holed tori Y1
and Y2. Curves inside Yi are named by Farey slopes in a chart where the
handle generators ai, bi sit at 0/1 and 1/0. Curves disjoint from a pair
of handle curves live in a four-holed sphere window W(s1, s2), charted so
that q sits at 1/0.

Curves are realized as normal coordinates by applying Dehn twist words to
the fixture curves. Twists are evaluated with curver on the once-punctured
surface whose puncture is the triangulation vertex; every curve label has
one designated lift, obtained from a fixed chart word, so equality of
labels and equality of weight vectors agree.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple, Sequence

import curver
from curver.kernel import create_triangulation

from .farey import INF, ZERO, Slope, Unimodular, det, mobius_apply
from .surface import (
    NormalCurveError,
    NormalMulticurve,
    Piece,
    SurfaceModel,
    cut_pieces,
    normalize_multicurve,
    validate_surface_model,
)

DATA_ENV = "PANTSPLANE_DATA"
FIXTURE = "genus2.json"

# Chart actions of the twists (verified against curver in the test suite).
U = Unimodular(1, 1, 0, 1)
L = Unimodular(1, 0, -1, 1)
TORUS_ACTION = {"a": L, "b": U}
SPHERE_ACTION = {"q": U @ U, "c": L @ L}
ONE = Slope(1, 1)
MINUS_ONE = Slope(-1, 1)


def data_dir() -> Path:
    override = os.environ.get(DATA_ENV)
    return Path(override) if override else Path(__file__).parent / "data"


def fixture_checksums(directory: Path | None = None) -> dict[str, str]:
    directory = directory or data_dir()
    return {
        p.name: hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(directory.glob("*.json"))
    }


def verify_checksums(directory: Path | None = None) -> list[str]:
    """Compare fixture files against SHA256SUMS; returns the mismatches."""
    directory = directory or data_dir()
    sums = directory / "SHA256SUMS"
    if not sums.exists():
        return ["SHA256SUMS missing"]
    actual = fixture_checksums(directory)
    bad = []
    for line in sums.read_text().splitlines():
        if not line.strip():
            continue
        digest, name = line.split()
        if actual.get(name) != digest:
            bad.append(name)
    return bad


class Window(NamedTuple):
    kind: str  # "Y1", "Y2" or "W"
    s1: Slope | None = None
    s2: Slope | None = None

    @property
    def is_torus(self) -> bool:
        return self.kind != "W"

    @property
    def name(self) -> str:
        return self.kind if self.is_torus else f"W({self.s1},{self.s2})"


Y1 = Window("Y1")
Y2 = Window("Y2")


def sphere_window(s1: Slope, s2: Slope) -> Window:
    return Window("W", s1, s2)


class CurveLabel(NamedTuple):
    """A curve named by its window and chart slope; q has window None."""

    window: Window | None
    slope: Slope

    def __str__(self) -> str:
        return "q" if self.window is None else f"{self.window.name}:{self.slope}"


Q = CurveLabel(None, INF)


def curve_label(window: Window, slope: Slope) -> CurveLabel:
    if window.kind == "W" and slope == INF:
        return Q
    return CurveLabel(window, slope)


def torus_word(s: Slope) -> tuple[str, list[tuple[str, int]]]:
    """A seed generator and twist word (outermost first) realizing slope s."""
    p, q = s.p, s.q
    ops = []
    while True:
        if p == 0:
            seed = "a"
            break
        if q == 0:
            seed = "b"
            break
        if abs(p) >= q:
            k = p // q
            ops.append(("b", k))
            p -= k * q
        else:
            m = (q % abs(p) - q) // p
            ops.append(("a", m))
            q += m * p
    return seed, ops


def sphere_word(t: Slope) -> tuple[str, list[tuple[str, int]]]:
    """Seed among c, q, d, dm and a word in the sphere-chart twists about q, c."""
    p, q = t.p, t.q
    ops = []
    while True:
        if (p, q) in ((0, 1), (0, -1)):
            seed = "c"
            break
        if (p, q) in ((1, 0), (-1, 0)):
            seed = "q"
            break
        if abs(p) == abs(q):
            seed = "d" if p == q else "dm"
            break
        if abs(p) > abs(q):
            k = round(Fraction(p, 2 * q))
            p -= 2 * k * q
            ops.append(("q", k))
        else:
            k = round(Fraction(q, -2 * p))
            q += 2 * k * p
            ops.append(("c", k))
    return seed, ops


def word_matrix(ops, action) -> Unimodular:
    m = Unimodular(1, 0, 0, 1)
    for name, k in ops:
        m = m @ action[name].power(k)
    return m


SEED_SLOPES = {"a": ZERO, "b": INF, "c": ZERO, "q": INF, "d": ONE, "dm": MINUS_ONE}


def intersection_in_window(window: Window, s: Slope, t: Slope) -> int:
    n = abs(det(s, t))
    return n if window.is_torus else 2 * n


@dataclass(frozen=True, order=True)
class WaveDescriptor:
    """One arc of a crossing curve inside a one-holed torus window.

    Waves in a one-holed torus correspond to slopes: the arc of slope r is
    disjoint from exactly one curve, the curve of the same slope, and meets
    the chart generators |p| and |q| times.
    """

    window: str
    arc_slope: Slope
    source: str
    copy: int

    @property
    def boundary(self) -> str:
        return "q"

    @property
    def endpoints(self) -> tuple[str, str]:
        return ("q", "q")

    @property
    def chart_intersections(self) -> tuple[int, int]:
        return (abs(self.arc_slope.p), abs(self.arc_slope.q))

    def to_document(self) -> dict:
        return {
            "window": self.window,
            "arc_slope": str(self.arc_slope),
            "endpoints": list(self.endpoints),
            "chart_intersections": list(self.chart_intersections),
            "source": self.source,
            "copy": self.copy,
        }


def wave_intersection(r: Slope, s: Slope) -> int:
    """Minimal intersection of the arcs of slopes r and s in a one-holed torus."""
    return max(abs(det(r, s)) - 1, 0)


def wave_projection(d: WaveDescriptor) -> Slope:
    return d.arc_slope


class HandleSystem:
    """The separating curve q with its two torus windows and sphere charts."""

    def __init__(self, directory: Path | str | None = None):
        directory = Path(directory) if directory else data_dir()
        text = (directory / FIXTURE).read_text()
        self.fixture_path = directory / FIXTURE
        self.fixture_sha256 = hashlib.sha256(text.encode()).hexdigest()
        self.doc = json.loads(text)
        self.model = SurfaceModel.from_document(self.doc)
        report = validate_surface_model(self.model)
        if not report.ok:
            raise ValueError(f"bundled model invalid: {report.reasons}")
        self.triangulation = create_triangulation([list(t) for t in self.model.triangles])
        self.base = {n: self.triangulation.lamination(v) for n, v in self.doc["curves"].items()}
        self._twists = {}
        for handle in ("1", "2"):
            for g in ("a", "b"):
                self._twists[g + handle] = self.base[g + handle].encode_twist()
        self._twists["q"] = self.base["q"].encode_twist()
        self._twists["c"] = self.base["c"].encode_twist()
        self.base["dm"] = self._apply([("q", -1)], self.base["d"])
        self._vector = lru_cache(maxsize=None)(self._vector_uncached)
        self._lam = {}

    # -- twist words -------------------------------------------------------
    def _apply(self, ops, lam):
        for name, k in reversed(ops):
            tw = self._twists[name] if k > 0 else self._twists[name] ** -1
            for _ in range(abs(k)):
                lam = tw(lam)
        return lam

    def _handle_ops(self, handle: str, s: Slope):
        seed, ops = torus_word(s)
        return seed + handle, [(g + handle, k) for g, k in ops]

    def lamination(self, label: CurveLabel):
        if label in self._lam:
            return self._lam[label]
        if label == Q:
            lam = self.base["q"]
        elif label.window.is_torus:
            seed, ops = self._handle_ops(label.window.kind[1], label.slope)
            lam = self._apply(ops, self.base[seed])
        else:
            seed, ops = sphere_word(label.slope)
            lam = self._apply(ops, self.base[seed])
            for handle, s in (("1", label.window.s1), ("2", label.window.s2)):
                seed_h, hops = self._handle_ops(handle, s)
                # Transport the standard sphere chart by a handle word sending a_i to slope s.
                if seed_h.startswith("b"):
                    hops = hops + [("b" + handle, 1), ("a" + handle, 1), ("b" + handle, 1)]
                lam = self._apply(hops, lam)
        self._lam[label] = lam
        return lam

    def _vector_uncached(self, label: CurveLabel) -> tuple[int, ...]:
        return tuple(int(x) for x in self.lamination(label).geometric)

    def vector(self, label: CurveLabel) -> tuple[int, ...]:
        return self._vector(label)

    def multicurve_vector(self, labels: Sequence[CurveLabel]) -> tuple[int, ...]:
        vecs = [self.vector(x) for x in labels]
        return tuple(sum(col) for col in zip(*vecs)) if vecs else (0,) * self.model.num_edges

    def normalize(self, weights: Sequence[int]) -> NormalMulticurve:
        return normalize_multicurve(self.model, weights)

    def ambient_intersection(self, x, y) -> int:
        """Intersection computed by curver from weight vectors or labels."""
        if not isinstance(x, CurveLabel):
            x, y = y, x
        # The labelled curve keeps its memoized shortening; the other side need not be promoted.
        return int(self._as_lamination(x).intersection(self._as_lamination(y)))

    def _as_lamination(self, x):
        if isinstance(x, CurveLabel):
            return self.lamination(x)
        if isinstance(x, (tuple, list)):
            return self.triangulation.lamination(list(x), promote=False)
        return x

    # -- charts ------------------------------------------------------------
    def curve_from_chart_slope(self, window: Window, s: Slope) -> NormalMulticurve:
        return self.normalize(self.vector(curve_label(window, s)))

    def chart_curves(self, window: Window) -> tuple[CurveLabel, CurveLabel, CurveLabel]:
        return (curve_label(window, ZERO), curve_label(window, INF), curve_label(window, ONE))

    def contains(self, window: Window, weights: Sequence[int]) -> bool:
        """Whether the curve lies inside the window and is not its boundary."""
        weights = tuple(weights)
        lam = self.triangulation.lamination(list(weights), promote=False)
        if window.is_torus:
            other = Y2 if window == Y1 else Y1
            fences = [Q, curve_label(other, ZERO), curve_label(other, INF)]
            if weights == self.vector(Q):
                return False
        else:
            fences = [curve_label(Y1, window.s1), curve_label(Y2, window.s2)]
            if weights in [self.vector(f) for f in fences]:
                return False
        return all(self.ambient_intersection(f, lam) == 0 for f in fences)

    def slope_in_chart(self, window: Window, weights: Sequence[int]) -> Slope:
        """Chart slope of a single curve given by weights; ValueError if it is not in the window."""
        weights = tuple(weights)
        if len(self.normalize(weights)) != 1:
            raise ValueError("slope_in_chart needs a single curve")
        if not self.contains(window, weights):
            raise ValueError(f"curve is not contained in window {window.name}")
        lam = self.triangulation.lamination(list(weights), promote=False)
        scale = 1 if window.is_torus else 2
        zero, inf, one = self.chart_curves(window)
        ip = self.ambient_intersection(zero, lam) // scale
        iq = self.ambient_intersection(inf, lam) // scale
        if ip == 0 or iq == 0:
            s = INF if ip else ZERO
        else:
            ione = self.ambient_intersection(one, lam) // scale
            s = Slope(ip, iq) if ione == abs(ip - iq) else Slope(-ip, iq)
        if self.vector(curve_label(window, s)) != weights:
            raise ValueError("curve is not the designated representative of its class")
        return s

    def cut_along(self, labels: Sequence[CurveLabel]) -> list[Piece]:
        """Pieces of the complement, with charts on recognised windows."""
        pieces = cut_pieces(self.model, self.multicurve_vector(labels))
        labels = set(labels)
        windows = []
        handle = {w.kind: l.slope for l in labels if l.window is not None and l.window.is_torus for w in [l.window]}
        if Q in labels:
            if "Y1" not in handle:
                windows.append(Y1)
            if "Y2" not in handle:
                windows.append(Y2)
        elif set(handle) == {"Y1", "Y2"} and len(labels) == 2:
            windows.append(sphere_window(handle["Y1"], handle["Y2"]))
        tori = [p for p in pieces if p.classification == (1, 1, 1)]
        spheres = [p for p in pieces if p.classification == (0, 4, 1)]
        for w in windows:
            pool = tori if w.is_torus else spheres
            target = self._torus_piece(pool, w) if len(pool) == 2 else (pool[0] if pool else None)
            if target is not None:
                zero, inf, _ = self.chart_curves(w)
                target.chart = {"window": w.name, "0/1": str(zero), "1/0": str(inf)}
        return pieces

    def _torus_piece(self, pool, w):
        # The vertex lies on the edges q avoids; a2 and b2 run along them, so it is in Y2.
        return next(p for p in pool if p.contains_vertex == (w == Y2))

    # -- footprints ----------------------------------------------------------
    def footprints(self, label: CurveLabel, window: Window) -> list:
        if not window.is_torus:
            raise ValueError("footprints are defined for the torus windows of the handle system")
        if label == Q:
            return []
        if label.window.is_torus:
            return [label] if label.window == window else []
        arc = label.window.s1 if window == Y1 else label.window.s2
        return [WaveDescriptor(window.name, arc, str(label), k) for k in range(abs(label.slope.q))]

    def check_chart_actions(self) -> dict:
        """Recompute the twist actions in the charts from ambient intersections."""
        out = {}
        for name, pair in (("Y1", ("a1", "b1")), ("Y2", ("a2", "b2"))):
            a, b = (self.base[x] for x in pair)
            tb_a = self._twists[pair[1]](a)
            ta_b = self._twists[pair[0]](b)
            out[name] = (int(tb_a.intersection(a)), int(tb_a.intersection(b)), int(ta_b.intersection(tb_a)))
        c, q = self.base["c"], self.base["q"]
        out["W"] = (int(self._twists["c"](q).intersection(self._twists["q"](c))),)
        return out
