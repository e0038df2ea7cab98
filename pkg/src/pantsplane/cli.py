"""Command line entry point.

Every command prints one JSON document holding a manifest (command,
parameters, version, fixture checksums, timing) and a result payload. The
payload is deterministic for a given manifest; timings live only in the
manifest. Exit codes: 0 success, 2 usage or input error, 3 falsification.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__
from .farey import (
    Slope,
    Unimodular,
    farey_distance,
    farey_geodesic,
    is_hyperbolic,
    periodic_axis,
)
from .graph_metric import build_grid_plane, grid_metric_is_l1, invariant_plane_window, convexity_trial
from .handles import HandleSystem, data_dir, fixture_checksums
from .pants import PantsError, PantsVertex, validate_pants
from .projection import (
    PreconditionError,
    audit_footprint_gaps,
    audit_waypoints,
    audit_total_geodesy,
    central_slice,
    check_plane_embedding,
    theorem2_project_path,
)

EXIT_OK, EXIT_USAGE, EXIT_FALSIFIED = 0, 2, 3
DEFAULT_MATRIX = "3,-1,1,0"


class UsageError(Exception):
    pass


def _slope(text: str) -> Slope:
    try:
        return Slope.parse(text)
    except (ValueError, ZeroDivisionError) as err:
        raise UsageError(f"cannot parse slope {text!r}: {err}") from err


def _matrix(text: str) -> Unimodular:
    try:
        a, b, c, d = (int(x) for x in text.split(","))
        return Unimodular(a, b, c, d)
    except ValueError as err:
        raise UsageError(f"cannot parse matrix {text!r} (expected a,b,c,d with determinant 1)") from err


def _strip_runtime(doc):
    if isinstance(doc, dict):
        return {k: _strip_runtime(v) for k, v in doc.items() if k != "runtime"}
    if isinstance(doc, list):
        return [_strip_runtime(v) for v in doc]
    return doc


def build_document(command: str, params: dict, result: dict, started: float) -> dict:
    payload = _strip_runtime(result)
    blob = json.dumps(payload, sort_keys=True).encode()
    return {
        "manifest": {
            "command": command,
            "parameters": params,
            "seed": params.get("seed"),
            "bounds": {k: params[k] for k in ("bound", "len", "dq_max") if k in params},
            "version": __version__,
            "fixtures": fixture_checksums(data_dir()),
            "wall_clock_seconds": round(time.perf_counter() - started, 3),
        },
        "result": payload,
        "payload_sha256": hashlib.sha256(blob).hexdigest(),
    }


# -- commands --------------------------------------------------------------------

def cmd_farey(args) -> tuple[dict, int]:
    if args.action == "distance":
        a, b = _slope(args.a), _slope(args.b)
        return {"a": str(a), "b": str(b), "distance": farey_distance(a, b)}, EXIT_OK
    if args.action == "geodesic":
        a, b = _slope(args.a), _slope(args.b)
        path = farey_geodesic(a, b)
        return {"a": str(a), "b": str(b), "distance": len(path) - 1, "path": [str(s) for s in path]}, EXIT_OK
    m = _matrix(args.matrix)
    if not is_hyperbolic(m):
        raise UsageError("axis needs a hyperbolic matrix (|trace| > 2)")
    axis = periodic_axis(m, args.extent)
    return {"matrix": list(m.rows()), "extent": args.extent, "axis": [str(s) for s in axis]}, EXIT_OK


def _read_path(system: HandleSystem, path: Path) -> list[PantsVertex]:
    try:
        doc = json.loads(path.read_text())
        entries = doc["path"]
    except (OSError, ValueError, KeyError, TypeError) as err:
        raise UsageError(f"cannot read path file {path}: {err}") from err
    out = []
    for i, entry in enumerate(entries):
        try:
            if isinstance(entry, dict) and "weights" in entry:
                out.append(validate_pants(system, entry["weights"]))
            elif isinstance(entry, dict):
                out.append(PantsVertex.from_document(entry))
            else:
                out.append(validate_pants(system, entry))
        except (PantsError, ValueError, KeyError) as err:
            raise UsageError(f"path entry {i}: {err}") from err
    if not out:
        raise UsageError("path file holds no vertices")
    return out


def cmd_project(args) -> tuple[dict, int]:
    system = HandleSystem()
    path = _read_path(system, Path(args.path))
    try:
        trace = theorem2_project_path(system, path, bound=args.bound)
    except (PreconditionError, PantsError) as err:
        raise UsageError(str(err)) from err
    doc = trace.to_document()
    doc["path"] = [str(v) for v in path]
    return doc, EXIT_FALSIFIED if doc["failures"] else EXIT_OK


AUDIT_DEFAULTS = {"total-geodesy": (10, None), "theorem2": (8, None), "lemma4": (None, 500), "convexity": (None, 100)}


def cmd_audit(args) -> tuple[dict, int]:
    length, samples = AUDIT_DEFAULTS[args.kind]
    args.len = args.len if args.len is not None else length
    args.samples = args.samples if args.samples is not None else samples
    if args.kind == "total-geodesy":
        rep = audit_total_geodesy(None, args.pairs, args.dq_max, args.bound, args.len, args.seed,
                                  workers=args.workers).to_document()
        bad = rep["falsifications"]
    elif args.kind == "theorem2":
        rep = audit_waypoints(HandleSystem(), args.paths, args.len, args.bound, args.seed,
                             workers=args.workers).to_document()
        bad = len(rep["failures"])
    elif args.kind == "lemma4":
        rep = audit_footprint_gaps(HandleSystem(), args.samples, args.bound, args.seed)
        bad = len(rep["failures"])
    else:
        trials = [convexity_trial(args.seed * 100003 + i) for i in range(args.samples)]
        failures = [t.to_document() for t in trials if not (t.factors_convex and t.product_convex)]
        rep = {"seed": args.seed, "trials": len(trials), "failures": failures,
               "verdict": "product subsets convex" if not failures else "falsified"}
        bad = len(failures)
    return rep, EXIT_FALSIFIED if bad else EXIT_OK


def cmd_plane(args) -> tuple[dict, int]:
    m1, m2 = _matrix(args.m1), _matrix(args.m2)
    if not (is_hyperbolic(m1) and is_hyperbolic(m2)):
        raise UsageError("plane needs hyperbolic matrices (|trace| > 2)")
    if args.extent < 0:
        raise UsageError("extent must be non-negative")
    window, report = invariant_plane_window(m1, m2, args.extent)
    grid = build_grid_plane(window.axis1, window.axis2)
    doc = {
        "window": window.to_document(),
        "grid": {
            "vertices": len(grid.vertices),
            "edges": len(grid.edges),
            "l1_metric": grid_metric_is_l1(grid, window.axis1, window.axis2),
        },
        "translation": report.to_document(),
    }
    if args.embed:
        doc["embedding"] = check_plane_embedding(central_slice(window.axis1, args.embed),
                                                 central_slice(window.axis2, args.embed), args.bound, args.len)
    ok = doc["grid"]["l1_metric"] and report.constant and doc.get("embedding", {}).get("isometric", True)
    return doc, EXIT_OK if ok else EXIT_FALSIFIED


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pantsplane", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--out", help="also write the document to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, **defaults):
        p.add_argument("--seed", type=int, default=defaults.get("seed", 0))
        p.add_argument("--bound", type=int, default=defaults.get("bound", 8))
        p.add_argument("--len", type=int, default=defaults.get("len", 8))
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", default=argparse.SUPPRESS, help="also write the document to this file")

    farey = sub.add_parser("farey", help="Farey graph distance, geodesic or periodic axis")
    farey.add_argument("action", choices=["distance", "geodesic", "axis"])
    farey.add_argument("a", nargs="?")
    farey.add_argument("b", nargs="?")
    farey.add_argument("--matrix", default=DEFAULT_MATRIX)
    farey.add_argument("--extent", type=int, default=3)
    farey.add_argument("--out", default=argparse.SUPPRESS)

    project = sub.add_parser("project", help="waypoint trace of a path ending at a decomposition containing q")
    project.add_argument("path")
    common(project)

    audit = sub.add_parser("audit", help="seeded audits")
    audit.add_argument("kind", choices=["total-geodesy", "theorem2", "lemma4", "convexity"])
    common(audit, len=None)
    audit.add_argument("--pairs", type=int, default=100)
    audit.add_argument("--dq-max", type=int, default=5)
    audit.add_argument("--paths", type=int, default=1000)
    audit.add_argument("--samples", type=int, default=None, help="lemma4: 500 per window, convexity: 100 trials")

    plane = sub.add_parser("plane", help="plane window for a pair of hyperbolic matrices")
    plane.add_argument("--m1", default=DEFAULT_MATRIX)
    plane.add_argument("--m2", default=DEFAULT_MATRIX)
    plane.add_argument("--extent", type=int, default=5)
    plane.add_argument("--embed", type=int, default=0, help="check the central k x k block against the ambient search")
    common(plane, len=10)
    return parser


COMMANDS = {"farey": cmd_farey, "project": cmd_project, "audit": cmd_audit, "plane": cmd_plane}


def main(argv=None) -> int:
    started = time.perf_counter()
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "farey" and args.action != "axis" and (args.a is None or args.b is None):
        parser.error("farey distance and geodesic need two slopes")
    try:
        result, code = COMMANDS[args.command](args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    params = {k: v for k, v in vars(args).items() if k != "out"}
    doc = build_document(args.command, params, result, started)
    text = json.dumps(doc, indent=2, sort_keys=True)
    print(text)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
