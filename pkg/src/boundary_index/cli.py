"""Command-line front end.

    boundary-index verify  --scene S --theorem {1|2|3|4|s3|double} --out R
    boundary-index index   --scene S --point "x,y[,z]" --kind {interior|normal|tangential} --out R
    boundary-index plot    --scene S --out F.svg
    boundary-index catalog [--out R]

Exit status: 0 when every checked identity holds, 2 when a hypothesis of
the requested theorem or index fails (the report names it and the witness
points), 1 on any other error or a failed identity.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from .charts import ZeroKind, catalog, find_zeros
from .errors import BoundaryIndexError, HypothesisViolated, NonIsolatedZero
from .indices import (
    compute_bundle,
    local_index_interior_detail,
    normal_local_index_detail,
    tangential_local_index_detail,
)
from .plot import render_svg
from .scene import Scene, dumps_report, load_scene, write_atomic
from .verify import (
    verify_all_doubles,
    verify_section3_identities,
    verify_theorem1,
    verify_theorem2,
    verify_theorem3,
    verify_theorem4,
)

EXIT_PASS, EXIT_ERROR, EXIT_HYPOTHESIS = 0, 1, 2
THEOREMS = {"1": verify_theorem1, "2": verify_theorem2, "3": verify_theorem3, "4": verify_theorem4}
MODE_TO_THEOREM = {"T1": "1", "T2": "2", "T3": "3", "T4": "4", "S3": "s3", "DOUBLE": "double"}


def _error_json(exc: BaseException) -> dict:
    out = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, HypothesisViolated):
        out["assumption"] = exc.assumption
        out["witnesses"] = [list(w) for w in exc.witnesses]
    if isinstance(exc, NonIsolatedZero):
        out["zero_kind"] = exc.kind
    line = getattr(exc, "line", None)
    if line is not None:
        out["line"] = line
    return out


def _apply_overrides(scene: Scene, args) -> Scene:
    changes = {}
    if getattr(args, "epsilon", None) is not None:
        changes["epsilon"] = args.epsilon
    if getattr(args, "tol", None) is not None:
        changes["tol"] = args.tol
    if getattr(args, "grid_spacing", None) is not None:
        changes["grid_spacing"] = args.grid_spacing
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    return replace(scene, **changes) if changes else scene


def _finish(payload: dict, out, status: int) -> int:
    text = dumps_report(payload)
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)
    return status


def _fail(command: str, exc: BaseException, out, base: dict) -> int:
    hyp = isinstance(exc, HypothesisViolated)
    status = EXIT_HYPOTHESIS if hyp else EXIT_ERROR
    print(f"boundary-index {command}: {type(exc).__name__}: {exc}", file=sys.stderr)
    payload = {**base, "status": "hypothesis_violated" if hyp else "error", "pass": False, "error": _error_json(exc)}
    try:
        return _finish(payload, out, status) if out else status
    except OSError as werr:
        print(f"boundary-index {command}: cannot write report: {werr}", file=sys.stderr)
        return EXIT_ERROR


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def run_verify(scene_path, theorem, out=None, args=None) -> int:
    base = {"command": "verify", "theorem": theorem}
    try:
        scene = _apply_overrides(load_scene(scene_path), args)
        base["scene"] = scene.to_json()
        if theorem is None:
            theorem = MODE_TO_THEOREM.get((scene.mode or "").upper())
            if theorem is None:
                raise BoundaryIndexError("no --theorem given and the scene has no theorem mode")
            base["theorem"] = theorem
        m, f, opts = scene.manifold, scene.field, scene.options()
        if theorem in THEOREMS:
            reports = [THEOREMS[theorem](m, f, **opts)]
        elif theorem == "s3":
            reports = list(verify_section3_identities(m, f, **opts))
        elif theorem == "double":
            reports = verify_all_doubles(m, f, **opts)
        else:
            raise BoundaryIndexError(f"unknown theorem selector {theorem!r}")
    except (BoundaryIndexError, OSError, ValueError) as exc:
        return _fail("verify", exc, out, base)
    ok = all(r.passed for r in reports)
    payload = {**base, "status": "pass" if ok else "fail", "pass": ok}
    if len(reports) == 1:
        payload.update(reports[0].to_json())
        payload["pass"] = ok
    else:
        payload["reports"] = [r.to_json() for r in reports]
    return _finish(payload, out, EXIT_PASS if ok else EXIT_ERROR)


def _parse_point(text: str, dim: int):
    try:
        p = np.array([float(c) for c in text.split(",")])
    except ValueError:
        raise BoundaryIndexError(f"point must be comma-separated numbers, got {text!r}") from None
    if p.size != dim:
        raise BoundaryIndexError(f"point needs {dim} coordinates, got {p.size}")
    return p


KIND_ZEROS = {
    "interior": ZeroKind.INTERIOR,
    "normal": ZeroKind.BOUNDARY_FIELD,
    "tangential": ZeroKind.NORMAL_FIELD,
}
KIND_FUNCS = {
    "interior": local_index_interior_detail,
    "normal": normal_local_index_detail,
    "tangential": tangential_local_index_detail,
}


def run_index(scene_path, point, kind, out=None, args=None) -> int:
    base = {"command": "index", "kind": kind, "point": point}
    try:
        scene = _apply_overrides(load_scene(scene_path), args)
        base["scene"] = scene.to_json()
        m, f = scene.manifold, scene.field
        p = _parse_point(point, m.dim)
        if kind not in KIND_ZEROS:
            raise BoundaryIndexError(f"unknown index kind {kind!r}")
        zeros = find_zeros(m, f, KIND_ZEROS[kind], scene.tol, scene.grid_spacing, hints=[tuple(p)])
        near = [z for z in zeros if np.linalg.norm(z.point - p) < 1e-6]
        if not near:
            raise HypothesisViolated(f"the point is an isolated {KIND_ZEROS[kind].value}", [p])
        z = near[0]
        detail = KIND_FUNCS[kind](m, f, z, scene.epsilon)
    except (BoundaryIndexError, OSError, ValueError) as exc:
        return _fail("index", exc, out, base)
    payload = {
        **base,
        "status": "ok",
        "pass": True,
        "value": detail.value.to_json(),
        "zero": {
            "location": list(z.location),
            "kind": z.kind.value,
            "type": z.type_tag.value,
            "isolation_radius": z.isolation_radius,
            "residual": z.residual,
        },
        "provenance": detail.to_json(),
    }
    return _finish(payload, out, EXIT_PASS)


def run_plot(scene_path, out, args=None) -> int:
    try:
        scene = _apply_overrides(load_scene(scene_path), args)
        m, f = scene.manifold, scene.field
        if m.dim == 3:
            render_svg(m, f, None)  # raises UnsupportedDimension
        opts = scene.options()
        bundle = compute_bundle(m, f, "normal", **opts)
        svg = render_svg(m, f, bundle)
        if out:
            write_atomic(out, svg)
        else:
            sys.stdout.write(svg)
    except (BoundaryIndexError, OSError, ValueError) as exc:
        hyp = isinstance(exc, HypothesisViolated)
        print(f"boundary-index plot: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS if hyp else EXIT_ERROR
    return EXIT_PASS


def run_catalog(out=None) -> int:
    rows = []
    for m in catalog():
        rows.append(
            {
                "name": m.name,
                "dim": m.dim,
                "euler": m.euler,
                "boundary_components": [{"id": b.id, "euler": b.euler} for b in m.boundary_components],
                "boundary_euler": m.boundary_euler,
                "max_chart_radius": m.max_chart_radius,
            }
        )
    if out:
        return _finish({"command": "catalog", "manifolds": rows}, out, EXIT_PASS)
    print(f"{'name':<11} {'dim':>3} {'chi':>4} {'chi(dX)':>8}  boundary components")
    for r in rows:
        comps = ", ".join(f"#{c['id']} chi={c['euler']}" for c in r["boundary_components"])
        print(f"{r['name']:<11} {r['dim']:>3} {r['euler']:>4} {r['boundary_euler']:>8}  {comps}")
    return EXIT_PASS


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_overrides(p):
    p.add_argument("--epsilon", type=float, help="sphere radius for local indices (overrides the scene)")
    p.add_argument("--tol", type=float, help="zero-finding tolerance (overrides the scene)")
    p.add_argument("--grid-spacing", type=float, help="zero-scan grid spacing (overrides the scene)")
    p.add_argument("--seed", type=int, help="seed for validation directions (overrides the scene)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boundary-index",
        description="Local indices of vector fields at boundary zeros and exact checks of the index theorems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify a theorem or identity on a scene")
    v.add_argument("--scene", required=True)
    v.add_argument("--theorem", choices=["1", "2", "3", "4", "s3", "double"])
    v.add_argument("--out")
    _add_overrides(v)

    i = sub.add_parser("index", help="compute one local index")
    i.add_argument("--scene", required=True)
    i.add_argument("--point", required=True, help='comma-separated coordinates, e.g. "1,0"')
    i.add_argument("--kind", required=True, choices=["interior", "normal", "tangential"])
    i.add_argument("--out")
    _add_overrides(i)

    p = sub.add_parser("plot", help="draw a 1- or 2-dimensional scene as SVG")
    p.add_argument("--scene", required=True)
    p.add_argument("--out")
    _add_overrides(p)

    c = sub.add_parser("catalog", help="list the model manifolds")
    c.add_argument("--out")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return run_verify(args.scene, args.theorem, args.out, args)
    if args.command == "index":
        return run_index(args.scene, args.point, args.kind, args.out, args)
    if args.command == "plot":
        return run_plot(args.scene, args.out, args)
    return run_catalog(args.out)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
