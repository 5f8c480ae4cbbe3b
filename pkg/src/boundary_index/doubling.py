"""Doubled and twisted-doubled field maps around boundary zeros, and the collar push.

In the double, a boundary chart at ``p`` becomes a neighbourhood of the
segment ``[-a, a]`` (``a = e1``): the right half is the original chart,
the left half its mirror image under ``r(y1, y') = (-y1, y')``, and the
collar between them is parametrized by ``t in [-1, 1]``.  The local index
of the doubled zero set is the degree of the normalized doubled field on
a capsule around the segment:

* right cap  ``a + eps*u`` (``u1 >= 0``): ``v/|v|``;
* left cap   ``-a + eps*(-u1, u')``: ``r(v/|v|)`` (untwisted) or
  ``-r(v/|v|)`` (twisted);
* cylinder   ``(t, eps*w)`` (``|w| = 1``): the collar interpolation
  ``(t+1)/2 V_+ + (1-t)/2 V_-``, which reduces to ``(t*v1, v')``
  untwisted and ``(v1, t*v')`` twisted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

import numpy as np

from .charts import ModelManifold, ZeroKind, find_zeros
from .degree import (
    MAX_DEPTH,
    MAX_GAP,
    MAX_LEVEL,
    HemisphereMap,
    angle_between,
    curve_intersection,
    normalize_map,
    robust_mesh_intersection,
    solid_angle_degree,
    unit,
)
from .errors import (
    HypothesisViolated,
    NotAdmissibleDirection,
    RefinementOverflow,
    ZeroOnCylinder,
)
from .fieldlang import FieldDef, eval_field

CYLINDER_T = 64
SEAM_TOL = 0.1  # rad
CASES = ("type0", "typeminus", "typeplus")


@dataclass(frozen=True)
class DoubledMap:
    """Sampled doubled map on the capsule around the doubled zero segment.

    n = 1: ``values``/``orient`` for the two capsule points.  n = 2:
    ``values`` is a closed counterclockwise loop (first sample repeated at
    the end) and ``pieces`` labels each sample.  n = 3: ``values`` per
    vertex of the outward-oriented ``triangles``.
    """

    n: int
    twisted: bool
    source: HemisphereMap = dc_field(repr=False)
    points: np.ndarray = dc_field(repr=False)
    values: np.ndarray = dc_field(repr=False)
    pieces: np.ndarray = dc_field(repr=False)
    triangles: Optional[np.ndarray] = dc_field(default=None, repr=False)
    orient: Optional[np.ndarray] = dc_field(default=None, repr=False)
    seam_jump: float = 0.0
    max_gap: float = 0.0


def _reflect(v):
    out = np.array(v, dtype=float, copy=True)
    out[..., 0] *= -1
    return out


def _cylinder_values(rim_raw, t, twisted):
    """Collar interpolation at parameters ``t`` (rows) over rim vectors (columns)."""
    t = np.asarray(t, dtype=float)[:, None, None]
    w = np.broadcast_to(rim_raw[None], t.shape[:1] + rim_raw.shape).copy()
    if twisted:
        w[..., 1:] *= t
    else:
        w[..., 0] *= t[..., 0]
    norms = np.linalg.norm(w, axis=-1)
    if np.any(norms < 1e-14):
        j, k = np.unravel_index(int(np.argmin(norms)), norms.shape)
        raise ZeroOnCylinder(
            f"doubled field vanishes on the collar at t = {float(t[j, 0, 0]):.6g} over rim sample {k}"
        )
    return w / norms[..., None]


def _refine_t(rim_raw, twisted):
    """t-values from 1 down to -1, bisected until adjacent rings differ by <= MAX_GAP."""
    t = np.linspace(1.0, -1.0, CYLINDER_T + 1)
    depth = np.zeros(len(t) - 1, dtype=int)
    while True:
        vals = _cylinder_values(rim_raw, t, twisted)
        gaps = np.max(angle_between(vals[:-1], vals[1:]), axis=1)
        bad = gaps > MAX_GAP
        if not np.any(bad):
            return t, vals
        if np.any(depth[bad] >= MAX_DEPTH):
            raise RefinementOverflow(f"collar gap {gaps.max():.3g} rad persists after {MAX_DEPTH} bisections")
        new_t, new_depth = [t[0]], []
        for k in range(len(t) - 1):
            if bad[k]:
                new_t += [0.5 * (t[k] + t[k + 1]), t[k + 1]]
                new_depth += [depth[k] + 1] * 2
            else:
                new_t.append(t[k + 1])
                new_depth.append(depth[k])
        t, depth = np.array(new_t), np.array(new_depth, dtype=int)


def build_doubled_map(h: HemisphereMap, twisted: bool = False) -> DoubledMap:
    """Assemble the (twisted) doubled map from a hemisphere map ``h``."""
    if h.closed:
        raise ValueError("build_doubled_map needs a hemisphere map")
    n, eps = h.n, h.radius
    sgn = -1.0 if twisted else 1.0
    left_vals = sgn * _reflect(h.values)

    if n == 1:
        pts = np.array([[1.0 + eps], [-1.0 - eps]])
        vals = np.array([h.values[0], left_vals[0]])
        return DoubledMap(1, twisted, h, pts, vals, np.array(["right", "left"]), orient=np.array([1.0, -1.0]))

    if n == 2:
        top, bottom = h.raw[-1], h.raw[0]
        t_top, cyl_top = _refine_t(top[None, :], twisted)
        t_bot, cyl_bot = _refine_t(bottom[None, :], twisted)
        right_pts = h.points
        left_pts = -h.center + eps * np.stack([-h.domain[:, 0], h.domain[:, 1]], axis=-1)
        # counterclockwise: right cap up, top edge leftwards, left cap down, bottom edge rightwards
        top_pts = np.stack([t_top, np.full_like(t_top, eps)], axis=-1)
        bot_pts = np.stack([t_bot[::-1], np.full_like(t_bot, -eps)], axis=-1)
        parts = [
            (right_pts, h.values, "right"),
            (top_pts[1:-1], cyl_top[1:-1, 0], "cylinder"),
            (left_pts[::-1], left_vals[::-1], "left"),
            (bot_pts[1:-1], cyl_bot[::-1][1:-1, 0], "cylinder"),
        ]
        pts = np.concatenate([p for p, _, _ in parts] + [right_pts[:1]])
        vals = np.concatenate([v for _, v, _ in parts] + [h.values[:1]])
        pieces = np.concatenate([[lab] * len(p) for p, _, lab in parts] + [["right"]])
        # seams: cylinder ends recomputed from rim vectors versus cap samples
        seam = max(
            float(angle_between(cyl_top[0, 0], h.values[-1])),
            float(angle_between(cyl_top[-1, 0], left_vals[-1])),
            float(angle_between(cyl_bot[-1, 0], left_vals[0])),
            float(angle_between(cyl_bot[0, 0], h.values[0])),
        )
        gap = float(np.max(angle_between(vals[:-1], vals[1:])))
        return DoubledMap(2, twisted, h, pts, vals, pieces, seam_jump=seam, max_gap=gap)

    if n == 3:
        while True:
            try:
                return _build_capsule3(h, twisted, left_vals)
            except RefinementOverflow:
                if h.level >= MAX_LEVEL:
                    raise
                h = normalize_map(h.field, h.center, h.radius, h.side, level=h.level + 1)
                left_vals = sgn * _reflect(h.values)
    raise ValueError(f"dimension {n} is not supported")


def _build_capsule3(h, twisted, left_vals):
    eps = h.radius
    V, F, rim = h.domain, h.triangles, h.rim
    nv = len(V)
    rim_raw = h.raw[rim]
    t, cyl = _refine_t(rim_raw, twisted)
    gap_along = float(np.max(angle_between(cyl, np.roll(cyl, -1, axis=1))))
    if gap_along > MAX_GAP:
        raise RefinementOverflow(f"collar ring gap {gap_along:.3g} rad; refining the rim")

    right_pts = h.center + eps * V
    left_pts = -h.center + eps * np.stack([-V[:, 0], V[:, 1], V[:, 2]], axis=-1)
    inner_t = t[1:-1]
    rim_w = V[rim, 1:]
    ring_pts = np.concatenate(
        [np.concatenate([np.full((len(rim), 1), tj), eps * rim_w], axis=1) for tj in inner_t]
    ) if len(inner_t) else np.zeros((0, 3))
    pts = np.concatenate([right_pts, left_pts, ring_pts])
    vals = np.concatenate([h.values, left_vals, cyl[1:-1].reshape(-1, 3)])
    pieces = np.array(["right"] * nv + ["left"] * nv + ["cylinder"] * len(ring_pts))

    def ring(j):  # vertex indices of ring j (0 = right rim, last = left rim)
        if j == 0:
            return rim
        if j == len(t) - 1:
            return nv + rim
        return 2 * nv + (j - 1) * len(rim) + np.arange(len(rim))

    tris = [F, nv + F[:, ::-1]]
    for j in range(len(t) - 1):
        r0, r1 = ring(j), ring(j + 1)
        r0n, r1n = np.roll(r0, -1), np.roll(r1, -1)
        tris.append(np.stack([r0n, r0, r1], axis=1))
        tris.append(np.stack([r0n, r1, r1n], axis=1))
    T = np.concatenate(tris)
    T = _orient_outward(pts, T)

    seam = max(
        float(np.max(angle_between(cyl[0], h.values[rim]))),
        float(np.max(angle_between(cyl[-1], left_vals[rim]))),
    )
    gap = max(float(np.max(angle_between(vals[T[:, i]], vals[T[:, (i + 1) % 3]]))) for i in range(3))
    return DoubledMap(3, twisted, h, pts, vals, pieces, triangles=T, seam_jump=seam, max_gap=gap)


def _orient_outward(pts, T):
    """Flip triangles whose normal points towards the capsule axis segment [-e1, e1]."""
    A, B, C = pts[T[:, 0]], pts[T[:, 1]], pts[T[:, 2]]
    normal = np.cross(B - A, C - A)
    g = (A + B + C) / 3
    axis_pt = np.zeros_like(g)
    axis_pt[:, 0] = np.clip(g[:, 0], -1.0, 1.0)
    inward = np.einsum("ij,ij->i", normal, g - axis_pt) < 0
    T = T.copy()
    T[inward] = T[inward][:, ::-1]
    return T


def probe_direction(n: int, case: str, twisted: bool) -> np.ndarray:
    """e1 for the untwisted type-0 case (and always for n = 1), e2 otherwise."""
    if case not in CASES:
        raise ValueError(f"case must be one of {CASES}, got {case!r}")
    if n == 1 or (case == "type0" and not twisted):
        return np.eye(n)[0]
    return np.eye(n)[1]


def doubled_degree(dm: DoubledMap, d) -> int:
    """Algebraic intersection number of the doubled map with ``d``."""
    d = unit(d)
    if dm.n == 1:
        hit = dm.values[:, 0] == d[0]
        return int(np.sum(dm.orient[hit]) * d[0])
    if dm.n == 2:
        return curve_intersection(dm.values, d)
    return robust_mesh_intersection(dm.values, dm.triangles, d)


def doubled_zero_index(dm: DoubledMap, case: str) -> int:
    """Local index of the doubled zero set, probed in the direction prescribed for ``case``."""
    if dm.seam_jump >= SEAM_TOL:
        raise NotAdmissibleDirection(f"doubled map is discontinuous across a seam ({dm.seam_jump:.3g} rad)")
    return doubled_degree(dm, probe_direction(dm.n, case, dm.twisted))


def oracle_doubled_index(dm: DoubledMap) -> int:
    """Independent degree of the doubled map: winding (n = 2) or solid angle (n = 3)."""
    if dm.n == 1:
        return doubled_degree(dm, [1.0])
    if dm.n == 2:
        ang = np.unwrap(np.arctan2(dm.values[:, 1], dm.values[:, 0]))
        turns = (ang[-1] - ang[0]) / (2 * math.pi)
        return int(round(turns))
    return solid_angle_degree(dm.values, dm.triangles)


# ---------------------------------------------------------------------------
# collar push (n >= 3)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CollarPush:
    """Field extended over a collar ``C x [0, width]`` glued to ``C`` from outside.

    ``field`` is vectorized over ambient points of the extended manifold.
    ``moved`` lists the former boundary zeros, now interior zeros.
    """

    manifold: str
    component: int
    width: float
    bump_radius: float
    component_type: str
    moved: tuple
    field: Callable = dc_field(repr=False)
    depth: Callable = dc_field(repr=False)

    def contains(self, x, tol: float = 0.0) -> bool:
        return bool(self.depth(np.asarray(x, dtype=float)) >= -tol)


def default_collar_width(m: ModelManifold) -> float:
    # a collar of width 1 around the solid torus tube would reach the axis
    return 0.5 if m.name == "solidtorus" else 1.0


def collar_push(m: ModelManifold, f: FieldDef, cid: int, width: Optional[float] = None) -> CollarPush:
    """Glue a collar along component ``cid`` and extend ``f`` so boundary zeros become interior.

    On the collar point at outward distance ``s`` from its foot ``q`` the
    field is ``f(q) + s * beta(q) * nu(q)``, where ``nu`` is the outward
    normal for an outward-type component (inward normal for inward-type) and
    ``beta = max(eps_b^2 - |q - p|^2, 0)`` is a bump around each zero ``p``
    on the component.
    """
    from .indices import classify_boundary

    if m.dim < 3:
        raise HypothesisViolated("collar push is used for n >= 3", [], f"{m.name} has dimension {m.dim}")
    width = default_collar_width(m) if width is None else width
    geom = m.component(cid).geometry
    zeros_v = [z for z in find_zeros(m, f, ZeroKind.BOUNDARY) if z.component == cid]
    zeros_n = [z for z in find_zeros(m, f, ZeroKind.NORMAL_FIELD) if z.component == cid]
    vpts = [z.point for z in zeros_v]
    stray = [z.point for z in zeros_n if not any(np.linalg.norm(z.point - p) < 1e-6 for p in vpts)]
    if stray:
        raise HypothesisViolated(
            "the zeros of V on the component are the only zeros of the normal field", stray
        )
    classes = classify_boundary(m, f, vpts)
    ctype = classes[cid]
    if len(vpts) > 1:
        pair = min(np.linalg.norm(p - q) for i, p in enumerate(vpts) for q in vpts[i + 1:])
        eps_b = min(0.5, pair / 2)
    else:
        eps_b = 0.5
    P = np.array(vpts).reshape(-1, m.dim)
    toward = 1.0 if ctype == "plus" else -1.0  # +1: push along the outward normal

    def ext_depth(x):
        x = np.asarray(x, dtype=float)
        inside = m.depth(x)
        g = geom.depth(x)
        collar = np.where(g < 0, width + g, -np.inf)
        return np.maximum(inside, collar)

    def W(x):
        x = np.asarray(x, dtype=float)
        g = geom.depth(x)
        out = eval_field(f, np.where((g < 0)[..., None], geom.project(x), x))
        s = np.maximum(-g, 0.0)
        q = geom.project(x)
        if len(P):
            d2 = np.min(np.sum((q[..., None, :] - P) ** 2, axis=-1), axis=-1)
            beta = np.maximum(eps_b**2 - d2, 0.0)
        else:
            beta = np.zeros(s.shape)
        nu_out = -geom.inward_normal(q)
        return out + (toward * s * beta)[..., None] * nu_out

    return CollarPush(m.name, cid, width, eps_b, ctype, tuple(tuple(p) for p in vpts), W, ext_depth)


def pushed_zero_index(push: CollarPush, p, eps: float = 0.05) -> int:
    """Interior index of the pushed field at a former boundary zero ``p``."""
    from .degree import full_sphere_degree

    h = normalize_map(push.field, np.asarray(p, dtype=float), eps, "full_sphere")
    return full_sphere_degree(h)
