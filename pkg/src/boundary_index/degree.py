"""Normalized field maps on (hemi)spheres and their signed intersection numbers.

Orientation convention: the (hemi)sphere around ``a`` and the unit sphere
both carry the orientation induced as boundaries of balls in chart
coordinates (outward normal first).  For ``n = 2`` this is the
counterclockwise direction, for ``n = 1`` the point ``a + eps`` counts +1
and ``a - eps`` counts -1.

Two independent algorithms are provided: :func:`intersection_number`
(crossing brackets for ``n = 2``, signed point-in-triangle counts for
``n = 3``) and :func:`oracle_degree` (dense winding accumulation for
``n = 2``, signed solid angles for ``n = 3``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import (
    DegenerateTriangle,
    DirectionDisagreement,
    NotAdmissibleDirection,
    NotAdmissiblePair,
    RefinementOverflow,
    ZeroOnSphere,
)
from .halfint import HalfInt

MAX_GAP = 0.2  # rad, largest angle allowed between adjacent mapped samples
MAX_DEPTH = 12
MARGIN_MIN = 1e-3  # rad
BASE_LEVEL = 5
MAX_LEVEL = 9
EDGE_EPS = 1e-6
NEAR_ANGLE = 0.25  # rad, > MAX_GAP
ZERO_TOL = 1e-12
ORACLE_SAMPLES = 100_001


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def angle_between(p, q):
    p, q = unit(p), unit(q)
    # atan2 form stays accurate for tiny and near-pi angles
    cross = np.linalg.norm(np.cross(p, q), axis=-1) if p.shape[-1] == 3 else np.abs(
        p[..., 0] * q[..., 1] - p[..., 1] * q[..., 0]
    )
    return np.arctan2(cross, np.sum(p * q, axis=-1))


# ---------------------------------------------------------------------------
# octahedral sphere meshes
# ---------------------------------------------------------------------------

_OCT_V = np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], dtype=float)
# outward-oriented faces; the first four contain +e1
_OCT_F = np.array(
    [[0, 2, 4], [0, 4, 3], [0, 3, 5], [0, 5, 2], [1, 4, 2], [1, 3, 4], [1, 5, 3], [1, 2, 5]], dtype=np.int64
)


def _subdivide(V, F):
    nf = len(F)
    E = np.concatenate([F[:, [0, 1]], F[:, [1, 2]], F[:, [2, 0]]])
    uniq, inv = np.unique(np.sort(E, axis=1), axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    mid = unit(V[uniq[:, 0]] + V[uniq[:, 1]])
    base = len(V)
    m01, m12, m20 = inv[:nf] + base, inv[nf:2 * nf] + base, inv[2 * nf:] + base
    a, b, c = F[:, 0], F[:, 1], F[:, 2]
    F2 = np.concatenate(
        [
            np.stack([a, m01, m20], axis=1),
            np.stack([m01, b, m12], axis=1),
            np.stack([m20, m12, c], axis=1),
            np.stack([m01, m12, m20], axis=1),
        ]
    )
    return np.concatenate([V, mid]), F2


@lru_cache(maxsize=None)
def sphere_mesh(level: int, hemisphere: bool):
    """Unit (hemi)sphere mesh: vertices, outward triangles, ordered rim loop.

    The hemisphere is ``u1 >= 0``; its rim vertices lie exactly on ``u1 = 0``
    and are returned in the order induced by the boundary orientation.
    """
    V, F = _OCT_V.copy(), _OCT_F[:4].copy() if hemisphere else _OCT_F.copy()
    for _ in range(level):
        V, F = _subdivide(V, F)
    used = np.unique(F)
    remap = -np.ones(len(V), dtype=np.int64)
    remap[used] = np.arange(len(used))
    V, F = V[used], remap[F]
    rim = np.array([], dtype=np.int64)
    if hemisphere:
        rim = _boundary_loop(F)
    V.setflags(write=False)
    F.setflags(write=False)
    rim.setflags(write=False)
    return V, F, rim


def _boundary_loop(F):
    E = np.concatenate([F[:, [0, 1]], F[:, [1, 2]], F[:, [2, 0]]])
    key = np.sort(E, axis=1)
    _, inv, counts = np.unique(key, axis=0, return_inverse=True, return_counts=True)
    inv = inv.reshape(-1)
    bnd = E[counts[inv] == 1]
    nxt = {int(p): int(q) for p, q in bnd}
    start = int(bnd[0, 0])
    loop = [start]
    cur = nxt[start]
    while cur != start:
        loop.append(cur)
        cur = nxt[cur]
    return np.array(loop, dtype=np.int64)


# ---------------------------------------------------------------------------
# hemisphere maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HemisphereMap:
    """Sampled normalized map ``v/|v|`` on the (hemi)sphere of radius ``radius`` about ``center``.

    ``domain`` holds unit directions ``u`` (the sample points are
    ``center + radius * u``).  For ``n = 2`` the samples are ordered by the
    angle parameter ``params``; for ``n = 3`` ``triangles`` indexes an
    outward-oriented mesh and ``rim`` the ordered boundary loop.
    """

    n: int
    center: np.ndarray
    radius: float
    side: str
    field: Callable = dc_field(repr=False)
    domain: np.ndarray = dc_field(repr=False)
    values: np.ndarray = dc_field(repr=False)
    raw: np.ndarray = dc_field(repr=False)
    params: Optional[np.ndarray] = dc_field(default=None, repr=False)
    orient: Optional[np.ndarray] = dc_field(default=None, repr=False)
    triangles: Optional[np.ndarray] = dc_field(default=None, repr=False)
    rim: Optional[np.ndarray] = dc_field(default=None, repr=False)
    level: int = 0
    depth: int = 0

    @property
    def closed(self) -> bool:
        return self.side == "full_sphere"

    @property
    def points(self) -> np.ndarray:
        return self.center + self.radius * self.domain

    @property
    def rim_values(self) -> np.ndarray:
        if self.closed or self.n == 1:
            return np.zeros((0, self.n))
        if self.n == 2:
            return self.values[[0, -1]]
        return self.values[self.rim]


def _eval_unit(v, pts, tol):
    raw = np.asarray(v(pts), dtype=float)
    norms = np.linalg.norm(raw, axis=-1)
    if np.any(norms < tol):
        k = int(np.argmin(norms))
        raise ZeroOnSphere(f"field vanishes (|v| = {norms[k]:.3g}) at sample {tuple(pts[k])}")
    return raw / norms[..., None], raw


def _sample_arc(v, center, radius, t0, t1, n_init, tol, closed):
    t = np.linspace(t0, t1, n_init)
    depth = np.zeros(n_init - 1, dtype=int)  # refinement depth of each interval
    while True:
        dom = np.stack([np.cos(t), np.sin(t)], axis=-1)
        vals, raw = _eval_unit(v, center + radius * dom, tol)
        gaps = angle_between(vals[:-1], vals[1:])
        bad = gaps > MAX_GAP
        if not np.any(bad):
            break
        if np.any(depth[bad] >= MAX_DEPTH):
            raise RefinementOverflow(f"angular gap {gaps.max():.3g} rad persists after {MAX_DEPTH} bisections")
        mids = 0.5 * (t[:-1] + t[1:])[bad]
        new_t = np.concatenate([t, mids])
        order = np.argsort(new_t, kind="stable")
        new_depth = []
        for k in range(len(t) - 1):
            if bad[k]:
                new_depth += [depth[k] + 1, depth[k] + 1]
            else:
                new_depth.append(depth[k])
        t = new_t[order]
        depth = np.array(new_depth, dtype=int)
    if closed:
        # last sample repeats the first point (t1 = t0 + 2 pi)
        vals[-1] = vals[0]
        raw[-1] = raw[0]
    return t, dom, vals, raw, int(depth.max(initial=0))


def normalize_map(
    v: Callable,
    a,
    eps: float,
    side: str = "hemisphere",
    tol: float = ZERO_TOL,
    level: int = BASE_LEVEL,
) -> HemisphereMap:
    """Sample ``v/|v|`` on the right hemisphere (``y1 >= a1``) or the full sphere of radius ``eps``."""
    if side not in ("hemisphere", "full_sphere"):
        raise ValueError(f"side must be 'hemisphere' or 'full_sphere', got {side!r}")
    a = np.asarray(a, dtype=float)
    n = a.size
    closed = side == "full_sphere"
    if n == 1:
        dom = np.array([[1.0], [-1.0]]) if closed else np.array([[1.0]])
        vals, raw = _eval_unit(v, a + eps * dom, tol)
        vals = np.sign(vals)
        return HemisphereMap(1, a, eps, side, v, dom, vals, raw, orient=dom[:, 0].copy())
    if n == 2:
        if closed:
            t, dom, vals, raw, depth = _sample_arc(v, a, eps, 0.0, 2 * np.pi, 129, tol, True)
        else:
            t, dom, vals, raw, depth = _sample_arc(v, a, eps, -np.pi / 2, np.pi / 2, 65, tol, False)
        return HemisphereMap(2, a, eps, side, v, dom, vals, raw, params=t, depth=depth)
    if n == 3:
        for lev in range(level, MAX_LEVEL + 1):
            V, F, rim = sphere_mesh(lev, not closed)
            vals, raw = _eval_unit(v, a + eps * V, tol)
            gap = max(
                float(np.max(angle_between(vals[F[:, i]], vals[F[:, (i + 1) % 3]]))) for i in range(3)
            )
            if gap <= MAX_GAP:
                return HemisphereMap(3, a, eps, side, v, V, vals, raw, triangles=F, rim=rim, level=lev)
        raise RefinementOverflow(f"mapped edge of {gap:.3g} rad remains at mesh level {MAX_LEVEL}")
    raise ValueError(f"dimension {n} is not supported (1, 2 or 3)")


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------

def _arc_distance(d, P, Q):
    """Angular distance from ``d`` to the short great-circle arcs ``P[k] -> Q[k]``."""
    ends = np.minimum(angle_between(P, d[None, :]), angle_between(Q, d[None, :]))
    N = np.cross(P, Q)
    nn = np.linalg.norm(N, axis=-1)
    ok = nn > 1e-15
    N = np.where(ok[:, None], N / np.where(ok, nn, 1.0)[:, None], 0.0)
    dp = d[None, :] - (N @ d)[:, None] * N
    inside = ok & (np.einsum("ij,ij->i", np.cross(P, dp), N) >= 0) & (np.einsum("ij,ij->i", np.cross(dp, Q), N) >= 0)
    perp = np.arcsin(np.clip(np.abs(N @ d), 0.0, 1.0))
    return np.where(inside, perp, ends)


def rim_margin(h: HemisphereMap, d) -> float:
    """Angular distance from ``d`` to the image of the rim (inf if there is no rim)."""
    d = unit(d)
    if h.closed or h.n == 1:
        return math.inf
    if h.n == 2:
        return float(np.min(angle_between(h.rim_values, d[None, :])))
    rv = h.rim_values
    return float(np.min(_arc_distance(d, rv, np.roll(rv, -1, axis=0))))


def is_admissible_pair(h: HemisphereMap, d, margin: float = MARGIN_MIN) -> bool:
    if h.n == 1:
        return True
    d = unit(d)
    return rim_margin(h, d) >= margin and rim_margin(h, -d) >= margin


def _check_direction(h, d, margin):
    d = unit(d)
    if d.shape != (h.n,):
        raise ValueError(f"direction must have {h.n} components")
    if h.n == 1:
        if abs(abs(d[0]) - 1.0) > 1e-12:
            raise NotAdmissibleDirection("in dimension 1 the direction must be +1 or -1")
        return np.sign(d)
    m = rim_margin(h, d)
    if m < margin:
        raise NotAdmissibleDirection(f"direction {tuple(d)} is {m:.3g} rad from the rim image (margin {margin})")
    return d


# ---------------------------------------------------------------------------
# n = 2: crossing counts on a parametrized curve
# ---------------------------------------------------------------------------

def _count_crossings(angles, alpha):
    """Signed number of times an unwrapped angle path passes ``alpha`` (mod 2 pi)."""
    k = np.floor((angles - alpha) / (2 * np.pi))
    return int(k[-1] - k[0])


def curve_intersection(values, d) -> int:
    """Signed crossings of direction ``d`` by a sampled unit-vector path in the plane."""
    ang = np.unwrap(np.arctan2(values[:, 1], values[:, 0]))
    return _count_crossings(ang, math.atan2(d[1], d[0]))


def localize_crossings(h: HemisphereMap, d, depth: int = 40):
    """Parameters and signs of the crossings of ``d``, bisected to ``depth`` levels."""
    d = unit(d)
    alpha = math.atan2(d[1], d[0])
    ang = np.unwrap(np.arctan2(h.values[:, 1], h.values[:, 0]))
    out = []

    def angle_at(t, ref):
        u = np.array([[math.cos(t), math.sin(t)]])
        w = h.field(h.center + h.radius * u)[0]
        return ref + (math.atan2(w[1], w[0]) - ref + math.pi) % (2 * math.pi) - math.pi

    def rec(t0, t1, p0, p1, lev):
        c = _count_crossings(np.array([p0, p1]), alpha)
        if c == 0 and lev > 0:
            return
        if lev >= depth:
            if c != 0:
                out.append((0.5 * (t0 + t1), int(np.sign(c)) if abs(c) == 1 else c))
            return
        tm = 0.5 * (t0 + t1)
        pm = angle_at(tm, p0)
        rec(t0, tm, p0, pm, lev + 1)
        rec(tm, t1, pm, p1, lev + 1)

    for k in range(len(h.params) - 1):
        if _count_crossings(ang[k:k + 2], alpha) != 0:
            rec(h.params[k], h.params[k + 1], ang[k], ang[k + 1], 1)
    return out


# ---------------------------------------------------------------------------
# n = 3: signed triangle counts and solid angles
# ---------------------------------------------------------------------------

def _det3(a, b, c):
    return np.einsum("ij,ij->i", a, np.cross(b, c))


def mesh_intersection(values, triangles, d) -> int:
    """Signed number of mapped triangles containing ``d``.

    Raises :class:`DegenerateTriangle` when ``d`` lies within ``EDGE_EPS``
    of a mapped edge of a candidate triangle.
    """
    A, B, C = values[triangles[:, 0]], values[triangles[:, 1]], values[triangles[:, 2]]
    # mapped edges are at most MAX_GAP long, so a triangle containing d (or
    # passing within EDGE_EPS of it) has a vertex within NEAR_ANGLE of d
    near = np.maximum(np.maximum(A @ d, B @ d), C @ d) >= math.cos(NEAR_ANGLE)
    A, B, C = A[near], B[near], C[near]
    dd = np.broadcast_to(d, A.shape)
    s0 = _det3(A, B, C)
    s1 = _det3(dd, B, C)
    s2 = _det3(A, dd, C)
    s3 = _det3(A, B, dd)
    # distances of d to the three edge planes
    e1 = np.abs(s1) / np.maximum(np.linalg.norm(np.cross(B, C), axis=-1), 1e-300)
    e2 = np.abs(s2) / np.maximum(np.linalg.norm(np.cross(C, A), axis=-1), 1e-300)
    e3 = np.abs(s3) / np.maximum(np.linalg.norm(np.cross(A, B), axis=-1), 1e-300)
    sg = np.sign(s0)
    weak = (np.sign(s1) * sg >= 0) | (e1 < EDGE_EPS)
    weak &= (np.sign(s2) * sg >= 0) | (e2 < EDGE_EPS)
    weak &= (np.sign(s3) * sg >= 0) | (e3 < EDGE_EPS)
    touching = weak & (np.minimum(np.minimum(e1, e2), e3) < EDGE_EPS)
    if np.any(touching):
        raise DegenerateTriangle(f"direction {tuple(d)} lies on a mapped edge")
    inside = (np.sign(s1) == sg) & (np.sign(s2) == sg) & (np.sign(s3) == sg) & (sg != 0)
    return int(np.sum(sg[inside]))


def solid_angles(A, B, C):
    num = _det3(A, B, C)
    den = 1.0 + np.einsum("ij,ij->i", A, B) + np.einsum("ij,ij->i", B, C) + np.einsum("ij,ij->i", C, A)
    return 2.0 * np.arctan2(num, den)


def solid_angle_degree(values, triangles, cone=None) -> int:
    """Degree of a closed triangulated surface from its total signed solid angle.

    ``cone`` = (apex, boundary edges) closes an open surface by coning its
    boundary edges to ``apex``.
    """
    A, B, C = values[triangles[:, 0]], values[triangles[:, 1]], values[triangles[:, 2]]
    total = float(np.sum(solid_angles(A, B, C)))
    if cone is not None:
        apex, P, Q = cone
        ap = np.broadcast_to(apex, P.shape)
        total += float(np.sum(solid_angles(ap, Q, P)))
    deg = total / (4 * np.pi)
    if abs(deg - round(deg)) > 0.05:
        raise RefinementOverflow(f"solid-angle sum {deg:.4f} is not close to an integer")
    return int(round(deg))


def _jitter(d, k):
    """``d`` moved by 2e-5 rad; the direction of the move turns by the golden angle with ``k``.

    Turning the direction matters at mesh vertices: a fixed tangent direction
    can run exactly along a mesh edge, and then every retry stays on it.
    """
    t1 = np.cross(d, [0.3, 0.5, 0.8])
    t1 = unit(t1) if np.linalg.norm(t1) > 1e-6 else unit(np.cross(d, [1.0, 0, 0]))
    t2 = np.cross(d, t1)
    phi = 0.7 + 2.399963229728653 * k
    w = math.cos(phi) * t1 + math.sin(phi) * t2
    ang = 2e-5
    return unit(d * math.cos(ang) + w * math.sin(ang))


JITTER_TRIES = 8


def robust_mesh_intersection(values_fn, triangles, d):
    """``mesh_intersection`` with deterministic sub-margin perturbation of ``d`` on edge hits."""
    for k in range(JITTER_TRIES):
        dk = d if k == 0 else _jitter(d, k)
        try:
            return mesh_intersection(values_fn, triangles, dk)
        except DegenerateTriangle:
            continue
    raise DegenerateTriangle(f"direction {tuple(d)} stays on mapped edges after perturbation")


# ---------------------------------------------------------------------------
# public degree operations
# ---------------------------------------------------------------------------

def intersection_number(h: HemisphereMap, d, margin: float = MARGIN_MIN) -> int:
    """Algebraic intersection number of the sampled map with the point ``d``."""
    d = _check_direction(h, d, margin)
    if h.n == 1:
        hit = h.values[:, 0] == d[0]
        return int(np.sum(h.orient[hit]) * d[0])
    if h.n == 2:
        return curve_intersection(h.values, d)
    try:
        return mesh_intersection(h.values, h.triangles, d)
    except DegenerateTriangle:
        pass
    if h.level < MAX_LEVEL:
        finer = normalize_map(h.field, h.center, h.radius, h.side, level=h.level + 1)
        try:
            return mesh_intersection(finer.values, finer.triangles, d)
        except DegenerateTriangle:
            pass
    return robust_mesh_intersection(h.values, h.triangles, d)


def averaged_index(h: HemisphereMap, d, margin: float = MARGIN_MIN) -> HalfInt:
    """``(i(d) + i(-d)) / 2`` as an exact half-integer."""
    d = unit(d)
    if not is_admissible_pair(h, d, margin):
        raise NotAdmissiblePair(f"pair +/-{tuple(d)} is not admissible")
    return HalfInt(intersection_number(h, d, margin) + intersection_number(h, -d, margin))


def _random_directions(n, count, seed):
    rng = np.random.default_rng(seed)
    return unit(rng.normal(size=(count, n)))


def full_sphere_degree(h: HemisphereMap, d=None, seed: int = 0) -> int:
    """Degree of the normalized map on a full sphere; checked at three extra directions."""
    if not h.closed:
        raise ValueError("full_sphere_degree needs a full-sphere map")
    if h.n == 1:
        return intersection_number(h, [1.0])
    dirs = [unit(d)] if d is not None else []
    dirs += list(_random_directions(h.n, 3, seed))
    degs = [intersection_number(h, dd) for dd in dirs]
    if len(set(degs)) != 1:
        if h.n == 3 and h.level < MAX_LEVEL:
            finer = normalize_map(h.field, h.center, h.radius, h.side, level=h.level + 1)
            degs = [intersection_number(finer, dd) for dd in dirs]
        if len(set(degs)) != 1:
            raise DirectionDisagreement(f"degree depends on direction: {degs}")
    return degs[0]


def oracle_degree(h: HemisphereMap, d, margin: float = MARGIN_MIN) -> int:
    """Independent recomputation of :func:`intersection_number`.

    n = 2: dense uniform resampling (``ORACLE_SAMPLES`` points) and explicit
    crossing events.  n = 3: total signed solid angle of the mapped mesh,
    closed by coning the rim image to ``-d`` for hemispheres.
    """
    d = _check_direction(h, d, margin)
    if h.n == 1:
        total = 0
        for u, s in zip(h.domain[:, 0], h.orient):
            w = np.sign(h.field(h.center + h.radius * np.array([u]))[0])
            total += int(s) if w == d[0] else 0
        return total * int(d[0])
    if h.n == 2:
        if h.closed:
            t = np.linspace(0.0, 2 * np.pi, ORACLE_SAMPLES)
        else:
            t = np.linspace(-np.pi / 2, np.pi / 2, ORACLE_SAMPLES)
        w = np.asarray(h.field(h.center + h.radius * np.stack([np.cos(t), np.sin(t)], axis=-1)))
        ang = np.arctan2(w[:, 1], w[:, 0])
        alpha = math.atan2(d[1], d[0])
        psi = (ang - alpha + np.pi) % (2 * np.pi) - np.pi
        step = np.diff(ang)
        step = (step + np.pi) % (2 * np.pi) - np.pi
        if np.max(np.abs(step)) > np.pi / 2:
            raise RefinementOverflow("dense oracle sampling is too coarse for this map")
        p0, p1 = psi[:-1], psi[1:]
        near = np.abs(p1 - p0) < np.pi
        up = near & (p0 < 0) & (p1 >= 0)
        down = near & (p1 < 0) & (p0 >= 0)
        return int(np.sum(up) - np.sum(down))
    cone = None
    if not h.closed:
        rv = h.values[h.rim]
        cone = (-d, rv, np.roll(rv, -1, axis=0))
    return solid_angle_degree(h.values, h.triangles, cone)
