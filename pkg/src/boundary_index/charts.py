"""Model manifolds, boundary-adapted charts and zero location.

Every boundary chart sends the boundary to the hyperplane ``y1 = 1`` and
the interior to ``y1 > 1``; the center of the chart goes to
``a = (1, 0, ..., 0)``.  The remaining coordinates run along the boundary.
At the chart center the differential is an isometry, so the chart-Euclidean
metric agrees with the ambient one there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy import ndimage

from .errors import (
    AmbiguousType,
    ChartRadiusTooSmall,
    ConvergenceFailure,
    DomainError,
    NonIsolatedZero,
    NotOnBoundary,
)
from .fieldlang import FieldDef, eval_field

DEFAULT_TOL = 1e-8
DEFAULT_SPACING = 0.02
BOUNDARY_TOL = 1e-9
METRIC_NOTE = "chart-Euclidean metric of the canonical boundary charts (orthonormal at each chart center)"


def _wrap(angle):
    return (np.asarray(angle) + np.pi) % (2 * np.pi) - np.pi


# ---------------------------------------------------------------------------
# boundary charts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryChart:
    """Local coordinates ``y`` around a boundary point ``center``.

    ``to_chart``/``from_chart``/``differential`` are vectorized over leading
    axes.  ``differential(x)`` is the Jacobian of ``to_chart`` at ``x`` and
    pushes ambient vectors at ``x`` to chart vectors.
    """

    center: tuple
    n: int
    component: int
    to_chart: Callable
    from_chart: Callable
    differential: Callable
    orientation_sign: int
    max_radius: float

    @property
    def a(self) -> np.ndarray:
        a = np.zeros(self.n)
        a[0] = 1.0
        return a

    def pushforward(self, f: FieldDef) -> Callable:
        return pushforward_field(self, f)


class _Component:
    """Geometry of one boundary component."""

    dim: int  # dimension of the manifold
    euler: int

    def depth(self, x):  # positive inside the manifold
        raise NotImplementedError

    def inward_normal(self, x):
        raise NotImplementedError

    def project(self, x):
        raise NotImplementedError

    def grid(self, h):
        """Boundary sample points, grid shape and which axes wrap around."""
        raise NotImplementedError

    def _maps(self, p, flip):
        raise NotImplementedError

    def chart_at(self, p, cid, max_radius) -> BoundaryChart:
        p = np.asarray(self.project(np.asarray(p, dtype=float)), dtype=float)
        to, frm, jac = self._maps(p, 1.0)
        sign = int(np.sign(np.linalg.det(jac(p))))
        if sign < 0 and self.dim > 1:
            to, frm, jac = self._maps(p, -1.0)
            sign = int(np.sign(np.linalg.det(jac(p))))
        return BoundaryChart(tuple(float(c) for c in p), self.dim, cid, to, frm, jac, sign, max_radius)


class PointComponent(_Component):
    """An endpoint of an interval; ``inward`` is +1 or -1."""

    def __init__(self, c, inward):
        self.dim = 1
        self.euler = 1
        self.c = float(c)
        self.s = float(inward)

    def depth(self, x):
        return self.s * (np.asarray(x)[..., 0] - self.c)

    def inward_normal(self, x):
        return np.full(np.shape(x), self.s)

    def project(self, x):
        return np.full(np.shape(x), self.c)

    def grid(self, h):
        return np.array([[self.c]]), (1,), (False,)

    def _maps(self, p, flip):
        c, s = self.c, self.s

        def to(x):
            return 1.0 + s * (np.asarray(x, dtype=float) - c)

        def frm(y):
            return c + s * (np.asarray(y, dtype=float) - 1.0)

        def jac(x):
            x = np.asarray(x, dtype=float)
            return np.broadcast_to(np.array([[s]]), x.shape[:-1] + (1, 1)).copy()

        return to, frm, jac


class CircleComponent(_Component):
    """Circle of radius ``R`` about ``c``; ``sigma=+1`` bounds the outside, -1 a hole."""

    def __init__(self, c, R, sigma):
        self.dim = 2
        self.euler = 0
        self.c = np.asarray(c, dtype=float)
        self.R = float(R)
        self.sigma = float(sigma)

    def _polar(self, x):
        d = np.asarray(x, dtype=float) - self.c
        return d, np.hypot(d[..., 0], d[..., 1])

    def depth(self, x):
        _, r = self._polar(x)
        return self.sigma * (self.R - r)

    def inward_normal(self, x):
        d, r = self._polar(x)
        return -self.sigma * d / r[..., None]

    def project(self, x):
        d, r = self._polar(x)
        return self.c + self.R * d / r[..., None]

    def grid(self, h):
        n = max(32, int(math.ceil(2 * math.pi * self.R / h)))
        th = 2 * math.pi * np.arange(n) / n
        pts = self.c + self.R * np.stack([np.cos(th), np.sin(th)], axis=-1)
        return pts, (n,), (True,)

    def _maps(self, p, flip):
        c, R, sg = self.c, self.R, self.sigma
        d0 = p - c
        th0 = math.atan2(d0[1], d0[0])

        def to(x):
            d = np.asarray(x, dtype=float) - c
            r = np.hypot(d[..., 0], d[..., 1])
            th = np.arctan2(d[..., 1], d[..., 0])
            return np.stack([1.0 + sg * (R - r), flip * R * _wrap(th - th0)], axis=-1)

        def frm(y):
            y = np.asarray(y, dtype=float)
            r = R - sg * (y[..., 0] - 1.0)
            th = th0 + y[..., 1] / (flip * R)
            return c + np.stack([r * np.cos(th), r * np.sin(th)], axis=-1)

        def jac(x):
            d = np.asarray(x, dtype=float) - c
            r = np.hypot(d[..., 0], d[..., 1])
            u = d / r[..., None]
            t = np.stack([-u[..., 1], u[..., 0]], axis=-1)
            row1 = -sg * u
            row2 = (flip * R / r)[..., None] * t
            return np.stack([row1, row2], axis=-2)

        return to, frm, jac


class SphereComponent(_Component):
    """Boundary sphere of a ball of radius ``R`` about ``c``."""

    def __init__(self, c, R):
        self.dim = 3
        self.euler = 2
        self.c = np.asarray(c, dtype=float)
        self.R = float(R)

    def depth(self, x):
        d = np.asarray(x, dtype=float) - self.c
        return self.R - np.linalg.norm(d, axis=-1)

    def inward_normal(self, x):
        d = np.asarray(x, dtype=float) - self.c
        return -d / np.linalg.norm(d, axis=-1)[..., None]

    def project(self, x):
        d = np.asarray(x, dtype=float) - self.c
        return self.c + self.R * d / np.linalg.norm(d, axis=-1)[..., None]

    def grid(self, h):
        nt = max(16, int(math.ceil(math.pi * self.R / h))) + 1
        npz = max(32, int(math.ceil(2 * math.pi * self.R / h)))
        th = np.linspace(0.0, math.pi, nt)
        ph = 2 * math.pi * np.arange(npz) / npz
        T, P = np.meshgrid(th, ph, indexing="ij")
        pts = self.c + self.R * np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1)
        return pts.reshape(-1, 3), (nt, npz), (False, True)

    def _maps(self, p, flip):
        c, R = self.c, self.R
        up = (p - c) / np.linalg.norm(p - c)
        k = int(np.argmin(np.abs(up)))
        e = np.zeros(3)
        e[k] = 1.0
        t1 = e - up * (e @ up)
        t1 /= np.linalg.norm(t1)
        t2 = np.cross(t1, up) * flip

        def to(x):
            d = np.asarray(x, dtype=float) - c
            r = np.linalg.norm(d, axis=-1)
            u = d / r[..., None]
            return np.stack([1.0 + R - r, R * (u @ t1), R * (u @ t2)], axis=-1)

        def frm(y):
            y = np.asarray(y, dtype=float)
            s = y[..., 1] / R
            q = y[..., 2] / R
            w = np.sqrt(np.clip(1.0 - s * s - q * q, 0.0, None))
            u = w[..., None] * up + s[..., None] * t1 + q[..., None] * t2
            r = R - (y[..., 0] - 1.0)
            return c + r[..., None] * u

        def jac(x):
            d = np.asarray(x, dtype=float) - c
            r = np.linalg.norm(d, axis=-1)
            u = d / r[..., None]
            rows = [-u]
            for t in (t1, t2):
                rows.append((R / r)[..., None] * (t - (u @ t)[..., None] * u))
            return np.stack(rows, axis=-2)

        return to, frm, jac


class TorusComponent(_Component):
    """Boundary torus of the solid torus with core radius ``R`` and tube radius ``rho``."""

    def __init__(self, R, rho):
        self.dim = 3
        self.euler = 0
        self.R = float(R)
        self.rho = float(rho)

    def _tube(self, x):
        x = np.asarray(x, dtype=float)
        rc = np.hypot(x[..., 0], x[..., 1])
        a = rc - self.R
        s = np.hypot(a, x[..., 2])
        return x, rc, a, s

    def depth(self, x):
        return self.rho - self._tube(x)[3]

    def inward_normal(self, x):
        x, rc, a, s = self._tube(x)
        er = np.stack([x[..., 0] / rc, x[..., 1] / rc, np.zeros_like(rc)], axis=-1)
        ez = np.zeros_like(er)
        ez[..., 2] = 1.0
        return -((a / s)[..., None] * er + (x[..., 2] / s)[..., None] * ez)

    def project(self, x):
        x, rc, a, s = self._tube(x)
        er = np.stack([x[..., 0] / rc, x[..., 1] / rc, np.zeros_like(rc)], axis=-1)
        core = self.R * er
        off = np.stack([a * er[..., 0], a * er[..., 1], x[..., 2]], axis=-1)
        return core + self.rho * off / s[..., None]

    def grid(self, h):
        n1 = max(32, int(math.ceil(2 * math.pi * (self.R + self.rho) / h)))
        n2 = max(16, int(math.ceil(2 * math.pi * self.rho / h)))
        ph = 2 * math.pi * np.arange(n1) / n1
        ps = 2 * math.pi * np.arange(n2) / n2
        P, S = np.meshgrid(ph, ps, indexing="ij")
        rr = self.R + self.rho * np.cos(S)
        pts = np.stack([rr * np.cos(P), rr * np.sin(P), self.rho * np.sin(S)], axis=-1)
        return pts.reshape(-1, 3), (n1, n2), (True, True)

    def _maps(self, p, flip):
        R, rho = self.R, self.rho
        phi0 = math.atan2(p[1], p[0])
        a0 = math.hypot(p[0], p[1]) - R
        psi0 = math.atan2(p[2], a0)
        L = R + rho * math.cos(psi0)

        def to(x):
            x = np.asarray(x, dtype=float)
            rc = np.hypot(x[..., 0], x[..., 1])
            a = rc - R
            s = np.hypot(a, x[..., 2])
            phi = np.arctan2(x[..., 1], x[..., 0])
            psi = np.arctan2(x[..., 2], a)
            return np.stack([1.0 + rho - s, flip * L * _wrap(phi - phi0), rho * _wrap(psi - psi0)], axis=-1)

        def frm(y):
            y = np.asarray(y, dtype=float)
            s = rho - (y[..., 0] - 1.0)
            phi = phi0 + y[..., 1] / (flip * L)
            psi = psi0 + y[..., 2] / rho
            rr = R + s * np.cos(psi)
            return np.stack([rr * np.cos(phi), rr * np.sin(phi), s * np.sin(psi)], axis=-1)

        def jac(x):
            x = np.asarray(x, dtype=float)
            rc = np.hypot(x[..., 0], x[..., 1])
            a = rc - R
            z = x[..., 2]
            s = np.hypot(a, z)
            zero = np.zeros_like(rc)
            drc = np.stack([x[..., 0] / rc, x[..., 1] / rc, zero], axis=-1)
            ez = np.stack([zero, zero, zero + 1.0], axis=-1)
            dphi = np.stack([-x[..., 1] / rc**2, x[..., 0] / rc**2, zero], axis=-1)
            ds = (a / s)[..., None] * drc + (z / s)[..., None] * ez
            dpsi = (a / s**2)[..., None] * ez - (z / s**2)[..., None] * drc
            return np.stack([-ds, flip * L * dphi, rho * dpsi], axis=-2)

        return to, frm, jac


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryInfo:
    id: int
    euler: int
    geometry: _Component = field(repr=False, compare=False)


@dataclass(frozen=True)
class ModelManifold:
    name: str
    dim: int
    euler: int
    ambient_dim: int
    boundary_components: tuple
    bbox: tuple = field(repr=False)
    max_chart_radius: float = field(default=0.2, repr=False)

    @property
    def boundary_euler(self) -> int:
        return sum(b.euler for b in self.boundary_components)

    def depth(self, x) -> np.ndarray:
        return np.min(np.stack([b.geometry.depth(x) for b in self.boundary_components]), axis=0)

    def nearest_component(self, x) -> int:
        d = [np.abs(b.geometry.depth(x)) for b in self.boundary_components]
        return int(np.argmin(d))

    def contains(self, x, tol=0.0) -> bool:
        return bool(self.depth(np.asarray(x, dtype=float)) >= -tol)

    def component(self, cid) -> BoundaryInfo:
        return self.boundary_components[cid]


def _make(name, dim, euler, comps, bbox, max_r):
    infos = tuple(BoundaryInfo(i, c.euler, c) for i, c in enumerate(comps))
    return ModelManifold(name, dim, euler, dim, infos, bbox, max_r)


def catalog() -> list[ModelManifold]:
    return [
        _make("interval", 1, 1, [PointComponent(0.0, +1), PointComponent(1.0, -1)], ((0.0, 1.0),), 0.45),
        _make("disk2", 2, 1, [CircleComponent((0, 0), 1.0, +1)], ((-1.0, 1.0),) * 2, 0.5),
        _make(
            "annulus", 2, 0,
            [CircleComponent((0, 0), 2.0, +1), CircleComponent((0, 0), 1.0, -1)],
            ((-2.0, 2.0),) * 2, 0.45,
        ),
        _make(
            "pants", 2, -1,
            [CircleComponent((0, 0), 2.0, +1), CircleComponent((-1, 0), 0.5, -1), CircleComponent((1, 0), 0.5, -1)],
            ((-2.0, 2.0),) * 2, 0.2,
        ),
        _make("ball3", 3, 1, [SphereComponent((0, 0, 0), 1.0)], ((-1.0, 1.0),) * 3, 0.5),
        _make("solidtorus", 3, 0, [TorusComponent(2.0, 1.0)], ((-3.0, 3.0), (-3.0, 3.0), (-1.0, 1.0)), 0.5),
    ]


def get_manifold(name: str) -> ModelManifold:
    for m in catalog():
        if m.name == name:
            return m
    names = ", ".join(m.name for m in catalog())
    raise KeyError(f"unknown manifold {name!r}; choose one of {names}")


# ---------------------------------------------------------------------------
# charts and boundary decomposition
# ---------------------------------------------------------------------------

def boundary_chart(m: ModelManifold, p, radius: Optional[float] = None) -> BoundaryChart:
    p = np.asarray(p, dtype=float)
    cid = m.nearest_component(p)
    geom = m.boundary_components[cid].geometry
    dist = abs(float(geom.depth(p)))
    if dist > BOUNDARY_TOL:
        raise NotOnBoundary(f"point {tuple(p)} is {dist:.3g} away from the boundary of {m.name}")
    if radius is not None and radius > m.max_chart_radius:
        raise ChartRadiusTooSmall(
            f"requested chart radius {radius} exceeds {m.max_chart_radius} on {m.name}"
        )
    return geom.chart_at(p, cid, m.max_chart_radius)


def pushforward_field(c: BoundaryChart, f: FieldDef) -> Callable:
    """Chart-local field ``v(y) = D(to_chart) f(from_chart(y))``."""

    def v(y):
        x = c.from_chart(y)
        return np.einsum("...ij,...j->...i", c.differential(x), eval_field(f, x))

    return v


@dataclass(frozen=True)
class BoundaryDecomposition:
    tangential: np.ndarray  # chart vector (0, v2, ..., vn)
    normal: np.ndarray  # chart vector (v1, 0, ..., 0); v1 > 0 points inward


def boundary_decompose(c: BoundaryChart, f: FieldDef, q) -> BoundaryDecomposition:
    q = np.asarray(q, dtype=float)
    y = c.to_chart(q)
    if abs(y[0] - 1.0) > BOUNDARY_TOL:
        raise NotOnBoundary(f"point {tuple(q)} is not on the boundary (y1 = {y[0]!r})")
    v = pushforward_field(c, f)(y)
    tang = v.copy()
    tang[0] = 0.0
    norm = np.zeros_like(v)
    norm[0] = v[0]
    return BoundaryDecomposition(tang, norm)


# ---------------------------------------------------------------------------
# zero records
# ---------------------------------------------------------------------------

class ZeroKind(str, Enum):
    INTERIOR = "interior_zero_of_V"
    BOUNDARY = "boundary_zero_of_V"
    BOUNDARY_FIELD = "zero_of_boundary_field"
    NORMAL_FIELD = "zero_of_normal_field"


class ZeroType(str, Enum):
    PLUS = "plus"
    MINUS = "minus"
    ZERO = "zero"
    NA = "not_applicable"


@dataclass(frozen=True)
class ZeroRecord:
    location: tuple
    kind: ZeroKind
    type_tag: ZeroType
    isolation_radius: float
    residual: float
    component: Optional[int] = None

    @property
    def point(self) -> np.ndarray:
        return np.asarray(self.location, dtype=float)


def sphere_directions(dim: int, count: int) -> np.ndarray:
    """Deterministic, roughly uniform unit vectors in R^dim."""
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        t = 2 * np.pi * (np.arange(count) + 0.5) / count
        return np.stack([np.cos(t), np.sin(t)], axis=-1)
    k = np.arange(count) + 0.5
    z = 1 - 2 * k / count
    phi = np.pi * (1 + 5**0.5) * k
    r = np.sqrt(1 - z * z)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)


# ---------------------------------------------------------------------------
# zero finding
# ---------------------------------------------------------------------------

def _fd_jacobian(g, y, step=1e-6):
    y = np.asarray(y, dtype=float)
    k = y.size
    pts = np.repeat(y[None, :], 2 * k, axis=0)
    for i in range(k):
        pts[2 * i, i] += step
        pts[2 * i + 1, i] -= step
    vals = g(pts)
    return ((vals[0::2] - vals[1::2]) / (2 * step)).T


def _newton(g, y0, max_iter=60, step_tol=1e-12):
    """Damped Gauss-Newton on ``|g|^2``; returns (y, residual)."""
    y = np.asarray(y0, dtype=float).copy()
    r = g(y[None, :])[0]
    res = float(np.linalg.norm(r))
    for _ in range(max_iter):
        if res == 0.0:
            break
        J = _fd_jacobian(g, y)
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        alpha = 1.0
        improved = False
        for _ in range(30):
            y_new = y + alpha * step
            try:
                r_new = g(y_new[None, :])[0]
            except DomainError:
                alpha *= 0.5
                continue
            res_new = float(np.linalg.norm(r_new))
            if res_new < res:
                improved = True
                break
            alpha *= 0.5
        if not improved:
            break
        moved = float(np.linalg.norm(alpha * step))
        y, r, res = y_new, r_new, res_new
        if moved < step_tol:
            break
    return y, res


def _candidates(values, shape, periodic, tol):
    """Indices of grid-local minima of ``values`` that are plausibly zeros.

    Returns one representative (the smallest value) per connected cluster.
    """
    vals = values.reshape(shape)
    finite = np.isfinite(vals)
    mode = ["wrap" if p else "nearest" for p in periodic]
    lo = ndimage.minimum_filter(vals, size=3, mode=mode)
    hi = ndimage.maximum_filter(np.where(finite, vals, -np.inf), size=3, mode=mode)
    is_min = finite & (vals <= lo)
    plausible = vals <= np.maximum(np.sqrt(tol), 2.0 * (hi - vals))
    mask = is_min & plausible
    labels, count = ndimage.label(mask, structure=np.ones((3,) * vals.ndim))
    if count == 0:
        return np.array([], dtype=int)
    idx = ndimage.minimum_position(vals, labels, index=np.arange(1, count + 1))
    flat = [int(np.ravel_multi_index(i, shape)) for i in idx]
    return np.array(sorted(flat), dtype=int)


def _dedupe(points, residuals, radius):
    order = np.argsort(residuals, kind="stable")
    kept = []
    for i in order:
        if all(np.linalg.norm(points[i] - points[j]) > radius for j in kept):
            kept.append(i)
    return sorted(kept)


def _interior_grid(m, h):
    axes = [np.arange(lo, hi + 0.5 * h, h) for lo, hi in m.bbox]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack(mesh, axis=-1)
    return pts.reshape(-1, m.ambient_dim), pts.shape[:-1]


def _boundary_values(m, f, cid, pts, which):
    geom = m.boundary_components[cid].geometry
    vals = eval_field(f, pts)
    nu = geom.inward_normal(pts)
    normal = np.sum(vals * nu, axis=-1)
    if which == ZeroKind.NORMAL_FIELD:
        return np.abs(normal)
    if which == ZeroKind.BOUNDARY_FIELD:
        return np.linalg.norm(vals - normal[..., None] * nu, axis=-1)
    return np.linalg.norm(vals, axis=-1)


def _selector(which, n):
    if which == ZeroKind.NORMAL_FIELD:
        return slice(0, 1)
    if which == ZeroKind.BOUNDARY_FIELD:
        return slice(1, n)
    return slice(0, n)


def _refine_on_boundary(m, f, cid, p0, which):
    """Newton in boundary coordinates, re-centering the chart every step."""
    geom = m.boundary_components[cid].geometry
    n = m.dim
    sel = _selector(which, n)
    p = np.asarray(geom.project(np.asarray(p0, dtype=float)), dtype=float)
    res = np.inf
    for _ in range(60):
        c = geom.chart_at(p, cid, m.max_chart_radius)
        v = pushforward_field(c, f)

        def g(yt):
            y = np.concatenate([np.ones(yt.shape[:-1] + (1,)), yt], axis=-1)
            return v(y)[..., sel]

        yt, res = _newton(g, np.zeros(n - 1), max_iter=1)
        moved = float(np.linalg.norm(yt))
        p = np.asarray(geom.project(c.from_chart(np.concatenate([[1.0], yt]))), dtype=float)
        if moved < 1e-12 or res == 0.0:
            break
    c = geom.chart_at(p, cid, m.max_chart_radius)
    res = float(np.linalg.norm(pushforward_field(c, f)(c.a)[sel]))
    return p, res


def _certificate(m, f, rec_point, which, cid, r, tol):
    """True when the selected field is bounded away from zero on the radius-r sphere."""
    n = m.dim
    if which == ZeroKind.INTERIOR:
        dirs = sphere_directions(n, 64 * n)
        vals = eval_field(f, rec_point + r * dirs)
        return bool(np.min(np.linalg.norm(vals, axis=-1)) > tol)
    c = boundary_chart(m, rec_point)
    v = pushforward_field(c, f)
    if which == ZeroKind.BOUNDARY:
        dirs = sphere_directions(n, 64 * n)
        dirs = dirs[dirs[:, 0] >= 0]
        if n == 1:
            dirs = np.array([[1.0]])
        vals = v(c.a + r * dirs)
        return bool(np.min(np.linalg.norm(vals, axis=-1)) > tol)
    tdirs = sphere_directions(n - 1, 64 * n)
    y = np.concatenate([np.ones((len(tdirs), 1)), r * tdirs], axis=-1)
    vals = v(y)
    if which == ZeroKind.BOUNDARY_FIELD:
        return bool(np.min(np.linalg.norm(vals[:, 1:], axis=-1)) > tol)
    normal = vals[:, 0]
    if np.min(np.abs(normal)) <= tol:
        return False
    if n - 1 == 1:
        return True
    # a scalar on a surface has a zero curve wherever it changes sign
    return bool(np.all(normal > 0) or np.all(normal < 0))


def _isolation_radius(m, f, point, which, cid, tol, r_max=0.1):
    cap = r_max
    if which == ZeroKind.INTERIOR:
        cap = min(cap, 0.99 * float(m.depth(point)))
    else:
        cap = min(cap, 0.9 * m.max_chart_radius)
    r = cap
    for _ in range(21):
        if _certificate(m, f, point, which, cid, r, tol):
            return r
        r *= 0.5
    return None


def classify_boundary_zero(c: BoundaryChart, f: FieldDef, z, tol: float = DEFAULT_TOL) -> ZeroType:
    """Type of a zero of the boundary field: plus (outward), minus (inward), zero."""
    point = z.point if isinstance(z, ZeroRecord) else np.asarray(z, dtype=float)
    v = pushforward_field(c, f)(c.to_chart(point))
    if np.linalg.norm(v) < tol / 10:
        return ZeroType.ZERO
    normal = float(v[0])
    if abs(normal) <= tol:
        raise AmbiguousType(
            f"normal component {normal:.3g} at {tuple(point)} lies in the ambiguous band ({tol / 10:.1e}, {tol:.1e}]"
        )
    return ZeroType.PLUS if normal < 0 else ZeroType.MINUS


def find_zeros(
    m: ModelManifold,
    f: FieldDef,
    which,
    tol: float = DEFAULT_TOL,
    h: float = DEFAULT_SPACING,
    hints=(),
) -> list[ZeroRecord]:
    """Locate and certify the zeros of V, of its boundary field, or of its normal field.

    ``which`` is a :class:`ZeroKind`.  Grid-local minima of the selected norm
    seed a damped Newton iteration; refined points within ``4h`` are merged.
    Each record carries the largest radius (at most 0.1) on whose sphere the
    selected field stays above ``tol``.
    """
    which = ZeroKind(which)
    n = m.dim
    found = []  # (point, residual, cid)

    if which == ZeroKind.INTERIOR:
        pts, shape = _interior_grid(m, h)
        depth = m.depth(pts)
        vals = np.linalg.norm(eval_field(f, pts), axis=-1)
        vals = np.where(depth >= 0, vals, np.inf)
        seeds = [pts[i] for i in _candidates(vals, shape, (False,) * n, tol)]
        seeds += [np.asarray(hp, dtype=float) for hp in hints]
        for seed in seeds:
            g = lambda x: eval_field(f, x)
            try:
                z, res = _newton(g, seed)
            except DomainError:
                continue
            inside = float(m.depth(z))
            if res < tol and inside > 1e-7:
                found.append((z, res, None))
            elif np.linalg.norm(eval_field(f, seed)) < np.sqrt(tol) and res >= tol:
                raise ConvergenceFailure(f"Newton failed to converge from {tuple(seed)} (residual {res:.3g})")
    elif n == 1:
        for b in m.boundary_components:
            p = np.array([b.geometry.c])
            c = b.geometry.chart_at(p, b.id, m.max_chart_radius)
            v = pushforward_field(c, f)(c.a)
            if which == ZeroKind.BOUNDARY_FIELD:
                found.append((p, 0.0, b.id))
            elif abs(v[0]) < tol:
                found.append((p, abs(float(v[0])), b.id))
    else:
        for b in m.boundary_components:
            pts, shape, periodic = b.geometry.grid(h)
            vals = _boundary_values(m, f, b.id, pts, which)
            seeds = [pts[i] for i in _candidates(vals, shape, periodic, tol)]
            for hp in hints:
                hp = np.asarray(hp, dtype=float)
                if abs(float(b.geometry.depth(hp))) < 4 * h:
                    seeds.append(hp)
            for seed in seeds:
                try:
                    z, res = _refine_on_boundary(m, f, b.id, seed, which)
                except DomainError:
                    continue
                if res < tol:
                    found.append((z, res, b.id))
                elif _boundary_values(m, f, b.id, seed[None, :], which)[0] < np.sqrt(tol):
                    raise ConvergenceFailure(
                        f"boundary Newton failed to converge from {tuple(seed)} (residual {res:.3g})"
                    )

    if not found:
        return []
    points = np.array([p for p, _, _ in found])
    residuals = np.array([r for _, r, _ in found])
    keep = _dedupe(points, residuals, 4 * h)

    records = []
    for i in keep:
        point, res, cid = found[i]
        if n == 1 and which != ZeroKind.INTERIOR:
            iso = 0.1
        else:
            iso = _isolation_radius(m, f, point, which, cid, tol)
            if iso is None:
                raise NonIsolatedZero(which.value, [point], "isolation certificate failed at every radius")
        type_tag = ZeroType.NA
        if which == ZeroKind.BOUNDARY_FIELD:
            c = boundary_chart(m, point)
            type_tag = classify_boundary_zero(c, f, point, tol)
        elif which == ZeroKind.BOUNDARY:
            type_tag = ZeroType.ZERO
        records.append(ZeroRecord(tuple(float(x) for x in point), which, type_tag, iso, float(res), cid))

    # no two certified zeros of one kind closer than twice their isolation radii
    out = []
    for r in records:
        others = [np.linalg.norm(r.point - s.point) for s in records if s is not r]
        iso = r.isolation_radius
        if others:
            iso = min(iso, 0.49 * min(others))
        out.append(ZeroRecord(r.location, r.kind, r.type_tag, iso, r.residual, r.component))
    return sorted(out, key=lambda r: tuple(round(x, 9) for x in r.location))
