"""Local and global indices assembled from the degree engine.

Local indices at boundary points are computed in the canonical boundary
chart, where the boundary is ``y1 = 1`` and the chart center is
``a = (1, 0, ..., 0)``.  All returned values are exact (:class:`HalfInt`
or ``int``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .charts import (
    DEFAULT_SPACING,
    DEFAULT_TOL,
    ModelManifold,
    ZeroKind,
    ZeroRecord,
    ZeroType,
    boundary_chart,
    find_zeros,
    pushforward_field,
)
from .degree import (
    MARGIN_MIN,
    averaged_index,
    full_sphere_degree,
    intersection_number,
    is_admissible_pair,
    normalize_map,
    rim_margin,
    unit,
)
from .errors import (
    EquatorDisagreement,
    HypothesisViolated,
    InadmissibleAtAllScales,
    NotAdmissibleDirection,
    ZeroOnSphere,
)
from .fieldlang import FieldDef, eval_field
from .halfint import ZERO, HalfInt

EPS_MAX = 0.05
MAX_HALVINGS = 20
EQUATOR_CHECKS = 4
EQUATOR_SEED = 20240611
CLASSIFY_SAMPLES = 256


@dataclass(frozen=True)
class IndexDetail:
    """A local index together with the numerical provenance of its computation."""

    value: HalfInt
    kind: str
    point: tuple
    eps: float
    halvings: int
    directions: tuple
    margin: float
    refinement: int

    def to_json(self) -> dict:
        return {
            "value": self.value.to_json(),
            "kind": self.kind,
            "point": list(self.point),
            "eps": self.eps,
            "halvings": self.halvings,
            "directions": [list(d) for d in self.directions],
            "rim_margin": None if self.margin == float("inf") else self.margin,
            "refinement": self.refinement,
        }


def _point(z):
    return z.point if isinstance(z, ZeroRecord) else np.asarray(z, dtype=float).reshape(-1)


def default_eps(z) -> float:
    """``min(0.05, isolation_radius / 2)``; plain points use 0.05."""
    if isinstance(z, ZeroRecord):
        return min(EPS_MAX, z.isolation_radius / 2)
    return EPS_MAX


def _refinement(h):
    return h.level if h.n == 3 else h.depth


# ---------------------------------------------------------------------------
# interior zeros
# ---------------------------------------------------------------------------

def local_index_interior_detail(
    m: ModelManifold, f: FieldDef, z, eps: Optional[float] = None, seed: int = 0
) -> IndexDetail:
    p = _point(z)
    eps = default_eps(z) if eps is None else eps
    eps = min(eps, 0.99 * float(m.depth(p)))
    v = lambda x: eval_field(f, x)
    if m.dim == 1:
        right = np.sign(v(p + eps)[0])
        left = np.sign(v(p - eps)[0])
        if right == 0 or left == 0:
            raise ZeroOnSphere(f"field vanishes at distance {eps} from {tuple(p)}")
        value = int(right - left) // 2
        return IndexDetail(HalfInt(2 * value), "interior", tuple(p), eps, 0, (), float("inf"), 0)
    h = normalize_map(v, p, eps, "full_sphere")
    deg = full_sphere_degree(h, seed=seed)
    return IndexDetail(HalfInt(2 * deg), "interior", tuple(p), eps, 0, (), float("inf"), _refinement(h))


def local_index_interior(m: ModelManifold, f: FieldDef, z, eps: Optional[float] = None) -> int:
    """Classical local index at an interior zero (degree of ``v/|v|`` on a small sphere)."""
    return local_index_interior_detail(m, f, z, eps).value.doubled // 2


# ---------------------------------------------------------------------------
# boundary zeros: normal and tangential local indices
# ---------------------------------------------------------------------------

def _chart_map(m, f, p):
    c = boundary_chart(m, p)
    return c, pushforward_field(c, f)


def _shrinking(m, f, z, eps, attempt, what):
    """Run ``attempt(h)`` on hemisphere maps of radius eps, eps/2, ... until admissible."""
    p = _point(z)
    c, v = _chart_map(m, f, p)
    eps = default_eps(z) if eps is None else eps
    last = None
    for k in range(MAX_HALVINGS + 1):
        try:
            h = normalize_map(v, c.a, eps)
            return attempt(h, k)
        except (NotAdmissibleDirection, ZeroOnSphere) as exc:
            last = exc
        eps *= 0.5
    raise InadmissibleAtAllScales(
        f"{what} at {tuple(p)}: no admissible radius after {MAX_HALVINGS} halvings ({last})"
    )


def normal_local_index_detail(m: ModelManifold, f: FieldDef, p, eps: Optional[float] = None) -> IndexDetail:
    n = m.dim
    e1 = np.eye(n)[0]

    def attempt(h, k):
        value = averaged_index(h, e1)
        margin = min(rim_margin(h, e1), rim_margin(h, -e1))
        return IndexDetail(value, "normal", tuple(_point(p)), h.radius, k, (tuple(e1),), margin, _refinement(h))

    return _shrinking(m, f, p, eps, attempt, "normal local index")


def normal_local_index(m: ModelManifold, f: FieldDef, p, eps: Optional[float] = None) -> HalfInt:
    """``i(v, a; +-e1)``: the averaged intersection number with the normal pair."""
    return normal_local_index_detail(m, f, p, eps).value


def _equator_directions(n, count, seed):
    rng = np.random.default_rng(seed)
    out = rng.normal(size=(count, n))
    out[:, 0] = 0.0
    return unit(out)


def _equator_clearance(h) -> float:
    """Angular distance of the rim image from the tangential equator ``{d : d1 = 0}``.

    Negative when the rim image meets both sides of the equator.
    """
    s = h.rim_values[:, 0]
    if np.all(s > 0) or np.all(s < 0):
        return float(np.min(np.arcsin(np.clip(np.abs(s), 0.0, 1.0))))
    return -1.0


def tangential_local_index_detail(
    m: ModelManifold, f: FieldDef, p, eps: Optional[float] = None, seed: int = EQUATOR_SEED
) -> IndexDetail:
    n = m.dim
    if n == 1:
        d = normal_local_index_detail(m, f, p, eps)
        return IndexDetail(d.value, "tangential", d.point, d.eps, d.halvings, d.directions, d.margin, d.refinement)
    e2 = np.eye(n)[1]
    point = tuple(_point(p))

    if n == 2:

        def attempt(h, k):
            value = averaged_index(h, e2)
            margin = min(rim_margin(h, e2), rim_margin(h, -e2))
            return IndexDetail(value, "tangential", point, h.radius, k, (tuple(e2),), margin, _refinement(h))

        return _shrinking(m, f, p, eps, attempt, "tangential local index")

    def attempt(h, k):
        clearance = _equator_clearance(h)
        if clearance < MARGIN_MIN:
            raise NotAdmissibleDirection(f"rim image meets the tangential equator (clearance {clearance:.3g})")
        dirs = [e2] + list(_equator_directions(n, EQUATOR_CHECKS, seed))
        values = [intersection_number(h, d) for d in dirs]
        if len(set(values)) != 1:
            raise EquatorDisagreement(f"intersection numbers {values} differ across equatorial directions at {point}")
        return IndexDetail(
            HalfInt(2 * values[0]), "tangential", point, h.radius, k,
            tuple(tuple(float(x) for x in d) for d in dirs), clearance, _refinement(h),
        )

    return _shrinking(m, f, p, eps, attempt, "tangential local index")


def tangential_local_index(m: ModelManifold, f: FieldDef, p, eps: Optional[float] = None) -> HalfInt:
    """Tangential local index: ``i(v, a; +-e2)`` for n = 2, ``i(v, a; d)`` with ``d1 = 0`` for n = 3."""
    return tangential_local_index_detail(m, f, p, eps).value


def tangential_probe(m: ModelManifold, f: FieldDef, p, eps: float = EPS_MAX) -> int:
    """``i(v, a; d)`` for one equatorial ``d`` orthogonal to ``v(p)`` (n >= 3, ``V(p) != 0``).

    This is the computation the tangential index reduces to at a point where
    ``V`` is tangent but nonzero; it needs no isolation of the zeros of the
    normal field, only that ``d`` stays clear of the rim image.
    """
    n = m.dim
    if n < 3:
        raise ValueError("tangential_probe needs n >= 3")
    c, v = _chart_map(m, f, _point(p))
    w = v(c.a)
    if np.linalg.norm(w) == 0:
        raise ValueError("tangential_probe needs V(p) != 0")
    w = unit(w)
    # equatorial vector orthogonal to v(p): rotate the tangential part by 90 degrees
    d = np.zeros(n)
    if abs(w[1]) + abs(w[2]) < 1e-12:
        d[1] = 1.0
    else:
        d[1], d[2] = -w[2], w[1]
    d = unit(d)
    h = normalize_map(v, c.a, eps)
    return intersection_number(h, d)


def boundary_field_index(m: ModelManifold, f: FieldDef, z, eps: Optional[float] = None) -> int:
    """Local index of the boundary field at one of its zeros (always 1 when n = 1)."""
    n = m.dim
    if n == 1:
        return 1
    p = _point(z)
    c, v = _chart_map(m, f, p)
    eps = default_eps(z) if eps is None else eps
    if n == 2:
        s = [float(np.sign(v(np.array([1.0, t]))[1])) for t in (eps, -eps)]
        if 0.0 in s:
            raise ZeroOnSphere(f"boundary field vanishes at chart distance {eps} from {tuple(p)}")
        return int(s[0] - s[1]) // 2

    def g(s):
        s = np.asarray(s, dtype=float)
        y = np.concatenate([np.ones(s.shape[:-1] + (1,)), s], axis=-1)
        return v(y)[..., 1:]

    h = normalize_map(g, np.zeros(n - 1), eps, "full_sphere")
    return full_sphere_degree(h)


# ---------------------------------------------------------------------------
# bundles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroEntry:
    record: ZeroRecord
    value: HalfInt
    definition: str
    detail: Optional[IndexDetail] = None

    def to_json(self) -> dict:
        out = {
            "location": list(self.record.location),
            "kind": self.record.kind.value,
            "type": self.record.type_tag.value,
            "component": self.record.component,
            "isolation_radius": self.record.isolation_radius,
            "residual": self.record.residual,
            "definition": self.definition,
            "value": self.value.to_json(),
        }
        if self.detail is not None:
            out["provenance"] = self.detail.to_json()
        return out


@dataclass(frozen=True)
class IndexBundle:
    manifold: str
    mode: str
    dim: int
    interior_sum: HalfInt = ZERO
    ind_nu: Optional[HalfInt] = None
    ind_tau: Optional[HalfInt] = None
    ind_d_plus: Optional[int] = None
    ind_d_minus: Optional[int] = None
    ind_d_zero: Optional[int] = None
    ind_star_nu: Optional[HalfInt] = None
    ind_star_tau: Optional[HalfInt] = None
    boundary_classes: dict = field(default_factory=dict)  # component id -> "plus" | "minus" | "zero"
    per_zero: tuple = ()
    hypothesis_log: tuple = ()

    def chi_of(self, m: ModelManifold, cls: str) -> int:
        return sum(m.component(cid).euler for cid, c in self.boundary_classes.items() if c == cls)

    def to_json(self) -> dict:
        def hj(x):
            return None if x is None else HalfInt.of(x).to_json()

        return {
            "manifold": self.manifold,
            "mode": self.mode,
            "dim": self.dim,
            "interior_sum": hj(self.interior_sum),
            "ind_nu": hj(self.ind_nu),
            "ind_tau": hj(self.ind_tau),
            "ind_d_plus": hj(self.ind_d_plus),
            "ind_d_minus": hj(self.ind_d_minus),
            "ind_d_zero": hj(self.ind_d_zero),
            "ind_star_nu": hj(self.ind_star_nu),
            "ind_star_tau": hj(self.ind_star_tau),
            "boundary_classes": {str(k): v for k, v in sorted(self.boundary_classes.items())},
            "per_zero": [e.to_json() for e in self.per_zero],
        }


MODES = ("normal", "tangential", "expanded_normal", "expanded_tangential")


def _is_v_zero(m, f, p, tol):
    return float(np.linalg.norm(eval_field(f, p))) < max(tol, 1e-7)


def classify_boundary(m: ModelManifold, f: FieldDef, avoid=(), tol: float = DEFAULT_TOL) -> dict:
    """Split boundary components into outward (plus), inward (minus) and, for n = 1, zero.

    For n >= 2 each component is sampled at up to 256 points away from
    ``avoid``; the normal component of V must have one strict sign there.
    """
    classes = {}
    avoid = [np.asarray(a, dtype=float) for a in avoid]
    for b in m.boundary_components:
        geom = b.geometry
        if m.dim == 1:
            p = np.array([geom.c])
            vn = float(eval_field(f, p) @ geom.inward_normal(p))
            if abs(vn) < max(tol, 1e-7):
                classes[b.id] = "zero"
            else:
                classes[b.id] = "minus" if vn > 0 else "plus"
            continue
        pts, _, _ = geom.grid(0.05)
        idx = np.linspace(0, len(pts) - 1, CLASSIFY_SAMPLES).round().astype(int)
        pts = pts[np.unique(idx)]
        if avoid:
            dist = np.min(np.linalg.norm(pts[:, None, :] - np.array(avoid)[None], axis=-1), axis=1)
            pts = pts[dist > 0.05]
        vn = np.sum(eval_field(f, pts) * geom.inward_normal(pts), axis=-1)
        if np.all(vn > 0):
            classes[b.id] = "minus"
        elif np.all(vn < 0):
            classes[b.id] = "plus"
        else:
            k = int(np.argmin(np.abs(vn)))
            raise HypothesisViolated(
                f"boundary component {b.id} is uniformly outward or inward away from isolated zeros",
                [pts[k]],
                "normal component changes sign",
            )
    return classes


def compute_bundle(
    m: ModelManifold,
    f: FieldDef,
    mode: str = "normal",
    tol: float = DEFAULT_TOL,
    h: float = DEFAULT_SPACING,
    hints=(),
    eps: Optional[float] = None,
    seed: int = 0,
) -> IndexBundle:
    """Zeros, local indices and the aggregate indices needed by ``mode``.

    normal / expanded_normal: interior zeros, zeros of the boundary field
    with their types, ind_nu, ind(d+V), ind(d-V), ind(d0V), ind*_nu.
    tangential / expanded_tangential: interior zeros, zeros of the normal
    field, ind_tau (plain mode only), ind*_tau and the boundary split.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    log = []
    per_zero = []

    interior = find_zeros(m, f, ZeroKind.INTERIOR, tol, h, hints)
    log.append("zeros of V in the interior are isolated")
    interior_sum = ZERO
    for z in interior:
        d = local_index_interior_detail(m, f, z, eps, seed)
        interior_sum = interior_sum + d.value
        per_zero.append(ZeroEntry(z, d.value, "interior", d))

    if mode in ("normal", "expanded_normal"):
        zb = find_zeros(m, f, ZeroKind.BOUNDARY_FIELD, tol, h, hints)
        log.append("zeros of V on the boundary are isolated")
        log.append("zeros of the boundary field are isolated")
        ind_nu = interior_sum
        star = interior_sum
        sums = {ZeroType.PLUS: 0, ZeroType.MINUS: 0, ZeroType.ZERO: 0}
        for z in zb:
            bidx = boundary_field_index(m, f, z, eps)
            sums[z.type_tag] += bidx
            d = normal_local_index_detail(m, f, z, eps)
            per_zero.append(ZeroEntry(z, HalfInt(2 * bidx), "boundary_field"))
            per_zero.append(ZeroEntry(z, d.value, "normal", d))
            star = star + d.value
            if z.type_tag == ZeroType.ZERO:
                ind_nu = ind_nu + d.value
        return IndexBundle(
            m.name, mode, m.dim, interior_sum,
            ind_nu=ind_nu,
            ind_d_plus=sums[ZeroType.PLUS],
            ind_d_minus=sums[ZeroType.MINUS],
            ind_d_zero=sums[ZeroType.ZERO],
            ind_star_nu=star,
            per_zero=tuple(per_zero),
            hypothesis_log=tuple(log),
        )

    zn = find_zeros(m, f, ZeroKind.NORMAL_FIELD, tol, h, hints)
    log.append("zeros of V on the boundary are isolated")
    log.append("zeros of the normal field are isolated")
    extra = [z for z in zn if not _is_v_zero(m, f, z.point, tol)]
    if mode == "tangential":
        if extra:
            raise HypothesisViolated(
                "the zeros of V on the boundary are the only zeros of the normal field",
                [z.point for z in extra],
                "the normal field vanishes where V does not",
            )
        log.append("the zeros of V on the boundary are the only zeros of the normal field")
    tau = interior_sum
    star = interior_sum
    for z in zn:
        d = tangential_local_index_detail(m, f, z, eps, EQUATOR_SEED + seed)
        is_v = not any(z is e for e in extra)
        per_zero.append(ZeroEntry(z, d.value, "tangential" if is_v else "tangential_extra", d))
        star = star + d.value
        if is_v:
            tau = tau + d.value
    classes = {}
    if m.dim != 2:
        classes = classify_boundary(m, f, [z.point for z in zn], tol)
        log.append("boundary components are classified as outward/inward" + ("/zero" if m.dim == 1 else ""))
    return IndexBundle(
        m.name, mode, m.dim, interior_sum,
        ind_tau=None if extra else tau,
        ind_star_tau=star,
        boundary_classes=classes,
        per_zero=tuple(per_zero),
        hypothesis_log=tuple(log),
    )
