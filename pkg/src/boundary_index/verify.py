"""Exact verification of the index theorems and the doubling identities.

Every report compares two :class:`HalfInt` values with exact equality.
Hypothesis failures propagate as :class:`HypothesisViolated` (with witness
points) rather than producing a report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .charts import (
    DEFAULT_SPACING,
    DEFAULT_TOL,
    METRIC_NOTE,
    ModelManifold,
    ZeroKind,
    ZeroRecord,
    ZeroType,
    boundary_chart,
    classify_boundary_zero,
    find_zeros,
    pushforward_field,
)
from .degree import normalize_map
from .doubling import build_doubled_map, doubled_zero_index, oracle_doubled_index
from .errors import ZeroOnCylinder, ZeroOnSphere
from .fieldlang import FieldDef, eval_field, print_field
from .halfint import HalfInt
from .indices import (
    EPS_MAX,
    IndexBundle,
    boundary_field_index,
    compute_bundle,
    default_eps,
    normal_local_index,
    tangential_local_index,
)

THEOREM_IDS = ("T1", "T2", "T3", "T4", "S3a", "S3b", "double_check")
S3B_NOTE = (
    "second identity compared with chi(boundary of X): the sum of the boundary-field indices "
    "is the Poincare-Hopf sum of the boundary field on the closed boundary"
)


@dataclass(frozen=True)
class TheoremReport:
    theorem_id: str
    manifold: str
    field: str
    lhs: HalfInt
    rhs: HalfInt
    bundle: Optional[IndexBundle]
    terms: dict = field(default_factory=dict)
    hypothesis_log: tuple = ()
    metric_note: str = METRIC_NOTE
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.lhs.doubled == self.rhs.doubled

    def to_json(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "manifold": self.manifold,
            "field": self.field,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "pass": self.passed,
            "terms": {k: HalfInt.of(v).to_json() for k, v in self.terms.items()},
            "hypothesis_log": list(self.hypothesis_log),
            "metric_note": self.metric_note,
            "detail": self.detail,
            "bundle": None if self.bundle is None else self.bundle.to_json(),
        }


def _h(x) -> HalfInt:
    return HalfInt.of(x)


def _report(tid, m, f, lhs, rhs, bundle, terms, note=METRIC_NOTE, detail=None, log=None):
    return TheoremReport(
        tid, m.name, f.source_text or print_field(f), _h(lhs), _h(rhs), bundle,
        {k: _h(v) for k, v in terms.items()},
        tuple(log if log is not None else (bundle.hypothesis_log if bundle else ())),
        note, detail or {},
    )


def _opts(kw):
    return {k: kw[k] for k in ("tol", "h", "hints", "eps", "seed") if k in kw}


def verify_theorem1(m: ModelManifold, f: FieldDef, **kw) -> TheoremReport:
    """``ind_nu + 1/2 ind(d0 V) + ind(d- V) = chi(X)``."""
    b = compute_bundle(m, f, "normal", **_opts(kw))
    lhs = b.ind_nu + HalfInt(b.ind_d_zero) + 2 * HalfInt(b.ind_d_minus)
    terms = {
        "ind_nu": b.ind_nu,
        "half_ind_d_zero": HalfInt(b.ind_d_zero),
        "ind_d_minus": b.ind_d_minus,
        "chi_X": m.euler,
    }
    return _report("T1", m, f, lhs, m.euler, b, terms)


def _tangential_rhs(m: ModelManifold, b: IndexBundle):
    n = m.dim
    chi = m.euler
    if n % 2 == 0:
        rhs = _h(chi)
        terms = {"chi_X": chi}
        if n >= 3:
            other = chi - b.chi_of(m, "minus")
            terms["chi_X_minus_chi_d_minus_X"] = other
            if other != chi:
                terms["case_table_mismatch"] = other - chi
        return rhs, terms
    chi_minus = b.chi_of(m, "minus")
    if n >= 3:
        return _h(chi - chi_minus), {"chi_X": chi, "chi_d_minus_X": chi_minus}
    chi_zero = b.chi_of(m, "zero")
    rhs = _h(chi) - HalfInt(chi_zero) - _h(chi_minus)
    return rhs, {"chi_X": chi, "half_chi_d_zero_X": HalfInt(chi_zero), "chi_d_minus_X": chi_minus}


def verify_theorem2(m: ModelManifold, f: FieldDef, **kw) -> TheoremReport:
    """``ind_tau`` against the dimension-dependent Euler characteristic table."""
    b = compute_bundle(m, f, "tangential", **_opts(kw))
    rhs, terms = _tangential_rhs(m, b)
    terms = {"ind_tau": b.ind_tau, **terms}
    return _report("T2", m, f, b.ind_tau, rhs, b, terms, detail={"boundary_classes": b.to_json()["boundary_classes"]})


def verify_theorem3(m: ModelManifold, f: FieldDef, **kw) -> TheoremReport:
    """``ind*_nu = chi(X)`` for even n and ``0`` for odd n."""
    b = compute_bundle(m, f, "expanded_normal", **_opts(kw))
    rhs = m.euler if m.dim % 2 == 0 else 0
    terms = {"ind_star_nu": b.ind_star_nu, "interior_sum": b.interior_sum}
    return _report("T3", m, f, b.ind_star_nu, rhs, b, terms)


def verify_theorem4(m: ModelManifold, f: FieldDef, **kw) -> TheoremReport:
    """``ind*_tau`` against the same table as the tangential theorem."""
    b = compute_bundle(m, f, "expanded_tangential", **_opts(kw))
    rhs, terms = _tangential_rhs(m, b)
    terms = {"ind_star_tau": b.ind_star_tau, **terms}
    return _report("T4", m, f, b.ind_star_tau, rhs, b, terms, detail={"boundary_classes": b.to_json()["boundary_classes"]})


def verify_section3_identities(m: ModelManifold, f: FieldDef, **kw):
    """The two identities behind the doubling proof, as a pair of reports.

    ``2 ind_nu + ind(d- V) - ind(d+ V) = 2 chi(X) - chi(dX)`` and
    ``ind(d0 V) + ind(d- V) + ind(d+ V) = chi(dX)``.
    """
    b = compute_bundle(m, f, "normal", **_opts(kw))
    chi_d = m.boundary_euler
    lhs_a = 2 * b.ind_nu + _h(b.ind_d_minus) - _h(b.ind_d_plus)
    ra = _report(
        "S3a", m, f, lhs_a, 2 * m.euler - chi_d, b,
        {"ind_nu": b.ind_nu, "ind_d_minus": b.ind_d_minus, "ind_d_plus": b.ind_d_plus,
         "chi_X": m.euler, "chi_dX": chi_d},
    )
    lhs_b = b.ind_d_zero + b.ind_d_minus + b.ind_d_plus
    rb = _report(
        "S3b", m, f, lhs_b, chi_d, b,
        {"ind_d_zero": b.ind_d_zero, "ind_d_minus": b.ind_d_minus, "ind_d_plus": b.ind_d_plus, "chi_dX": chi_d},
        note=METRIC_NOTE + "; " + S3B_NOTE,
    )
    return ra, rb


# ---------------------------------------------------------------------------
# doubling consistency
# ---------------------------------------------------------------------------

POINT_TOL = 1e-7


def boundary_point_status(m: ModelManifold, f: FieldDef, p, tol: float = DEFAULT_TOL) -> dict:
    """Which of V, its boundary field and its normal field vanish at the boundary point ``p``."""
    p = np.asarray(p, dtype=float).reshape(-1)
    c = boundary_chart(m, p)
    v = pushforward_field(c, f)(c.a)
    v_zero = float(np.linalg.norm(eval_field(f, p))) < POINT_TOL
    d_zero = m.dim == 1 or float(np.linalg.norm(v[1:])) < POINT_TOL
    n_zero = abs(float(v[0])) < POINT_TOL
    ztype = None
    if d_zero:
        ztype = ZeroType.ZERO if v_zero else classify_boundary_zero(c, f, p, max(tol, POINT_TOL))
    return {"v_zero": v_zero, "boundary_field_zero": d_zero, "normal_field_zero": n_zero, "type": ztype}


def predicted_doubled_index(m: ModelManifold, f: FieldDef, p, twisted: bool, eps=None) -> tuple[int, str]:
    """The local index the doubling argument predicts at ``p`` and the rule used."""
    st = boundary_point_status(m, f, p)
    if not twisted:
        if not st["boundary_field_zero"]:
            return 0, "no zero of the boundary field"
        if st["type"] == ZeroType.ZERO:
            return normal_local_index(m, f, p, eps).doubled, "2 * ind_nu(V, p)"
        idx = boundary_field_index(m, f, p, eps)
        if st["type"] == ZeroType.MINUS:
            return idx, "ind(dV, p) (type -)"
        return -idx, "-ind(dV, p) (type +)"
    if not st["normal_field_zero"]:
        return 0, "no zero of the normal field"
    if m.dim % 2 == 1:
        return 0, "0 (n odd)"
    return tangential_local_index(m, f, p, eps).doubled, "2 * ind_tau(V, p) (n even)"


def _case_of(st):
    if st["type"] == ZeroType.PLUS:
        return "typeplus"
    if st["type"] == ZeroType.MINUS:
        return "typeminus"
    return "type0"


def doubled_index_at(m: ModelManifold, f: FieldDef, p, twisted: bool, eps=None):
    """Build the (twisted) doubled map at ``p``, halving eps on collar zeros; returns (index, oracle, map)."""
    p = np.asarray(p, dtype=float).reshape(-1)
    st = boundary_point_status(m, f, p)
    c = boundary_chart(m, p)
    v = pushforward_field(c, f)
    eps = EPS_MAX if eps is None else eps
    last = None
    for _ in range(21):
        try:
            dm = build_doubled_map(normalize_map(v, c.a, eps), twisted)
            return doubled_zero_index(dm, _case_of(st)), oracle_doubled_index(dm), dm
        except (ZeroOnCylinder, ZeroOnSphere) as exc:
            last = exc
            eps *= 0.5
    raise last


def verify_double_consistency(m: ModelManifold, f: FieldDef, p, twisted: bool = False, eps=None) -> TheoremReport:
    """Doubled (or twisted-doubled) local index at ``p`` against its predicted value."""
    if isinstance(p, ZeroRecord):
        eps = default_eps(p) if eps is None else eps
        p = p.point
    p = np.asarray(p, dtype=float).reshape(-1)
    got, oracle, dm = doubled_index_at(m, f, p, twisted, eps)
    want, rule = predicted_doubled_index(m, f, p, twisted, eps)
    detail = {
        "point": [float(x) for x in p],
        "twisted": twisted,
        "rule": rule,
        "oracle": oracle,
        "eps": dm.source.radius,
        "seam_jump": dm.seam_jump,
        "max_gap": dm.max_gap,
    }
    return _report(
        "double_check", m, f, got, want, None,
        {"doubled_index": got, "predicted": want},
        detail=detail, log=("the point is an isolated singular point of the doubled field",),
    )


FAMILIES = ("boundary_field", "normal_field")


def special_boundary_points(
    m: ModelManifold, f: FieldDef, tol: float = DEFAULT_TOL, h: float = DEFAULT_SPACING, families=FAMILIES
):
    """Zeros of the boundary field and/or of the normal field, merged (records carry isolation radii)."""
    kinds = {"boundary_field": ZeroKind.BOUNDARY_FIELD, "normal_field": ZeroKind.NORMAL_FIELD}
    out = []
    for fam in families:
        for z in find_zeros(m, f, kinds[fam], tol, h):
            if not any(np.linalg.norm(z.point - w.point) < 1e-6 for w in out):
                out.append(z)
    return out


def verify_all_doubles(m: ModelManifold, f: FieldDef, families=FAMILIES, **kw) -> list[TheoremReport]:
    """Untwisted and twisted consistency reports at every special boundary point of ``families``."""
    reports = []
    pts = special_boundary_points(m, f, kw.get("tol", DEFAULT_TOL), kw.get("h", DEFAULT_SPACING), families)
    for z in pts:
        for twisted in (False, True):
            reports.append(verify_double_consistency(m, f, z, twisted, kw.get("eps")))
    return reports
