"""Manifold catalog, boundary charts, decomposition and zero finding."""

from __future__ import annotations

import math

import numpy as np
import pytest

from boundary_index import (
    AmbiguousType,
    NonIsolatedZero,
    NotOnBoundary,
    ZeroKind,
    ZeroType,
    boundary_chart,
    boundary_decompose,
    catalog,
    classify_boundary_zero,
    find_zeros,
    get_manifold,
    parse_field,
    pushforward_field,
)
from boundary_index.errors import ChartRadiusTooSmall

from conftest import mf

# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

EULER = {
    "interval": (1, [1, 1]),
    "disk2": (1, [0]),
    "annulus": (0, [0, 0]),
    "pants": (-1, [0, 0, 0]),
    "ball3": (1, [2]),
    "solidtorus": (0, [0]),
}


def test_catalog_euler_characteristics():
    ms = catalog()
    assert [m.name for m in ms] == list(EULER)
    for m in ms:
        chi, bd = EULER[m.name]
        assert m.euler == chi
        assert [b.euler for b in m.boundary_components] == bd
        assert m.ambient_dim == m.dim


def test_unknown_manifold():
    with pytest.raises(KeyError):
        get_manifold("torus")


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------


def _boundary_samples(m, count, rng):
    """Random points on every boundary component of ``m``."""
    out = []
    for b in m.boundary_components:
        g = b.geometry
        x = rng.uniform(-3, 3, size=(count, m.dim))
        out.append(g.project(x))
    return np.concatenate(out)


def test_disk_chart_example():
    m = get_manifold("disk2")
    c = boundary_chart(m, (1.0, 0.0))
    assert np.allclose(c.to_chart(np.array([1.0, 0.0])), [1.0, 0.0])
    assert np.allclose(c.to_chart(np.array([0.9, 0.0])), [1.1, 0.0])


def test_interval_chart_example():
    m = get_manifold("interval")
    c = boundary_chart(m, (0.0,))
    assert np.allclose(c.to_chart(np.array([0.25])), [1.25])
    assert np.allclose(c.differential(np.array([0.25])), [[1.0]])
    c1 = boundary_chart(m, (1.0,))
    assert np.allclose(c1.to_chart(np.array([0.75])), [1.25])  # inward is -x at the right end


def test_not_on_boundary():
    with pytest.raises(NotOnBoundary):
        boundary_chart(get_manifold("disk2"), (0.0, 0.0))
    with pytest.raises(ChartRadiusTooSmall):
        boundary_chart(get_manifold("disk2"), (1.0, 0.0), radius=5.0)


@pytest.mark.parametrize("name", list(EULER))
def test_chart_convention_and_inverse(name):
    """Boundary points go to y1 = 1, interior points to y1 > 1, and the maps invert each other."""
    m = get_manifold(name)
    rng = np.random.default_rng(1)
    P = _boundary_samples(m, 8, rng)
    total = 0
    for p in P:
        c = boundary_chart(m, p)
        assert abs(c.to_chart(p)[0] - 1.0) < 1e-9
        assert np.allclose(c.to_chart(p), c.a, atol=1e-12)
        r = 0.8 * c.max_radius
        # points of the chart half ball: the boundary slice and interior points
        Y = c.a + r * rng.uniform(-1, 1, size=(1000 // len(P) + 1, m.dim)) / math.sqrt(m.dim)
        Y[:, 0] = 1.0 + np.abs(Y[:, 0] - 1.0)
        Y[::4, 0] = 1.0
        X = c.from_chart(Y)
        assert np.allclose(c.to_chart(X), Y, atol=1e-10)
        depth = m.depth(X)
        on = Y[:, 0] == 1.0
        assert np.all(np.abs(depth[on]) < 1e-9)
        assert np.all(depth[~on] > 0)
        total += len(Y)
    assert total >= 1000 // 4


@pytest.mark.parametrize("name", list(EULER))
def test_chart_is_positively_oriented(name):
    m = get_manifold(name)
    rng = np.random.default_rng(2)
    for p in _boundary_samples(m, 5, rng):
        c = boundary_chart(m, p)
        J = c.differential(p)
        assert np.sign(np.linalg.det(J)) == c.orientation_sign
        if m.dim >= 2:  # a 1-dimensional chart with y1 inward reverses orientation at a right end
            assert c.orientation_sign == 1


# ---------------------------------------------------------------------------
# pushforward and decomposition
# ---------------------------------------------------------------------------


def test_pushforward_examples():
    m, f = mf("interval", "(x1)")
    v = pushforward_field(boundary_chart(m, (0.0,)), f)
    for y in (1.0, 1.2, 1.4):
        assert np.allclose(v(np.array([y])), [y - 1.0])
    m, f = mf("disk2", "(1, 0)")
    c = boundary_chart(m, (1.0, 0.0))
    assert pushforward_field(c, f)(c.a)[0] < 0  # outward
    m, f = mf("disk2", "(x1 - 1, x2)")
    assert np.allclose(pushforward_field(c, f)(c.a), 0.0)


def test_decomposition_disk_constant():
    """Normal part cos(theta) outward, tangential part -sin(theta) along the counterclockwise tangent."""
    m, f = mf("disk2", "(1, 0)")
    for th in np.linspace(0, 2 * np.pi, 13)[:-1]:
        q = np.array([math.cos(th), math.sin(th)])
        c = boundary_chart(m, q)
        d = boundary_decompose(c, f, q)
        assert math.isclose(-d.normal[0], math.cos(th), abs_tol=1e-12)
        ccw = np.array([-math.sin(th), math.cos(th)])
        # chart y2 points along the chart's second basis vector; express it against ccw
        e2_ambient = np.linalg.solve(c.differential(q), [0.0, 1.0])
        tang = d.tangential[1] * float(e2_ambient @ ccw)
        assert math.isclose(tang, -math.sin(th), abs_tol=1e-12)


def test_decomposition_radial_boundary_zero():
    m, f = mf("disk2", "(x1 - 1, x2)")
    for th in np.linspace(0, 2 * np.pi, 9)[:-1]:
        q = np.array([math.cos(th), math.sin(th)])
        d = boundary_decompose(boundary_chart(m, q), f, q)
        assert math.isclose(-d.normal[0], 1 - math.cos(th), abs_tol=1e-12)
        assert -d.normal[0] >= -1e-15


@pytest.mark.parametrize("name", ["disk2", "annulus", "ball3", "solidtorus"])
def test_decomposition_is_exact(name):
    m = get_manifold(name)
    f = parse_field("(" + ", ".join(f"sin({k + 1}*x{k + 1}) + x{(k + 1) % m.dim + 1}^2" for k in range(m.dim)) + ")", m.dim)
    rng = np.random.default_rng(3)
    for q in _boundary_samples(m, 10, rng):
        c = boundary_chart(m, q)
        d = boundary_decompose(c, f, q)
        v = pushforward_field(c, f)(c.to_chart(q))
        assert np.max(np.abs(d.tangential + d.normal - v)) <= 1e-12
        assert d.tangential[0] == 0 and np.all(d.normal[1:] == 0)


def test_decompose_zero_vector():
    m, f = mf("disk2", "(x1 - 1, x2)")
    c = boundary_chart(m, (1.0, 0.0))
    d = boundary_decompose(c, f, (1.0, 0.0))
    assert np.allclose(d.tangential, 0) and np.allclose(d.normal, 0)


def test_decompose_needs_boundary_point():
    m, f = mf("disk2", "(1, 0)")
    with pytest.raises(NotOnBoundary):
        boundary_decompose(boundary_chart(m, (1.0, 0.0)), f, (0.95, 0.0))


# ---------------------------------------------------------------------------
# zero finding
# ---------------------------------------------------------------------------


def test_find_interior_zero_interval():
    m, f = mf("interval", "(x1 - 0.5)")
    zs = find_zeros(m, f, ZeroKind.INTERIOR)
    assert len(zs) == 1
    assert abs(zs[0].location[0] - 0.5) < 1e-10
    assert zs[0].residual < 1e-8 and zs[0].isolation_radius > 0


def test_find_boundary_field_zeros_disk():
    m, f = mf("disk2", "(1, 0)")
    zs = find_zeros(m, f, ZeroKind.BOUNDARY_FIELD)
    got = sorted((round(z.location[0], 9), z.type_tag) for z in zs)
    assert got == [(-1.0, ZeroType.MINUS), (1.0, ZeroType.PLUS)]
    assert all(abs(z.location[1]) < 1e-9 for z in zs)


def test_find_normal_field_zeros_disk():
    m, f = mf("disk2", "(1, 0)")
    zs = find_zeros(m, f, ZeroKind.NORMAL_FIELD)
    assert sorted(round(z.location[1], 9) for z in zs) == [-1.0, 1.0]


def test_complex_square_is_not_isolated():
    m, f = mf("disk2", "((x1 - 1)^2 - x2^2, 2*(x1 - 1)*x2)")
    with pytest.raises(NonIsolatedZero):
        find_zeros(m, f, ZeroKind.BOUNDARY_FIELD)


def test_zero_records_are_certified_and_sorted():
    m, f = mf("pants", "(1, 0)")
    zs = find_zeros(m, f, ZeroKind.BOUNDARY_FIELD)
    assert len(zs) == 6
    assert [z.location for z in zs] == sorted(z.location for z in zs)
    for z in zs:
        assert z.residual < 1e-8
        others = [w for w in zs if w is not z]
        assert all(np.linalg.norm(w.point - z.point) > 2 * z.isolation_radius for w in others)


@pytest.mark.parametrize(
    "name,text,kind,count",
    [
        ("annulus", "(1, 0)", ZeroKind.BOUNDARY_FIELD, 4),
        ("ball3", "(1, 0, 0)", ZeroKind.BOUNDARY_FIELD, 2),
        ("ball3", "(-x1, -x2, -x3)", ZeroKind.INTERIOR, 1),
        ("ball3", "(x1 - 1, x2, x3)", ZeroKind.BOUNDARY, 1),
        ("disk2", "(x1, -x2)", ZeroKind.INTERIOR, 1),
        ("interval", "(x1)", ZeroKind.BOUNDARY, 1),
    ],
)
def test_zero_counts(name, text, kind, count):
    m, f = mf(name, text)
    assert len(find_zeros(m, f, kind)) == count


def test_zero_hints_are_used():
    m, f = mf("disk2", "(x1 - 0.3, x2 + 0.2)")
    zs = find_zeros(m, f, ZeroKind.INTERIOR, hints=[(0.31, -0.19)])
    assert len(zs) == 1 and np.allclose(zs[0].location, (0.3, -0.2), atol=1e-10)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def test_classify_examples():
    m, f = mf("disk2", "(1, 0)")
    assert classify_boundary_zero(boundary_chart(m, (1.0, 0.0)), f, (1.0, 0.0)) == ZeroType.PLUS
    assert classify_boundary_zero(boundary_chart(m, (-1.0, 0.0)), f, (-1.0, 0.0)) == ZeroType.MINUS
    m, f = mf("interval", "(x1)")
    assert classify_boundary_zero(boundary_chart(m, (0.0,)), f, (0.0,)) == ZeroType.ZERO


@pytest.mark.parametrize("scale", [1e-3, 0.5, 7.0, 1e3])
def test_classify_scaling_invariance(scale):
    m = get_manifold("disk2")
    f = parse_field(f"({scale}, 0)", 2)
    assert classify_boundary_zero(boundary_chart(m, (1.0, 0.0)), f, (1.0, 0.0)) == ZeroType.PLUS
    assert classify_boundary_zero(boundary_chart(m, (-1.0, 0.0)), f, (-1.0, 0.0)) == ZeroType.MINUS


def test_classify_ambiguous_band():
    m = get_manifold("disk2")
    f = parse_field("(5e-9, 0)", 2)  # normal component inside (tol/10, tol)
    with pytest.raises(AmbiguousType):
        classify_boundary_zero(boundary_chart(m, (1.0, 0.0)), f, (1.0, 0.0), tol=1e-8)
