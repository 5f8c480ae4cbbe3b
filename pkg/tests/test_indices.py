"""Local indices at interior and boundary zeros, and the aggregate bundles."""

from __future__ import annotations

import numpy as np
import pytest

from boundary_index import (
    HalfInt,
    HypothesisViolated,
    InadmissibleAtAllScales,
    ZeroKind,
    boundary_field_index,
    compute_bundle,
    find_zeros,
    local_index_interior,
    normal_local_index,
    tangential_local_index,
)
from boundary_index.indices import (
    classify_boundary,
    local_index_interior_detail,
    normal_local_index_detail,
    tangential_local_index_detail,
    tangential_probe,
)

from conftest import T1_FIXTURES, mf, scaled

H = HalfInt.of
BUMPED_SINK = "(-x1, -x2, -x3 + max(0, 1 - 4*(x1^2 + x2^2 + (x3 - 1)^2)))"


# ---------------------------------------------------------------------------
# interior
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "name,text,p,want",
    [
        ("interval", "(x1 - 0.5)", (0.5,), 1),
        ("interval", "(0.5 - x1)", (0.5,), -1),
        ("disk2", "(x1, -x2)", (0.0, 0.0), -1),
        ("disk2", "(x1^2 - x2^2, 2*x1*x2)", (0.0, 0.0), 2),
        ("ball3", "(-x1, -x2, -x3)", (0.0, 0.0, 0.0), -1),
        ("ball3", "(x1, x2, x3)", (0.0, 0.0, 0.0), 1),
        ("solidtorus", "(x1 - 2, x2, x3)", (2.0, 0.0, 0.0), 1),
    ],
)
def test_interior_index(name, text, p, want):
    m, f = mf(name, text)
    assert local_index_interior(m, f, p) == want


def test_interior_detail_provenance():
    m, f = mf("ball3", "(-x1, -x2, -x3)")
    z = find_zeros(m, f, ZeroKind.INTERIOR)[0]
    d = local_index_interior_detail(m, f, z)
    assert d.value == H(-1) and d.eps == min(0.05, z.isolation_radius / 2)
    assert d.to_json()["value"] == {"num": -1, "den": 1}


# ---------------------------------------------------------------------------
# normal local index
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "name,text,p,want",
    [
        ("interval", "(x1)", (0.0,), H(0.5)),
        ("interval", "(x1 - 0.5)", (0.0,), H(-0.5)),
        ("disk2", "(x1 - 1, x2)", (1.0, 0.0), H(0.5)),
        ("disk2", "(1, 0)", (1.0, 0.0), H(0.5)),
        ("disk2", "(1, 0)", (-1.0, 0.0), H(0.5)),
        ("ball3", "(1, 0, 0)", (1.0, 0.0, 0.0), H(-0.5)),
        ("ball3", "(1, 0, 0)", (-1.0, 0.0, 0.0), H(0.5)),
        ("ball3", "(x1 - 1, x2, x3)", (1.0, 0.0, 0.0), H(0.5)),
    ],
)
def test_normal_local_index(name, text, p, want):
    m, f = mf(name, text)
    assert normal_local_index(m, f, p) == want


def test_normal_index_needs_admissible_scale():
    # the boundary field of the complex square vanishes along an arc: no radius works
    m, f = mf("disk2", "((x1 - 1)^2 - x2^2, 2*(x1 - 1)*x2)")
    with pytest.raises(InadmissibleAtAllScales):
        normal_local_index(m, f, (1.0, 0.0))


def test_normal_detail_reports_margin():
    m, f = mf("disk2", "(x1 - 1, x2)")
    d = normal_local_index_detail(m, f, (1.0, 0.0))
    assert d.eps == 0.05 and d.halvings == 0
    assert d.margin > 1e-3
    js = d.to_json()
    assert js["directions"] == [[1.0, 0.0]] and js["rim_margin"] == d.margin


# ---------------------------------------------------------------------------
# tangential local index
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "name,text,p,want",
    [
        ("interval", "(x1)", (0.0,), H(0.5)),
        ("disk2", "(x1 - 1, x2)", (1.0, 0.0), H(1)),
        ("disk2", "(1, 0)", (0.0, 1.0), H(0.5)),
        ("disk2", "(1, 0)", (0.0, -1.0), H(0.5)),
        ("ball3", "(x1 - 1, x2, x3)", (1.0, 0.0, 0.0), H(1)),
        ("ball3", BUMPED_SINK, (0.0, 0.0, 1.0), H(-1)),
        ("ball3", "((1 - x3)*x1, (1 - x3)*x2 - x3, (1 - x3)*x3 + x2)", (0.0, 0.0, 1.0), H(0)),
    ],
)
def test_tangential_local_index(name, text, p, want):
    m, f = mf(name, text)
    assert tangential_local_index(m, f, p) == want


def test_tangential_index_uses_five_equatorial_directions():
    m, f = mf("ball3", "(x1 - 1, x2, x3)")
    d = tangential_local_index_detail(m, f, (1.0, 0.0, 0.0))
    assert len(d.directions) == 5
    assert all(abs(u[0]) == 0.0 and abs(np.linalg.norm(u) - 1) < 1e-12 for u in d.directions)
    assert d.value.is_integer()


def test_tangential_probe_on_circle_of_tangency():
    """Points where V = (1, 0, 0) is tangent to the sphere contribute 0."""
    m, f = mf("ball3", "(1, 0, 0)")
    for th in np.linspace(0, 2 * np.pi, 7)[:-1]:
        assert tangential_probe(m, f, (0.0, np.cos(th), np.sin(th))) == 0


def test_one_dimensional_indices_agree():
    for text in ("(x1)", "(x1 - 1)", "(2*x1 - x1^2)"):
        m, f = mf("interval", text)
        for z in find_zeros(m, f, ZeroKind.BOUNDARY):
            assert normal_local_index(m, f, z) == tangential_local_index(m, f, z)


# ---------------------------------------------------------------------------
# boundary field index
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "name,text,p,want",
    [
        ("interval", "(x1)", (0.0,), 1),
        ("interval", "(x1 - 0.5)", (1.0,), 1),
        ("disk2", "(1, 0)", (1.0, 0.0), -1),
        ("disk2", "(1, 0)", (-1.0, 0.0), 1),
        ("ball3", "(1, 0, 0)", (1.0, 0.0, 0.0), 1),
        ("ball3", "(1, 0, 0)", (-1.0, 0.0, 0.0), 1),
        ("annulus", "(1, 0)", (1.0, 0.0), -1),
    ],
)
def test_boundary_field_index(name, text, p, want):
    m, f = mf(name, text)
    assert boundary_field_index(m, f, p) == want


# ---------------------------------------------------------------------------
# bundles
# ---------------------------------------------------------------------------


def test_bundle_disk_constant():
    m, f = mf("disk2", "(1, 0)")
    b = compute_bundle(m, f, "normal")
    assert (b.ind_nu, b.ind_d_plus, b.ind_d_minus, b.ind_d_zero) == (H(0), -1, 1, 0)
    assert b.ind_star_nu == H(1)


def test_bundle_interval_identity():
    m, f = mf("interval", "(x1)")
    b = compute_bundle(m, f, "normal")
    assert (b.ind_nu, b.ind_d_zero, b.ind_d_minus) == (H(0.5), 1, 0)


def test_plain_tangential_mode_checks_hypothesis():
    m, f = mf("disk2", "(1, 0)")
    with pytest.raises(HypothesisViolated) as info:
        compute_bundle(m, f, "tangential")
    assert "only zeros of the normal field" in str(info.value)
    assert sorted(w[1] for w in info.value.witnesses) == [-1.0, 1.0]
    b = compute_bundle(m, f, "expanded_tangential")
    assert b.ind_tau is None and b.ind_star_tau == H(1)


def test_boundary_classes():
    m, f = mf("ball3", "(-x1, -x2, -x3)")
    assert classify_boundary(m, f) == {0: "minus"}
    m, f = mf("interval", "(x1)")
    assert classify_boundary(m, f) == {0: "zero", 1: "plus"}
    m, f = mf("ball3", "(1, 0, 0)")
    with pytest.raises(HypothesisViolated):
        classify_boundary(m, f)


def test_unknown_mode():
    m, f = mf("disk2", "(1, 0)")
    with pytest.raises(ValueError):
        compute_bundle(m, f, "sideways")


def _bundle_values(b):
    return (b.interior_sum, b.ind_nu, b.ind_tau, b.ind_d_plus, b.ind_d_minus, b.ind_d_zero, b.ind_star_nu, b.ind_star_tau)


@pytest.mark.parametrize("name,text", T1_FIXTURES)
@pytest.mark.parametrize("c", [0.02, 40.0])
def test_bundle_positive_scaling(name, text, c):
    m, f = mf(name, text)
    g = mf(name, scaled(text, c))[1]
    assert _bundle_values(compute_bundle(m, g, "normal")) == _bundle_values(compute_bundle(m, f, "normal"))


@pytest.mark.parametrize(
    "name,text",
    [("interval", "(x1)"), ("disk2", "(x1 - 1, x2)"), ("ball3", "(-x1, -x2, -x3)"), ("ball3", "(x1 - 1, x2, x3)")],
)
def test_expanded_equals_plain_without_extra_zeros(name, text):
    m, f = mf(name, text)
    b = compute_bundle(m, f, "tangential")
    be = compute_bundle(m, f, "expanded_tangential")
    assert b.ind_tau == be.ind_star_tau == b.ind_star_tau


def test_bundle_json_round_trip():
    m, f = mf("disk2", "(1, 0)")
    js = compute_bundle(m, f, "normal").to_json()
    assert js["ind_nu"] == {"num": 0, "den": 1}
    assert {e["definition"] for e in js["per_zero"]} == {"boundary_field", "normal"}
    assert all(HalfInt.from_json(e["value"]) in (H(0.5), H(1), H(-1)) for e in js["per_zero"])
