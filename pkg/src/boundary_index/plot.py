"""Deterministic SVG pictures of planar (and one-dimensional) scenes.

The picture shows the manifold outline, normalized field arrows on a
grid, and every zero with a glyph for its kind and its index as an exact
fraction: interior zeros (dot, local index), boundary zeros of type 0
(square, normal index), type + (up-triangle) and type - (down-triangle)
(both labelled with the index of the boundary field).
"""

from __future__ import annotations

import numpy as np

from .charts import CircleComponent, ModelManifold, ZeroType
from .errors import UnsupportedDimension
from .fieldlang import FieldDef, eval_field
from .halfint import HalfInt
from .indices import IndexBundle

SIZE = 480
PAD = 40
ARROWS = 17


def _frac(v: HalfInt) -> str:
    v = HalfInt.of(v)
    s = str(v).replace("-", "−")
    return "+" + s if v.doubled > 0 else s


def _f(x: float) -> str:
    return f"{x:.2f}"


class _Canvas:
    def __init__(self, bbox):
        (x0, x1), (y0, y1) = bbox
        span = max(x1 - x0, y1 - y0)
        self.scale = (SIZE - 2 * PAD) / span
        self.cx, self.cy = (x0 + x1) / 2, (y0 + y1) / 2
        self.items = []

    def xy(self, p):
        return SIZE / 2 + (p[0] - self.cx) * self.scale, SIZE / 2 - (p[1] - self.cy) * self.scale

    def add(self, s):
        self.items.append(s)

    def render(self, title):
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
            f'viewBox="0 0 {SIZE} {SIZE}">\n'
            f'<title>{title}</title>\n<rect width="{SIZE}" height="{SIZE}" fill="white"/>\n'
        )
        return head + "\n".join(self.items) + "\n</svg>\n"


def _arrow(cv, p, d, length):
    x0, y0 = cv.xy(p)
    ux, uy = d[0], -d[1]
    x1, y1 = x0 + length * ux, y0 + length * uy
    hx, hy = -uy, ux
    head = [
        (x1, y1),
        (x1 - 0.35 * length * ux + 0.2 * length * hx, y1 - 0.35 * length * uy + 0.2 * length * hy),
        (x1 - 0.35 * length * ux - 0.2 * length * hx, y1 - 0.35 * length * uy - 0.2 * length * hy),
    ]
    pts = " ".join(f"{_f(a)},{_f(b)}" for a, b in head)
    cv.add(
        f'<line x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x1)}" y2="{_f(y1)}" stroke="#4a6fa5" stroke-width="1"/>'
        f'<polygon points="{pts}" fill="#4a6fa5"/>'
    )


def _glyph(cv, p, kind, label):
    x, y = cv.xy(p)
    r = 6
    if kind == "interior":
        g = f'<circle class="zero interior" cx="{_f(x)}" cy="{_f(y)}" r="{r}" fill="black"/>'
    elif kind == ZeroType.ZERO:
        g = f'<rect class="zero type0" x="{_f(x - r)}" y="{_f(y - r)}" width="{2 * r}" height="{2 * r}" fill="#c0392b"/>'
    elif kind == ZeroType.PLUS:
        g = (f'<polygon class="zero typeplus" points="{_f(x)},{_f(y - r)} {_f(x - r)},{_f(y + r)} '
             f'{_f(x + r)},{_f(y + r)}" fill="#27ae60"/>')
    else:
        g = (f'<polygon class="zero typeminus" points="{_f(x)},{_f(y + r)} {_f(x - r)},{_f(y - r)} '
             f'{_f(x + r)},{_f(y - r)}" fill="#8e44ad"/>')
    cv.add(g)
    cv.add(
        f'<text class="index" x="{_f(x + 9)}" y="{_f(y - 9)}" font-family="sans-serif" '
        f'font-size="14">{label}</text>'
    )


def _labels(bundle: IndexBundle):
    """(point, glyph kind, label) per zero from a normal-mode bundle."""
    out = []
    normal = {e.record.location: e.value for e in bundle.per_zero if e.definition == "normal"}
    for e in bundle.per_zero:
        rec = e.record
        if e.definition == "interior":
            out.append((rec.point, "interior", _frac(e.value)))
        elif e.definition == "boundary_field":
            if rec.type_tag == ZeroType.ZERO:
                out.append((rec.point, ZeroType.ZERO, _frac(normal[rec.location])))
            else:
                out.append((rec.point, rec.type_tag, _frac(e.value)))
    return out


def render_svg(m: ModelManifold, f: FieldDef, bundle: IndexBundle) -> str:
    """SVG document for a 1- or 2-dimensional scene; ``bundle`` must come from normal mode."""
    if m.dim == 3:
        raise UnsupportedDimension("plots are available for dimension 1 and 2 only")
    if m.dim == 1:
        return _render_interval(m, f, bundle)
    cv = _Canvas(m.bbox)
    for b in m.boundary_components:
        g = b.geometry
        if isinstance(g, CircleComponent):
            x, y = cv.xy(g.c)
            cv.add(
                f'<circle class="outline" cx="{_f(x)}" cy="{_f(y)}" r="{_f(g.R * cv.scale)}" '
                f'fill="none" stroke="black" stroke-width="2"/>'
            )
    (x0, x1), (y0, y1) = m.bbox
    xs = np.linspace(x0, x1, ARROWS)
    ys = np.linspace(y0, y1, ARROWS)
    P = np.stack(np.meshgrid(xs, ys, indexing="xy"), axis=-1).reshape(-1, 2)
    P = P[m.depth(P) > 0.02]
    V = eval_field(f, P)
    norms = np.linalg.norm(V, axis=-1)
    keep = norms > 1e-9
    length = 0.4 * (x1 - x0) / (ARROWS - 1) * cv.scale
    for p, v in zip(P[keep], V[keep] / norms[keep, None]):
        _arrow(cv, p, v, length)
    for p, kind, label in _labels(bundle):
        _glyph(cv, p, kind, label)
    return cv.render(f"{m.name}: V = {f.source_text}")


def _render_interval(m, f, bundle):
    cv = _Canvas(((0.0, 1.0), (-0.5, 0.5)))
    a, b = cv.xy((0.0, 0.0)), cv.xy((1.0, 0.0))
    cv.add(
        f'<line class="outline" x1="{_f(a[0])}" y1="{_f(a[1])}" x2="{_f(b[0])}" y2="{_f(b[1])}" '
        f'stroke="black" stroke-width="2"/>'
    )
    for x in np.linspace(0.05, 0.95, 10):
        v = float(eval_field(f, np.array([x]))[0])
        if abs(v) > 1e-9:
            _arrow(cv, (x, 0.08), (np.sign(v), 0.0), 18)
    for p, kind, label in _labels(bundle):
        _glyph(cv, (float(p[0]), 0.0), kind, label)
    return cv.render(f"{m.name}: V = {f.source_text}")
