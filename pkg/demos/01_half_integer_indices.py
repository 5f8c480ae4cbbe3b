"""Half-integer indices at boundary zeros

A zero of a vector field that sits on the boundary of a manifold has no
ordinary index: a small sphere around it sticks out of the manifold.  Keep
only the half-sphere that lies inside, count how often the normalized field
v/|v| hits a direction d there, and average over d and -d.  The result is a
half-integer: the *normal* local index.  Averaging over two directions
tangent to the boundary instead gives the *tangential* local index.

This walk-through computes both for a few fields, first by hand with numpy
and then with the library.
"""

import numpy as np

from boundary_index import (
    HalfInt,
    averaged_index,
    boundary_chart,
    get_manifold,
    intersection_number,
    normal_local_index,
    normalize_map,
    parse_field,
    pushforward_field,
    tangential_local_index,
)

# Start in one dimension.  On the interval [0, 1] take V(x) = x.  The zero at
# x = 0 lies on the boundary.  The "half-sphere" of radius eps around it is the
# single point x = eps, where V is positive.
eps = 0.05
v_at_rim = np.sign(eps)

# The normalized field hits d = +1 once and d = -1 never.  The average is 1/2.
hits_plus, hits_minus = int(v_at_rim == 1), int(v_at_rim == -1)
print("by hand, interval V = x at 0:", HalfInt(hits_plus + hits_minus))

# The library works in a boundary chart in which the boundary is y1 = 1 and
# the interior is y1 > 1.  At x = 0 the chart is simply y1 = 1 + x.
interval = get_manifold("interval")
V = parse_field("(x1)", 1)
print("library, normal index at 0:", normal_local_index(interval, V, (0.0,)))

# Two dimensions: the source V = (x - 1, y) on the unit disk has its zero on
# the boundary point (1, 0).  Pull it into the chart and sample the half-circle.
disk = get_manifold("disk2")
V = parse_field("(x1 - 1, x2)", 2)
chart = boundary_chart(disk, (1.0, 0.0))
v = pushforward_field(chart, V)
h = normalize_map(v, chart.a, eps)

# h.values holds v/|v| along the half-circle.  For the source it is close to
# the outward normal of the small circle, so it sweeps about half a turn (the
# chart bends the boundary circle straight, which adds a little).
angles = np.unwrap(np.arctan2(h.values[:, 1], h.values[:, 0]))
print("sweep of v/|v| over the half-circle (turns):", round((angles[-1] - angles[0]) / (2 * np.pi), 6))

# Intersection numbers with the normal directions +-e1 ...
e1, e2 = np.eye(2)
print("i(e1) =", intersection_number(h, e1), " i(-e1) =", intersection_number(h, -e1))
print("normal index (average):", averaged_index(h, e1))

# ... and with the tangent directions +-e2.  The rim values lie close to
# -+e2, so the margin is small but positive; averaging gives the tangential
# index, which here is an integer.
print("rim values:", h.values[0].round(4), h.values[-1].round(4))
print("averaged over e2:", averaged_index(h, e2))
print("tangential index:", tangential_local_index(disk, V, (1.0, 0.0)))

# Three dimensions: the source centred on the boundary point (1, 0, 0)
# behaves the same way; the half-sphere image covers half of S^2.
ball = get_manifold("ball3")
V = parse_field("(x1 - 1, x2, x3)", 3)
print("ball3 source at (1,0,0): normal", normal_local_index(ball, V, (1.0, 0.0, 0.0)),
      "tangential", tangential_local_index(ball, V, (1.0, 0.0, 0.0)))

# A constant field is never zero, but its boundary field (the component along
# the boundary) is.  At such points the normal index is still defined and is
# +-1/2 depending on whether V points in or out.
V = parse_field("(1, 0, 0)", 3)
for p in [(1.0, 0.0, 0.0), (-1.0, 0.0, 0.0)]:
    print("constant field on the ball at", p, "normal index", normal_local_index(ball, V, p))
