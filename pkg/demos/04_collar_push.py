"""Pushing boundary zeros into the interior

A boundary zero on a component where the field otherwise points inward can
be moved inside by adding a thin collar and extending the field across it.
The moved zero becomes an ordinary interior zero, and its index equals the
tangential index it had on the boundary.  This is how the expanded tangential
sum is reduced to the ordinary Poincare-Hopf theorem.
"""

import numpy as np

from boundary_index import collar_push, get_manifold, parse_field, pushed_zero_index, tangential_local_index

# The bumped sink on the unit ball: V = -x plus a bump that cancels the inward
# push at the north pole.  V vanishes there and points inward everywhere else
# on the sphere.
ball = get_manifold("ball3")
V = parse_field("(-x1, -x2, -x3 + max(0, 1 - 4*(x1^2 + x2^2 + (x3 - 1)^2)))", 3)
north = np.array([0.0, 0.0, 1.0])
print("tangential index at the north pole:", tangential_local_index(ball, V, north))

# Add a collar around the sphere and extend V across it.
push = collar_push(ball, V, 0)
print("collar width", push.width, "component type", push.component_type)
print("moved zeros:", [np.round(p, 6).tolist() for p in push.moved])

# The extended field is ordinary in the interior of the bigger ball, so the
# zero has a plain degree.
print("index of the moved zero:", pushed_zero_index(push, push.moved[0]))

# The new boundary sphere has no zeros and the field points inward all over it.
rng = np.random.default_rng(0)
u = rng.normal(size=(5000, 3))
u /= np.linalg.norm(u, axis=1, keepdims=True)
w = push.field((1.0 + push.width) * u)
print("smallest |V| on the new boundary:", np.linalg.norm(w, axis=1).min().round(4))
print("largest V.n on the new boundary:", np.sum(w * u, axis=1).max().round(4))

# So the whole ball, collar included, satisfies Poincare-Hopf with an inward
# field: the interior sum -1 (sink) + 1 (where the bump cancels -x) + (-1)
# (the moved pole) equals chi(ball) - chi(S^2) = -1.
