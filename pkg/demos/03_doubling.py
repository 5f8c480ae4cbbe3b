"""Doubling a half-ball

Glue two copies of a manifold along the boundary and a boundary zero becomes
an interior zero of the doubled field.  Its ordinary index is twice the
normal index.  With a twist (reflect the normal component on the second
copy) one gets twice the tangential index in even dimensions and 0 in odd
dimensions.

Locally this is a map from a full sphere: the original half-sphere, its
mirror copy, and a thin collar that interpolates between them along the
equator.  The doubled index is the degree of that map.
"""

import numpy as np

from boundary_index import build_doubled_map, doubled_zero_index, intersection_number, normalize_map
from boundary_index.doubling import oracle_doubled_index

# Work directly in the chart, around a = e1, with a rotated source
# v(y) = R(theta) (y - a).  Rotating mixes the normal and tangent parts.
a = np.array([1.0, 0.0])
e1, e2 = np.eye(2)

print(" theta  doubled  i(e1)+i(-e1)  twisted  i(e2)+i(-e2)  oracle")
for theta in [0.3, -0.4, 2.0, 3.0]:
    c, s = np.cos(theta), np.sin(theta)
    R = np.array([[c, -s], [s, c]])
    h = normalize_map(lambda y: (y - a) @ R.T, a, 0.05)

    # the untwisted doubled map; "type0" means V itself vanishes at the point
    dm = build_doubled_map(h, twisted=False)
    # the twisted version flips the sign of the normal component on the copy
    tw = build_doubled_map(h, twisted=True)

    lhs = doubled_zero_index(dm, "type0")
    rhs = intersection_number(h, e1) + intersection_number(h, -e1)
    lhs_t = doubled_zero_index(tw, "type0")
    rhs_t = intersection_number(h, e2) + intersection_number(h, -e2)
    print(f" {theta:5.1f}  {lhs:7d}  {rhs:12d}  {lhs_t:7d}  {rhs_t:12d}  {oracle_doubled_index(dm):6d}")

# The untwisted index is the sum of the two normal intersection numbers, that
# is twice the normal index.  The twisted one uses the tangent directions.

# The seam between the half-sphere and the collar is continuous: the largest
# angle jump there is reported with the map.
print("seam jump of the last map (rad):", dm.seam_jump)

# In three dimensions a field whose normal part keeps one sign on the rim
# gives a twisted doubled index of 0, as odd dimensions require.
a3 = np.array([1.0, 0.0, 0.0])


def bowl(y):
    first = (y[..., 0] - 1.0) + (y[..., 1] ** 2 + y[..., 2] ** 2)
    return np.concatenate([first[..., None], y[..., 1:]], axis=-1)


h3 = normalize_map(bowl, a3, 0.05)
print("n = 3: untwisted", doubled_zero_index(build_doubled_map(h3, False), "type0"),
      " twisted", doubled_zero_index(build_doubled_map(h3, True), "type0"))
