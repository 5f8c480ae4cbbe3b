"""Checking the index theorems exactly

Each theorem is an equality between a sum of local indices and an Euler
characteristic.  Because the local indices are half-integers, the check is an
exact comparison of integers (twice the half-integers).  No float tolerance
decides pass or fail.

The fields below come from the scene files in scenes/.
"""

import numpy as np

from boundary_index import (
    get_manifold,
    parse_field,
    verify_section3_identities,
    verify_theorem1,
    verify_theorem2,
    verify_theorem3,
    verify_theorem4,
)


def show(report):
    terms = ", ".join(f"{k}={v}" for k, v in report.terms.items())
    flag = "ok" if report.passed else "FAILED"
    print(f"  {report.theorem_id:4s} {report.manifold:10s} lhs={report.lhs!s:5s} rhs={report.rhs!s:5s} {flag}   [{terms}]")


# Normal indices: the first theorem adds the normal indices, half of the
# boundary-field index over the zeros of V on the boundary, and the index of
# the boundary field over the points where V points inward.
print("normal-index theorem")
for name, text in [
    ("interval", "(x1)"),
    ("interval", "(x1 - 0.5)"),
    ("disk2", "(1, 0)"),
    ("annulus", "(1, 0)"),
    ("pants", "(1, 0)"),
    ("ball3", "(1, 0, 0)"),
]:
    m = get_manifold(name)
    show(verify_theorem1(m, parse_field(text, m.dim)))

# Tangential indices: the right-hand side depends on the dimension.  For the
# inward sink on the ball, d-X is the whole sphere and chi(S^2) = 2.
print("tangential-index theorem")
for name, text in [
    ("interval", "(x1)"),
    ("disk2", "(x1 - 1, x2)"),
    ("ball3", "(-x1, -x2, -x3)"),
    ("ball3", "(-x1, -x2, -x3 + max(0, 1 - 4*(x1^2 + x2^2 + (x3 - 1)^2)))"),
]:
    m = get_manifold(name)
    show(verify_theorem2(m, parse_field(text, m.dim)))

# The expanded sums add the contributions of boundary points where only the
# boundary field (resp. only the normal field) vanishes.  In odd dimensions
# the normal version always sums to 0.
print("expanded sums")
for name, text in [("interval", "(x1 - 0.5)"), ("disk2", "(1, 0)"), ("ball3", "(1, 0, 0)")]:
    m = get_manifold(name)
    show(verify_theorem3(m, parse_field(text, m.dim)))
m = get_manifold("ball3")
show(verify_theorem4(m, parse_field("((1 - x3)*x1, (1 - x3)*x2 - x3, (1 - x3)*x3 + x2)", 3)))
m = get_manifold("disk2")
show(verify_theorem4(m, parse_field("(1, 0)", 2)))

# The two identities that combine into the doubling argument.
print("identities behind the doubling argument")
for name, text in [("disk2", "(1, 0)"), ("pants", "(1, 0)"), ("interval", "(x1)")]:
    m = get_manifold(name)
    for r in verify_section3_identities(m, parse_field(text, m.dim)):
        show(r)

# Every report keeps the per-zero breakdown, so a wrong sum can be traced to
# a single local index.
m = get_manifold("pants")
r = verify_theorem1(m, parse_field("(1, 0)", 2))
pts = np.array([e.record.location for e in r.bundle.per_zero])
vals = [str(e.value) for e in r.bundle.per_zero]
print("pants per-zero table:")
for p, d, v in zip(pts, [e.definition for e in r.bundle.per_zero], vals):
    print(f"  {p.round(3)!s:16s} {d:15s} {v}")
