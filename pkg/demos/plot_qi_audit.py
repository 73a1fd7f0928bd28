"""
Auditing quasi-isometry constants
=================================

Every pair in a window is checked against the two-sided inequality; the
fitted multiplicative constant is an exact fraction.
"""

from qiforge import qi_maps
from qiforge.marked_group import ball

pts = [(x,) for x in range(-100, 101)]
for n in (2, 3, 5):
    f = qi_maps.floor_map_Z(n)
    rep = qi_maps.verify_constants(f, n, 1, pts, window_label="[-100,100]")
    print(rep.to_json())

# dropping the additive constant breaks the floor map on pairs that share an image
rep = qi_maps.verify_constants(qi_maps.floor_map_Z(2), 2, 0, pts)
print("C=0:", rep.passed, "worst pair", rep.worst_pair)

# composition multiplies K and propagates C
h = qi_maps.compose(qi_maps.inclusion_map("2Z", "Z"), qi_maps.subgroup_floor_map(2))
print(h.name, "K =", h.K, "C =", h.C, " 18 ->", h((18,)))

# a map defined on the even integers extended across both cosets
ext = qi_maps.extend_by_cosets("Z", lambda g: g[0] % 2 == 0, lambda g: (g[0] // 2,), [(0,), (1,)], pts, K=2)
print("extension equals floor[2]:", qi_maps.pointwise_equal(ext, qi_maps.floor_map_Z(2), pts))

# projection of Z x Z/3 onto Z
f = qi_maps.projection_map(3)
print(qi_maps.verify_constants(f, f.K, f.C, ball("ZxC3", 10).elements).to_json())
