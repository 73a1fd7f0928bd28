"""
How far is a map from a bijection?
==================================

R*(L) is the least radius at which a bijection can be matched to f on the
window of size L.  It stays bounded when f is close to a bijection and
grows linearly when it is not.
"""

from qiforge import matching, qi_maps

maps = {
    "2Z in Z": qi_maps.inclusion_map("2Z", "Z"),
    "3Z in Z": qi_maps.inclusion_map("3Z", "Z"),
    "floor on 2Z, then include": qi_maps.compose(
        qi_maps.inclusion_map("2Z", "Z"), qi_maps.subgroup_floor_map(2)
    ),
    "Z x Z/2 -> Z projection": qi_maps.projection_map(2),
    "Z x Z/2 -> Z chart": qi_maps.interleave_chart(2),
}

for name, f in maps.items():
    rep = matching.classify_growth(f, [20, 40, 80])
    slope = "" if rep.slope is None else f"slope {rep.slope:.3f}"
    print(f"{name:28s} R* {[r for _, r in rep.rows]} {slope} -> {rep.verdict}")

# when a radius is too small the matcher returns a Hall violator
w = matching.build_window(qi_maps.inclusion_map("2Z", "Z"), 20, 5)
res = matching.max_matching(w)
A = res.hall_violator
print(f"R=5: {len(A)} interior targets see only {len(w.neighbors_of_targets(A))} sources")
print(res.to_json(w))
