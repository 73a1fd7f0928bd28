"""
Isoperimetric profiles
======================

Boundary-to-volume ratios of the bundled Følner sets, with free-group
balls as a contrast that never gets small.
"""

from qiforge import folner

for spec in ["Z", "Z^2", "ZxC2", "BS(1,2)"]:
    fam = folner.standard_family(spec)
    rows = folner.profile(fam, min(fam.i_max, 7))
    print(fam.name)
    for r in rows:
        print(f"   i={r.i:2d} |S|={r.size:7d} |dS|={r.boundary_size:6d} ratio={float(r.ratio):.4f}")

# balls in F_2 keep a boundary larger than themselves
rows = folner.profile(folner.ball_family("F_2"), 6)
print("F_2 ball ratios:", [round(float(r.ratio), 3) for r in rows])

# translating a Følner set does not change its boundary
S = folner.standard_family("BS(1,2)")(3)
g = S.group.word("A b b a")
print("|dS| =", folner.boundary_size(S), " |d(gS)| =", folner.boundary_size(folner.translate(S, g)))
