"""
A 2-to-1 self map of BS(1,2)
============================

Each coset of <b> is a horocycle of points spaced 2^k apart at level k.
Pick the point nearest the axis x = 0 as the representative and halve the
offset along the horocycle.
"""

from qiforge import bs_model
from qiforge.marked_group import ball, make_group

G = make_group("BS(1,2)")
f = bs_model.f_C(G, 2)

for g in ball(G, 2).elements:
    c = bs_model.coset_of(G, g)
    rep = bs_model.representative(G, c)
    print(f"{G.format(g):10s} level {c.level:2d} offset {bs_model.decompose(G, g, rep):3d} -> {G.format(f(g))}")

# every fiber inside the window has exactly two points, and the map is
# close to an isometry once C absorbs the rounding
for r in (4, 6):
    audit = bs_model.audit_f_C(G, 2, r, C=4)
    print(f"r={r}: interior fibers {sorted(set(audit.interior_fibers))}, K_emp {audit.K_emp}")
