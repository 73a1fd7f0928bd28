"""
Følner sums of 0-chains
=======================

A bounded chain has vanishing class when its sums over Følner sets stay
comparable to the boundary.  Compare the indicator of the odd integers
with the boundary of a 1-chain.
"""

from qiforge import folner, uf_chain
from qiforge.qi_maps import floor_map_Z
from qiforge.marked_group import ball

fam = folner.standard_family("Z")

odd = uf_chain.index_chain(2)
rep = uf_chain.vanishing_report(odd, fam, 60)
print(rep.to_csv().splitlines()[-1])
print("ratios at i=10,20,...:", [str(r.ratio) for r in rep.rows if r.i % 10 == 0])

# d of the edges (2k, 2k+1) alternates -1, +1 so its sums never exceed 1
d = uf_chain.boundary_1(uf_chain.paired_edges(2), ball("Z", 61))
print([d((x,)) for x in range(-4, 5)])
print(uf_chain.vanishing_report(d, fam, 60).verdict)

# counting fibers of floor[3] recovers three times the fundamental class
push = uf_chain.pushforward_chain(
    floor_map_Z(3),
    [(x,) for x in range(-60, 61)],
    [(y,) for y in range(-20, 21)],
)
print("interior coefficients:", sorted({push((y,)) for y in range(-20, 21) if push.is_interior((y,))}))
