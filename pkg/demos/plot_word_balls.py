"""
Balls in a word metric
======================

Grow balls in a few marked groups and compare how fast they fill up.
"""

import numpy as np

from qiforge.marked_group import ball, make_group

# polynomial growth for the lattice, exponential for BS(1,2) and F_2
for spec in ["Z^2", "BS(1,2)", "F_2"]:
    sizes = np.array([len(ball(spec, r)) for r in range(7)])
    print(f"{spec:8s}", sizes, "growth factors", np.round(sizes[1:] / sizes[:-1], 2))

# BS(1,2) lives in the affine group x -> 2^k x + q
G = make_group("BS(1,2)")
b = G.generator("b")
print("a b a^-1 =", G.format(G.word("a b A")), " b^2 =", G.format(G.power(b, 2)))

# sphere sizes from a single BFS
B = ball(G, 8)
print("sphere sizes:", np.bincount(B.dist))
print("|b^16| =", B.word_length(G.power(b, 16)), "(the relation shortens long b-powers)")
