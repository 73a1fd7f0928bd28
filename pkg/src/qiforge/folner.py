"""Følner families, exterior boundaries and isoperimetric profiles.

For a word metric the points at distance in ``(0, 1]`` from a finite set are
exactly its one-generator neighbours outside the set, so the exterior
boundary is computed by neighbour enumeration rather than BFS.
"""
from __future__ import annotations

import csv
import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import BudgetExceeded, SpecError
from .marked_group import (
    BaumslagSolitar,
    FreeAbelian,
    FreeGroup,
    MarkedGroup,
    ZxCyclic,
    ball,
    default_budget,
    make_group,
)

FAMILY_BUDGET = 200_000
MAX_DEFAULT_INDEX = 64


@dataclass(frozen=True, eq=False)
class FiniteSubset:
    group: MarkedGroup
    members: frozenset
    label: str = ""
    predicate: Callable | None = None

    def __post_init__(self):
        if not self.members:
            raise ValueError("finite subsets must be nonempty")

    def __len__(self):
        return len(self.members)

    def __contains__(self, g):
        if self.predicate is not None:
            return self.predicate(g)
        return g in self.members

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other):
        if not isinstance(other, FiniteSubset):
            return NotImplemented
        return self.group == other.group and self.members == other.members

    def __hash__(self):
        return hash(self.members)


def subset(group, elements: Iterable, label: str = "", predicate=None) -> FiniteSubset:
    return FiniteSubset(make_group(group), frozenset(elements), label, predicate)


def boundary(S: FiniteSubset) -> frozenset:
    """``{s t : s in S, t a generator} \\ S`` as a set of elements."""
    members = S.members
    out = set()
    nb = S.group.neighbors
    for s in members:
        for h in nb(s):
            if h not in members:
                out.add(h)
    return frozenset(out)


def boundary_size(S: FiniteSubset) -> int:
    return len(boundary(S))


def iterated_boundary(S: FiniteSubset, r: int) -> frozenset:
    """Points at distance ``1..r`` from ``S``."""
    grown = set(S.members)
    shell = set(S.members)
    for _ in range(r):
        nxt = set()
        for s in shell:
            for h in S.group.neighbors(s):
                if h not in grown:
                    nxt.add(h)
        grown |= nxt
        shell = nxt
    return frozenset(grown - S.members)


def translate(S: FiniteSubset, g) -> FiniteSubset:
    """Left translate ``g S``; left multiplication is an isometry of the word metric."""
    G = S.group
    pred = None
    if S.predicate is not None:
        gi = G.inverse(g)
        pred = lambda x, _p=S.predicate: _p(G.multiply(gi, x))  # noqa: E731
    return FiniteSubset(G, frozenset(G.multiply(g, s) for s in S.members), f"{G.format(g)}*{S.label}", pred)


@dataclass(frozen=True)
class FolnerFamily:
    group: MarkedGroup
    rule: Callable[[int], FiniteSubset]
    i_min: int
    i_max: int
    name: str

    def __call__(self, i: int) -> FiniteSubset:
        if i < self.i_min:
            raise ValueError(f"{self.name}: index {i} below {self.i_min}")
        return self.rule(i)

    def translated(self, g) -> "FolnerFamily":
        return FolnerFamily(
            self.group,
            lambda i: translate(self.rule(i), g),
            self.i_min,
            self.i_max,
            f"{self.group.format(g)}*{self.name}",
        )


@dataclass(frozen=True)
class ProfileRow:
    i: int
    size: int
    boundary_size: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.boundary_size, self.size)


def box(group: FreeAbelian, i: int) -> FiniteSubset:
    if group.scale != 1:
        raise SpecError("boxes are only provided for Z^m")
    rng = range(-i, i + 1)
    pts = itertools.product(rng, repeat=group.rank)
    return FiniteSubset(
        group, frozenset(pts), f"box[{i}]", lambda g: all(-i <= c <= i for c in g)
    )


def bs_rectangle(group: BaumslagSolitar, N: int) -> FiniteSubset:
    """``{b^j a^k : 0 <= k < N, 0 <= j < m^(2N)}``, i.e. normal forms ``(k, j)``."""
    width = group.m ** (2 * N)
    members = frozenset((k, j, 0) for k in range(N) for j in range(width))
    return FiniteSubset(
        group,
        members,
        f"rect[{N}]",
        lambda g: 0 <= g[0] < N and g[2] == 0 and 0 <= g[1] < width,
    )


def cylinder(group: ZxCyclic, i: int) -> FiniteSubset:
    return FiniteSubset(
        group,
        frozenset((j, r) for j in range(-i, i + 1) for r in range(group.k)),
        f"cyl[{i}]",
        lambda g: -i <= g[0] <= i,
    )


def ball_subset(group: MarkedGroup, r: int, budget: int | None = None) -> FiniteSubset:
    B = ball(group, r, budget)
    return FiniteSubset(group, frozenset(B.elements), f"ball[{r}]")


def _default_imax(size_of: Callable[[int], int], start: int, budget: int) -> int:
    i = start
    while i < MAX_DEFAULT_INDEX and size_of(i + 1) <= budget:
        i += 1
    return i


def standard_family(group: MarkedGroup | str, budget: int = FAMILY_BUDGET) -> FolnerFamily:
    """The bundled Følner sequence of an amenable family.

    ``Z^m``: boxes ``[-i, i]^m``; ``Z x Z/k``: ``[-i, i] x Z/k``;
    ``BS(1,m)``: the rectangles of :func:`bs_rectangle`.  Free groups are
    rejected since they have no Følner sequence.
    """
    G = make_group(group)
    if isinstance(G, FreeGroup):
        raise SpecError(f"{G} is not amenable; use ball_family for a contrast profile")
    if isinstance(G, FreeAbelian):
        if G.scale != 1:
            raise SpecError("standard families are only provided for the full lattice Z^m")
        imax = _default_imax(lambda i: (2 * i + 1) ** G.rank, 1, budget)
        return FolnerFamily(G, lambda i: box(G, i), 1, imax, f"boxes({G})")
    if isinstance(G, BaumslagSolitar):
        imax = _default_imax(lambda N: N * G.m ** (2 * N), 1, budget)
        return FolnerFamily(G, lambda N: bs_rectangle(G, N), 1, imax, f"rectangles({G})")
    if isinstance(G, ZxCyclic):
        imax = _default_imax(lambda i: (2 * i + 1) * G.k, 1, budget)
        return FolnerFamily(G, lambda i: cylinder(G, i), 1, imax, f"cylinders({G})")
    raise SpecError(f"no standard Følner family for {G}")


def ball_family(group: MarkedGroup | str, i_max: int = 6) -> FolnerFamily:
    """Balls of radius 1, 2, ...; a Følner sequence only for groups of
    subexponential growth, used here as the free-group contrast."""
    G = make_group(group)
    return FolnerFamily(G, lambda r: ball_subset(G, r), 1, i_max, f"balls({G})")


def profile(family: FolnerFamily, i_max: int | None = None, budget: int | None = None) -> list[ProfileRow]:
    """Exact ``(i, |S_i|, |dS_i|)`` for ``i = i_min..i_max``."""
    i_max = family.i_max if i_max is None else i_max
    budget = default_budget() if budget is None else budget
    rows = []
    for i in range(family.i_min, i_max + 1):
        S = family(i)
        if len(S) > budget:
            raise BudgetExceeded(f"{family.name}: |S_{i}| = {len(S)} exceeds budget {budget}")
        rows.append(ProfileRow(i, len(S), boundary_size(S)))
    return rows


def is_strictly_decreasing(rows: list[ProfileRow]) -> bool:
    return all(a.ratio > b.ratio for a, b in zip(rows, rows[1:]))


def write_profile_csv(rows: list[ProfileRow], path_or_file) -> None:
    close = False
    if isinstance(path_or_file, (str, os.PathLike)):
        path_or_file = open(path_or_file, "w", newline="")
        close = True
    try:
        w = csv.writer(path_or_file, lineterminator="\n")
        w.writerow(["i", "size", "boundary_size", "ratio", "ratio_decimal"])
        for r in rows:
            w.writerow([r.i, r.size, r.boundary_size, str(r.ratio), f"{float(r.ratio):.6f}"])
    finally:
        if close:
            path_or_file.close()
