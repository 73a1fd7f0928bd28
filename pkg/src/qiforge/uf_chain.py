"""Bounded-coefficient 0-chains, 1-chains and the Følner sum statistic.

A 0-chain is a rule ``x -> a_x`` with a uniform bound; its class vanishes
exactly when ``|sum_{x in S_i} a_x| = O(|dS_i|)`` along every Følner
sequence.  Finite data can only give evidence either way, so verdicts are
named ``evidence-nonzero`` / ``evidence-zero`` / ``inconclusive``.
"""
from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .errors import OutOfWindow, SpecError
from .folner import FolnerFamily, boundary_size
from .marked_group import Ball, MarkedGroup, ball, make_group
from .qi_maps import QIMap, fiber_census

EVIDENCE_NONZERO = "evidence-nonzero"
EVIDENCE_ZERO = "evidence-zero"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class UFChain:
    group: MarkedGroup
    rule: Callable
    bound: int
    name: str = "c"
    interior: Callable | None = field(default=None, compare=False)

    def __call__(self, x) -> int:
        return self.coeff(x)

    def coeff(self, x) -> int:
        a = self.rule(x)
        if abs(a) > self.bound:
            raise ValueError(f"{self.name}: |a_x| = {abs(a)} exceeds the bound {self.bound}")
        return a

    def is_interior(self, x) -> bool:
        return True if self.interior is None else self.interior(x)

    def __sub__(self, other: "UFChain") -> "UFChain":
        return difference(self, other)

    def __add__(self, other: "UFChain") -> "UFChain":
        _same_group(self, other)
        return UFChain(
            self.group,
            lambda x: self.rule(x) + other.rule(x),
            self.bound + other.bound,
            f"({self.name}+{other.name})",
        )

    def scaled(self, k: int) -> "UFChain":
        return UFChain(self.group, lambda x: k * self.rule(x), abs(k) * self.bound, f"{k}{self.name}")


def _same_group(c1, c2):
    if c1.group != c2.group:
        raise SpecError(f"chains live on different groups: {c1.group} vs {c2.group}")


def indicator(group, member: Callable, name: str = "[S]") -> UFChain:
    """The chain ``[S] = sum_{x in S} x`` of a subset given by a membership test."""
    return UFChain(make_group(group), lambda x: 1 if member(x) else 0, 1, name)


def fundamental_class(group) -> UFChain:
    G = make_group(group)
    return UFChain(G, lambda x: 1, 1, f"[{G}]")


def difference(c1: UFChain, c2: UFChain) -> UFChain:
    _same_group(c1, c2)
    return UFChain(
        c1.group,
        lambda x: c1.rule(x) - c2.rule(x),
        c1.bound + c2.bound,
        f"({c1.name}-{c2.name})",
    )


def table_chain(group, table: Mapping, name: str = "c") -> UFChain:
    """Finitely supported chain from an explicit coefficient table."""
    table = dict(table)
    bound = max((abs(v) for v in table.values()), default=0)
    return UFChain(make_group(group), lambda x: table.get(x, 0), bound, name)


@dataclass(frozen=True)
class EdgeChain:
    """A 1-chain ``sum a_(x,y) (x,y)`` given by a rule on ordered pairs.

    ``rule(x, y)`` is only consulted for ``d(x, y) <= radius``; pairs further
    apart carry coefficient zero by construction.
    """

    group: MarkedGroup
    rule: Callable
    bound: int
    radius: int
    name: str = "e"


def boundary_1(e: EdgeChain, window: Ball) -> UFChain:
    """``d(x, y) = y - x`` extended linearly, evaluated on the window interior.

    The coefficient at ``z`` is ``sum_y a_(y,z) - sum_y a_(z,y)``; it is only
    defined where every partner ``y`` lies inside ``window`` (word length of
    ``z`` at most ``window.radius - e.radius``).
    """
    G = e.group
    if window.group != G:
        raise SpecError(f"window group {window.group} differs from chain group {G}")
    if window.radius < e.radius:
        raise SpecError(f"window radius {window.radius} smaller than propagation radius {e.radius}")
    offsets = ball(G, e.radius).elements
    limit = window.radius - e.radius

    def rule(z):
        if window.word_length(z) > limit:
            raise OutOfWindow(f"{G.format(z)} is outside the interior (radius {limit}) of the window")
        total = 0
        for u in offsets:
            y = G.multiply(z, u)
            total += e.rule(y, z) - e.rule(z, y)
        return total

    return UFChain(
        G,
        rule,
        2 * e.bound * len(offsets),
        f"d({e.name})",
        lambda z: z in window and window.word_length(z) <= limit,
    )


def pushforward_chain(
    f: QIMap,
    source_window,
    targets=None,
    source_radius: int | None = None,
) -> UFChain:
    """``f_*[X]`` on a window: coefficient ``|f^-1(y) & window|``.

    Targets whose fiber may leave the source window are flagged as
    non-interior via :meth:`UFChain.is_interior`.
    """
    census = fiber_census(f, source_window, targets, source_radius=source_radius)
    counts, interior = census.counts, census.interior
    bound = max(counts.values(), default=0)
    if f.fiber is not None:
        bound = max(bound, f.fiber)

    def rule(y):
        if y not in counts:
            raise OutOfWindow(f"{f.target.format(y)} was not censused")
        return counts[y]

    return UFChain(f.target, rule, bound, f"{f.name}_*", lambda y: interior.get(y, False))


@dataclass(frozen=True)
class StatisticRow:
    i: int
    sum_abs: int
    boundary: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.sum_abs, self.boundary)


def folner_statistic(c: UFChain, family: FolnerFamily, i_max: int | None = None, i_min: int | None = None) -> list[StatisticRow]:
    """Rows ``(i, |sum_{S_i} a_x|, |dS_i|)``."""
    if c.group != family.group:
        raise SpecError(f"chain on {c.group} but family on {family.group}")
    i_max = family.i_max if i_max is None else i_max
    i_min = family.i_min if i_min is None else i_min
    rows = []
    for i in range(i_min, i_max + 1):
        S = family(i)
        total = sum(c.coeff(x) for x in S)
        rows.append(StatisticRow(i, abs(total), boundary_size(S)))
    return rows


@dataclass(frozen=True)
class DecisionRule:
    nonzero_threshold: Fraction = Fraction(10)
    zero_threshold: Fraction = Fraction(2)
    window: int = 5


def decide_class(rows: list[StatisticRow], rule: DecisionRule = DecisionRule()) -> str:
    """Finite-evidence verdict on whether the chain's class is nonzero.

    ``evidence-nonzero``: over the last ``window`` rows the ratio never
    decreases, ends higher than it started, and the final ratio exceeds
    ``nonzero_threshold``.  ``evidence-zero``: every ratio is at most
    ``zero_threshold``.  Otherwise ``inconclusive``.
    """
    if len(rows) < rule.window:
        raise ValueError(f"need at least {rule.window} rows, got {len(rows)}")
    ratios = [r.ratio for r in rows]
    tail = ratios[-rule.window :]
    if (
        all(a <= b for a, b in zip(tail, tail[1:]))
        and tail[-1] > tail[0]
        and tail[-1] > rule.nonzero_threshold
    ):
        return EVIDENCE_NONZERO
    if all(r <= rule.zero_threshold for r in ratios):
        return EVIDENCE_ZERO
    return INCONCLUSIVE


@dataclass
class VanishingReport:
    chain: str
    family: str
    rows: list[StatisticRow]
    verdict: str
    rule: DecisionRule

    def to_csv(self, path_or_file=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "sum_abs", "boundary", "ratio"])
        for r in self.rows:
            w.writerow([r.i, r.sum_abs, r.boundary, str(r.ratio)])
        buf.write(
            f"# verdict={self.verdict} chain={self.chain} family={self.family} "
            f"nonzero>{self.rule.nonzero_threshold} zero<={self.rule.zero_threshold} window={self.rule.window}\n"
        )
        text = buf.getvalue()
        if path_or_file is not None:
            if isinstance(path_or_file, (str, os.PathLike)):
                with open(path_or_file, "w", newline="") as fh:
                    fh.write(text)
            else:
                path_or_file.write(text)
        return text


def vanishing_report(c: UFChain, family: FolnerFamily, i_max: int | None = None, rule: DecisionRule = DecisionRule()) -> VanishingReport:
    rows = folner_statistic(c, family, i_max)
    return VanishingReport(c.name, family.name, rows, decide_class(rows, rule), rule)


# Chains used by the bundled experiments on Z.

def index_chain(n: int) -> UFChain:
    """``[Z] - [nZ]``: the indicator of the complement of ``nZ``."""
    return difference(fundamental_class("Z"), indicator("Z", lambda x: x[0] % n == 0, f"[{n}Z]"))


def paired_edges(n: int = 2) -> EdgeChain:
    """Edges ``(nk, nk+1)`` with coefficient 1 on Z."""
    return EdgeChain(
        make_group("Z"),
        lambda x, y: 1 if y[0] == x[0] + 1 and x[0] % n == 0 else 0,
        1,
        1,
        f"pairs{n}",
    )


def unit_edges() -> EdgeChain:
    """Edges ``(k, k+1)`` for every k: the telescoping chain on Z."""
    return EdgeChain(make_group("Z"), lambda x, y: 1 if y[0] == x[0] + 1 else 0, 1, 1, "steps")
