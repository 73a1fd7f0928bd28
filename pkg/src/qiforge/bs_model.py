"""The n-to-1 self map of BS(1,m) built from coset representatives near a reference line.

Each element ``g = (k, q)`` sits at height level ``k`` and horizontal
position ``x = q`` of the upper half plane model.  The coset ``g<b>`` is the
horocycle ``{(k, q + i m^k)}``; its representative is the point closest to
the vertical axis ``x = 0`` (ties go to positive ``x``), and the map sends
``alpha b^i`` to ``alpha b^floor(i/n)``.
"""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import SpecError
from .marked_group import BaumslagSolitar, WordMetric, ball, make_group
from .qi_maps import DistortionReport, FiberCensus, QIMap, fiber_census, fit_constants, verify_constants


class PlanePoint(NamedTuple):
    x: Fraction
    level: int


class CosetId(NamedTuple):
    level: int
    residue: Fraction  # in [0, m^level)


class RepChoice(NamedTuple):
    coset: CosetId
    alpha: tuple


def _bs(G) -> BaumslagSolitar:
    G = make_group(G)
    if not isinstance(G, BaumslagSolitar):
        raise SpecError(f"{G} is not a solvable Baumslag-Solitar group")
    return G


def plane_position(G, g) -> PlanePoint:
    G = _bs(G)
    return PlanePoint(G.translation(g), g[0])


def _spacing(G: BaumslagSolitar, level: int) -> Fraction:
    return Fraction(G.m) ** level


def coset_of(G, g) -> CosetId:
    G = _bs(G)
    k = g[0]
    step = _spacing(G, k)
    q = G.translation(g)
    return CosetId(k, q - step * (q // step))


def representative(G, coset: CosetId) -> RepChoice:
    G = _bs(G)
    step = _spacing(G, coset.level)
    r = coset.residue
    x = r if 2 * r <= step else r - step
    return RepChoice(coset, G.element(coset.level, x))


def decompose(G, g, rep: RepChoice | None = None) -> int:
    """The offset ``i`` with ``g = alpha b^i``."""
    G = _bs(G)
    rep = rep or representative(G, coset_of(G, g))
    if coset_of(G, g) != rep.coset:
        raise SpecError(f"{G.format(g)} is not in the coset of {G.format(rep.alpha)}")
    i = (G.translation(g) - G.translation(rep.alpha)) / _spacing(G, g[0])
    assert i.denominator == 1
    return int(i)


def f_C(G, n: int):
    """Return the function ``alpha b^i -> alpha b^floor(i/n)``."""
    G = _bs(G)
    if n < 1:
        raise SpecError(f"n must be >= 1, got {n}")
    b = G.generator("b")

    def apply(g):
        rep = representative(G, coset_of(G, g))
        i = decompose(G, g, rep)
        return G.multiply(rep.alpha, G.power(b, i // n))

    return apply


def f_C_map(G, n: int, K=1, C=0) -> QIMap:
    """``f_C`` as a :class:`QIMap`; the fiber of ``alpha b^j`` is
    ``alpha b^(nj), ..., alpha b^(nj+n-1)``."""
    G = _bs(G)
    b = G.generator("b")

    def pre(y):
        rep = representative(G, coset_of(G, y))
        j = decompose(G, y, rep)
        return [G.multiply(rep.alpha, G.power(b, n * j + r)) for r in range(n)]

    return QIMap(G, G, f_C(G, n), K, C, n, f"f_C[{G},{n}]", pre)


@dataclass
class BSAudit:
    radius: int
    C: int
    K_emp: Fraction | float
    report: DistortionReport | None
    census: FiberCensus
    max_image_length: int

    @property
    def interior_fibers(self) -> list[int]:
        return list(self.census.interior_counts().values())


def audit_f_C(G, n: int, ball_radius: int, C=4, K_claimed=None, budget: int | None = None) -> BSAudit:
    """Exhaustive audit of ``f_C`` on the ball of the given radius.

    Distances between images need a metric ball of twice the largest image
    length; that ball is grown automatically.
    """
    G = _bs(G)
    window = ball(G, ball_radius, budget)
    f = f_C_map(G, n)
    images = [f(x) for x in window.elements]
    metric = WordMetric(G, 2 * ball_radius, budget).cover_pairs(images)
    max_len = max(metric.length(y) for y in images)
    pts = window.elements
    K_emp = fit_constants(f, C, pts, metric, metric)
    report = None
    if K_claimed is not None:
        report = verify_constants(f, K_claimed, C, pts, metric, metric, f"ball({G},{ball_radius})")
    census = fiber_census(f, pts, sorted(set(images)))
    return BSAudit(ball_radius, C, K_emp, report, census, max_len)


def dump_csv(G, n: int, elements: Iterable, path_or_file) -> None:
    G = _bs(G)
    f = f_C(G, n)
    close = False
    if isinstance(path_or_file, (str, os.PathLike)):
        path_or_file = open(path_or_file, "w", newline="")
        close = True
    try:
        w = csv.writer(path_or_file, lineterminator="\n")
        w.writerow(["element", "level", "x", "coset_level", "coset_residue", "representative", "offset", "image"])
        for g in elements:
            c = coset_of(G, g)
            rep = representative(G, c)
            w.writerow(
                [G.format(g), g[0], str(G.translation(g)), c.level, str(c.residue),
                 G.format(rep.alpha), decompose(G, g, rep), G.format(f(g))]
            )
    finally:
        if close:
            path_or_file.close()
