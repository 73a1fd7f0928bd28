"""Quasi-isometries between marked groups and exhaustive audits of their constants.

Constants follow the two-sided convention

    -C + d(x, y) / K  <=  d(f(x), f(y))  <=  K d(x, y) + C,   K >= 1, C >= 0,

and every audit is an exhaustive all-pairs check over a finite window.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import SpecError
from .marked_group import FreeAbelian, MarkedGroup, WordMetric, ZxCyclic, length_of, make_group


@dataclass(frozen=True)
class QIMap:
    """An evaluation rule ``source -> target`` with claimed constants.

    ``preimage``, when given, enumerates the exact fiber of a target
    element; it is only used to decide which fibers are complete inside a
    window, never to count them.
    """

    source: MarkedGroup
    target: MarkedGroup
    rule: Callable
    K: Fraction | int = 1
    C: Fraction | int = 0
    fiber: int | None = None
    name: str = "f"
    preimage: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.K < 1 or self.C < 0:
            raise SpecError(f"{self.name}: need K >= 1 and C >= 0, got K={self.K}, C={self.C}")

    def __call__(self, x):
        return self.rule(x)


def identity_map(group: MarkedGroup | str) -> QIMap:
    G = make_group(group)
    return QIMap(G, G, lambda x: x, 1, 0, 1, f"id[{G}]", lambda y: [y])


def floor_map_Z(n: int) -> QIMap:
    """``k -> floor(k / n)`` on Z; Python's ``//`` already rounds toward -inf."""
    if n < 1:
        raise SpecError(f"floor map needs n >= 1, got {n}")
    Z = FreeAbelian(1)
    return QIMap(
        Z,
        Z,
        lambda x: (x[0] // n,),
        n,
        1 if n > 1 else 0,
        n,
        f"floor[{n}]",
        lambda y: [(n * y[0] + r,) for r in range(n)],
    )


def floor_map_Zm(n: int, coord: int, m: int) -> QIMap:
    if not 1 <= coord <= m:
        raise SpecError(f"coordinate {coord} out of range 1..{m}")
    if n < 1:
        raise SpecError(f"floor map needs n >= 1, got {n}")
    G = FreeAbelian(m)
    c = coord - 1

    def rule(x):
        return x[:c] + (x[c] // n,) + x[c + 1 :]

    def pre(y):
        return [y[:c] + (n * y[c] + r,) + y[c + 1 :] for r in range(n)]

    return QIMap(G, G, rule, n, 1 if n > 1 else 0, n, f"floor[{n}]@{coord}", pre)


def inclusion_map(H_spec: MarkedGroup | str, G: MarkedGroup | str) -> QIMap:
    """Inclusion of a finite-index subgroup, audited with H's own word metric.

    Supported: ``nZ -> Z``, ``nZxZ^j -> Z^(j+1)``, and ``Z -> ZxCk`` as
    ``j -> (j, 0)``.
    """
    H, G = make_group(H_spec), make_group(G)
    if isinstance(H, FreeAbelian) and isinstance(G, FreeAbelian):
        if G.scale != 1 or H.rank != G.rank:
            raise SpecError(f"unsupported inclusion {H} -> {G}")
        n = H.scale
        return QIMap(
            H, G, lambda x: x, n, 0, 1, f"incl[{H}<{G}]",
            lambda y: [y] if y[0] % n == 0 else [],
        )
    if isinstance(H, FreeAbelian) and isinstance(G, ZxCyclic) and H.rank == 1 and H.scale == 1:
        return QIMap(
            H, G, lambda x: (x[0], 0), 1, 0, 1, f"incl[Z<{G}]",
            lambda y: [(y[0],)] if y[1] == 0 else [],
        )
    raise SpecError(f"unsupported inclusion {H} -> {G}")


def subgroup_floor_map(n: int) -> QIMap:
    """The n-to-1 self map of ``nZ`` in its own chart: ``n t -> n floor(t / n)``."""
    H = FreeAbelian(1, n)
    return QIMap(
        H,
        H,
        lambda x: (n * ((x[0] // n) // n),),
        n,
        1,
        n,
        f"floor[{n}]on{H}",
        lambda y: [(n * (n * (y[0] // n) + r),) for r in range(n)],
    )


def projection_map(k: int) -> QIMap:
    """``Z x Z/k -> Z``, ``(j, r) -> j``: a homomorphism with kernel of size k."""
    G = ZxCyclic(k)
    Z = FreeAbelian(1)
    return QIMap(
        G, Z, lambda x: (x[0],), 1, k // 2, k, f"proj[{G}]",
        lambda y: [(y[0], r) for r in range(k)],
    )


def interleave_chart(k: int) -> QIMap:
    """The bijection ``Z x Z/k -> Z``, ``(j, r) -> k j + r``."""
    G = ZxCyclic(k)
    Z = FreeAbelian(1)
    return QIMap(
        G, Z, lambda x: (k * x[0] + x[1],), k, k, 1, f"chart[{G}]",
        lambda y: [(y[0] // k, y[0] % k)],
    )


def compose(f: QIMap, g: QIMap) -> QIMap:
    """``f o g`` (apply ``g`` first)."""
    if g.target != f.source:
        raise SpecError(f"cannot compose {f.name} o {g.name}: {g.target} != {f.source}")
    pre = None
    if f.preimage is not None and g.preimage is not None:
        pre = lambda y: [x for z in f.preimage(y) for x in g.preimage(z)]  # noqa: E731
    fiber = f.fiber * g.fiber if f.fiber is not None and g.fiber is not None else None
    return QIMap(
        g.source,
        f.target,
        lambda x: f.rule(g.rule(x)),
        f.K * g.K,
        f.K * g.C + f.C,
        fiber,
        f"{f.name}o{g.name}",
        pre,
    )


def extend_by_cosets(
    G: MarkedGroup | str,
    in_subset: Callable,
    bijection: Callable,
    coset_reps: Sequence,
    window: Iterable | None = None,
    K: Fraction | int = 1,
    C: Fraction | int = 0,
    name: str = "ext",
) -> QIMap:
    """Extend ``f: G' -> G`` to ``G -> G`` by ``g' g_i -> f(g')``.

    ``in_subset`` is the membership test of ``G'`` and the right translates
    ``G' g_i`` must partition ``G``; this is verified on ``window``.  The
    claimed constants of the extension are derived from those of ``f``
    (``K``, ``C``) and the largest representative length ``D`` as
    ``(K, C + 2 K D)``.
    """
    G = make_group(G)
    reps = list(coset_reps)
    inv_reps = [G.inverse(r) for r in reps]

    def split(g):
        hits = [(G.multiply(g, ri), i) for i, ri in enumerate(inv_reps) if in_subset(G.multiply(g, ri))]
        if len(hits) != 1:
            raise SpecError(
                f"coset translates do not partition {G} at {G.format(g)} ({len(hits)} hits)"
            )
        return hits[0]

    if window is not None:
        for g in window:
            split(g)

    D = max(length_of(G, r) for r in reps)
    return QIMap(
        G,
        G,
        lambda g: bijection(split(g)[0]),
        K,
        C + 2 * K * D,
        len(reps),
        name,
    )


@dataclass
class DistortionReport:
    map: str
    window: str
    K_claimed: Fraction
    C_claimed: Fraction
    passed: bool
    worst_pair: tuple | None
    K_emp: Fraction | float
    pairs_checked: int = 0

    def to_json(self) -> str:
        return json.dumps(
            {
                "map": self.map,
                "window": self.window,
                "K_claimed": str(self.K_claimed),
                "C_claimed": str(self.C_claimed),
                "pass": self.passed,
                "worst_pair": list(self.worst_pair) if self.worst_pair else None,
                "K_emp": "inf" if self.K_emp == math.inf else str(self.K_emp),
            }
        )


def _distances(f: QIMap, points: Sequence, source_metric: WordMetric, target_metric: WordMetric):
    images = [f(x) for x in points]
    D = source_metric.pairwise(points)
    E = target_metric.pairwise(images)
    return D, E


def _k_emp_from(D: np.ndarray, E: np.ndarray, C) -> Fraction | float:
    iu = np.triu_indices(len(D), k=1)
    d, e = D[iu], E[iu]
    pairs = np.unique(np.stack([d, e], axis=1), axis=0) if len(d) else np.empty((0, 2), int)
    C = Fraction(C)
    best = Fraction(1)
    for d_, e_ in pairs:
        d_, e_ = int(d_), int(e_)
        if d_ == 0:
            if e_ > C:
                return math.inf
            continue
        best = max(best, (e_ - C) / d_)
        if e_ + C <= 0:
            return math.inf
        best = max(best, d_ / (e_ + C))
    return best


def verify_constants(
    f: QIMap,
    K,
    C,
    points: Sequence,
    source_metric: WordMetric | None = None,
    target_metric: WordMetric | None = None,
    window_label: str = "",
) -> DistortionReport:
    """Check the two-sided inequality on every pair of ``points``.

    The worst pair reported is the lexicographically smallest violating
    pair of indices into ``points``.
    """
    source_metric = source_metric or WordMetric(f.source)
    target_metric = target_metric or WordMetric(f.target)
    K, C = Fraction(K), Fraction(C)
    D, E = _distances(f, points, source_metric, target_metric)
    # exact integer form of the inequality: K(E + C) >= D and E <= K D + C
    Kn, Kd = K.numerator, K.denominator
    Cn, Cd = C.numerator, C.denominator
    lower_ok = Kn * (E * Cd + Cn) >= D * Kd * Cd
    upper_ok = E * Kd * Cd <= Kn * D * Cd + Cn * Kd
    bad = ~(lower_ok & upper_ok)
    np.fill_diagonal(bad, False)
    bad = np.triu(bad)
    worst = None
    if bad.any():
        i, j = np.argwhere(bad)[0]
        worst = (points[int(i)], points[int(j)])
    n = len(points)
    return DistortionReport(
        f.name,
        window_label or f"{n} points",
        K,
        C,
        worst is None,
        worst,
        _k_emp_from(D, E, C),
        n * (n - 1) // 2,
    )


def fit_constants(
    f: QIMap,
    C_fixed,
    points: Sequence,
    source_metric: WordMetric | None = None,
    target_metric: WordMetric | None = None,
) -> Fraction | float:
    """Smallest rational ``K >= 1`` for which the inequality holds with ``C_fixed``
    on all pairs of ``points`` (``math.inf`` if none does)."""
    source_metric = source_metric or WordMetric(f.source)
    target_metric = target_metric or WordMetric(f.target)
    D, E = _distances(f, points, source_metric, target_metric)
    return _k_emp_from(D, E, C_fixed)


@dataclass
class FiberCensus:
    counts: dict
    interior: dict

    def interior_counts(self) -> dict:
        return {y: c for y, c in self.counts.items() if self.interior[y]}

    def count(self, y) -> int:
        return self.counts.get(y, 0)


def fiber_census(
    f: QIMap,
    source_window: Sequence,
    targets: Sequence | None = None,
    target_metric: WordMetric | None = None,
    source_radius: int | None = None,
) -> FiberCensus:
    """Tally ``|f^-1(y) & window|`` by evaluating ``f`` on every window point.

    A target is interior when its whole fiber provably lies in the window:
    via ``f.preimage`` when available, otherwise from the claimed constants
    (``|x| <= K (d(y, f(e)) + C)`` must fit inside ``source_radius``).
    """
    window = list(source_window)
    members = set(window)
    counts: dict = {}
    for x in window:
        y = f(x)
        counts[y] = counts.get(y, 0) + 1
    if targets is None:
        targets = sorted(counts)
    else:
        for y in targets:
            counts.setdefault(y, 0)
    interior = {}
    if f.preimage is not None:
        for y in targets:
            interior[y] = all(x in members for x in f.preimage(y))
    else:
        if source_radius is None:
            raise SpecError("source_radius is required when the map has no preimage rule")
        tm = target_metric or WordMetric(f.target)
        fe = f(f.source.identity())
        for y in targets:
            interior[y] = f.K * (tm.distance(fe, y) + f.C) <= source_radius
    return FiberCensus({y: counts[y] for y in targets}, interior)


def pointwise_equal(f: QIMap, g: QIMap, window: Iterable) -> bool:
    return all(f(x) == g(x) for x in window)
