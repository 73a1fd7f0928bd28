"""Bounded-displacement bijections on finite windows.

A map ``f: X -> Y`` is a bounded distance from a bijection iff some
bijection ``g`` has ``d(g(x), f(x)) <= R`` for a fixed ``R``.  On a window of
scale ``L`` this becomes a bipartite matching problem:

* targets are the ball of radius ``L`` in ``Y``, sources are all ``x`` with
  ``|f(x)| <= L``;
* ``x`` and ``y`` are joined when ``d(y, f(x)) <= R``;
* a target (source) is *interior* when ``|y| <= L - R`` (``|f(x)| <= L - R``),
  which guarantees that all of its potential partners are in the window.

Feasibility at ``R`` means one matching saturates both interior sets.  When
it fails, a Hall violator (a set ``A`` of interior vertices with
``|N(A)| < |A|``) is returned as a certificate.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import BudgetExceeded
from .marked_group import MarkedGroup, ball
from .qi_maps import QIMap

MATCHING_BUDGET = 100_000
SLOPE_THRESHOLD = 0.25
BOUNDED_SLACK = 2

LINEAR = "linear"
BOUNDED = "bounded"
INCONCLUSIVE = "inconclusive"


@dataclass
class MatchingWindow:
    map_name: str
    L: int
    R: int
    sources: list
    targets: list
    adj: list  # adj[i] = sorted target indices joined to source i
    source_interior: list
    target_interior: list
    margin: int

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self.adj)

    def target_adj(self) -> list:
        radj = [[] for _ in self.targets]
        for s, nbrs in enumerate(self.adj):
            for t in nbrs:
                radj[t].append(s)
        return radj

    def neighbors_of_targets(self, A) -> set:
        """Sources adjacent to some target index in ``A`` (direct recount)."""
        A = set(A)
        return {s for s, nbrs in enumerate(self.adj) if any(t in A for t in nbrs)}

    def neighbors_of_sources(self, A) -> set:
        out = set()
        for s in A:
            out.update(self.adj[s])
        return out


@dataclass
class _Base:
    f: QIMap
    L: int
    targets: list
    target_len: np.ndarray
    target_index: dict
    sources: list
    source_img_len: np.ndarray
    source_img: list


def _source_radius(f: QIMap, L: int, fe_len: int) -> int:
    # -C + |x|/K <= d(f(x), f(e)) <= L + |f(e)|
    return math.floor(f.K * (L + fe_len + f.C))


@lru_cache(maxsize=64)
def _base(f: QIMap, L: int, budget: int) -> _Base:
    T = ball(f.target, L, budget)
    targets = sorted(T.elements)
    target_index = {y: i for i, y in enumerate(targets)}
    target_len = np.array([T.word_length(y) for y in targets], dtype=np.int64)
    fe = f(f.source.identity())
    if fe not in T.index:
        raise ValueError(f"{f.name}: f(e) lies outside the target window at L={L}")
    S = ball(f.source, _source_radius(f, L, T.word_length(fe)), budget)
    sources, img, img_len = [], [], []
    for x in sorted(S.elements):
        y = f(x)
        if y in T.index:
            sources.append(x)
            img.append(y)
            img_len.append(T.word_length(y))
    if len(sources) + len(targets) > budget:
        raise BudgetExceeded(f"matching window at L={L} has {len(sources) + len(targets)} vertices")
    return _Base(f, L, targets, target_len, target_index, sources, np.array(img_len, dtype=np.int64), img)


def build_window(f: QIMap, L: int, R: int, budget: int = MATCHING_BUDGET) -> MatchingWindow:
    base = _base(f, L, budget)
    G: MarkedGroup = f.target
    offsets = ball(G, R).elements
    idx = base.target_index
    adj = []
    for y0 in base.source_img:
        nbrs = set()
        for u in offsets:
            t = idx.get(G.multiply(y0, u))
            if t is not None:
                nbrs.add(t)
        adj.append(sorted(nbrs))
    limit = L - R
    return MatchingWindow(
        f.name,
        L,
        R,
        base.sources,
        base.targets,
        adj,
        [bool(v <= limit) for v in base.source_img_len],
        [bool(v <= limit) for v in base.target_len],
        R,
    )


@dataclass
class MatchingResult:
    matching: dict  # source index -> target index
    target_saturated: bool
    source_interior_saturated: bool
    target_deficiency: int
    source_deficiency: int
    hall_violator: list = field(default_factory=list)  # target indices
    source_violator: list = field(default_factory=list)  # source indices

    @property
    def deficiency(self) -> int:
        return self.target_deficiency + self.source_deficiency

    @property
    def feasible(self) -> bool:
        return self.target_saturated and self.source_interior_saturated

    def report(self, w: MatchingWindow) -> dict:
        return {
            "map": w.map_name,
            "L": w.L,
            "R": w.R,
            "matched": len(self.matching),
            "deficiency": self.deficiency,
            "violator_size": len(self.hall_violator) + len(self.source_violator),
            "saturations": {
                "interior_targets": self.target_saturated,
                "interior_sources": self.source_interior_saturated,
            },
        }

    def to_json(self, w: MatchingWindow) -> str:
        return json.dumps(self.report(w))


def _augment_targets(w: MatchingWindow, radj, mate_s, mate_t, root) -> bool:
    """BFS for an augmenting path from a free target ``root``."""
    parent_s = {}
    queue = deque([root])
    seen_t = {root}
    while queue:
        t = queue.popleft()
        for s in radj[t]:
            if s in parent_s:
                continue
            parent_s[s] = t
            if mate_s[s] < 0:
                while True:
                    tt = parent_s[s]
                    prev = mate_t[tt]
                    mate_s[s], mate_t[tt] = tt, s
                    if tt == root:
                        return True
                    s = prev
            nt = mate_s[s]
            if nt not in seen_t:
                seen_t.add(nt)
                queue.append(nt)
    return False


def _augment_sources(w: MatchingWindow, mate_s, mate_t, root) -> bool:
    """BFS from a free interior source for either a free target or a
    target held by a non-interior source (which is then released)."""
    parent_t = {}
    queue = deque([root])
    seen_s = {root}
    while queue:
        s = queue.popleft()
        for t in w.adj[s]:
            if t in parent_t:
                continue
            parent_t[t] = s
            owner = mate_t[t]
            if owner < 0 or not w.source_interior[owner]:
                if owner >= 0:
                    mate_s[owner] = -1
                while True:
                    ss = parent_t[t]
                    prev = mate_s[ss]
                    mate_s[ss], mate_t[t] = t, ss
                    if ss == root:
                        return True
                    t = prev
            if owner not in seen_s:
                seen_s.add(owner)
                queue.append(owner)
    return False


def _reach_from_targets(radj, mate_s, roots) -> tuple[set, set]:
    A, N = set(roots), set()
    queue = deque(roots)
    while queue:
        t = queue.popleft()
        for s in radj[t]:
            if s not in N:
                N.add(s)
                nt = mate_s[s]
                if nt >= 0 and nt not in A:
                    A.add(nt)
                    queue.append(nt)
    return A, N


def _reach_from_sources(w, mate_t, roots) -> tuple[set, set]:
    A, N = set(roots), set()
    queue = deque(roots)
    while queue:
        s = queue.popleft()
        for t in w.adj[s]:
            if t not in N:
                N.add(t)
                ns = mate_t[t]
                if ns >= 0 and ns not in A:
                    A.add(ns)
                    queue.append(ns)
    return A, N


def max_matching(w: MatchingWindow) -> MatchingResult:
    """Augmenting-path matching saturating as much of both interiors as possible.

    First every interior target is offered an augmenting path (this yields a
    maximum matching of the interior targets); then every interior source is
    offered a path that ends at a free target or at a target currently held
    by a non-interior source.  Neither step ever unmatches an interior
    vertex, so both deficiencies are minimal.  Vertices are processed in
    index order, which is the normal-form order of the window.
    """
    radj = w.target_adj()
    mate_s = [-1] * len(w.sources)
    mate_t = [-1] * len(w.targets)
    for t, inside in enumerate(w.target_interior):
        if inside:
            _augment_targets(w, radj, mate_s, mate_t, t)
    free_t = [t for t, inside in enumerate(w.target_interior) if inside and mate_t[t] < 0]
    hall = []
    if free_t:
        A, N = _reach_from_targets(radj, mate_s, free_t)
        assert len(N) == len(A) - len(free_t)
        hall = sorted(A)
    for s, inside in enumerate(w.source_interior):
        if inside and mate_s[s] < 0:
            _augment_sources(w, mate_s, mate_t, s)
    free_s = [s for s, inside in enumerate(w.source_interior) if inside and mate_s[s] < 0]
    sviol = []
    if free_s:
        A, N = _reach_from_sources(w, mate_t, free_s)
        sviol = sorted(A)
    return MatchingResult(
        {s: t for s, t in enumerate(mate_s) if t >= 0},
        not free_t,
        not free_s,
        len(free_t),
        len(free_s),
        hall,
        sviol,
    )


def validate_matching(w: MatchingWindow, res: MatchingResult) -> bool:
    """Edge-by-edge check that ``res.matching`` is an injection along window edges."""
    used = set()
    for s, t in res.matching.items():
        if t not in w.adj[s] or t in used:
            return False
        used.add(t)
    return True


def feasible(f: QIMap, L: int, R: int, budget: int = MATCHING_BUDGET) -> bool:
    return max_matching(build_window(f, L, R, budget)).feasible


def r_star(f: QIMap, L: int, R_max: int | None = None, budget: int = MATCHING_BUDGET) -> int | None:
    """Smallest ``R <= R_max`` at which the window-``L`` matching is feasible,
    or ``None``.  Feasibility is monotone in ``R`` (edges grow, interiors
    shrink), so a binary search is exact."""
    R_max = L + 1 if R_max is None else R_max
    if not feasible(f, L, R_max, budget):
        return None
    lo, hi = 0, R_max
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(f, L, mid, budget):
            hi = mid
        else:
            lo = mid + 1
    return lo


def r_star_linear(f: QIMap, L: int, R_max: int | None = None, budget: int = MATCHING_BUDGET) -> int | None:
    R_max = L + 1 if R_max is None else R_max
    for R in range(R_max + 1):
        if feasible(f, L, R, budget):
            return R
    return None


@dataclass
class RStarReport:
    map_name: str
    rows: list  # (L, R*) pairs; R* is None when infeasible up to R_max
    slope: float | None
    verdict: str
    note: str = ""

    def to_csv(self) -> str:
        lines = ["L,r_star,slope,verdict"]
        s = "" if self.slope is None else f"{self.slope:.6f}"
        for L, r in self.rows:
            lines.append(f"{L},{'' if r is None else r},{s},{self.verdict}")
        return "\n".join(lines) + "\n"


def classify_growth(
    f: QIMap,
    L_list,
    R_max=None,
    slope_threshold: float = SLOPE_THRESHOLD,
    bounded_slack: int = BOUNDED_SLACK,
    budget: int = MATCHING_BUDGET,
) -> RStarReport:
    """Least-squares slope of ``R*(L)`` against ``L`` and a growth verdict.

    ``linear``: slope >= ``slope_threshold`` and ``R*`` strictly increasing.
    ``bounded``: ``R*(L_max) <= R*(L_min) + bounded_slack``.
    """
    L_list = list(L_list)
    if len(L_list) < 3 or any(a >= b for a, b in zip(L_list, L_list[1:])):
        raise ValueError("classify_growth needs at least 3 strictly increasing window sizes")
    rows = []
    for L in L_list:
        rm = R_max(L) if callable(R_max) else R_max
        rows.append((L, r_star(f, L, rm, budget)))
    if any(r is None for _, r in rows):
        return RStarReport(f.name, rows, None, INCONCLUSIVE, "R* infeasible up to R_max for some L")
    xs = np.array([L for L, _ in rows], dtype=float)
    ys = np.array([r for _, r in rows], dtype=float)
    slope = float(np.polyfit(xs, ys, 1)[0])
    rs = [r for _, r in rows]
    if slope >= slope_threshold and all(a < b for a, b in zip(rs, rs[1:])):
        verdict = LINEAR
    elif rs[-1] <= rs[0] + bounded_slack:
        verdict = BOUNDED
    else:
        verdict = INCONCLUSIVE
    return RStarReport(f.name, rows, slope, verdict)
