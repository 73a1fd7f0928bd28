import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from qiforge.marked_group import make_group
from qiforge.matching import (
    BOUNDED,
    LINEAR,
    MatchingWindow,
    build_window,
    classify_growth,
    feasible,
    max_matching,
    r_star,
    r_star_linear,
    validate_matching,
)
from qiforge.qi_maps import QIMap, compose, floor_map_Z, identity_map, inclusion_map, interleave_chart, subgroup_floor_map


def scipy_matching_size(rows, cols, adj):
    """Maximum matching between the source subset ``rows`` and target subset ``cols``."""
    if not rows or not cols:
        return 0
    cidx = {t: j for j, t in enumerate(cols)}
    data, ri, ci = [], [], []
    for i, s in enumerate(rows):
        for t in adj[s]:
            if t in cidx:
                ri.append(i)
                ci.append(cidx[t])
                data.append(1)
    if not data:
        return 0
    M = csr_matrix((data, (ri, ci)), shape=(len(rows), len(cols)))
    return int((maximum_bipartite_matching(M, perm_type="column") >= 0).sum())


def oracle_deficiencies(w):
    int_t = [t for t, v in enumerate(w.target_interior) if v]
    int_s = [s for s, v in enumerate(w.source_interior) if v]
    all_s = list(range(len(w.sources)))
    all_t = list(range(len(w.targets)))
    dt = len(int_t) - scipy_matching_size(all_s, int_t, w.adj)
    ds = len(int_s) - scipy_matching_size(int_s, all_t, w.adj)
    return dt, ds


def brute_feasible(w):
    """Try every injection of sources into targets-or-nothing."""
    S = range(len(w.sources))
    choices = [[None] + list(w.adj[s]) for s in S]
    for pick in itertools.product(*choices):
        used = [t for t in pick if t is not None]
        if len(used) != len(set(used)):
            continue
        if any(w.source_interior[s] and pick[s] is None for s in S):
            continue
        if all(not inside or t in used for t, inside in enumerate(w.target_interior)):
            return True
    return False


def check_certificates(w, res):
    assert validate_matching(w, res)
    if not res.target_saturated:
        A = res.hall_violator
        assert A and all(w.target_interior[t] for t in A)
        assert len(w.neighbors_of_targets(A)) < len(A)
    if not res.source_interior_saturated:
        A = res.source_violator
        assert A and all(w.source_interior[s] for s in A)
        assert len(w.neighbors_of_sources(A)) < len(A)


def test_inclusion_window_example():
    f = inclusion_map("2Z", "Z")
    w = build_window(f, 20, 5)
    assert len(w.sources) == 21
    assert sum(w.target_interior) == 31
    res = max_matching(w)
    assert res.target_deficiency == 10 and not res.feasible
    check_certificates(w, res)
    w10 = build_window(f, 20, 10)
    assert [w10.targets[t] for t, v in enumerate(w10.target_interior) if v] == [(y,) for y in range(-10, 11)]
    assert max_matching(w10).feasible
    assert max_matching(build_window(identity_map("Z"), 15, 0)).deficiency == 0
    diag = build_window(identity_map("Z"), 15, 0)
    assert all([diag.targets[t] for t in diag.adj[i]] == [x] for i, x in enumerate(diag.sources))


def test_floor_window_adjacency():
    w = build_window(floor_map_Z(2), 20, 1)
    s = w.sources.index((7,))
    assert [w.targets[t] for t in w.adj[s]] == [(2,), (3,), (4,)]


def test_sources_are_the_full_pullback():
    f = floor_map_Z(3)
    w = build_window(f, 10, 2)
    assert set(w.sources) == {(x,) for x in range(-200, 201) if abs(f((x,))[0]) <= 10}


def test_r_star_examples():
    assert r_star(inclusion_map("2Z", "Z"), 20) == 10
    assert r_star(floor_map_Z(2), 40) == 21
    assert r_star(identity_map("Z"), 30) == 0
    assert r_star(interleave_chart(2), 30) == 0
    comp = compose(inclusion_map("2Z", "Z"), subgroup_floor_map(2))
    assert r_star(comp, 40) <= 2


def test_classify_growth_examples():
    rep = classify_growth(inclusion_map("2Z", "Z"), [40, 80, 160])
    assert [r for _, r in rep.rows] == [20, 40, 80] and rep.verdict == LINEAR
    assert rep.slope == pytest.approx(0.5)
    assert classify_growth(identity_map("Z^2"), [4, 6, 8]).verdict == BOUNDED
    with pytest.raises(ValueError):
        classify_growth(identity_map("Z"), [10, 20])
    with pytest.raises(ValueError):
        classify_growth(identity_map("Z"), [10, 30, 20])


def test_csv_and_json():
    rep = classify_growth(identity_map("Z"), [5, 10, 15])
    assert rep.to_csv().splitlines()[0] == "L,r_star,slope,verdict"
    w = build_window(floor_map_Z(2), 10, 3)
    data = json.loads(max_matching(w).to_json(w))
    assert set(data) == {"map", "L", "R", "matched", "deficiency", "violator_size", "saturations"}


def random_map(seed):
    """floor(p x / q) plus a bounded perturbation on Z; K=3, C=3 dominate all choices."""
    rng = np.random.default_rng(seed)
    p, q = (int(v) for v in rng.integers(1, 4, size=2))
    p = max(p, q // 3 + (q % 3 > 0))
    table = rng.integers(-1, 2, size=801)
    Z = make_group("Z")
    return QIMap(Z, Z, lambda x: ((p * x[0]) // q + int(table[x[0] + 400]),), 3, 3, None, f"rand{seed}")


def random_window(seed):
    rng = np.random.default_rng(seed)
    ns, nt = int(rng.integers(1, 7)), int(rng.integers(1, 7))
    adj = [sorted({int(t) for t in rng.choice(nt, size=rng.integers(0, nt + 1))}) for _ in range(ns)]
    return MatchingWindow(
        "random", 0, 0, list(range(ns)), list(range(nt)), adj,
        [bool(v) for v in rng.integers(0, 2, size=ns)],
        [bool(v) for v in rng.integers(0, 2, size=nt)],
        0,
    )


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10_000))
def test_abstract_windows_against_oracles(seed):
    w = random_window(seed)
    res = max_matching(w)
    check_certificates(w, res)
    assert (res.target_deficiency, res.source_deficiency) == oracle_deficiencies(w)
    assert res.feasible == brute_feasible(w)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(4, 14), st.data())
def test_map_windows_against_scipy(seed, L, data):
    f = random_map(seed)
    R = data.draw(st.integers(0, L))
    w = build_window(f, L, R)
    res = max_matching(w)
    check_certificates(w, res)
    assert (res.target_deficiency, res.source_deficiency) == oracle_deficiencies(w)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(4, 12))
def test_binary_search_equals_scan(seed, L):
    f = random_map(seed)
    assert r_star(f, L) == r_star_linear(f, L)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.integers(4, 10))
def test_feasibility_monotone_in_radius(seed, L):
    f = random_map(seed)
    flags = [feasible(f, L, R) for R in range(L + 2)]
    assert flags == sorted(flags)
    assert flags[-1]
