"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

The lines are printed in the terminal summary (see conftest.py).
"""
import time
from fractions import Fraction

import numpy as np
import pytest

from qiforge import bs_model, folner, matching, qi_maps, uf_chain
from qiforge.marked_group import ball, make_group

from test_matching import check_certificates, oracle_deficiencies, random_map

RESULTS = []


def record(n, title, ok, detail):
    RESULTS.append(f"{'PASS' if ok else 'FAIL'} criterion {n} ({title}): {detail}")
    assert ok, detail


def fresh_matching_cache():
    matching._base.cache_clear()


def test_1_floor_map_audit():
    t0 = time.perf_counter()
    pts = [(x,) for x in range(-500, 501)]
    details, ok = [], True
    for n in (2, 3, 5):
        f = qi_maps.floor_map_Z(n)
        rep = qi_maps.verify_constants(f, n, 1, pts)
        counts = set(qi_maps.fiber_census(f, pts).interior_counts().values())
        ok &= rep.passed and counts == {n}
        details.append(f"n={n} pass={rep.passed} fibers={sorted(counts)} K_emp={rep.K_emp}")
    dt = time.perf_counter() - t0
    ok &= dt < 10
    record(1, "floor audit", ok, "; ".join(details) + f"; {dt:.1f}s < 10s")


def test_2_subgroup_inclusions():
    fresh_matching_cache()
    t0 = time.perf_counter()
    Ls = [40, 80, 160]
    two = matching.classify_growth(qi_maps.inclusion_map("2Z", "Z"), Ls)
    three = matching.classify_growth(qi_maps.inclusion_map("3Z", "Z"), Ls)
    dt = time.perf_counter() - t0
    oracle_ok = all(
        oracle_deficiencies(matching.build_window(rep_map, L, r)) == (0, 0)
        and oracle_deficiencies(matching.build_window(rep_map, L, r - 1)) != (0, 0)
        for rep_map, rep in ((qi_maps.inclusion_map("2Z", "Z"), two), (qi_maps.inclusion_map("3Z", "Z"), three))
        for L, r in rep.rows
    )
    in_band = all(L / 2 - 2 <= r <= L / 2 + 2 for L, r in two.rows)
    ok = (
        in_band
        and oracle_ok
        and two.verdict == matching.LINEAR and 0.4 <= two.slope <= 0.6
        and three.verdict == matching.LINEAR and 0.55 <= three.slope <= 0.78
        and dt < 60
    )
    record(
        2, "index-n inclusions", ok,
        f"2Z R*={[r for _, r in two.rows]} slope={two.slope:.3f} {two.verdict}; "
        f"3Z R*={[r for _, r in three.rows]} slope={three.slope:.3f} {three.verdict}; "
        f"scipy oracle agrees on R* and R*-1: {oracle_ok}; {dt:.1f}s < 60s",
    )


def test_3_composite_is_bounded():
    f = qi_maps.compose(qi_maps.inclusion_map("2Z", "Z"), qi_maps.subgroup_floor_map(2))
    rep = matching.classify_growth(f, [40, 80, 160, 320])
    rs = [r for _, r in rep.rows]
    ok = all(r is not None and r <= 2 for r in rs) and rep.verdict == matching.BOUNDED
    record(3, "inclusion after floor on 2Z", ok, f"R*={rs} verdict={rep.verdict}")


def test_4_projection_and_chart():
    Ls = [40, 80, 160]
    proj = matching.classify_growth(qi_maps.projection_map(2), Ls)
    chart = matching.classify_growth(qi_maps.interleave_chart(2), Ls)
    crs = [r for _, r in chart.rows]
    ok = proj.verdict == matching.LINEAR and all(r == 0 for r in crs)
    record(
        4, "projection vs chart", ok,
        f"projection R*={[r for _, r in proj.rows]} {proj.verdict}; chart R*={crs}",
    )


def test_5_chain_statistics():
    fam = folner.standard_family("Z")
    idx = uf_chain.vanishing_report(uf_chain.index_chain(2), fam, 100)
    exact = all(r.ratio == Fraction(r.i, 2) for r in idx.rows if r.i % 2 == 0)
    d = uf_chain.boundary_1(uf_chain.paired_edges(2), ball("Z", 101))
    tel = uf_chain.vanishing_report(d, fam, 100)
    small = all(r.sum_abs <= 1 for r in tel.rows)
    ok = exact and idx.verdict == uf_chain.EVIDENCE_NONZERO and small and tel.verdict == uf_chain.EVIDENCE_ZERO
    record(
        5, "chain statistic", ok,
        f"[Z]-[2Z] even ratios i/2: {exact}, {idx.verdict}; boundary chain |sum|<=1: {small}, {tel.verdict}",
    )


def test_6_folner_profiles():
    t0 = time.perf_counter()
    z = folner.profile(folner.standard_family("Z"), 100)
    z_ok = all(r.ratio == Fraction(2, 2 * r.i + 1) for r in z)
    bs = folner.profile(folner.standard_family("BS(1,2)"), 7)
    bs_rows = [r for r in bs if 3 <= r.i <= 7]
    r3, r7 = bs_rows[0].ratio, bs_rows[-1].ratio
    bs_ok = folner.is_strictly_decreasing(bs_rows) and r7 < r3 / 2
    f2 = folner.profile(folner.ball_family("F_2"), 6)
    f2_low = min(r.ratio for r in f2)
    dt = time.perf_counter() - t0
    ok = z_ok and bs_ok and f2_low >= Fraction(3, 2) and dt < 120
    record(
        6, "Følner profiles", ok,
        f"Z exact: {z_ok}; BS(1,2) N=3..7 decreasing, ratio(7)={float(r7):.4f} < ratio(3)/2={float(r3 / 2):.4f}: "
        f"{bs_ok}; F_2 min ratio={f2_low}; {dt:.1f}s < 120s",
    )


def test_7_bs_fiber_map():
    G = make_group("BS(1,2)")
    lo = bs_model.audit_f_C(G, 2, 6, C=4)
    hi = bs_model.audit_f_C(G, 2, 8, C=4)
    fibers = set(hi.interior_fibers)
    window = ball(G, 8)
    f = bs_model.f_C(G, 2)
    levels = all(f(g)[0] == g[0] for g in window)
    reps_ok = True
    for g in window:
        rep = bs_model.representative(G, bs_model.coset_of(G, g))
        x, k = bs_model.plane_position(G, rep.alpha)
        reps_ok &= abs(x) <= Fraction(2) ** k / 2
    stable = hi.K_emp <= Fraction(5, 4) * lo.K_emp
    ok = fibers == {2} and levels and reps_ok and stable
    record(
        7, "BS(1,2) 2-to-1 map", ok,
        f"fibers={sorted(fibers)} levels={levels} |x(alpha)|<=2^k/2: {reps_ok} "
        f"K_emp(6)={lo.K_emp} K_emp(8)={hi.K_emp}",
    )


def test_8_certificate_soundness():
    rng = np.random.default_rng(2024)
    violators = matchings = searches = 0
    ok = True
    for trial in range(100):
        f = random_map(int(rng.integers(0, 1_000_000)))
        L = int(rng.integers(4, 13))
        R = int(rng.integers(0, L + 1))
        w = matching.build_window(f, L, R)
        res = matching.max_matching(w)
        check_certificates(w, res)
        ok &= (res.target_deficiency, res.source_deficiency) == oracle_deficiencies(w)
        violators += len(res.hall_violator) > 0 or len(res.source_violator) > 0
        matchings += 1
        ok &= matching.r_star(f, L) == matching.r_star_linear(f, L)
        searches += 1
    record(
        8, "certificate soundness", ok,
        f"{matchings} windows validated, {violators} violators recounted, {searches} binary searches equal linear scans",
    )


def test_9_coset_extension():
    window = [(x,) for x in range(-1000, 1001)]
    ext = qi_maps.extend_by_cosets(
        "Z", lambda g: g[0] % 2 == 0, lambda g: (g[0] // 2,), [(0,), (1,)], window, K=2, C=0
    )
    same = qi_maps.pointwise_equal(ext, qi_maps.floor_map_Z(2), window)
    record(9, "coset extension", same, f"equal to floor[2] on [-1000,1000]: {same}")
