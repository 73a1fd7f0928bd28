"""Bundled reproducible experiments.

Each experiment writes its data files into an output directory and returns
a list of :class:`Check` results comparing observed and expected outcomes.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Callable

from . import bs_model, folner, matching, qi_maps, uf_chain
from .marked_group import ball


@dataclass
class Check:
    name: str
    expected: str
    observed: str
    ok: bool
    inconclusive: bool = False

    def as_dict(self):
        return {
            "name": self.name,
            "expected": self.expected,
            "observed": self.observed,
            "ok": self.ok,
        }


def _write(out: str, name: str, text: str) -> None:
    with open(os.path.join(out, name), "w", newline="") as fh:
        fh.write(text)


def _growth_check(name, report, expected) -> Check:
    return Check(
        name,
        expected,
        report.verdict,
        report.verdict == expected,
        report.verdict == matching.INCONCLUSIVE,
    )


def index_inclusions(out, cfg) -> list[Check]:
    checks = []
    for n in (2, 3):
        f = qi_maps.inclusion_map(f"{n}Z", "Z")
        rep = matching.classify_growth(f, cfg.L_list, slope_threshold=cfg.slope_threshold, bounded_slack=cfg.bounded_slack)
        _write(out, f"rstar_incl_{n}Z.csv", rep.to_csv())
        checks.append(_growth_check(f"inclusion {n}Z<Z", rep, matching.LINEAR))
    return checks


def kernel_projection(out, cfg) -> list[Check]:
    proj = matching.classify_growth(qi_maps.projection_map(2), cfg.L_list,
                                    slope_threshold=cfg.slope_threshold, bounded_slack=cfg.bounded_slack)
    chart = matching.classify_growth(qi_maps.interleave_chart(2), cfg.L_list,
                                     slope_threshold=cfg.slope_threshold, bounded_slack=cfg.bounded_slack)
    _write(out, "rstar_proj_ZxC2.csv", proj.to_csv())
    _write(out, "rstar_chart_ZxC2.csv", chart.to_csv())
    zero = all(r == 0 for _, r in chart.rows)
    return [
        _growth_check("projection ZxC2->Z", proj, matching.LINEAR),
        Check("chart ZxC2->Z has R*=0", "0", ",".join(str(r) for _, r in chart.rows), zero),
    ]


def floor_audits(out, cfg) -> list[Check]:
    checks = []
    pts = [(x,) for x in range(-cfg.radius, cfg.radius + 1)]
    reports = []
    for n in (2, 3, 5):
        f = qi_maps.floor_map_Z(n)
        rep = qi_maps.verify_constants(f, n, 1, pts, window_label=f"[-{cfg.radius},{cfg.radius}]")
        reports.append(json.loads(rep.to_json()))
        census = qi_maps.fiber_census(f, pts)
        counts = set(census.interior_counts().values())
        checks.append(Check(f"floor[{n}] passes (K={n}, C=1)", "pass", "pass" if rep.passed else "fail", rep.passed))
        checks.append(Check(f"floor[{n}] interior fibers", str({n}), str(counts), counts == {n}))
    _write(out, "audit_floor.json", json.dumps(reports, indent=1) + "\n")
    return checks


def coset_extension(out, cfg) -> list[Check]:
    window = [(x,) for x in range(-1000, 1001)]
    ext = qi_maps.extend_by_cosets(
        "Z", lambda g: g[0] % 2 == 0, lambda g: (g[0] // 2,), [(0,), (1,)], window, K=2, C=0
    )
    same = qi_maps.pointwise_equal(ext, qi_maps.floor_map_Z(2), window)
    sq = [(a, b) for a in range(-30, 31) for b in range(-30, 31)]
    ext2 = qi_maps.extend_by_cosets(
        "Z^2", lambda g: g[0] % 2 == 0, lambda g: (g[0] // 2, g[1]), [(0, 0), (1, 0)], sq, K=2, C=0
    )
    same2 = qi_maps.pointwise_equal(ext2, qi_maps.floor_map_Zm(2, 1, 2), sq)
    comp = matching.classify_growth(
        qi_maps.compose(qi_maps.inclusion_map("2Z", "Z"), qi_maps.subgroup_floor_map(2)),
        cfg.L_list, slope_threshold=cfg.slope_threshold, bounded_slack=cfg.bounded_slack,
    )
    _write(out, "rstar_composite_2.csv", comp.to_csv())
    return [
        Check("extension equals floor[2] on [-1000,1000]", "True", str(same), same),
        Check("extension equals floor[2]@1 on Z^2 box", "True", str(same2), same2),
        _growth_check("composite incl o floor on 2Z", comp, matching.BOUNDED),
    ]


def bs_floor_map(out, cfg) -> list[Check]:
    G = "BS(1,2)"
    lo = bs_model.audit_f_C(G, 2, cfg.bs_radius - 2, C=cfg.bs_C)
    hi = bs_model.audit_f_C(G, 2, cfg.bs_radius, C=cfg.bs_C)
    fibers = set(hi.interior_fibers)
    window = ball(G, cfg.bs_radius)
    f = bs_model.f_C(G, 2)
    levels = all(f(g)[0] == g[0] for g in window)
    with open(os.path.join(out, "bs_f_C_window.csv"), "w", newline="") as fh:
        bs_model.dump_csv(G, 2, ball(G, 3).elements, fh)
    stable = hi.K_emp <= 1.25 * lo.K_emp
    summary = {
        "radius_lo": lo.radius, "K_emp_lo": str(lo.K_emp),
        "radius_hi": hi.radius, "K_emp_hi": str(hi.K_emp), "C": cfg.bs_C,
        "interior_fibers": sorted(fibers), "max_image_length": hi.max_image_length,
    }
    _write(out, "audit_bs.json", json.dumps(summary, indent=1) + "\n")
    return [
        Check("f_C interior fibers", "{2}", str(fibers), fibers == {2}),
        Check("f_C preserves levels", "True", str(levels), levels),
        Check("K_emp stability", f"<= 1.25*{lo.K_emp}", str(hi.K_emp), stable),
    ]


def chain_classes(out, cfg) -> list[Check]:
    fam = folner.standard_family("Z")
    rule = uf_chain.DecisionRule(cfg.nonzero_threshold, cfg.zero_threshold, cfg.window)
    idx = uf_chain.vanishing_report(uf_chain.index_chain(2), fam, cfg.i_max, rule)
    tel = uf_chain.boundary_1(uf_chain.paired_edges(2), ball("Z", cfg.i_max + 1))
    tel_rep = uf_chain.vanishing_report(tel, fam, cfg.i_max, rule)
    _write(out, "uf_index_2.csv", idx.to_csv())
    _write(out, "uf_pairs_boundary.csv", tel_rep.to_csv())
    return [
        Check("[Z]-[2Z]", uf_chain.EVIDENCE_NONZERO, idx.verdict, idx.verdict == uf_chain.EVIDENCE_NONZERO,
              idx.verdict == uf_chain.INCONCLUSIVE),
        Check("boundary chain", uf_chain.EVIDENCE_ZERO, tel_rep.verdict, tel_rep.verdict == uf_chain.EVIDENCE_ZERO,
              tel_rep.verdict == uf_chain.INCONCLUSIVE),
    ]


def folner_profiles(out, cfg) -> list[Check]:
    checks = []
    for spec in ("Z", "Z^2", "ZxC2", "BS(1,2)"):
        fam = folner.standard_family(spec)
        i_max = min(fam.i_max, cfg.i_max)
        rows = folner.profile(fam, i_max)
        with open(os.path.join(out, f"folner_{_slug(spec)}.csv"), "w", newline="") as fh:
            folner.write_profile_csv(rows, fh)
        ok = folner.is_strictly_decreasing(rows) and rows[-1].ratio < rows[0].ratio / 2
        checks.append(Check(f"{spec} ratios decrease and halve", "True", str(ok), ok))
    rows = folner.profile(folner.ball_family("F_2"), 6)
    with open(os.path.join(out, "folner_F_2.csv"), "w", newline="") as fh:
        folner.write_profile_csv(rows, fh)
    low = min(r.ratio for r in rows)
    checks.append(Check("F_2 ball ratios bounded below", ">= 3/2", str(low), low >= 1.5))
    return checks


def _slug(spec: str) -> str:
    return spec.replace("^", "").replace("(", "").replace(")", "").replace(",", "_")


EXPERIMENTS: dict[str, Callable] = {
    "thm-3.6-zn": index_inclusions,
    "thm-3.8-kernel": kernel_projection,
    "sec4-floor": floor_audits,
    "sec4-extend": coset_extension,
    "sec4-bs": bs_floor_map,
    "thm-3.5-class": chain_classes,
    "folner-profiles": folner_profiles,
}
