"""Command-line entry point.

    qiforge [--config PATH] [--out DIR] [--budget N] [--threads N] COMMAND ...

Exit status is 0 on success, 2 when a verdict is inconclusive and 1 on any
error; errors are reported as a single JSON line on stderr.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import experiments, folner, matching, qi_maps, uf_chain
from .errors import BudgetExceeded, QIForgeError, SpecError
from .marked_group import DEFAULT_BUDGET, FreeGroup, WordMetric, ball, make_group
from .specs import parse_chain, parse_map

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


@dataclass
class ExperimentConfig:
    groups: list = field(default_factory=list)
    map: str | None = None
    chain: str | None = None
    L_list: list = field(default_factory=lambda: [40, 80, 160])
    R_max: int | None = None
    radius: int = 500
    i_max: int = 100
    bs_radius: int = 8
    bs_C: int = 4
    slope_threshold: float = matching.SLOPE_THRESHOLD
    bounded_slack: int = matching.BOUNDED_SLACK
    nonzero_threshold: int = 10
    zero_threshold: int = 2
    window: int = 5
    budget: int = DEFAULT_BUDGET
    threads: int = 1
    out: str = "qiforge-out"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise SpecError("config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise SpecError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=1, sort_keys=True) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qiforge", description=__doc__.split("\n")[0])
    p.add_argument("--config", help="JSON experiment config")
    p.add_argument("--out", help="output directory")
    p.add_argument("--budget", type=int, help="element-count budget for balls")
    p.add_argument("--threads", type=int, help="accepted for sweeps; runs are deterministic either way")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ball", help="dump a word-metric ball as CSV")
    s.add_argument("group")
    s.add_argument("r", type=int)

    s = sub.add_parser("folner", help="isoperimetric profile of the standard family")
    s.add_argument("group")
    s.add_argument("i_max", type=int, nargs="?")

    s = sub.add_parser("uf-test", help="Følner sum statistic of a 0-chain")
    s.add_argument("chain")
    s.add_argument("group")
    s.add_argument("i_max", type=int, nargs="?")

    s = sub.add_parser("qi-audit", help="exhaustive constant audit of a map")
    s.add_argument("map")
    s.add_argument("radius", type=int)
    s.add_argument("--K", type=Fraction)
    s.add_argument("--C", type=Fraction)

    s = sub.add_parser("rstar", help="minimal displacement radius growth")
    s.add_argument("map")
    s.add_argument("--L", dest="L_list", type=lambda v: [int(x) for x in v.split(",")])
    s.add_argument("--R-max", dest="R_max", type=int)

    s = sub.add_parser("reproduce", help="run a bundled experiment")
    s.add_argument("experiment_id", choices=sorted(experiments.EXPERIMENTS))
    return p


def _resolve(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config:
        with open(args.config) as fh:
            cfg = ExperimentConfig.from_json(fh.read())
    if args.out:
        cfg.out = args.out
    if args.budget is not None:
        cfg.budget = args.budget
    if args.threads is not None:
        cfg.threads = args.threads
    env = os.environ.get("QIFORGE_BUDGET")
    if env:
        try:
            cfg.budget = int(env)
        except ValueError:
            raise SpecError(f"QIFORGE_BUDGET is not an integer: {env!r}") from None
    for name in ("L_list", "R_max", "i_max"):
        v = getattr(args, name, None)
        if v is not None:
            setattr(cfg, name, v)
    return cfg


def _emit(cfg: ExperimentConfig, name: str, text: str) -> str:
    path = os.path.join(cfg.out, name)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def cmd_ball(cfg, args) -> int:
    B = ball(args.group, args.r, cfg.budget)
    path = os.path.join(cfg.out, f"ball_{experiments._slug(str(B.group))}_r{args.r}.csv")
    B.to_csv(path)
    print(f"{B.group} r={args.r}: {len(B)} elements -> {path}")
    return EXIT_OK


def cmd_folner(cfg, args) -> int:
    G = make_group(args.group)
    if isinstance(G, FreeGroup):
        fam = folner.ball_family(G, args.i_max or 6)
    else:
        fam = folner.standard_family(G)
    rows = folner.profile(fam, args.i_max or fam.i_max, cfg.budget)
    path = os.path.join(cfg.out, f"folner_{experiments._slug(str(G))}.csv")
    folner.write_profile_csv(rows, path)
    for r in rows:
        print(f"{r.i}\t{r.size}\t{r.boundary_size}\t{float(r.ratio):.6f}")
    return EXIT_OK


def cmd_uf_test(cfg, args) -> int:
    fam = folner.standard_family(args.group)
    i_max = args.i_max or cfg.i_max
    if str(fam.group) != "Z":
        raise SpecError("bundled chains live on Z")
    c = parse_chain(args.chain, i_max)
    rule = uf_chain.DecisionRule(Fraction(cfg.nonzero_threshold), Fraction(cfg.zero_threshold), cfg.window)
    rep = uf_chain.vanishing_report(c, fam, i_max, rule)
    _emit(cfg, f"uf_{experiments._slug(args.chain.replace(':', '_'))}.csv", rep.to_csv())
    print(f"verdict: {rep.verdict}")
    return EXIT_INCONCLUSIVE if rep.verdict == uf_chain.INCONCLUSIVE else EXIT_OK


def cmd_qi_audit(cfg, args) -> int:
    f = parse_map(args.map)
    K = args.K if args.K is not None else f.K
    C = args.C if args.C is not None else f.C
    pts = ball(f.source, args.radius, cfg.budget).elements
    src = WordMetric.for_pairs(f.source, pts, cfg.budget)
    tgt = WordMetric.for_pairs(f.target, [f(x) for x in pts], cfg.budget)
    rep = qi_maps.verify_constants(f, K, C, pts, src, tgt, f"ball(r={args.radius})")
    text = rep.to_json()
    _emit(cfg, "qi_audit.json", text + "\n")
    print(text)
    return EXIT_OK


def cmd_rstar(cfg, args) -> int:
    f = parse_map(args.map)
    rep = matching.classify_growth(
        f, cfg.L_list, cfg.R_max, cfg.slope_threshold, cfg.bounded_slack,
        min(matching.MATCHING_BUDGET, cfg.budget),
    )
    _emit(cfg, "rstar.csv", rep.to_csv())
    sys.stdout.write(rep.to_csv())
    return EXIT_INCONCLUSIVE if rep.verdict == matching.INCONCLUSIVE else EXIT_OK


def cmd_reproduce(cfg, args) -> int:
    run = experiments.EXPERIMENTS[args.experiment_id]
    checks = run(cfg.out, cfg)
    summary = {"experiment": args.experiment_id, "checks": [c.as_dict() for c in checks]}
    _emit(cfg, f"{args.experiment_id}.json", json.dumps(summary, indent=1) + "\n")
    for c in checks:
        print(f"{'PASS' if c.ok else 'FAIL'} {c.name}: expected {c.expected}, observed {c.observed}")
    if any(c.inconclusive for c in checks):
        return EXIT_INCONCLUSIVE
    if not all(c.ok for c in checks):
        _fail("reproduction-mismatch", f"{args.experiment_id}: some checks failed")
        return EXIT_ERROR
    return EXIT_OK


COMMANDS = {
    "ball": cmd_ball,
    "folner": cmd_folner,
    "uf-test": cmd_uf_test,
    "qi-audit": cmd_qi_audit,
    "rstar": cmd_rstar,
    "reproduce": cmd_reproduce,
}


def _fail(kind: str, reason: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "reason": reason}) + "\n")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        cfg = _resolve(args)
        os.makedirs(cfg.out, exist_ok=True)
        _emit(cfg, "resolved_config.json", cfg.to_json())
        return COMMANDS[args.command](cfg, args)
    except BudgetExceeded as exc:
        _fail("budget", str(exc))
    except (SpecError, json.JSONDecodeError, TypeError) as exc:
        _fail("parse", str(exc))
    except QIForgeError as exc:
        _fail("runtime", str(exc))
    except OSError as exc:
        _fail("io", str(exc))
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
