"""Command line entry point.

Reports go to ``--out`` as JSON and to standard output as TSV.  Exit status is
0 when every case passes, 1 when some case fails, 2 on usage or config errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .asymptotics import (
    arc_asymptotic_multiplier_ideal,
    closed_form_jm,
    izumi_constant,
    stabilize_multiplier_ideal,
    volume_estimate,
)
from .config import (
    ConfigError,
    build_family,
    build_valuation,
    load_config,
    parse_ideal,
    parse_number,
)
from .harness import (
    Report,
    verify_arc_counterexample,
    verify_delta_bound,
    verify_izumi,
    verify_minkowski,
    verify_rees_bound,
    verify_theorem_a,
    zariski_volume_report,
)
from .monomials import MonomialIdeal, monomial_string
from .newton import howald_multiplier_ideal
from .valuations import Arc, ArcIdeal, MonomialVal, MonomialValuation, Zariski, ZariskiValuation
from .values import depth_limit

SUITES = ("theorem-a", "delta", "izumi", "minkowski", "rees", "arc", "zariski")


class UsageError(ValueError):
    pass


def _gens_text(I: MonomialIdeal, names: Sequence[str]) -> str:
    if I.is_zero:
        return "0"
    return ", ".join(monomial_string(g, names) for g in reversed(I.gens))


def _default_grid(m_max: Fraction, count: int) -> list[Fraction]:
    return [m_max * k / count for k in range(1, count + 1)]


class _Run:
    """Resolved options: command-line flags override the config file."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.cfg = load_config(args.config) if args.config else {}
        ring = self.cfg.get("ring", {})
        self.variables = tuple(ring["variables"]) if "variables" in ring else None
        out = self.cfg.get("output", {})
        self.out = args.out or out.get("report")
        self.tsv = out.get("tsv")
        grid = self.cfg.get("grid", {})
        self.grid = grid
        self.samples = args.samples if args.samples is not None else grid.get("samples", 40)
        self.seed = args.seed if args.seed is not None else self.cfg.get("seed", 0)

    # -- inputs ---------------------------------------------------------
    def names(self, n: int) -> Sequence[str]:
        if self.variables and len(self.variables) == n:
            return self.variables
        return "xyzw"[:n] if n <= 4 else [f"x{i + 1}" for i in range(n)]

    def m(self, default=None):
        raw = getattr(self.args, "m", None)
        if raw is None:
            raw = self.cfg.get("m", default)
        if raw is None:
            raise UsageError("an index is required (--m or \"m\" in the config)")
        return parse_number(raw)

    def m_max(self, default):
        raw = self.args.m_max if self.args.m_max is not None else self.grid.get("m_max", default)
        v = parse_number(raw)
        if not v.is_rational:
            raise UsageError("m-max must be rational")
        return v.rational

    def valuation(self):
        a = self.args
        if getattr(a, "weights", None):
            return MonomialValuation(tuple(parse_number(w) for w in a.weights.split(",")))
        if "valuation" in self.cfg:
            return build_valuation(self.cfg["valuation"])
        fam = self.cfg.get("family")
        if fam and fam["type"] in ("monomial", "arc", "zariski"):
            return build_valuation(fam)
        raise UsageError("a valuation is required (--weights or \"valuation\" in the config)")

    def family(self):
        if getattr(self.args, "weights", None):
            return MonomialVal(self.valuation())
        if "family" in self.cfg:
            return build_family(self.cfg["family"], self.variables)
        if "valuation" in self.cfg:
            return build_family(self.cfg["valuation"], self.variables)
        raise UsageError("a family is required (--weights, \"family\" or \"valuation\" in the config)")

    def ideal(self) -> MonomialIdeal:
        raw = getattr(self.args, "ideal", None) or self.cfg.get("ideal")
        if raw is None:
            raise UsageError("an ideal is required (--ideal or \"ideal\" in the config)")
        return parse_ideal(raw, self.variables)

    # -- outputs --------------------------------------------------------
    def emit(self, payload: dict, text: str) -> None:
        print(text)
        if self.out:
            Path(self.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")

    def emit_report(self, rep: Report) -> int:
        tsv = rep.to_tsv()
        print(tsv)
        if self.out:
            Path(self.out).write_text(rep.dumps() + "\n")
        if self.tsv:
            Path(self.tsv).write_text(tsv + "\n")
        return 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# subcommands


def cmd_ideal(run: _Run) -> int:
    F = run.family()
    m = run.m()
    I = F.at(m)
    if isinstance(I, MonomialIdeal):
        payload = {"m": str(m), "generators": I.to_json()}
        if I.has_finite_colength():
            payload["length"] = I.length()
        run.emit(payload, _gens_text(I, run.names(I.n)))
        return 0
    if isinstance(I, ArcIdeal):
        gens = I.generators()
        payload = {"m": str(m), "generators": [g.to_json() for g in gens], "length": I.length()}
        run.emit(payload, ", ".join(str(g) for g in gens))
        return 0
    payload = {"m": str(m), "length": I.length()}
    run.emit(payload, f"length {payload['length']}")
    return 0


def cmd_multiplier(run: _Run) -> int:
    I = run.ideal()
    raw = run.args.c if run.args.c is not None else run.cfg.get("coefficient", 1)
    c = parse_number(raw)
    if not c.is_rational:
        raise UsageError("the coefficient must be rational")
    J = howald_multiplier_ideal(I, c.rational)
    run.emit({"ideal": I.to_json(), "coefficient": str(c), "multiplier_ideal": J.to_json()}, _gens_text(J, run.names(I.n)))
    return 0


def cmd_asymptotic(run: _Run) -> int:
    F = run.family()
    m = run.m()
    if isinstance(F, Arc):
        J = arc_asymptotic_multiplier_ideal(m)
        run.emit({"m": str(m), "j_m": J.to_json(), "closed_form": True}, _gens_text(J, run.names(2)))
        return 0
    stab = stabilize_multiplier_ideal(F, m)
    payload = {
        "m": str(m),
        "j_m": stab.ideal.to_json(),
        "p": stab.p,
        "certified": stab.certified,
        "chain": [{"p": p, "ideal": J.to_json()} for p, J in stab.chain],
    }
    names = run.names(F.n)
    lines = ["p\tJ((1/p) a_pm)"] + [f"{p}\t{_gens_text(J, names)}" for p, J in stab.chain]
    if isinstance(F, MonomialVal):
        cf = closed_form_jm(F.valuation, m)
        payload["closed_form"] = cf.to_json()
        payload["agrees_with_closed_form"] = cf == stab.ideal
        lines.append(f"closed form\t{_gens_text(cf, names)}")
    run.emit(payload, "\n".join(lines))
    return 0


def cmd_volume(run: _Run) -> int:
    F = run.family()
    if isinstance(F, Zariski):
        t = min(3, F.valuation.depth)
        default = str(F.valuation.c[t] * F.valuation.beta[t])
    else:
        default = 50
    est = volume_estimate(F, run.m_max(default), run.samples)
    summary = est.summary()
    payload = {
        "summary": summary,
        "samples": [{"m": str(m), "length": l, "normalized": str(r)} for m, l, r in est.samples],
    }
    run.emit(payload, est.to_tsv() + "\n# " + json.dumps(summary, sort_keys=True))
    return 0


def _m_list(run: _Run, default_max: int, count: int) -> list:
    if "m_list" in run.grid:
        return [parse_number(x) for x in run.grid["m_list"]]
    return _default_grid(run.m_max(default_max), count)


def cmd_verify(run: _Run) -> int:
    suite = run.args.suite or run.cfg.get("suite")
    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if suite == "theorem-a":
        l_list = run.grid.get("l_list", [1, 2, 3, 4, 5])
        return run.emit_report(verify_theorem_a(run.valuation(), _m_list(run, 20, 15), l_list))
    if suite == "delta":
        return run.emit_report(verify_delta_bound(run.valuation(), _m_list(run, 20, 15)))
    if suite == "izumi":
        trials = run.args.trials if run.args.trials is not None else run.cfg.get("trials", 1000)
        return run.emit_report(verify_izumi(run.valuation(), trials, run.seed))
    if suite == "minkowski":
        fams = run.cfg.get("families")
        if not fams:
            raise UsageError("the minkowski suite needs \"families\" in the config")
        F, G = (build_family(f, run.variables) for f in fams)
        if not (isinstance(F, MonomialVal) and isinstance(G, MonomialVal)):
            raise UsageError("the minkowski suite takes two monomial valuation families")
        return run.emit_report(verify_minkowski(F, G, run.m_max(40), run.samples))
    if suite == "rees":
        return run.emit_report(verify_rees_bound(run.ideal()))
    if suite == "arc":
        return run.emit_report(verify_arc_counterexample(int(run.m_max(50))))
    return cmd_zariski(run)


def cmd_zariski(run: _Run) -> int:
    if "valuation" in run.cfg or "family" in run.cfg:
        v = run.valuation()
        if not isinstance(v, ZariskiValuation):
            raise UsageError("the zariski report needs a zariski valuation")
    else:
        v = ZariskiValuation.primes(8)
    count_depth = run.cfg.get("count_depth", 3)
    return run.emit_report(zariski_volume_report(v, count_depth))


def cmd_izumi(run: _Run) -> int:
    v = run.valuation()
    if not isinstance(v, MonomialValuation):
        raise UsageError("izumi constants are computed for monomial valuations")
    p, C = izumi_constant(v)
    run.emit({"weights": [str(w) for w in v.weights], "p": p, "C": C}, f"p\t{p}\nC\t{C}")
    return 0


def cmd_rees(run: _Run) -> int:
    return run.emit_report(verify_rees_bound(run.ideal()))


COMMANDS = {
    "ideal": cmd_ideal,
    "multiplier": cmd_multiplier,
    "asymptotic": cmd_asymptotic,
    "volume": cmd_volume,
    "verify": cmd_verify,
    "zariski": cmd_zariski,
    "izumi": cmd_izumi,
    "rees": cmd_rees,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON configuration file")
    common.add_argument("--out", metavar="PATH", help="write the JSON result here")
    common.add_argument("--depth", type=int, metavar="N", help="refinement depth cap for comparisons")
    common.add_argument("--seed", type=int, metavar="N", help="seed for randomized cases (default 0)")
    common.add_argument("--m-max", dest="m_max", metavar="M", help="largest sampled index")
    common.add_argument("--samples", type=int, metavar="K", help="number of sampled indices (default 40)")

    parser = argparse.ArgumentParser(prog="valmult", description="Valuation ideals, multiplier ideals and volumes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ideal", parents=[common], help="generators of a_m")
    p.add_argument("--weights", help="monomial valuation weights, e.g. 1,pi")
    p.add_argument("--m", help="index, e.g. 4 or 7/2")

    p = sub.add_parser("multiplier", parents=[common], help="multiplier ideal J(c * I) of a monomial ideal")
    p.add_argument("--ideal", help='generators, e.g. "x^2, y^3"')
    p.add_argument("--c", help="coefficient (rational)")

    p = sub.add_parser("asymptotic", parents=[common], help="asymptotic multiplier ideal j_m")
    p.add_argument("--weights")
    p.add_argument("--m")

    p = sub.add_parser("volume", parents=[common], help="sampled volume with closed form when known")
    p.add_argument("--weights")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", nargs="?", choices=SUITES)
    p.add_argument("--weights")
    p.add_argument("--ideal")
    p.add_argument("--trials", type=int)

    sub.add_parser("zariski", parents=[common], help="Zariski volume report")

    p = sub.add_parser("izumi", parents=[common], help="Izumi constant of a monomial valuation")
    p.add_argument("--weights")

    p = sub.add_parser("rees", parents=[common], help="Rees valuation bound for a monomial ideal")
    p.add_argument("--ideal")
    return parser


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        run = _Run(args)
        if args.depth is not None:
            with depth_limit(args.depth):
                return COMMANDS[args.command](run)
        return COMMANDS[args.command](run)
    except (ConfigError, UsageError) as exc:
        print(f"valmult: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # invalid mathematical input (bad weights, infinite colength, ...)
        print(f"valmult: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())
