"""Command-line front end.

Verbs: evaluate, margins, richness, audit (axiom checks), manipulate
(coalition search on a profile or a whole-domain sweep), and replay
(scenario verification).  Exit codes: 0 = success / no violation / no
witness; 1 = violation or witness found (or a failed replay check);
2 = input or parse error.  Output is deterministic for fixed inputs.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import core, rules, axioms, manipulation
from .replay import (
    PreconditionViolation,
    ScenarioParams,
    get_scenario,
    sample_params,
    scenario_catalog,
    verify_full,
)

EXIT_OK = 0
EXIT_FOUND = 1
EXIT_INPUT = 2


class _CliError(Exception):
    pass


def _read_profile(path: str) -> core.Profile:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return core.parse_profile(handle.read())
    except OSError as exc:
        raise _CliError(f"cannot read {path}: {exc}") from None
    except core.ProfileParseError as exc:
        raise _CliError(f"{path}: {exc}") from None


def _parse_rule(text: str) -> rules.RuleDescriptor:
    try:
        return rules.parse_rule(text)
    except ValueError as exc:
        raise _CliError(str(exc)) from None


def _parse_fraction(text: str, what: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise _CliError(f"bad {what}: {text!r}") from None


def _cmd_evaluate(args, out) -> int:
    rule = _parse_rule(args.rule)
    profile = _read_profile(args.profile)
    outcome = rules.evaluate(rule, profile)
    if args.format == "record":
        tie = ",".join(sorted(outcome.tie_set))
        out(f"outcome rule={rule} winner={outcome.winner or '-'} tie={{{tie}}}")
    else:
        out(f"rule: {rule}")
        if outcome.winner is not None:
            out(f"winner: {outcome.winner}")
        elif not outcome.tie_set and rule.kind == "condorcet":
            out("no Condorcet winner (cycle)")
        else:
            out(f"no winner ({outcome})")
    return EXIT_OK


def _cmd_margins(args, out) -> int:
    profile = _read_profile(args.profile)
    margins = rules.condorcet_margins(profile)
    for (first, second), value in sorted(margins.items()):
        if args.format == "record":
            out(f"margin={first},{second} value={value}")
        else:
            out(f"{first} over {second}: {value}")
    return EXIT_OK


def _cmd_richness(args, out) -> int:
    try:
        domain = core.parse_domain(args.domain)
    except (core.ProfileParseError, core.RankingParseError, ValueError) as exc:
        raise _CliError(str(exc)) from None
    rich = core.is_rich(domain)
    if args.format == "record":
        out(f"domain={domain} rich={'yes' if rich else 'no'}")
    else:
        out(f"domain: {domain}")
        for alt in core.ALTERNATIVES:
            witnesses = [str(r) for r in domain if r.position(alt) == 1]
            shown = ", ".join(witnesses) if witnesses else "none"
            out(f"  {alt} in the middle of: {shown}")
        out(f"rich: {'yes' if rich else 'no'}")
    return EXIT_OK if rich else EXIT_FOUND


_AXIOM_ORDER = ("P", "A", "N", "IIA")


def _cmd_audit(args, out) -> int:
    rule = _parse_rule(args.rule)
    profile = _read_profile(args.profile)
    wanted = [a.strip().upper() for a in args.axioms.split(",")]
    for axiom in wanted:
        if axiom not in _AXIOM_ORDER:
            raise _CliError(f"unknown axiom {axiom!r} (choose from P,A,N,IIA)")
    reports: list[axioms.AxiomReport] = []
    for axiom in _AXIOM_ORDER:
        if axiom not in wanted:
            continue
        if axiom == "P":
            reports.append(axioms.check_pareto(rule, profile))
        elif axiom == "A":
            reports.append(axioms.check_anonymity_structural(rule))
        elif axiom == "N":
            for perm in core.ALL_PERMUTATIONS:
                reports.append(axioms.check_neutrality(rule, profile, perm))
        else:
            reports.append(axioms.check_iia(rule, profile))
    violated = False
    for report in reports:
        if args.format == "record":
            out(report.record())
            if report.counterexample is not None and not report.satisfied:
                for prof in report.counterexample.profiles:
                    out(core.format_profile(prof))
        else:
            out(report.text())
        violated = violated or report.verdict is axioms.Verdict.VIOLATED
    return EXIT_FOUND if violated else EXIT_OK


def _cmd_manipulate(args, out) -> int:
    rule = _parse_rule(args.rule)
    epsilon = _parse_fraction(args.epsilon, "epsilon")
    if epsilon <= 0:
        raise _CliError("epsilon must be positive")
    config = manipulation.AuditConfig(epsilon, args.grid, args.moves)
    if args.domain is not None:
        try:
            domain = core.parse_domain(args.domain)
        except (core.ProfileParseError, core.RankingParseError, ValueError) as exc:
            raise _CliError(str(exc)) from None
        witness = manipulation.audit_wsp(rule, domain, config)
    else:
        if args.profile is None:
            raise _CliError("manipulate needs a profile file or --domain")
        profile = _read_profile(args.profile)
        try:
            witness = manipulation.find_manipulation(rule, profile, config)
        except manipulation.NongenericProfileError as exc:
            raise _CliError(f"not applicable: {exc}") from None
    if witness is None:
        out(f"no witness at this resolution (epsilon={epsilon}, "
            f"grid=1/{config.grid_denominator}, moves=1/{config.move_denominator})")
        return EXIT_OK
    if args.format == "text":
        out("manipulation witness:")
    out(manipulation.format_witness(witness))
    return EXIT_FOUND


_PARAM_FLAGS = ("a", "b", "c", "d", "p", "q")


def _cmd_replay(args, out) -> int:
    if args.list:
        for scenario in scenario_catalog():
            out(f"{scenario.id}  [{scenario.group}]  params: "
                + (", ".join(scenario.params) or "(epsilon only)"))
        return EXIT_OK
    if not args.case:
        raise _CliError("replay needs --case ID (or --list)")
    try:
        scenario = get_scenario(args.case)
    except KeyError as exc:
        raise _CliError(str(exc.args[0])) from None
    given = {
        name: _parse_fraction(getattr(args, name), name)
        for name in _PARAM_FLAGS
        if getattr(args, name) is not None
    }
    if args.epsilon is not None:
        given["epsilon"] = _parse_fraction(args.epsilon, "epsilon")
    needed = set(scenario.params) | {"epsilon"}
    extra = set(given) - needed
    if extra:
        raise _CliError(
            f"scenario {scenario.id} takes {sorted(needed)}, not {sorted(extra)}")
    if needed <= set(given):
        points = [ScenarioParams(tuple(sorted((k, given[k]) for k in needed)))]
    elif given:
        raise _CliError(
            f"scenario {scenario.id} needs all of {sorted(needed)} (or none, to sample)")
    else:
        rng = random.Random(args.seed)
        points = [sample_params(scenario, rng) for _ in range(args.points)]
    all_ok = True
    for params in points:
        try:
            report = verify_full(scenario, params)
        except PreconditionViolation as exc:
            raise _CliError(str(exc)) from None
        out(report.text())
        all_ok = all_ok and report.passed
    out(f"result: {'all checks pass' if all_ok else 'CHECK FAILURES'}")
    return EXIT_OK if all_ok else EXIT_FOUND


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="votaudit",
        description="Exact-rational election analysis over three alternatives.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "record"), default="text")

    p = sub.add_parser("evaluate", help="evaluate a rule on a profile")
    p.add_argument("--rule", required=True)
    p.add_argument("profile")
    add_format(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("margins", help="pairwise majority margins of a profile")
    p.add_argument("profile")
    add_format(p)
    p.set_defaults(func=_cmd_margins)

    p = sub.add_parser("richness", help="check the middle-position richness of a domain")
    p.add_argument("domain", help="'full' or a ranking set like '{x>y>z, y>z>x}'")
    add_format(p)
    p.set_defaults(func=_cmd_richness)

    p = sub.add_parser("audit", help="check axioms for a rule on a profile")
    p.add_argument("--rule", required=True)
    p.add_argument("--axioms", default="P,A,N,IIA")
    p.add_argument("profile")
    add_format(p)
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("manipulate", help="search for a small-coalition manipulation")
    p.add_argument("--rule", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--grid", type=int, default=20, help="profile mesh denominator")
    p.add_argument("--moves", type=int, default=100, help="move mesh denominator")
    p.add_argument("--domain", help="sweep every grid profile on this domain")
    p.add_argument("profile", nargs="?")
    add_format(p)
    p.set_defaults(func=_cmd_manipulate)

    p = sub.add_parser("replay", help="verify a catalog scenario")
    p.add_argument("--case", help="scenario id, e.g. 1.I.1.1.2")
    p.add_argument("--list", action="store_true", help="list catalog scenarios")
    p.add_argument("--epsilon")
    for name in _PARAM_FLAGS:
        p.add_argument(f"--{name}")
    p.add_argument("--points", type=int, default=20,
                   help="random parameter points when none are given")
    p.add_argument("--seed", type=int, default=0)
    add_format(p)
    p.set_defaults(func=_cmd_replay)
    return parser


def run(argv: list[str]) -> tuple[int, str]:
    """Execute one command; returns (exit code, textual report)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, matching the input-error contract
        return (EXIT_INPUT if exc.code else EXIT_OK), ""
    lines: list[str] = []
    try:
        code = args.func(args, lines.append)
    except _CliError as exc:
        return EXIT_INPUT, f"error: {exc}"
    return code, "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    code, report = run(sys.argv[1:] if argv is None else argv)
    if code == EXIT_INPUT and report.startswith("error:"):
        print(report, file=sys.stderr)
    elif report:
        print(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
