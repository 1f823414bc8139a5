"""Exact verification of catalog scenarios.

`verify_scenario` re-derives, at a concrete rational parameter point: profile
validity, every weight identity, every misreport step (the transfer must
reproduce its target profile exactly, with coalition mass strictly below
epsilon, and every mover strictly gaining), domination claims, and agreement
of named rules with asserted winners.  `verify_induction_chain` additionally
unrolls the scenario's induction chains profile by profile.

Reports list one pass/fail line per check; a failing precondition raises
`PreconditionViolation` instead, naming the inequality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..core import Profile, Ranking, transfer_weight
from ..rules import evaluate, parse_rule
from .expressions import evaluate_expression, evaluate_predicate
from .model import (
    AffineChain,
    DescentChain,
    Scenario,
    expand_winner_spec,
)

Env = dict[str, Fraction]


class PreconditionViolation(ValueError):
    def __init__(self, scenario_id: str, inequality: str, env: Mapping[str, Fraction]):
        self.inequality = inequality
        shown = {k: str(v) for k, v in env.items()}
        super().__init__(f"scenario {scenario_id}: precondition {inequality!r} fails at {shown}")


class TemplateError(ValueError):
    """A profile template does not instantiate to a valid profile."""


@dataclass(frozen=True)
class ScenarioParams:
    """A concrete rational assignment to a scenario's named parameters (plus epsilon)."""

    values: tuple[tuple[str, Fraction], ...]

    @classmethod
    def of(cls, **values) -> "ScenarioParams":
        return cls(tuple(sorted((k, Fraction(v)) for k, v in values.items())))

    def as_dict(self) -> Env:
        return dict(self.values)

    def __str__(self) -> str:
        return ", ".join(f"{k}={v}" for k, v in self.values)


@dataclass(frozen=True)
class CheckResult:
    label: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        status = "pass" if self.ok else "FAIL"
        suffix = f"  ({self.detail})" if self.detail and not self.ok else ""
        return f"{status}  {self.label}{suffix}"


@dataclass(frozen=True)
class ScenarioReport:
    scenario_id: str
    params: ScenarioParams
    results: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(r for r in self.results if not r.ok)

    def text(self) -> str:
        header = f"scenario {self.scenario_id} at {self.params}"
        return "\n".join([header] + ["  " + r.line() for r in self.results])


def epsilon_partition(quantity: Fraction, epsilon: Fraction) -> int:
    """The unique n >= 0 with n*epsilon <= quantity < (n+1)*epsilon."""
    quantity, epsilon = Fraction(quantity), Fraction(epsilon)
    if quantity < 0:
        raise ValueError("quantity must be nonnegative")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return int(quantity // epsilon)


def build_env(scenario: Scenario, params: ScenarioParams) -> Env:
    """Parameter values plus derived quantities, then precondition checks.

    Derived quantities are computed first because window preconditions may be
    stated in terms of them; they are pure functions of the parameters.
    """
    env = params.as_dict()
    missing = (set(scenario.params) | {"epsilon"}) - set(env)
    if missing:
        raise ValueError(f"scenario {scenario.id}: missing parameters {sorted(missing)}")
    if env.get("epsilon", Fraction(0)) <= 0:
        raise PreconditionViolation(scenario.id, "epsilon > 0", env)
    for name, expr in scenario.defs:
        env[name] = evaluate_expression(expr, env)
    for inequality in scenario.assume:
        if not evaluate_predicate(inequality, env):
            raise PreconditionViolation(scenario.id, inequality, env)
    return env


def instantiate(template, env: Env, domain, label: str) -> Profile:
    weights: dict[Ranking, Fraction] = {}
    for r, expr in template:
        value = evaluate_expression(expr, env)
        if value < 0:
            raise TemplateError(f"{label}: weight of {r} is negative ({value})")
        weights[r] = weights.get(r, Fraction(0)) + value
    total = sum(weights.values(), Fraction(0))
    if total != 1:
        raise TemplateError(f"{label}: weights sum to {total}, expected 1")
    return Profile(weights, domain)


def _improvement_results(moves, improvement, env: Env, label: str) -> list[CheckResult]:
    """Every mover must strictly prefer every possible new winner to every possible old one."""
    old_set = expand_winner_spec(improvement[0])
    new_set = expand_winner_spec(improvement[1])
    results = []
    for src, _dst, amount_expr in moves:
        amount = evaluate_expression(amount_expr, env)
        if amount == 0:
            continue  # a zero-mass block contributes no coalition members
        ok = all(src.prefers(new, old) for old in old_set for new in new_set)
        results.append(CheckResult(
            f"{label}: movers with true ranking {src} gain "
            f"({improvement[1]} over {improvement[0]})",
            ok,
            "" if ok else f"{src} does not prefer some of {sorted(new_set)} "
                          f"over some of {sorted(old_set)}",
        ))
    return results


def _transfer_results(scenario, env, from_profile: Profile, moves, to_profile: Profile,
                      label: str) -> list[CheckResult]:
    concrete = []
    for src, dst, amount_expr in moves:
        amount = evaluate_expression(amount_expr, env)
        if amount < 0:
            return [CheckResult(f"{label}: move {src} -> {dst} has nonnegative mass", False,
                                f"amount {amount} < 0")]
        concrete.append((src, dst, amount))
    try:
        moved, size = transfer_weight(from_profile, concrete)
    except ValueError as exc:
        return [CheckResult(f"{label}: moves are feasible", False, str(exc))]
    results = [CheckResult(
        f"{label}: misreport reproduces the target profile exactly",
        moved == to_profile,
        "" if moved == to_profile else f"got {dict(moved.weights)!r}",
    )]
    eps = env["epsilon"]
    results.append(CheckResult(
        f"{label}: coalition size {size} < epsilon",
        size < eps,
        "" if size < eps else f"size {size} vs epsilon {eps}",
    ))
    return results


def _domination_result(profile: Profile, alt: str, label: str) -> CheckResult:
    support = profile.support
    dominated = any(
        all(r.prefers(b, alt) for r in support)
        for b in ("x", "y", "z") if b != alt and support
    )
    return CheckResult(
        f"{label}: {alt} is unanimously dominated (cannot win under P)",
        dominated,
        "" if dominated else f"no alternative beats {alt} on every support ranking",
    )


def verify_scenario(scenario: Scenario, params: ScenarioParams) -> ScenarioReport:
    """Check templates, identities, inequalities, rule agreements, and misreport steps."""
    env = build_env(scenario, params)
    results: list[CheckResult] = []
    profiles: dict[str, Profile] = {}
    for name, template in scenario.profiles:
        try:
            profiles[name] = instantiate(template, env, scenario.domain, name)
            results.append(CheckResult(f"profile {name} is valid (weights >= 0, sum 1)", True))
        except TemplateError as exc:
            results.append(CheckResult(f"profile {name} is valid (weights >= 0, sum 1)",
                                       False, str(exc)))
    for lhs, rhs in scenario.identities:
        left, right = evaluate_expression(lhs, env), evaluate_expression(rhs, env)
        results.append(CheckResult(
            f"identity {lhs} == {rhs}",
            left == right,
            "" if left == right else f"{left} != {right}",
        ))
    for predicate in scenario.checks:
        ok = evaluate_predicate(predicate, env)
        results.append(CheckResult(f"inequality {predicate}", ok))
    for name, rule_name, winner in scenario.rule_checks:
        if name not in profiles:
            continue
        outcome = evaluate(parse_rule(rule_name), profiles[name])
        ok = outcome.winner == winner
        results.append(CheckResult(
            f"{rule_name} elects {winner} on {name}",
            ok,
            "" if ok else f"got {outcome}",
        ))
    for name, alt in scenario.pareto_excluded:
        if name in profiles:
            results.append(_domination_result(profiles[name], alt, f"profile {name}"))
    for link in scenario.perm_links:
        if link.source not in profiles or link.target not in profiles:
            continue
        from ..core import CandidatePermutation, permute_profile
        perm = CandidatePermutation.from_mapping(dict(link.mapping))
        image = permute_profile(profiles[link.source], perm)
        ok = image.weights == profiles[link.target].weights
        results.append(CheckResult(
            f"renaming {perm} carries {link.source} to {link.target}",
            ok,
            "" if ok else "permuted weights differ",
        ))
        hyp_src, hyp_dst = scenario.hypothesis(link.source), scenario.hypothesis(link.target)
        if hyp_src is not None and hyp_dst is not None and not hyp_src.startswith("not:"):
            ok = perm(hyp_src) == hyp_dst
            results.append(CheckResult(
                f"renaming {perm} carries winner {hyp_src} to {hyp_dst}",
                ok,
                "" if ok else f"expected {perm(hyp_src)}",
            ))
    for i, step in enumerate(scenario.steps, 1):
        label = f"step {i} ({step.from_profile} -> {step.to_profile})"
        if step.from_profile not in profiles or step.to_profile not in profiles:
            results.append(CheckResult(label, False, "profile failed to instantiate"))
            continue
        results.extend(_transfer_results(
            scenario, env, profiles[step.from_profile], step.moves,
            profiles[step.to_profile], label,
        ))
        results.extend(_improvement_results(step.moves, step.improvement, env, label))
    return ScenarioReport(scenario.id, params, tuple(results))


def _affine_chain_results(scenario, chain: AffineChain, env: Env,
                          profiles: dict[str, Profile]) -> list[CheckResult]:
    results: list[CheckResult] = []
    count_value = env.get(chain.count)
    if count_value is None or count_value.denominator != 1 or count_value < 0:
        return [CheckResult(f"chain count {chain.count} is a nonnegative integer", False,
                            f"got {count_value}")]
    count = int(count_value)
    results.append(CheckResult(
        f"chain count {chain.count} = {count} is a nonnegative integer", True))
    levels: list[Profile] = []
    for j in range(count + 1):
        level_env = dict(env)
        level_env[chain.index] = Fraction(j)
        try:
            levels.append(instantiate(chain.weights, level_env, scenario.domain,
                                      f"chain level {j}"))
        except TemplateError as exc:
            results.append(CheckResult(f"chain level {j} is a valid profile", False, str(exc)))
            return results
    results.append(CheckResult(f"all {count + 1} chain profiles are valid", True))
    anchor_ok = levels[0] == profiles[chain.first]
    results.append(CheckResult(
        f"chain level 0 equals profile {chain.first}", anchor_ok))
    end_ok = levels[count] == profiles[chain.last]
    results.append(CheckResult(
        f"chain level {count} equals profile {chain.last} (relabeled weights)", end_ok))
    step_ok, size_ok, detail = True, True, ""
    eps = env["epsilon"]
    for j in range(count):
        src, dst = (levels[j + 1], levels[j]) if chain.direction == "down" \
            else (levels[j], levels[j + 1])
        concrete = [(s, d, evaluate_expression(a, env)) for s, d, a in chain.moves]
        if any(a < 0 for _, _, a in concrete):
            step_ok, detail = False, f"negative move amount at level {j}"
            break
        try:
            moved, size = transfer_weight(src, concrete)
        except ValueError as exc:
            step_ok, detail = False, f"level {j}: {exc}"
            break
        if moved != dst:
            step_ok, detail = False, f"level {j}: transfer does not reproduce the next profile"
            break
        if size >= eps:
            size_ok, detail = False, f"level {j}: step size {size} >= epsilon {eps}"
            break
    results.append(CheckResult(
        "consecutive chain profiles differ by exactly the per-step moves", step_ok,
        "" if step_ok else detail))
    results.append(CheckResult("every chain step has coalition size < epsilon", size_ok,
                               "" if size_ok else detail))
    results.extend(_improvement_results(chain.moves, chain.improvement, env, "chain step"))
    if chain.pareto_excluded is not None:
        dominated_everywhere = all(
            _domination_result(level, chain.pareto_excluded, "").ok for level in levels
        )
        results.append(CheckResult(
            f"{chain.pareto_excluded} is unanimously dominated at every chain level",
            dominated_everywhere))
    return results


def _descent_chain_results(scenario, chain: DescentChain, env: Env,
                           profiles: dict[str, Profile]) -> list[CheckResult]:
    results: list[CheckResult] = []
    eps = env["epsilon"]
    fixed = {r: evaluate_expression(e, env) for r, e in chain.fixed}
    components = {r: evaluate_expression(e, env) for r, e in chain.components}
    if any(v < 0 for v in components.values()):
        return [CheckResult("descent components are nonnegative", False, str(components))]

    def level_profile(comps: dict[Ranking, Fraction], label: str) -> Profile:
        weights = dict(fixed)
        weights.update(comps)
        absorbed = 1 - sum(weights.values(), Fraction(0))
        if absorbed < 0:
            raise TemplateError(f"{label}: component mass exceeds the available weight")
        weights[chain.absorber] = weights.get(chain.absorber, Fraction(0)) + absorbed
        return Profile(weights, scenario.domain)

    try:
        current = level_profile(components, "descent level 0")
    except ValueError as exc:
        return [CheckResult("descent level 0 is a valid profile", False, str(exc))]
    results.append(CheckResult(
        f"descent level 0 equals profile {chain.base}",
        current == profiles[chain.base]))
    mass = sum(components.values(), Fraction(0))
    window = epsilon_partition(mass, eps)
    level = 0
    comps = components
    ok = True
    detail = ""
    while window >= 1 and ok:
        factor = Fraction(window, window + 1)
        next_comps = {r: v * factor for r, v in comps.items()}
        try:
            nxt = level_profile(next_comps, f"descent level {level + 1}")
        except ValueError as exc:
            ok, detail = False, f"level {level + 1}: {exc}"
            break
        moves = [(chain.absorber, r, comps[r] - next_comps[r]) for r in comps]
        try:
            rebuilt, size = transfer_weight(nxt, moves)
        except ValueError as exc:
            ok, detail = False, f"level {level + 1}: {exc}"
            break
        if rebuilt != current:
            ok, detail = False, f"level {level + 1}: misreport does not rebuild level {level}"
            break
        if size >= eps:
            ok, detail = False, f"level {level + 1}: coalition size {size} >= epsilon"
            break
        next_mass = sum(next_comps.values(), Fraction(0))
        next_window = epsilon_partition(next_mass, eps)
        if next_window != window - 1:
            ok, detail = False, (
                f"window index went {window} -> {next_window}, expected {window - 1}")
            break
        comps, current, mass, window = next_comps, nxt, next_mass, next_window
        level += 1
    results.append(CheckResult(
        f"descent of {level} level(s): each rebuilds the previous profile with "
        "coalition mass < epsilon and drops the window index by one",
        ok, detail))
    pair = profiles[chain.pair]
    expected_pair = level_profile({r: Fraction(0) for r in comps}, "pair")
    results.append(CheckResult(
        f"profile {chain.pair} equals the terminal shape with all component mass absorbed",
        pair == expected_pair))
    final_moves = [(chain.absorber, r, v) for r, v in comps.items()]
    try:
        rebuilt, size = transfer_weight(pair, final_moves)
        ok = rebuilt == current and size < eps
        detail = "" if ok else f"rebuilt mismatch or size {size} >= epsilon {eps}"
    except ValueError as exc:
        ok, detail = False, str(exc)
    results.append(CheckResult(
        f"final misreport from {chain.pair} rebuilds the terminal profile with size < epsilon",
        ok, detail))
    move_exprs = tuple((chain.absorber, r, "1") for r in comps)
    results.extend(_improvement_results(move_exprs, chain.improvement, env, "descent step"))
    return results


def verify_induction_chain(scenario: Scenario, params: ScenarioParams) -> ScenarioReport:
    """Unroll and check every induction chain declared by the scenario."""
    env = build_env(scenario, params)
    profiles = {
        name: instantiate(template, env, scenario.domain, name)
        for name, template in scenario.profiles
    }
    results: list[CheckResult] = []
    if not scenario.chains:
        results.append(CheckResult("scenario declares no induction chain", True))
    for chain in scenario.chains:
        if isinstance(chain, AffineChain):
            results.extend(_affine_chain_results(scenario, chain, env, profiles))
        else:
            results.extend(_descent_chain_results(scenario, chain, env, profiles))
    return ScenarioReport(scenario.id, params, tuple(results))


def verify_full(scenario: Scenario, params: ScenarioParams) -> ScenarioReport:
    """verify_scenario plus verify_induction_chain, as one report."""
    base = verify_scenario(scenario, params)
    if not scenario.chains:
        return base
    chains = verify_induction_chain(scenario, params)
    return ScenarioReport(scenario.id, params, base.results + chains.results)


def sample_params(scenario: Scenario, rng: random.Random,
                  max_denominator: int = 1000, max_tries: int = 20000) -> ScenarioParams:
    """Draw a random rational parameter point satisfying the scenario's preconditions.

    Uses the scenario's sampling hints (ordered variable ranges, bounds may
    reference earlier variables) with rejection against the full precondition
    list.  Denominators stay at or below `max_denominator` so the exact
    arithmetic downstream stays fast.
    """
    needed = set(scenario.params) | {"epsilon"}
    hinted = {var for var, _, _ in scenario.sample}
    if hinted != needed:
        raise ValueError(
            f"scenario {scenario.id}: sampling hints cover {sorted(hinted)}, "
            f"need {sorted(needed)}")
    for _ in range(max_tries):
        env: Env = {}
        feasible = True
        for var, lo_expr, hi_expr in scenario.sample:
            lo = evaluate_expression(lo_expr, env)
            hi = evaluate_expression(hi_expr, env)
            if hi < lo:
                feasible = False
                break
            den = rng.randint(16, max_denominator)
            lo_num = (lo * den).__ceil__()
            hi_num = (hi * den).__floor__()
            if hi_num < lo_num:
                feasible = False
                break
            env[var] = Fraction(rng.randint(lo_num, hi_num), den)
        if not feasible or env.get("epsilon", Fraction(0)) <= 0:
            continue
        params = ScenarioParams(tuple(sorted(env.items())))
        full = dict(env)
        for name, expr in scenario.defs:
            full[name] = evaluate_expression(expr, full)
        if all(evaluate_predicate(p, full) for p in scenario.assume):
            return params
    raise RuntimeError(f"could not sample parameters for scenario {scenario.id}")
