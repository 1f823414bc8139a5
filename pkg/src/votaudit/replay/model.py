"""Scenario records for replaying coalition-misreport constructions.

A scenario is pure data: parameter names, preconditions, named profile
templates, hypothesized evaluations of an abstract rule on those profiles,
misreport steps, exact-identity claims, and optional induction chains.  The
verification engine in `verify.py` re-derives every arithmetic claim with
exact rationals; hypothesized evaluations are scenario data, never computed,
because the rule under analysis is universally quantified.

Scenarios ship as YAML in ``data/`` so every case is auditable as plain text.
The loader validates structure eagerly: unknown profiles, off-domain
rankings, or malformed winner specs fail at load time.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from functools import lru_cache

import yaml

from ..core import ALTERNATIVES, Domain, Ranking, ranking
from .expressions import expression_names

_VALID_GROUPS = ("cycle", "expansion", "rich")


class CatalogError(ValueError):
    """Raised when a scenario record is structurally invalid."""


def expand_winner_spec(spec: str) -> frozenset[str]:
    """``"x"`` -> {x};  ``"not:x"`` -> {y, z}."""
    if spec.startswith("not:"):
        excluded = spec[len("not:"):]
        if excluded not in ALTERNATIVES:
            raise CatalogError(f"bad winner spec {spec!r}")
        return frozenset(a for a in ALTERNATIVES if a != excluded)
    if spec not in ALTERNATIVES:
        raise CatalogError(f"bad winner spec {spec!r}")
    return frozenset((spec,))


@dataclass(frozen=True)
class MisreportStep:
    """One coalition deviation: applying `moves` to `from_profile` yields `to_profile`."""

    from_profile: str
    to_profile: str
    moves: tuple[tuple[Ranking, Ranking, str], ...]  # (true, reported, amount expression)
    improvement: tuple[str, str]  # (old winner spec, new winner spec)


@dataclass(frozen=True)
class AffineChain:
    """Profiles u^(0..count) whose weights are expressions in the index variable.

    Consecutive profiles differ by the fixed per-step move matrix: applied to
    u^(j+1) when direction is "down" (toward the anchor), to u^(j) when "up".
    """

    index: str
    count: str  # name of a derived integer quantity
    weights: tuple[tuple[Ranking, str], ...]
    moves: tuple[tuple[Ranking, Ranking, str], ...]
    direction: str  # "down" | "up"
    first: str  # named profile equal to u^(0)
    last: str  # named profile equal to u^(count)
    improvement: tuple[str, str]
    pareto_excluded: str | None = None  # alternative dominated at every level


@dataclass(frozen=True)
class DescentChain:
    """Window-descent induction: shrink component weights by n/(n+1) until the mass bound.

    Level t has component masses scaled by prod n_s/(n_s+1); the absorber
    ranking holds the remainder.  Each level reconstructs the previous one by
    moving the difference back out of the absorber, with coalition mass
    Q_t/(n_t+1) below epsilon, and the window index drops by exactly one.
    The terminal step deviates from the two-column `pair` profile.
    """

    fixed: tuple[tuple[Ranking, str], ...]
    components: tuple[tuple[Ranking, str], ...]
    absorber: Ranking
    base: str  # named profile equal to level 0
    pair: str  # named profile with all component mass absorbed
    improvement: tuple[str, str]


@dataclass(frozen=True)
class PermLink:
    """Candidate-renaming consequence: permuting `source` gives `target`,
    and the hypothesized winners correspond through the same renaming."""

    source: str
    target: str
    mapping: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class Scenario:
    id: str
    group: str
    domain: Domain
    params: tuple[str, ...]
    sample: tuple[tuple[str, str, str], ...]  # (var, low expr, high expr), in order
    assume: tuple[str, ...]
    defs: tuple[tuple[str, str], ...]
    profiles: tuple[tuple[str, tuple[tuple[Ranking, str], ...]], ...]
    hypotheses: tuple[tuple[str, str], ...]
    rule_checks: tuple[tuple[str, str, str], ...]  # (profile, rule name, winner)
    pareto_excluded: tuple[tuple[str, str], ...]  # (profile, dominated alternative)
    identities: tuple[tuple[str, str], ...]
    checks: tuple[str, ...]
    steps: tuple[MisreportStep, ...]
    chains: tuple[AffineChain | DescentChain, ...]
    perm_links: tuple[PermLink, ...] = ()
    note: str = ""

    @property
    def profile_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.profiles)

    def profile_template(self, name: str) -> tuple[tuple[Ranking, str], ...]:
        for n, t in self.profiles:
            if n == name:
                return t
        raise KeyError(name)

    def hypothesis(self, name: str) -> str | None:
        for n, h in self.hypotheses:
            if n == name:
                return h
        return None


def _as_moves(raw, domain: Domain, where: str):
    moves = []
    for item in raw:
        if len(item) != 3:
            raise CatalogError(f"{where}: move must be [true, reported, amount]")
        src, dst, amount = ranking(item[0]), ranking(item[1]), str(item[2])
        if src not in domain or dst not in domain:
            raise CatalogError(f"{where}: move {src}->{dst} leaves the domain")
        moves.append((src, dst, amount))
    return tuple(moves)


def _as_improvement(raw, where: str) -> tuple[str, str]:
    if not (isinstance(raw, list) and len(raw) == 2):
        raise CatalogError(f"{where}: improvement must be [old, new]")
    old, new = str(raw[0]), str(raw[1])
    old_set, new_set = expand_winner_spec(old), expand_winner_spec(new)
    if old_set & new_set:
        raise CatalogError(f"{where}: improvement sets overlap: {raw}")
    if len(old_set) != 1 and len(new_set) != 1:
        raise CatalogError(f"{where}: at least one improvement side must be a single alternative")
    return old, new


def _as_template(raw, domain: Domain, where: str):
    template = []
    for key, expr in raw.items():
        r = ranking(str(key))
        if r not in domain:
            raise CatalogError(f"{where}: ranking {r} outside the domain")
        template.append((r, str(expr)))
    return tuple(sorted(template))


def _parse_scenario(raw: dict) -> Scenario:
    sid = str(raw["id"])
    where = f"scenario {sid}"
    group = raw.get("group", "")
    if group not in _VALID_GROUPS:
        raise CatalogError(f"{where}: group must be one of {_VALID_GROUPS}")
    domain = Domain(tuple(ranking(t) for t in raw["domain"]))
    params = tuple(raw.get("params", ()))
    sample = tuple((v, str(lo), str(hi)) for v, lo, hi in raw.get("sample", ()))
    # "window" holds the case's epsilon-interval preconditions; it is kept as a
    # separate key in the data files for readability but is a precondition.
    assume = tuple(str(a) for a in raw.get("assume", ())) + \
        tuple(str(w) for w in raw.get("window", ()))
    defs = tuple((str(n), str(e)) for n, e in raw.get("defs", ()))

    profiles = tuple(
        (str(name), _as_template(tmpl, domain, f"{where} profile {name}"))
        for name, tmpl in raw.get("profiles", {}).items()
    )
    names = {n for n, _ in profiles}
    if len(names) != len(profiles):
        raise CatalogError(f"{where}: duplicate profile names")

    def known(name: str, context: str) -> str:
        if name not in names:
            raise CatalogError(f"{where}: {context} references unknown profile {name!r}")
        return name

    hypotheses = []
    for name, spec in raw.get("hypotheses", {}).items():
        known(name, "hypothesis")
        expand_winner_spec(str(spec))
        hypotheses.append((str(name), str(spec)))

    rule_checks = []
    for profile, rule_name, winner in raw.get("rule_checks", ()):
        known(profile, "rule check")
        if rule_name not in ("borda", "condorcet", "plurality"):
            raise CatalogError(f"{where}: rule check uses unknown rule {rule_name!r}")
        if winner not in ALTERNATIVES:
            raise CatalogError(f"{where}: rule check winner {winner!r}")
        rule_checks.append((profile, rule_name, winner))

    pareto_excluded = []
    for profile, alt in raw.get("pareto_excluded", ()):
        known(profile, "pareto exclusion")
        if alt not in ALTERNATIVES:
            raise CatalogError(f"{where}: pareto exclusion of unknown alternative {alt!r}")
        pareto_excluded.append((profile, alt))

    identities = tuple((str(l), str(r)) for l, r in raw.get("identities", ()))
    checks = tuple(str(c) for c in raw.get("checks", ()))

    steps = tuple(
        MisreportStep(
            from_profile=known(step["from"], "step"),
            to_profile=known(step["to"], "step"),
            moves=_as_moves(step["moves"], domain, f"{where} step"),
            improvement=_as_improvement(step["improvement"], f"{where} step"),
        )
        for step in raw.get("steps", ())
    )

    chains = []
    for chain in raw.get("chains", ()):
        kind = chain.get("kind", "affine")
        if kind == "affine":
            chains.append(AffineChain(
                index=str(chain.get("index", "j")),
                count=str(chain["count"]),
                weights=_as_template(chain["weights"], domain, f"{where} chain"),
                moves=_as_moves(chain["moves"], domain, f"{where} chain"),
                direction=str(chain["direction"]),
                first=known(chain["first"], "chain"),
                last=known(chain["last"], "chain"),
                improvement=_as_improvement(chain["improvement"], f"{where} chain"),
                pareto_excluded=chain.get("pareto_excluded"),
            ))
            if chains[-1].direction not in ("down", "up"):
                raise CatalogError(f"{where}: chain direction must be down or up")
        elif kind == "descent":
            chains.append(DescentChain(
                fixed=_as_template(chain.get("fixed", {}), domain, f"{where} descent"),
                components=_as_template(chain["components"], domain, f"{where} descent"),
                absorber=ranking(str(chain["absorber"])),
                base=known(chain["base"], "descent"),
                pair=known(chain["pair"], "descent"),
                improvement=_as_improvement(chain["improvement"], f"{where} descent"),
            ))
            if chains[-1].absorber not in domain:
                raise CatalogError(f"{where}: absorber outside the domain")
        else:
            raise CatalogError(f"{where}: unknown chain kind {kind!r}")

    perm_links_raw = raw.get("perm_links", ())
    perm_links = tuple(
        PermLink(
            source=known(link["source"], "perm link"),
            target=known(link["target"], "perm link"),
            mapping=tuple(sorted((str(k), str(v)) for k, v in link["mapping"].items())),
        )
        for link in perm_links_raw
    )

    scenario = Scenario(
        id=sid, group=group, domain=domain, params=params, sample=sample,
        assume=assume, defs=defs, profiles=profiles, hypotheses=tuple(hypotheses),
        rule_checks=tuple(rule_checks), pareto_excluded=tuple(pareto_excluded),
        identities=identities, checks=checks, steps=steps, chains=tuple(chains),
        perm_links=perm_links, note=str(raw.get("note", "")),
    )
    _check_names(scenario)
    return scenario


def _check_names(scenario: Scenario) -> None:
    """Every expression may reference only params, epsilon, defs, and chain indices."""
    allowed = set(scenario.params) | {"epsilon"}
    for name, expr in scenario.defs:
        for used in expression_names(expr):
            if used not in allowed:
                raise CatalogError(f"scenario {scenario.id}: def {name} uses unknown {used!r}")
        allowed.add(name)
    indices = {c.index for c in scenario.chains if isinstance(c, AffineChain)}
    texts: list[str] = [t for t in scenario.assume]
    texts += [e for _, tmpl in scenario.profiles for _, e in tmpl]
    texts += [e for pair in scenario.identities for e in pair]
    texts += list(scenario.checks)
    texts += [a for step in scenario.steps for _, _, a in step.moves]
    for chain in scenario.chains:
        if isinstance(chain, AffineChain):
            texts += [e for _, e in chain.weights] + [a for _, _, a in chain.moves]
        else:
            texts += [e for _, e in chain.fixed] + [e for _, e in chain.components]
    for text in texts:
        for used in expression_names(text) - allowed - indices:
            raise CatalogError(f"scenario {scenario.id}: expression uses unknown name {used!r}")


_DATA_FILES = ("cycle_domain.yaml", "expanded_domain.yaml", "rich_domains.yaml")


@lru_cache(maxsize=1)
def scenario_catalog() -> tuple[Scenario, ...]:
    """All scenarios, in catalog file order; ids are unique."""
    scenarios: list[Scenario] = []
    package = importlib.resources.files(__package__) / "data"
    for filename in _DATA_FILES:
        text = (package / filename).read_text(encoding="utf-8")
        for raw in yaml.safe_load(text):
            scenarios.append(_parse_scenario(raw))
    ids = [s.id for s in scenarios]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise CatalogError(f"duplicate scenario ids: {dupes}")
    return tuple(scenarios)


def get_scenario(scenario_id: str) -> Scenario:
    for scenario in scenario_catalog():
        if scenario.id == scenario_id:
            return scenario
    raise KeyError(f"unknown scenario id {scenario_id!r}")


def case_index() -> tuple[tuple[str, str], ...]:
    """The checked-in listing mapping case labels to scenario ids."""
    package = importlib.resources.files(__package__) / "data"
    rows = []
    for line in (package / "case_index.txt").read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        label, sid = (tok.strip() for tok in line.split("->"))
        rows.append((label, sid))
    return tuple(rows)
