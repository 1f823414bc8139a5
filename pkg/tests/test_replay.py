import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

import votaudit as va
from votaudit.replay import (
    PreconditionViolation,
    ScenarioParams,
    case_index,
    epsilon_partition,
    get_scenario,
    sample_params,
    scenario_catalog,
    verify_full,
    verify_induction_chain,
    verify_scenario,
)
from votaudit.replay.expressions import ExpressionError, evaluate_expression
from votaudit.replay.verify import build_env


def test_catalog_loads_and_ids_unique():
    catalog = scenario_catalog()
    ids = [s.id for s in catalog]
    assert len(ids) == len(set(ids))
    assert len(ids) >= 30


def test_catalog_contains_named_cases():
    ids = {s.id for s in scenario_catalog()}
    assert "1.I.1.1.2" in ids
    assert "2.III.0.h+1" in ids
    assert "3.III.2.1.n+1" in ids  # corrected identifier for the reused heading


def test_catalog_covers_expected_groups():
    groups = {}
    for s in scenario_catalog():
        groups.setdefault(s.group, []).append(s.id)
    assert len(groups["cycle"]) == 28
    assert len(groups["expansion"]) == 12
    assert len(groups["rich"]) == 36


def test_case_index_matches_catalog_exactly():
    rows = case_index()
    mapped_ids = [sid for _, sid in rows]
    assert len(mapped_ids) == len(set(mapped_ids)), "an id is mapped twice"
    assert set(mapped_ids) == {s.id for s in scenario_catalog()}
    # labels map to themselves except the single corrected heading
    corrections = [(label, sid) for label, sid in rows
                   if label.split(" ")[0] != sid]
    assert corrections == [("3.III.1.1.n+1 (repeated heading)", "3.III.2.1.n+1")]


def test_scenario_example_window_two():
    scenario = get_scenario("1.I.1.1.2")
    params = ScenarioParams.of(a=F(21, 50), b=F(7, 25), epsilon=F(1, 10))
    report = verify_scenario(scenario, params)
    assert report.passed, report.text()
    env = build_env(scenario, params)
    # both sides of the balanced-weight identity equal (a+b)/2
    assert env["a"] - (env["k"] + env["m"]) == env["b"] + (env["k"] + env["m"]) \
        == (env["a"] + env["b"]) / 2


def test_scenario_identity_holds_at_many_points():
    scenario = get_scenario("1.I.1.1.2")
    rng = random.Random(11)
    for _ in range(50):
        params = sample_params(scenario, rng)
        env = build_env(scenario, params)
        assert env["a"] - (env["k"] + env["m"]) == env["b"] + (env["k"] + env["m"])


def test_precondition_violation_names_inequality():
    scenario = get_scenario("1.I.1.1.2")
    with pytest.raises(PreconditionViolation) as exc:
        verify_scenario(scenario, ScenarioParams.of(a=F(11, 20), b=F(1, 4), epsilon=F(1, 10)))
    assert exc.value.inequality == "1 - a - b >= b"


def test_epsilon_partition_examples():
    assert epsilon_partition(F(2, 3) - F(1, 40), F(1, 10)) == 6
    assert epsilon_partition(F(0), F(1, 7)) == 0
    assert epsilon_partition(F(1, 3) - F(1, 20), F(1, 10)) == 2
    with pytest.raises(ValueError):
        epsilon_partition(F(-1, 3), F(1, 10))
    with pytest.raises(ValueError):
        epsilon_partition(F(1, 3), F(0))


@given(st.fractions(min_value=0, max_value=10),
       st.fractions(min_value=F(1, 100), max_value=2))
def test_epsilon_partition_brackets(quantity, epsilon):
    n = epsilon_partition(quantity, epsilon)
    assert n >= 0
    assert n * epsilon <= quantity < (n + 1) * epsilon


def test_step_two_constants_at_tenth():
    scenario = get_scenario("2.I.n+1")
    params = ScenarioParams.of(epsilon=F(1, 10))
    env = build_env(scenario, params)
    assert env["d"] == F(1, 80)
    assert env["n"] == 6
    assert 6 * env["epsilon"] <= F(2, 3) - 2 * env["d"] < 7 * env["epsilon"]
    assert verify_full(scenario, params).passed


def test_half_ceiling_property():
    for n in range(1, 101):
        r = evaluate_expression("ceil((n + 1)/2)", {"n": F(n)})
        assert r >= F(n + 1, 2)
        assert r.denominator == 1


def test_induction_chain_example():
    scenario = get_scenario("1.I.1.1.n+1")
    params = ScenarioParams.of(a=F(3, 5), b=F(1, 5), epsilon=F(1, 10))
    env = build_env(scenario, params)
    assert env["n"] == 4
    assert env["kp"] + env["mp"] == F(2, 25)  # per-step coalition mass
    report = verify_induction_chain(scenario, params)
    assert report.passed, report.text()
    assert verify_scenario(scenario, params).passed


def test_degenerate_chain_passes_vacuously():
    scenario = get_scenario("1.I.1.1.n+1")
    params = ScenarioParams.of(a=F(3, 5), b=F(1, 5), epsilon=F(1, 2))
    env = build_env(scenario, params)
    assert env["n"] == 0
    assert verify_full(scenario, params).passed


def test_descent_chain_reaches_pair_profile():
    scenario = get_scenario("3.I.1.1.0.n+1")
    params = ScenarioParams.of(a=F(11, 20), b=F(1, 10), c=F(1, 5), epsilon=F(1, 25))
    report = verify_full(scenario, params)
    assert report.passed, report.text()


def test_cross_module_hypotheses_match_rules():
    # group-two anchor: the dominance count elects y whenever d > 0
    scenario = get_scenario("2.I.1")
    params = ScenarioParams.of(epsilon=F(3, 5))
    env = build_env(scenario, params)
    u1 = va.profile_from({
        "xyz": env["q"], "yzx": F(1, 3) + 2 * env["d"], "zxy": env["q"]},
        va.parse_domain("{x>y>z, y>z>x, z>x>y, x>z>y}"))
    assert va.evaluate(va.BORDA, u1).winner == "y"
    # group-three branch conditions pin the pairwise-majority winner
    scenario = get_scenario("3.I.1.1.0.1")
    params = sample_params(scenario, random.Random(3))
    env = build_env(scenario, params)
    base = va.profile_from({
        "xyz": env["a"], "yzx": env["b"], "yxz": env["c"],
        "zyx": 1 - env["a"] - env["b"] - env["c"]},
        va.Domain((va.ranking("xyz"), va.ranking("yzx"),
                   va.ranking("yxz"), va.ranking("zyx"))))
    assert va.evaluate(va.CONDORCET, base).winner == "x"


def test_every_scenario_passes_spot_checks():
    rng = random.Random(99)
    for scenario in scenario_catalog():
        for _ in range(3):
            params = sample_params(scenario, rng)
            report = verify_full(scenario, params)
            assert report.passed, f"{scenario.id} at {params}:\n{report.text()}"


def test_sampling_is_deterministic_per_seed():
    scenario = get_scenario("3.II.1.0.n+1")
    a = sample_params(scenario, random.Random(5))
    b = sample_params(scenario, random.Random(5))
    assert a == b


def test_unknown_scenario_id():
    with pytest.raises(KeyError):
        get_scenario("4.X.9")


def test_expression_guards():
    with pytest.raises(ExpressionError):
        evaluate_expression("0.5 + a", {"a": F(1)})  # float literals lose exactness
    with pytest.raises(ExpressionError):
        evaluate_expression("__import__('os')", {})
    with pytest.raises(ExpressionError):
        evaluate_expression("a ** 2", {"a": F(2)})
    assert evaluate_expression("floor(7/2)", {}) == 3
    assert evaluate_expression("ceil(7/2)", {}) == 4
    assert evaluate_expression("abs(1 - 2)", {}) == 1


def test_report_text_lists_every_check():
    scenario = get_scenario("2.III.2")
    report = verify_full(scenario, ScenarioParams.of(epsilon=F(1, 5)))
    text = report.text()
    assert text.count("pass") == len(report.results)
    assert "unanimously dominated" in text  # the pareto exclusion line
    assert report.passed
