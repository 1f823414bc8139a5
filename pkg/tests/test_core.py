from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

import votaudit as va
from votaudit.core import (
    InfeasibleMoveError,
    ProfileError,
    ProfileParseError,
    RankingParseError,
)


def test_parse_ranking_canonical():
    assert va.parse_ranking("x>y>z").order == ("x", "y", "z")


def test_parse_ranking_noncanonical():
    assert va.parse_ranking("y>z>x").order == ("y", "z", "x")


@pytest.mark.parametrize("text,fragment", [
    ("x>x>z", "duplicate"),
    ("x>y", "missing"),
    ("x>y>w", "unknown"),
])
def test_parse_ranking_rejects(text, fragment):
    with pytest.raises(RankingParseError, match=fragment):
        va.parse_ranking(text)


def test_ranking_prefers_is_strict_total_order():
    r = va.ranking("yzx")
    assert r.prefers("y", "x") and r.prefers("y", "z") and r.prefers("z", "x")
    assert not r.prefers("x", "y")


def test_richness_fixtures():
    u1 = va.Domain(tuple(va.ranking(t) for t in ("xyz", "xzy", "yzx", "zyx")))
    u2 = va.Domain(tuple(va.ranking(t) for t in ("xyz", "xzy", "yzx", "yxz")))
    assert not va.is_rich(u1)
    assert va.is_rich(u2)
    assert va.is_rich(va.CYCLE_DOMAIN)
    assert va.is_rich(va.FULL_DOMAIN)


def test_richness_brute_force_agreement():
    # the predicate is its own oracle: middle-position scan over all subsets
    import itertools
    for size in range(1, 7):
        for combo in itertools.combinations(va.RANKINGS, size):
            domain = va.Domain(combo)
            expected = all(
                any(r.order[1] == alt for r in combo) for alt in va.ALTERNATIVES
            )
            assert va.is_rich(domain) == expected


def simplex_weights(n):
    """Strategy: n nonnegative fractions summing to 1."""
    return st.lists(st.integers(0, 30), min_size=n, max_size=n).filter(
        lambda parts: sum(parts) > 0
    ).map(lambda parts: [F(p, sum(parts)) for p in parts])


@st.composite
def full_profiles(draw):
    weights = draw(simplex_weights(6))
    return va.Profile(dict(zip(va.RANKINGS, weights)))


@given(full_profiles(), st.sampled_from(va.ALL_PERMUTATIONS))
def test_permute_preserves_total_and_inverts(profile, perm):
    image = va.permute_profile(profile, perm)
    assert image.total_weight() == 1
    assert va.permute_profile(image, perm.inverse()) == profile


def test_permute_identity():
    u = va.profile_from({"xyz": "1/2", "yxz": "3/10", "yzx": "1/5"})
    assert va.permute_profile(u, va.IDENTITY_PERMUTATION) == u


def test_permute_matches_displayed_table():
    # (p: x>y>z, q: y>x>z, 1-p-q: y>z>x) under x->y, y->z, z->x
    p, q = F(1, 2), F(3, 10)
    u = va.profile_from({"xyz": p, "yxz": q, "yzx": 1 - p - q})
    sigma = va.parse_permutation("x->y,y->z,z->x")
    image = va.permute_profile(u, sigma)
    assert image.weights == {
        va.ranking("yzx"): p,
        va.ranking("zyx"): q,
        va.ranking("zxy"): 1 - p - q,
    }


def test_transfer_empty_moves():
    u = va.profile_from({"xyz": "2/5", "yzx": "3/5"})
    moved, size = va.transfer_weight(u, [])
    assert moved == u and size == 0


def test_transfer_case_weights():
    # (a: xyz, b: yzx, 1-a-b: zxy) with k, m shifted out of the top block
    a, b = F(21, 50), F(7, 25)
    k, m = (1 - a - 2 * b) / 2, (2 * a + b - 1) / 2
    u = va.profile_from({"xyz": a, "yzx": b, "zxy": 1 - a - b}, va.CYCLE_DOMAIN)
    moved, size = va.transfer_weight(
        u, [(va.ranking("xyz"), va.ranking("yzx"), k),
            (va.ranking("xyz"), va.ranking("zxy"), m)])
    assert size == k + m
    assert moved.weight(va.ranking("xyz")) == a - (k + m) == b + (k + m)
    assert moved.weight(va.ranking("yzx")) == b + k == 1 - a - b - k
    assert moved.weight(va.ranking("zxy")) == 1 - a - b + m == a - m


def test_transfer_overdraw_rejected():
    u = va.profile_from({"xyz": "1/4", "yzx": "3/4"})
    with pytest.raises(InfeasibleMoveError):
        va.transfer_weight(u, [(va.ranking("xyz"), va.ranking("yzx"), F(1, 2))])


def test_transfer_split_outflow_overdraw_rejected():
    u = va.profile_from({"xyz": "1/4", "yzx": "3/4"})
    with pytest.raises(InfeasibleMoveError):
        va.transfer_weight(u, [
            (va.ranking("xyz"), va.ranking("yzx"), F(1, 5)),
            (va.ranking("xyz"), va.ranking("zxy"), F(1, 5)),
        ])


def test_transfer_outside_domain_rejected():
    u = va.profile_from({"xyz": "1/2", "yzx": "1/2"}, va.CYCLE_DOMAIN)
    with pytest.raises(va.core.DomainViolationError):
        va.transfer_weight(u, [(va.ranking("xyz"), va.ranking("xzy"), F(1, 10))])


@given(full_profiles())
def test_transfer_conserves_total(profile):
    support = profile.support
    moves = [(support[0], va.RANKINGS[0], profile.weight(support[0]) / 2)]
    moved, size = va.transfer_weight(profile, moves)
    assert moved.total_weight() == 1
    assert size == moves[0][2]


def test_profile_requires_unit_total():
    with pytest.raises(ProfileError):
        va.profile_from({"xyz": "1/2", "yzx": "1/3"})


def test_profile_rejects_positive_weight_off_domain():
    with pytest.raises(ProfileError):
        va.profile_from({"xyz": "1/2", "xzy": "1/2"}, va.CYCLE_DOMAIN)


def test_profile_zero_weights_allowed_and_normalized():
    u = va.profile_from({"xyz": 1, "xzy": 0})
    assert u.support == (va.ranking("xyz"),)
    assert u.weight(va.ranking("xzy")) == 0


def test_parse_profile_and_round_trip():
    text = """
    # comment
    domain: {x>y>z, y>z>x, z>x>y}
    1/3 x>y>z
    0.25 y>z>x   # decimal reads exactly
    5/12 z>x>y
    """
    u = va.parse_profile(text)
    assert u.weight(va.ranking("yzx")) == F(1, 4)
    assert va.parse_profile(va.format_profile(u)) == u


def test_parse_profile_accumulates_repeats():
    text = "domain: full\n1/3 x>z>y\n1/3 y>z>x\n1/3 x>z>y\n"
    u = va.parse_profile(text)
    assert u.weight(va.ranking("xzy")) == F(2, 3)


@pytest.mark.parametrize("text", [
    "1/2 x>y>z\n1/2 y>z>x",              # missing header
    "domain: full\n1/2 x>y>z\n1/3 y>z>x",  # bad total
    "domain: full\nhalf x>y>z",           # bad weight
    "domain: full\n1/2 x>q>z\n1/2 y>z>x",  # unknown alternative
    "domain: {x>y>z}\n1/2 x>y>z\n1/2 y>z>x",  # off-domain support
])
def test_parse_profile_rejects(text):
    with pytest.raises(ProfileParseError):
        va.parse_profile(text)


def test_parse_domain_forms():
    assert va.parse_domain("full") == va.FULL_DOMAIN
    assert va.parse_domain("{x>y>z, y>z>x, z>x>y}") == va.CYCLE_DOMAIN
