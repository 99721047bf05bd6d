import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from bideriv.algebra import AlgebraElement, basis, element, region_full_part, zero
from bideriv.bilinear import (
    BilinearMap,
    allowed_positions,
    check_change_seat,
    check_commuting_vanishing,
    check_diagonal_square,
    check_incomparable_vanishing,
    check_support_shape,
    extremal,
    inner,
    inner_per_region,
    is_biderivation,
    is_derivation_in_first,
    lemma_suite,
    map_from_spec,
    zero_map,
)
from bideriv.poset import chain
from bideriv.rings import RingDescriptor
from bideriv.sampling import random_biderivation, random_element, random_value
from conftest import FIXTURES, RINGS, SMALL_FIXTURES, diamond, example_s, load, s1

Z = RingDescriptor.integer()
Q = RingDescriptor.rational()


def unit(p, d, pr):
    return AlgebraElement(p, d, {pr: 1})


def oracle_is_biderivation(b):
    """Both laws on every basis triple, via algebra products only."""
    p, d = b.poset, b.ring
    units = {pr: unit(p, d, pr) for pr in p.pairs}
    ev = lambda x, y: b.evaluate(x, y)
    for r in p.pairs:
        R = units[r]
        for a in p.pairs:
            A = units[a]
            for c in p.pairs:
                C = units[c]
                if ev(A * C, R) != A * ev(C, R) + ev(A, R) * C:
                    return False
                if ev(R, A * C) != A * ev(R, C) + ev(R, A) * C:
                    return False
    return True


def test_inner_matches_bracket():
    S = example_s()
    b = inner(S, Z, 3)
    rng = random.Random(0)
    for _ in range(30):
        a, c = random_element(S, Z, rng), random_element(S, Z, rng)
        assert b.evaluate(a, c) == a.bracket(c).scale(3)
    assert b.at("a", "b", "b", "d") == basis(S, Z, "a", "d", 3)
    assert b.at("a", "a", "a", "c") == basis(S, Z, "a", "c", 3)
    assert inner(S, Z, 0).is_zero()


def test_inner_per_region_matches_restricted_brackets():
    S1 = s1()
    lam = {(0, 0): 2, (0, 1): -1}
    b = inner_per_region(S1, Z, lam)
    rng = random.Random(1)
    for _ in range(30):
        a, c = random_element(S1, Z, rng), random_element(S1, Z, rng)
        want = zero(S1, Z)
        for (comp, r), l in lam.items():
            want = want + region_full_part(a, comp, r).bracket(region_full_part(c, comp, r)).scale(l)
        assert b.evaluate(a, c) == want
    # one lambda everywhere is the plain inner map
    assert inner_per_region(S1, Z, {(0, 0): 5, (0, 1): 5}) == inner(S1, Z, 5)


def test_extremal_matches_double_bracket():
    S = example_s()
    g = element(S, Q, {("a", "d"): 4, ("a", "f"): -3, ("g", "i"): 2})
    b = extremal(S, Q, g)
    rng = random.Random(2)
    for _ in range(30):
        a, c = random_element(S, Q, rng), random_element(S, Q, rng)
        assert b.evaluate(a, c) == a.bracket(c.bracket(g))
    assert b.at("a", "a", "d", "d") == element(S, Q, {("a", "d"): -4})
    assert is_biderivation(b).passed


@pytest.mark.parametrize("name", sorted(SMALL_FIXTURES))
def test_constructed_maps_are_biderivations(name):
    p = SMALL_FIXTURES[name]()
    rng = random.Random(name)
    for rname, d in RINGS.items():
        b, _ = random_biderivation(p, d, rng)
        rep = is_biderivation(b)
        assert rep.passed, rep.violations[:3]
        assert all(r.passed for r in lemma_suite(b).values())
    b, _ = random_biderivation(p, Z, rng)
    assert oracle_is_biderivation(b)


def test_bilinearity():
    p, d = diamond(), Q
    rng = random.Random(3)
    b, _ = random_biderivation(p, d, rng)
    for _ in range(20):
        a1, a2, c = (random_element(p, d, rng) for _ in range(3))
        r = random_value(d, rng)
        assert b.evaluate(a1 + a2, c) == b.evaluate(a1, c) + b.evaluate(a2, c)
        assert b.evaluate(c, a1.scale(r)) == b.evaluate(c, a1).scale(r)
    assert (b - b).is_zero()
    assert (b + b) == b.scale(2)


def test_derivation_in_first_for_non_basis_argument():
    p = chain("x", "y", "z")
    b = inner(p, Z, 1)
    fixed = element(p, Z, {("x", "x"): 2, ("x", "z"): -1, ("y", "z"): 3})
    assert is_derivation_in_first(b, fixed).passed
    bad = BilinearMap(p, Z, {((0, 0), (0, 0)): basis(p, Z, "x", "y")})
    assert not is_derivation_in_first(bad, unit_sum(p)).passed


def unit_sum(p):
    return element(p, Z, {(x, x): 1 for x in p.elements})


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(SMALL_FIXTURES)), st.integers(0, 2**32), st.booleans())
def test_checker_agrees_with_oracle(name, seed, perturb):
    p = SMALL_FIXTURES[name]()
    if len(p.pairs) > 12:
        p = chain("x", "y", "z")
    rng = random.Random(seed)
    b, _ = random_biderivation(p, Z, rng)
    if perturb:
        k = (rng.choice(p.pairs), rng.choice(p.pairs))
        b = b + BilinearMap(p, Z, {k: AlgebraElement(p, Z, {rng.choice(p.pairs): rng.choice([-1, 1])})})
    assert is_biderivation(b).passed == oracle_is_biderivation(b)


def test_corrupted_maps_are_reported():
    c3 = chain("x", "y", "z")
    bad = BilinearMap(c3, Z, {((0, 0), (0, 0)): basis(c3, Z, "x", "y")})
    rep = is_biderivation(bad)
    assert not rep.passed and rep.violations
    assert not check_diagonal_square(bad).passed

    S = example_s()
    ix = S.index
    bad = BilinearMap(S, Z, {((ix["b"], ix["b"]), (ix["e"], ix["e"])): basis(S, Z, "b", "b")})
    assert not check_incomparable_vanishing(bad).passed
    assert not check_support_shape(bad).passed
    assert not is_biderivation(bad).passed

    bad = BilinearMap(c3, Z, {((0, 0), (1, 1)): basis(c3, Z, "x", "y")})
    assert not check_commuting_vanishing(bad).passed


def test_violation_witnesses_name_the_triple():
    c3 = chain("x", "y", "z")
    bad = inner(c3, Z, 1) + BilinearMap(c3, Z, {((0, 1), (1, 2)): basis(c3, Z, "x", "x")})
    rep = is_biderivation(bad)
    assert not rep.passed
    js = rep.to_json(c3, Z)
    assert js["passed"] is False
    assert {"identity", "witness", "expected", "actual"} <= set(js["violations"][0])
    assert any((0, 1) in v.witness and (1, 2) in v.witness for v in rep.violations)


@pytest.mark.parametrize("name", sorted(SMALL_FIXTURES))
def test_change_seat_on_biderivations(name):
    p = SMALL_FIXTURES[name]()
    b, _ = random_biderivation(p, Z, random.Random(7))
    rep = check_change_seat(b)
    assert rep.passed and rep.checked > 0


def test_allowed_positions_cases():
    S = example_s()
    ix = S.index
    pr = lambda s: (ix[s[0]], ix[s[1]])
    # x != u, y != v: only (x, v), (u, y) when comparable
    assert allowed_positions(S, pr("ab"), pr("bd")) == {pr("ad"), pr("bb")}
    assert allowed_positions(S, pr("bd"), pr("ce")) == set()
    # same start
    assert allowed_positions(S, pr("ac"), pr("ae")) == {pr("ae")}
    # same end
    assert allowed_positions(S, pr("ce"), pr("ae")) == {pr("ae")}
    # same pair
    assert allowed_positions(S, pr("ab"), pr("ab")) == {pr("ab"), pr("ad")}


def test_map_json_and_specs():
    S1 = s1()
    b = map_from_spec(S1, Z, {"sum": [
        {"inner_per_region": {"lambdas": [
            {"component": 0, "region": 0, "value": "2"},
            {"component": 0, "region": 1, "value": "-1"},
        ]}},
        {"extremal": {"gamma": element(S1, Z, {("a", "d"): 4, ("a", "f"): -3}).to_json()}},
    ]})
    assert b == map_from_spec(S1, Z, json.loads((FIXTURES / "regions_s1.json").read_text()))
    assert BilinearMap.from_json(S1, Z, b.to_json()) == b
    assert map_from_spec(S1, Z, {"inner": {"lambda": "3"}}) == inner(S1, Z, 3)
    assert map_from_spec(S1, Z, {"entries": []}) == zero_map(S1, Z)
    for bad in ({"nope": 1}, {"inner": {}}, {"entries": [{"left": ["b", "c"], "right": ["a", "a"], "value": {"entries": []}}]}, [], {"inner": 1, "sum": []}):
        with pytest.raises(ValueError):
            map_from_spec(S1, Z, bad)
