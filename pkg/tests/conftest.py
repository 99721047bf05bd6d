from __future__ import annotations

import json
from pathlib import Path

import pytest

from bideriv.poset import FinitePoset, chain
from bideriv.rings import RingDescriptor

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

RINGS = {
    "integer": RingDescriptor.integer(),
    "mod5": RingDescriptor.modular(5),
    "rational": RingDescriptor.rational(),
}


def load(name: str) -> FinitePoset:
    return FinitePoset.from_json(json.loads((FIXTURES / f"{name}.json").read_text()))


def example_s() -> FinitePoset:
    return load("example_s")


def s1() -> FinitePoset:
    return load("s1")


def diamond() -> FinitePoset:
    return load("diamond")


def bowtie() -> FinitePoset:
    # two minimal and two maximal elements through one middle element
    return FinitePoset("abmcd", [("a", "m"), ("b", "m"), ("m", "c"), ("m", "d")])


def two_chains() -> FinitePoset:
    return FinitePoset("pqrstu", [("p", "q"), ("q", "r"), ("s", "t"), ("t", "u")])


def crown_top() -> FinitePoset:
    # a 3-chain with a second top and a shared bottom: x < y < z, x < y < w, x < v < w
    return FinitePoset("vwxyz", [("x", "y"), ("y", "z"), ("y", "w"), ("x", "v"), ("v", "w")])


# connected or not, every maximal chain has at least three elements, at most six elements
SMALL_FIXTURES = {
    "chain3": lambda: chain("x", "y", "z"),
    "chain4": lambda: chain("w", "x", "y", "z"),
    "chain5": lambda: chain("a", "b", "c", "d", "e"),
    "diamond": diamond,
    "bowtie": bowtie,
    "crown_top": crown_top,
    "S1": s1,
    "two_chains": two_chains,
}

ROUND_TRIP_FIXTURES = {
    "chain3": lambda: chain("x", "y", "z"),
    "chain4": lambda: chain("w", "x", "y", "z"),
    "diamond": diamond,
    "S": example_s,
    "S1": s1,
}

ALL_FIXTURES = {**SMALL_FIXTURES, "S": example_s}


@pytest.fixture(params=sorted(ALL_FIXTURES))
def fixture_poset(request) -> FinitePoset:
    return ALL_FIXTURES[request.param]()


@pytest.fixture(params=sorted(RINGS))
def ring(request) -> RingDescriptor:
    return RINGS[request.param]
