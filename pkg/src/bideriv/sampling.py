"""Seeded random ring values, algebra elements and known-decomposition biderivations.

Coefficient ranges: integers in -9..9; residues drawn from the whole of Z/n;
rationals ``a/b`` with ``a`` in -9..9 and ``b`` in 1..5.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra import AlgebraElement
from .bilinear import BilinearMap, extremal, inner_per_region
from .poset import FinitePoset
from .rings import MODULAR, RATIONAL, RingDescriptor, RingValue
from .structure import ComponentDecomposition, Decomposition

COEFF_BOUND = 9
DENOM_BOUND = 5


def random_value(d: RingDescriptor, rng: random.Random) -> RingValue:
    if d.kind == MODULAR:
        return rng.randrange(d.modulus)
    if d.kind == RATIONAL:
        return Fraction(rng.randint(-COEFF_BOUND, COEFF_BOUND), rng.randint(1, DENOM_BOUND))
    return rng.randint(-COEFF_BOUND, COEFF_BOUND)


def random_element(p: FinitePoset, d: RingDescriptor, rng: random.Random, density: float = 0.6) -> AlgebraElement:
    return AlgebraElement(p, d, {pr: random_value(d, rng) for pr in p.pairs if rng.random() < density})


def random_decomposition(p: FinitePoset, d: RingDescriptor, rng: random.Random) -> Decomposition:
    comps = []
    for c in range(p.num_components):
        lambdas = {r: random_value(d, rng) for r in range(p.num_regions(c))}
        T = AlgebraElement(p, d, {pr: random_value(d, rng) for pr in p.extremal_pairs(c)})
        comps.append(ComponentDecomposition(lambdas, T))
    return Decomposition(p, d, tuple(comps))


def random_biderivation(p: FinitePoset, d: RingDescriptor, rng: random.Random) -> tuple[BilinearMap, Decomposition]:
    """A sum of per-region inner maps and one extremal map, with the
    decomposition it was built from."""
    dec = random_decomposition(p, d, rng)
    b = inner_per_region(p, d, dec.lambda_table()) + extremal(p, d, dec.T_total())
    return b, dec
