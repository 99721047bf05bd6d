import pytest
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from bideriv.algebra import AlgebraElement
from bideriv.bilinear import BilinearMap, extremal, inner_per_region, is_biderivation, lemma_suite
from bideriv.poset import FinitePoset, chain
from bideriv.rings import RingDescriptor
from bideriv.solver import (
    RowReducer,
    SolverError,
    assemble,
    in_span,
    solve_basis,
    space_dimension,
    span_rank,
)
from bideriv.structure import verify_structure_theorem
from conftest import SMALL_FIXTURES, diamond, example_s, load

PRIMES = (2, 3, 5)


def residual_vector(b):
    """Both derivation laws on every basis triple, flattened to coordinates."""
    p, d = b.poset, b.ring
    units = {pr: AlgebraElement(p, d, {pr: 1}) for pr in p.pairs}
    out = []
    for r in p.pairs:
        R = units[r]
        for a in p.pairs:
            A = units[a]
            for c in p.pairs:
                C = units[c]
                e1 = b.evaluate(A * C, R) - A * b.evaluate(C, R) - b.evaluate(A, R) * C
                e2 = b.evaluate(R, A * C) - A * b.evaluate(R, C) - b.evaluate(R, A) * C
                out += [e1.coeff_idx(*k) for k in p.pairs] + [e2.coeff_idx(*k) for k in p.pairs]
    return out


def oracle_dimension(p, prime):
    """Kernel dimension of the law map on the full coordinate space, via sympy over GF(p)."""
    d = RingDescriptor.modular(prime)
    cols = []
    for a in p.pairs:
        for c in p.pairs:
            for pos in p.pairs:
                b = BilinearMap(p, d, {(a, c): AlgebraElement(p, d, {pos: 1})})
                cols.append(residual_vector(b))
    K = GF(prime)
    m = DomainMatrix([[K(v) for v in col] for col in cols], (len(cols), len(cols[0])), K)
    return len(cols) - m.rank()


def expected_dimension(p):
    # one lambda per region plus one T coefficient per (minimal, maximal) pair
    return sum(p.num_regions(c) + len(p.extremal_pairs(c)) for c in range(p.num_components))


@pytest.mark.parametrize("prime", PRIMES)
def test_three_chain_dimension_matches_independent_rank(prime):
    p = chain("x", "y", "z")
    assert oracle_dimension(p, prime) == 2
    assert space_dimension(assemble(p, prime)) == 2
    assert space_dimension(assemble(p, prime, prune=False)) == 2


@pytest.mark.parametrize("prime", PRIMES)
def test_diamond_dimension(prime):
    assert space_dimension(assemble(diamond(), prime)) == 2


@pytest.mark.parametrize("name", sorted(SMALL_FIXTURES))
@pytest.mark.parametrize("prime", PRIMES)
def test_basis_is_sound_and_matches_generators(name, prime):
    p = SMALL_FIXTURES[name]()
    d = RingDescriptor.modular(prime)
    system = assemble(p, prime)
    basis = solve_basis(system)
    assert len(basis) == space_dimension(system) == expected_dimension(p)
    for b in basis:
        assert is_biderivation(b).passed
        assert system.satisfied_by(b)
        assert all(r.passed for r in lemma_suite(b).values())
    assert span_rank(system, basis) == len(basis)
    gens = []
    for c in range(p.num_components):
        for r in range(p.num_regions(c)):
            gens.append(inner_per_region(p, d, {(c, r): 1}))
        for pr in p.extremal_pairs(c):
            gens.append(extremal(p, d, AlgebraElement(p, d, {pr: 1})))
    for g in gens:
        assert in_span(system, g, basis)
    assert span_rank(system, gens) == len(basis)


@pytest.mark.parametrize("name", ["chain3", "diamond", "bowtie", "crown_top"])
def test_pruning_does_not_change_the_space(name):
    p = SMALL_FIXTURES[name]()
    full = assemble(p, 3, prune=False)
    pruned = assemble(p, 3)
    assert full.num_unknowns > pruned.num_unknowns
    assert space_dimension(full) == space_dimension(pruned)
    for b in solve_basis(full):
        assert is_biderivation(b).passed
        assert in_span(pruned, b)


def test_non_biderivation_is_not_in_span():
    p = chain("x", "y", "z")
    system = assemble(p, 5)
    d = system.ring
    junk = BilinearMap(p, d, {((0, 0), (0, 0)): AlgebraElement(p, d, {(0, 1): 1})})
    assert not system.satisfied_by(junk)
    assert not in_span(system, junk)
    with pytest.raises(SolverError):
        system.vector_of(BilinearMap(p, d, {((0, 0), (0, 0)): AlgebraElement(p, d, {(1, 1): 1})}))


def test_errors_and_edge_cases():
    for bad in (4, 1, 0, -3, True, 2.0):
        with pytest.raises(SolverError):
            assemble(chain("x", "y"), bad)
    assert space_dimension(assemble(FinitePoset([]), 2)) == 0
    assert solve_basis(assemble(FinitePoset([]), 2)) == []
    # a single point: every bilinear map on a one-dimensional commutative algebra
    # that is a derivation in each argument vanishes
    assert space_dimension(assemble(FinitePoset("x"), 7)) == 0


def test_row_reducer():
    red = RowReducer(5)
    assert red.add({0: 1, 1: 2})
    assert red.add({1: 1, 2: 1})
    assert not red.add({0: 1, 1: 3, 2: 1})
    assert red.rank == 2
    ns = red.null_space(3)
    assert len(ns) == 1
    v = ns[0]
    for row in ({0: 1, 1: 2}, {1: 1, 2: 1}):
        assert sum(c * v.get(k, 0) for k, c in row.items()) % 5 == 0


def test_region_overlap_has_extra_biderivations():
    p = load("region_overlap")
    system = assemble(p, 3)
    basis = solve_basis(system)
    assert all(is_biderivation(b).passed for b in basis)
    assert len(basis) == 6
    assert any(not verify_structure_theorem(b).passed for b in basis)


@pytest.mark.parametrize("prime", (2, 3))
def test_example_s_solver_space(prime):
    p = example_s()
    basis = solve_basis(assemble(p, prime))
    assert len(basis) == expected_dimension(p) == 7
    assert all(verify_structure_theorem(b).passed for b in basis)
