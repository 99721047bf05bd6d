"""Every biderivation of a small incidence algebra over Z/p, by linear algebra.

The unknowns are the coefficients ``b(e_a, e_c)(s, t)``.  Both derivation
laws, written out on every basis triple and every coordinate, give a
homogeneous sparse system over Z/p whose null space is the space of all
(bilinear) biderivations.  By default unknowns are restricted to the
positions allowed by the support-shape lemma; ``prune=False`` keeps every
position ``s <= t`` so that the vanishing results are re-derived rather than
assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .algebra import AlgebraElement, Pair
from .bilinear import BilinearMap, allowed_positions
from .poset import FinitePoset
from .rings import RingDescriptor

Unknown = tuple[Pair, Pair, Pair]


class SolverError(ValueError):
    pass


class RowReducer:
    """Incremental reduced row echelon form over Z/p with sparse dict rows.

    Pivot rows are kept fully reduced against each other, so the final form
    is the unique RREF of the row space whatever order rows arrive in.
    """

    def __init__(self, prime: int):
        self.p = prime
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        p = self.p
        row = {c: v % p for c, v in row.items() if v % p}
        for c in [c for c in row if c in self.pivots]:
            f = row.get(c)
            if not f:
                continue
            for k, v in self.pivots[c].items():
                nv = (row.get(k, 0) - f * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return row

    def add(self, row: dict[int, int]) -> bool:
        """Insert a row; return True if it increased the rank."""
        row = self.reduce(row)
        if not row:
            return False
        p = self.p
        c = min(row)
        inv = pow(row[c], -1, p)
        row = {k: v * inv % p for k, v in row.items()}
        for other in self.pivots.values():
            f = other.get(c)
            if f:
                for k, v in row.items():
                    nv = (other.get(k, 0) - f * v) % p
                    if nv:
                        other[k] = nv
                    else:
                        del other[k]
        self.pivots[c] = row
        return True

    def null_space(self, ncols: int) -> list[dict[int, int]]:
        """One basis vector per free column, in increasing column order."""
        p = self.p
        by_col: dict[int, list[tuple[int, int]]] = {}
        for pc, row in self.pivots.items():
            for k, v in row.items():
                if k != pc:
                    by_col.setdefault(k, []).append((pc, v))
        basis = []
        for f in range(ncols):
            if f in self.pivots:
                continue
            vec = {f: 1}
            for pc, v in by_col.get(f, ()):
                vec[pc] = (-v) % p
            basis.append(vec)
        return basis


def _is_prime(n: int) -> bool:
    from sympy import isprime

    return isprime(n)


@dataclass
class LinearSystem:
    poset: FinitePoset
    prime: int
    unknowns: list[Unknown]
    rows: list[dict[int, int]]
    pruned: bool = True
    index: dict[Unknown, int] = field(init=False, repr=False)
    _reducer: Optional[RowReducer] = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        self.index = {u: k for k, u in enumerate(self.unknowns)}

    @property
    def num_unknowns(self) -> int:
        return len(self.unknowns)

    @property
    def ring(self) -> RingDescriptor:
        return RingDescriptor.modular(self.prime)

    def reducer(self) -> RowReducer:
        if self._reducer is None:
            red = RowReducer(self.prime)
            for row in self.rows:
                red.add(row)
            self._reducer = red
        return self._reducer

    def vector_of(self, b: BilinearMap) -> dict[int, int]:
        """Coordinates of ``b`` in the unknowns.

        Raises:
            SolverError: ``b`` has a coefficient at a pruned position.
        """
        if b.ring != self.ring:
            raise SolverError(f"map is over {b.ring}, system over Z/{self.prime}")
        vec = {}
        for (a, c), val in b.table.items():
            for pos, v in val.entries.items():
                k = self.index.get((a, c, pos))
                if k is None:
                    raise SolverError(f"map has a coefficient outside the unknowns at {(a, c, pos)}")
                vec[k] = v
        return vec

    def map_of(self, vec: dict[int, int]) -> BilinearMap:
        d = self.ring
        grouped: dict[tuple[Pair, Pair], dict[Pair, int]] = {}
        for k, v in vec.items():
            a, c, pos = self.unknowns[k]
            grouped.setdefault((a, c), {})[pos] = v
        table = {key: AlgebraElement(self.poset, d, ent) for key, ent in grouped.items()}
        return BilinearMap(self.poset, d, table)

    def satisfied_by(self, b: BilinearMap) -> bool:
        vec = self.vector_of(b)
        p = self.prime
        return all(sum(c * vec.get(k, 0) for k, c in row.items()) % p == 0 for row in self.rows)


def assemble(poset: FinitePoset, prime: int, prune: bool = True) -> LinearSystem:
    """Write both derivation laws on every basis triple as equations mod ``prime``."""
    if not isinstance(prime, int) or isinstance(prime, bool) or not _is_prime(prime):
        raise SolverError(f"modulus {prime!r} is not prime")
    pairs = poset.pairs
    unknowns: list[Unknown] = []
    sym: dict[tuple[Pair, Pair], list[tuple[Pair, int]]] = {}
    for a in pairs:
        for c in pairs:
            positions = sorted(allowed_positions(poset, a, c)) if prune else list(pairs)
            entries = []
            for pos in positions:
                entries.append((pos, len(unknowns)))
                unknowns.append((a, c, pos))
            sym[(a, c)] = entries

    rows: list[dict[int, int]] = []
    seen: set[tuple] = set()

    def emit(eqs: dict[Pair, dict[int, int]]) -> None:
        for row in eqs.values():
            row = {k: v % prime for k, v in row.items() if v % prime}
            if row:
                key = tuple(sorted(row.items()))
                if key not in seen:
                    seen.add(key)
                    rows.append(row)

    def law(X_prod, X_c, X_a, a: Pair, c: Pair) -> dict[Pair, dict[int, int]]:
        # D(e_a e_c) - e_a D(e_c) - D(e_a) e_c, coordinatewise
        eqs: dict[Pair, dict[int, int]] = {}

        def put(pos, col, s):
            row = eqs.setdefault(pos, {})
            row[col] = row.get(col, 0) + s

        if X_prod is not None:
            for pos, col in X_prod:
                put(pos, col, 1)
        for (s, t), col in X_c:
            if s == a[1]:
                put((a[0], t), col, -1)
        for (s, t), col in X_a:
            if t == c[0]:
                put((s, c[1]), col, -1)
        return eqs

    for r in pairs:
        for a in pairs:
            for c in pairs:
                prod = (a[0], c[1]) if a[1] == c[0] else None
                emit(law(sym[(prod, r)] if prod else None, sym[(c, r)], sym[(a, r)], a, c))
                emit(law(sym[(r, prod)] if prod else None, sym[(r, c)], sym[(r, a)], a, c))
    return LinearSystem(poset, prime, unknowns, rows, prune)


def space_dimension(system: LinearSystem) -> int:
    return system.num_unknowns - system.reducer().rank


def solve_basis(system: LinearSystem) -> list[BilinearMap]:
    """A basis of the solution space, one map per free unknown (deterministic)."""
    return [system.map_of(vec) for vec in system.reducer().null_space(system.num_unknowns)]


def span_rank(system: LinearSystem, maps: Iterable[BilinearMap]) -> int:
    """Rank over Z/p of the coordinate vectors of ``maps``."""
    red = RowReducer(system.prime)
    for b in maps:
        red.add(system.vector_of(b))
    return red.rank


def in_span(system: LinearSystem, b: BilinearMap, basis: list[BilinearMap] | None = None) -> bool:
    """Appending ``b`` to the solution basis leaves the rank unchanged."""
    basis = solve_basis(system) if basis is None else basis
    try:
        vec = system.vector_of(b)
    except SolverError:
        return False
    red = RowReducer(system.prime)
    for m in basis:
        red.add(system.vector_of(m))
    return not red.add(vec)
