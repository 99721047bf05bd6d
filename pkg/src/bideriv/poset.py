"""Finite posets and their two decompositions.

A :class:`FinitePoset` is built from any generating set of relations (not
necessarily the Hasse reduction).  Elements are strings externally; internally
they are dense indices ``0..n-1`` assigned in sorted identifier order, so index
order and identifier order coincide and every reported collection is sorted.

Two decompositions are computed eagerly at build time:

* connected components, the classes of the transitive closure of
  comparability;
* inside each component, *chain regions*: maximal chains are grouped by the
  transitive closure of "share a pair ``x < y``", and each region is the union
  of the chains in one group.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from networkx.utils import UnionFind


class PosetError(ValueError):
    """Invalid poset input."""


class UnknownElementError(PosetError):
    pass


class DuplicateElementError(PosetError):
    pass


class CycleError(PosetError):
    """The generating relations force ``x <= y <= x`` for distinct ``x, y``."""

    def __init__(self, cycle: Sequence[str]):
        self.cycle = tuple(cycle)
        super().__init__("cycle violates antisymmetry: " + " < ".join(self.cycle + self.cycle[:1]))


@dataclass(frozen=True)
class ComponentPartition:
    components: tuple[tuple[str, ...], ...]
    index: Mapping[str, int]


@dataclass(frozen=True)
class RegionPartition:
    regions: tuple[tuple[str, ...], ...]
    chain_classes: tuple[tuple[tuple[str, ...], ...], ...]


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class FinitePoset:
    """Immutable finite poset.

    Attributes:
        elements: identifiers in index order (sorted).
        pairs: every comparable pair ``(i, j)`` with ``i <= j``, as indices,
            in lexicographic order.  These index the basis of the incidence
            algebra.
        covers: Hasse covering pairs, as indices.
    """

    def __init__(self, elements: Iterable[str], relations: Iterable[tuple[str, str]] = ()):
        elems = list(elements)
        seen: set[str] = set()
        for e in elems:
            if not isinstance(e, str):
                raise PosetError(f"element identifiers must be strings, got {e!r}")
            if e in seen:
                raise DuplicateElementError(f"duplicate element {e!r}")
            seen.add(e)
        self.elements: tuple[str, ...] = tuple(sorted(elems))
        self.index: dict[str, int] = {e: i for i, e in enumerate(self.elements)}
        self.n = n = len(self.elements)

        succ: list[set[int]] = [set() for _ in range(n)]
        for rel in relations:
            if len(rel) != 2:
                raise PosetError(f"relation must be a pair, got {rel!r}")
            a, b = (self._idx(r) for r in rel)
            if a != b:
                succ[a].add(b)

        self._up = self._closure(succ)
        self._down = [0] * n
        for i in range(n):
            for j in _bits(self._up[i]):
                self._down[j] |= 1 << i

        self.pairs: tuple[tuple[int, int], ...] = tuple(
            (i, j) for i in range(n) for j in range(n) if self._up[i] >> j & 1
        )
        self.pair_index: dict[tuple[int, int], int] = {p: k for k, p in enumerate(self.pairs)}
        self.covers: tuple[tuple[int, int], ...] = tuple(
            (i, j) for (i, j) in self.pairs
            if i != j and self._up[i] & self._down[j] == (1 << i) | (1 << j)
        )
        self._minimal = frozenset(i for i in range(n) if self._down[i] == 1 << i)
        self._maximal = frozenset(i for i in range(n) if self._up[i] == 1 << i)

        self._decompose()

    # -- construction helpers -----------------------------------------------

    def _idx(self, x: str) -> int:
        try:
            return self.index[x]
        except (KeyError, TypeError):
            raise UnknownElementError(f"unknown element {x!r}") from None

    def _closure(self, succ: list[set[int]]) -> list[int]:
        """Reflexive-transitive closure as upward bitmasks, via Kahn's order."""
        n = self.n
        indeg = [0] * n
        for s in succ:
            for j in s:
                indeg[j] += 1
        queue = deque(i for i in range(n) if indeg[i] == 0)
        order = []
        while queue:
            i = queue.popleft()
            order.append(i)
            for j in sorted(succ[i]):
                indeg[j] -= 1
                if indeg[j] == 0:
                    queue.append(j)
        if len(order) < n:
            raise CycleError(self._find_cycle(succ, set(range(n)) - set(order)))
        up = [1 << i for i in range(n)]
        for i in reversed(order):
            for j in succ[i]:
                up[i] |= up[j]
        return up

    def _find_cycle(self, succ: list[set[int]], stuck: set[int]) -> list[str]:
        # every vertex left over by Kahn's algorithm has a predecessor inside
        # the leftover set, so walking backwards must revisit a vertex
        pred = {j: min(i for i in stuck if j in succ[i]) for j in stuck}
        walk = [min(stuck)]
        pos = {walk[0]: 0}
        while True:
            nxt = pred[walk[-1]]
            if nxt in pos:
                cyc = walk[pos[nxt]:]
                return [self.elements[i] for i in reversed(cyc)]
            pos[nxt] = len(walk)
            walk.append(nxt)

    def _decompose(self) -> None:
        n = self.n
        comp_of = [-1] * n
        comps: list[tuple[int, ...]] = []
        for start in range(n):
            if comp_of[start] >= 0:
                continue
            members = 0
            frontier = 1 << start
            while frontier:
                members |= frontier
                nxt = 0
                for i in _bits(frontier):
                    nxt |= self._up[i] | self._down[i]
                frontier = nxt & ~members
            c = len(comps)
            comps.append(tuple(_bits(members)))
            for i in comps[-1]:
                comp_of[i] = c
        self._comp_of = tuple(comp_of)
        self._components = tuple(comps)

        self._chains: list[tuple[tuple[int, ...], ...]] = []
        self._regions: list[tuple[frozenset[int], ...]] = []
        self._chain_classes: list[tuple[tuple[tuple[int, ...], ...], ...]] = []
        for members in comps:
            chains = self._enumerate_chains(members)
            self._chains.append(chains)
            classes = self._group_chains(chains)
            self._chain_classes.append(tuple(classes))
            self._regions.append(tuple(frozenset(i for ch in cls for i in ch) for cls in classes))

    def _enumerate_chains(self, members: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
        # maximal chains of a finite poset are exactly the saturated paths in
        # the Hasse diagram from a minimal to a maximal element
        upper_covers: dict[int, list[int]] = {i: [] for i in members}
        for i, j in self.covers:
            if i in upper_covers:
                upper_covers[i].append(j)
        out: list[tuple[int, ...]] = []
        stack = [(i,) for i in reversed(members) if i in self._minimal]
        while stack:
            path = stack.pop()
            ups = upper_covers[path[-1]]
            if not ups:
                out.append(path)
            for j in reversed(ups):
                stack.append(path + (j,))
        return tuple(sorted(out))

    @staticmethod
    def _group_chains(chains: Sequence[tuple[int, ...]]) -> list[tuple[tuple[int, ...], ...]]:
        uf = UnionFind(range(len(chains)))
        sets = [set(ch) for ch in chains]
        for a in range(len(chains)):
            for b in range(a + 1, len(chains)):
                # two distinct members of a chain are always comparable, so
                # "share some x < y" is "share at least two elements"
                if len(sets[a] & sets[b]) >= 2:
                    uf.union(a, b)
        groups: dict[int, list[int]] = {}
        for k in range(len(chains)):
            groups.setdefault(uf[k], []).append(k)
        classes = [tuple(chains[k] for k in ks) for ks in groups.values()]
        classes.sort(key=lambda cls: (tuple(sorted({i for ch in cls for i in ch})), cls))
        return classes

    # -- order queries (identifier API) ---------------------------------------

    def leq(self, x: str, y: str) -> bool:
        return bool(self._up[self._idx(x)] >> self._idx(y) & 1)

    def lt(self, x: str, y: str) -> bool:
        return x != y and self.leq(x, y)

    def comparable(self, x: str, y: str) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def interval(self, x: str, y: str) -> tuple[str, ...]:
        i, j = self._idx(x), self._idx(y)
        return tuple(self.elements[k] for k in _bits(self._up[i] & self._down[j]))

    def minimal_elements(self) -> tuple[str, ...]:
        return tuple(self.elements[i] for i in sorted(self._minimal))

    def maximal_elements(self) -> tuple[str, ...]:
        return tuple(self.elements[i] for i in sorted(self._maximal))

    def cover_pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple((self.elements[i], self.elements[j]) for i, j in self.covers)

    def connected_components(self) -> ComponentPartition:
        comps = tuple(tuple(self.elements[i] for i in c) for c in self._components)
        return ComponentPartition(comps, {self.elements[i]: c for i, c in enumerate(self._comp_of)})

    def maximal_chains(self, component: int) -> tuple[tuple[str, ...], ...]:
        self._check_component(component)
        return tuple(tuple(self.elements[i] for i in ch) for ch in self._chains[component])

    def chain_regions(self, component: int) -> RegionPartition:
        self._check_component(component)
        name = self.elements
        regions = tuple(tuple(name[i] for i in sorted(r)) for r in self._regions[component])
        classes = tuple(
            tuple(tuple(name[i] for i in ch) for ch in cls) for cls in self._chain_classes[component]
        )
        return RegionPartition(regions, classes)

    def min_maximal_chain_size(self) -> int:
        sizes = [len(ch) for chains in self._chains for ch in chains]
        return min(sizes) if sizes else 0

    def _check_component(self, c: int) -> None:
        if not isinstance(c, int) or not 0 <= c < len(self._components):
            raise IndexError(f"no component {c!r}; poset has {len(self._components)}")

    def check_region(self, c: int, r: int) -> None:
        self._check_component(c)
        if not isinstance(r, int) or not 0 <= r < len(self._regions[c]):
            raise IndexError(f"component {c} has no region {r!r}")

    # -- index-level accessors used by the algebra layers ----------------------

    def leq_idx(self, i: int, j: int) -> bool:
        return bool(self._up[i] >> j & 1)

    def comparable_idx(self, i: int, j: int) -> bool:
        return bool((self._up[i] | self._down[i]) >> j & 1)

    def up_set(self, i: int) -> list[int]:
        return _bits(self._up[i])

    def down_set(self, i: int) -> list[int]:
        return _bits(self._down[i])

    def interval_idx(self, i: int, j: int) -> list[int]:
        return _bits(self._up[i] & self._down[j])

    def is_minimal(self, i: int) -> bool:
        return i in self._minimal

    def is_maximal(self, i: int) -> bool:
        return i in self._maximal

    @property
    def num_components(self) -> int:
        return len(self._components)

    def component_members(self, c: int) -> tuple[int, ...]:
        self._check_component(c)
        return self._components[c]

    def component_of(self, i: int) -> int:
        return self._comp_of[i]

    def num_regions(self, c: int) -> int:
        self._check_component(c)
        return len(self._regions[c])

    def region_members(self, c: int, r: int) -> frozenset[int]:
        self.check_region(c, r)
        return self._regions[c][r]

    def region_pairs(self, c: int, r: int, strict: bool = False) -> list[tuple[int, int]]:
        """Comparable pairs with both endpoints in region ``r`` of component ``c``."""
        mem = self.region_members(c, r)
        return [(i, j) for (i, j) in self.pairs if i in mem and j in mem and not (strict and i == j)]

    def chains_idx(self, c: int) -> tuple[tuple[int, ...], ...]:
        self._check_component(c)
        return self._chains[c]

    def extremal_pairs(self, c: int) -> list[tuple[int, int]]:
        """Pairs ``z < w`` in component ``c`` with ``z`` minimal and ``w`` maximal."""
        return [
            (i, j) for (i, j) in self.pairs
            if i != j and self._comp_of[i] == c and i in self._minimal and j in self._maximal
        ]

    # -- misc -----------------------------------------------------------------

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "covers": [list(p) for p in self.cover_pairs()]}

    @classmethod
    def from_json(cls, obj) -> FinitePoset:
        if not isinstance(obj, dict) or not isinstance(obj.get("elements"), list):
            raise PosetError("poset JSON needs an 'elements' list")
        covers = obj.get("covers", [])
        if not isinstance(covers, list) or not all(isinstance(c, list) and len(c) == 2 for c in covers):
            raise PosetError("'covers' must be a list of [lower, upper] pairs")
        return cls(obj["elements"], [tuple(c) for c in covers])

    def __repr__(self) -> str:
        return f"FinitePoset({list(self.elements)!r}, {list(self.cover_pairs())!r})"

    def __len__(self) -> int:
        return self.n


def build_from_covers(elements: Iterable[str], covers: Iterable[tuple[str, str]]) -> FinitePoset:
    return FinitePoset(elements, covers)


def chain(*names: str) -> FinitePoset:
    """The total order ``names[0] < names[1] < ...``."""
    return FinitePoset(names, zip(names, names[1:]))
