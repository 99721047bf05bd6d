"""Sparse exact arithmetic in the incidence algebra I(P, R).

An element is a map from comparable pairs ``(x, y)``, ``x <= y``, to nonzero
ring values.  The product is convolution over intervals,

    (fg)(x, y) = sum over x <= z <= y of f(x, z) g(z, y),

which is ordinary matrix multiplication once elements are viewed as
``n x n`` matrices vanishing off the order relation.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .poset import FinitePoset
from .rings import RingDescriptor, RingError, RingValue

Pair = tuple[int, int]


class AlgebraMismatchError(ValueError):
    """Operands live in different incidence algebras."""


def _same_poset(p: FinitePoset, q: FinitePoset) -> bool:
    return p is q or (p.elements == q.elements and p.pairs == q.pairs)


class AlgebraElement:
    """Immutable element of I(P, R).

    Coefficients are keyed by index pairs internally; :meth:`coeff` and the
    JSON form use identifiers.  Zero coefficients are never stored, so ``==``
    is mathematical equality.
    """

    __slots__ = ("poset", "ring", "_e")

    def __init__(self, poset: FinitePoset, ring: RingDescriptor, entries: Mapping[Pair, RingValue] = None):
        self.poset = poset
        self.ring = ring
        clean: dict[Pair, RingValue] = {}
        for (i, j), v in (entries or {}).items():
            if not poset.leq_idx(i, j):
                raise ValueError(
                    f"coefficient at ({poset.elements[i]}, {poset.elements[j]}) but "
                    f"{poset.elements[i]} is not <= {poset.elements[j]}"
                )
            v = ring.validate(ring.normalize(v))
            if v != 0:
                clean[(i, j)] = v
        self._e = clean

    @classmethod
    def _raw(cls, poset: FinitePoset, ring: RingDescriptor, entries: dict[Pair, RingValue]) -> AlgebraElement:
        # trusted constructor: keys valid, values already canonical and nonzero
        obj = cls.__new__(cls)
        obj.poset, obj.ring, obj._e = poset, ring, entries
        return obj

    @classmethod
    def _accumulate(cls, poset: FinitePoset, ring: RingDescriptor, acc: dict[Pair, RingValue]) -> AlgebraElement:
        out = {}
        norm = ring.normalize
        for k, v in acc.items():
            v = norm(v)
            if v != 0:
                out[k] = v
        return cls._raw(poset, ring, out)

    # -- inspection -----------------------------------------------------------

    @property
    def entries(self) -> Mapping[Pair, RingValue]:
        return self._e

    def coeff(self, x: str, y: str) -> RingValue:
        i, j = self.poset.index.get(x), self.poset.index.get(y)
        if i is None or j is None:
            raise KeyError(f"unknown element in ({x!r}, {y!r})")
        return self._e.get((i, j), self.ring.zero())

    def coeff_idx(self, i: int, j: int) -> RingValue:
        return self._e.get((i, j), self.ring.zero())

    def support(self) -> list[Pair]:
        return sorted(self._e)

    def items(self) -> Iterator[tuple[Pair, RingValue]]:
        for k in sorted(self._e):
            yield k, self._e[k]

    def is_zero(self) -> bool:
        return not self._e

    def __bool__(self) -> bool:
        return bool(self._e)

    def __len__(self) -> int:
        return len(self._e)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.ring == other.ring and _same_poset(self.poset, other.poset) and self._e == other._e

    def __hash__(self) -> int:
        return hash((self.ring, self.poset.elements, frozenset(self._e.items())))

    def __repr__(self) -> str:
        if not self._e:
            return "0"
        names = self.poset.elements
        fmt = self.ring.format_value
        return " + ".join(f"{fmt(v)}*e[{names[i]},{names[j]}]" for (i, j), v in self.items())

    # -- arithmetic -------------------------------------------------------------

    def _check(self, other: AlgebraElement) -> None:
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected an AlgebraElement, got {type(other).__name__}")
        if self.ring != other.ring:
            raise AlgebraMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")
        if not _same_poset(self.poset, other.poset):
            raise AlgebraMismatchError("elements belong to different posets")

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        self._check(other)
        acc = dict(self._e)
        for k, v in other._e.items():
            acc[k] = acc[k] + v if k in acc else v
        return AlgebraElement._accumulate(self.poset, self.ring, acc)

    def __neg__(self) -> AlgebraElement:
        norm = self.ring.normalize
        return AlgebraElement._raw(self.poset, self.ring, {k: norm(-v) for k, v in self._e.items()})

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        return self + (-other)

    def scale(self, r: RingValue) -> AlgebraElement:
        if isinstance(r, bool):
            raise RingError(f"{r!r} is not a ring value")
        r = self.ring.validate(self.ring.normalize(r))
        return AlgebraElement._accumulate(self.poset, self.ring, {k: r * v for k, v in self._e.items()})

    def __mul__(self, other: AlgebraElement) -> AlgebraElement:
        self._check(other)
        rows: dict[int, list[tuple[int, RingValue]]] = {}
        for (z, y), v in other._e.items():
            rows.setdefault(z, []).append((y, v))
        acc: dict[Pair, RingValue] = {}
        for (x, z), u in self._e.items():
            for y, v in rows.get(z, ()):
                k = (x, y)
                acc[k] = acc[k] + u * v if k in acc else u * v
        return AlgebraElement._accumulate(self.poset, self.ring, acc)

    def bracket(self, other: AlgebraElement) -> AlgebraElement:
        return self * other - other * self

    def restrict(self, keep) -> AlgebraElement:
        """Entries whose pair satisfies ``keep(i, j)``."""
        return AlgebraElement._raw(self.poset, self.ring, {k: v for k, v in self._e.items() if keep(*k)})

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        names = self.poset.elements
        fmt = self.ring.format_value
        return {"entries": [{"at": [names[i], names[j]], "coeff": fmt(v)} for (i, j), v in self.items()]}

    @classmethod
    def from_json(cls, poset: FinitePoset, ring: RingDescriptor, obj) -> AlgebraElement:
        if not isinstance(obj, dict) or not isinstance(obj.get("entries"), list):
            raise ValueError("algebra element JSON needs an 'entries' list")
        acc: dict[Pair, RingValue] = {}
        for ent in obj["entries"]:
            try:
                x, y = ent["at"]
                c = ring.parse_value(ent["coeff"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"bad entry {ent!r}: {exc}") from None
            i, j = poset.index.get(x), poset.index.get(y)
            if i is None or j is None:
                raise ValueError(f"unknown element in entry {ent!r}")
            acc[(i, j)] = acc.get((i, j), 0) + c
        return cls(poset, ring, acc)


# -- constructors ---------------------------------------------------------------


def zero(p: FinitePoset, d: RingDescriptor) -> AlgebraElement:
    return AlgebraElement._raw(p, d, {})


def unit_delta(p: FinitePoset, d: RingDescriptor) -> AlgebraElement:
    """The identity ``sum_z e_zz``."""
    one = d.one()
    return AlgebraElement._raw(p, d, {(i, i): one for i in range(p.n)})


def basis(p: FinitePoset, d: RingDescriptor, x: str, y: str, r: RingValue | None = None) -> AlgebraElement:
    """``r * e_xy``; ``r`` defaults to one."""
    i, j = p.index.get(x), p.index.get(y)
    if i is None or j is None:
        raise KeyError(f"unknown element in ({x!r}, {y!r})")
    if not p.leq_idx(i, j):
        raise ValueError(f"{x} is not <= {y}")
    return basis_idx(p, d, i, j, d.one() if r is None else r)


def basis_idx(p: FinitePoset, d: RingDescriptor, i: int, j: int, r: RingValue = 1) -> AlgebraElement:
    return AlgebraElement(p, d, {(i, j): r})


def element(p: FinitePoset, d: RingDescriptor, coeffs: Mapping[tuple[str, str], RingValue]) -> AlgebraElement:
    """Build an element from ``{(x, y): r}`` with identifier keys."""
    acc: dict[Pair, RingValue] = {}
    for (x, y), r in coeffs.items():
        acc[(p.index[x], p.index[y])] = r
    return AlgebraElement(p, d, acc)


# -- functional aliases ------------------------------------------------------------


def add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a + b


def negate(a: AlgebraElement) -> AlgebraElement:
    return -a


def scale(r: RingValue, a: AlgebraElement) -> AlgebraElement:
    return a.scale(r)


def coeff(a: AlgebraElement, x: str, y: str) -> RingValue:
    return a.coeff(x, y)


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def bracket(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a.bracket(b)


def total(elements: Iterable[AlgebraElement], p: FinitePoset, d: RingDescriptor) -> AlgebraElement:
    out = zero(p, d)
    for e in elements:
        out = out + e
    return out


# -- projections -----------------------------------------------------------------


def component_part(a: AlgebraElement, component: int) -> AlgebraElement:
    """Entries with both endpoints in the given connected component."""
    p = a.poset
    p.component_members(component)
    return a.restrict(lambda i, j: p.component_of(i) == component)


def strict_region_part(a: AlgebraElement, component: int, region: int) -> AlgebraElement:
    """Entries ``x < y`` with both endpoints in the region."""
    mem = a.poset.region_members(component, region)
    return a.restrict(lambda i, j: i != j and i in mem and j in mem)


def region_full_part(a: AlgebraElement, component: int, region: int) -> AlgebraElement:
    """Entries ``x <= y`` with both endpoints in the region, diagonal included.

    A minimal or maximal element shared by several regions keeps its diagonal
    entry in each of them, so these parts do not partition ``a``.
    """
    mem = a.poset.region_members(component, region)
    return a.restrict(lambda i, j: i in mem and j in mem)


def diagonal_part(a: AlgebraElement) -> AlgebraElement:
    return a.restrict(lambda i, j: i == j)


def hat_part(a: AlgebraElement, component: int) -> AlgebraElement:
    """Diagonal entries at minimal or maximal elements of the component."""
    p = a.poset
    p.component_members(component)
    return a.restrict(
        lambda i, j: i == j and p.component_of(i) == component and (p.is_minimal(i) or p.is_maximal(i))
    )
