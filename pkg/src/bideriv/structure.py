"""Extraction and reconstruction of the inner + extremal decomposition.

For a biderivation ``b`` of I(P, R), where every maximal chain of ``P`` has
at least three elements,

    b(alpha, beta) = sum_i ( sum_j lam[i][j] [alpha_ij, beta_ij]
                             + [hat_i(alpha), [hat_i(beta), T_i]] )

with ``alpha_ij`` the restriction of ``alpha`` to pairs inside region ``j`` of
component ``i`` and ``hat_i`` the diagonal restricted to minimal and maximal
elements of component ``i``.  The coefficients are read off the table:

    lam[i][j] = -b(e_xy, e_xx)(x, y)        any x < y in the region
    T_i       = -sum b(e_zz, e_ww)(z, w) e_zw  over minimal z < maximal w
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .algebra import AlgebraElement, _same_poset, zero
from .bilinear import BilinearMap, CheckReport, inner_per_region, is_biderivation
from .poset import FinitePoset
from .rings import RingDescriptor, RingValue


class DecompositionError(ValueError):
    """The input does not satisfy the hypotheses of the decomposition."""

    def __init__(self, stage: str, report: CheckReport):
        self.stage = stage
        self.report = report
        first = report.violations[0] if report.violations else None
        super().__init__(f"{stage} failed" + (f": {first.identity} at {first.witness}" if first else ""))


@dataclass(frozen=True)
class ComponentDecomposition:
    lambdas: Mapping[int, RingValue]
    T: AlgebraElement


@dataclass(frozen=True)
class Decomposition:
    poset: FinitePoset
    ring: RingDescriptor
    components: tuple[ComponentDecomposition, ...]

    def __post_init__(self) -> None:
        p = self.poset
        if len(self.components) != p.num_components:
            raise ValueError(f"expected {p.num_components} components, got {len(self.components)}")
        for c, comp in enumerate(self.components):
            if set(comp.lambdas) != set(range(p.num_regions(c))):
                raise ValueError(f"component {c}: lambdas must cover regions 0..{p.num_regions(c) - 1}")
            if comp.T.ring != self.ring or not _same_poset(comp.T.poset, p):
                raise ValueError(f"component {c}: T is in a different algebra")
            allowed = set(p.extremal_pairs(c))
            bad = set(comp.T.entries) - allowed
            if bad:
                names = p.elements
                raise ValueError(
                    f"component {c}: T has entries off the (minimal, maximal) pairs: "
                    f"{sorted((names[i], names[j]) for i, j in bad)}"
                )

    def lambda_table(self) -> dict[tuple[int, int], RingValue]:
        return {(c, r): v for c, comp in enumerate(self.components) for r, v in comp.lambdas.items()}

    def T_total(self) -> AlgebraElement:
        out = zero(self.poset, self.ring)
        for comp in self.components:
            out = out + comp.T
        return out

    def __add__(self, other: Decomposition) -> Decomposition:
        d = self.ring
        comps = []
        for a, b in zip(self.components, other.components):
            comps.append(ComponentDecomposition(
                {r: d.add(a.lambdas[r], b.lambdas[r]) for r in a.lambdas}, a.T + b.T,
            ))
        return Decomposition(self.poset, d, tuple(comps))

    def to_json(self) -> dict:
        fmt = self.ring.format_value
        return {
            "components": [
                {
                    "lambdas": [{"region": r, "value": fmt(comp.lambdas[r])} for r in sorted(comp.lambdas)],
                    "T": comp.T.to_json(),
                }
                for comp in self.components
            ]
        }

    @classmethod
    def from_json(cls, poset: FinitePoset, ring: RingDescriptor, obj) -> Decomposition:
        if not isinstance(obj, dict) or not isinstance(obj.get("components"), list):
            raise ValueError("decomposition JSON needs a 'components' list")
        comps = []
        for entry in obj["components"]:
            lambdas = {int(l["region"]): ring.parse_value(l["value"]) for l in entry.get("lambdas", [])}
            T = AlgebraElement.from_json(poset, ring, entry.get("T", {"entries": []}))
            comps.append(ComponentDecomposition(lambdas, T))
        return cls(poset, ring, tuple(comps))


def check_preconditions(p: FinitePoset) -> CheckReport:
    """Every maximal chain has at least three elements."""
    report = CheckReport("chain precondition")
    report.checked = 1
    if p.n == 0:
        report.add("maximal chain size >= 3", (), "nonempty poset", "empty poset")
        return report
    for c in range(p.num_components):
        for ch in p.chains_idx(c):
            if len(ch) < 3:
                report.add("maximal chain size >= 3", ch, "3", str(len(ch)))
    return report


def _lam_raw(b: BilinearMap, x: int, y: int) -> RingValue:
    # b(e_xy, e_xx) at (x, y)
    val = b.table.get(((x, y), (x, x)))
    return val.entries.get((x, y), b.ring.zero()) if val else b.ring.zero()


def extract_lambda(b: BilinearMap, component: int, region: int) -> RingValue:
    """``-b(e_xy, e_xx)(x, y)`` for the smallest strict pair of the region."""
    pairs = b.poset.region_pairs(component, region, strict=True)
    if not pairs:
        raise ValueError(f"region {region} of component {component} has no pair x < y")
    x, y = pairs[0]
    return b.ring.neg(_lam_raw(b, x, y))


def verify_lambda_constancy(b: BilinearMap, component: int, region: int) -> CheckReport:
    """``b(e_xy, e_xx)(x, y)`` is the same for every ``x < y`` in the region,
    and equals ``-b(e_xx, e_xy)(x, y)``."""
    p, d = b.poset, b.ring
    report = CheckReport(f"lambda constancy ({component}, {region})")
    pairs = p.region_pairs(component, region, strict=True)
    if not pairs:
        report.add("region has a pair x < y", (component, region), None, None)
        return report
    vals = {pr: _lam_raw(b, *pr) for pr in pairs}
    for i, a in enumerate(pairs):
        for c in pairs[i + 1:]:
            report.checked += 1
            if vals[a] != vals[c]:
                report.add("lambda constancy", (a, c), vals[a], vals[c])
    for (x, y) in pairs:
        report.checked += 1
        other = b.table.get(((x, x), (x, y)))
        other = other.entries.get((x, y), d.zero()) if other else d.zero()
        if vals[(x, y)] != d.neg(other):
            report.add("sign relation", ((x, y),), d.neg(other), vals[(x, y)])
    return report


def extract_T(b: BilinearMap, component: int) -> AlgebraElement:
    """``-sum b(e_zz, e_ww)(z, w) e_zw`` over minimal ``z`` < maximal ``w``."""
    p, d = b.poset, b.ring
    acc = {}
    for z, w in p.extremal_pairs(component):
        val = b.table.get(((z, z), (w, w)))
        if val:
            acc[(z, w)] = -val.entries.get((z, w), 0)
    return AlgebraElement._accumulate(p, d, acc)


def _require(stage: str, report: CheckReport) -> None:
    if not report.passed:
        raise DecompositionError(stage, report)


def extract_decomposition(b: BilinearMap) -> Decomposition:
    """Read off every ``lam`` and ``T``.

    Raises:
        DecompositionError: ``b`` is not a biderivation, the poset has a
            maximal chain with fewer than three elements, or some region's
            coefficient is not constant.  ``stage`` names which.
    """
    p = b.poset
    _require("biderivation", is_biderivation(b))
    _require("preconditions", check_preconditions(p))
    comps = []
    for c in range(p.num_components):
        lambdas = {}
        for r in range(p.num_regions(c)):
            _require("lambda constancy", verify_lambda_constancy(b, c, r))
            lambdas[r] = extract_lambda(b, c, r)
        comps.append(ComponentDecomposition(lambdas, extract_T(b, c)))
    return Decomposition(p, b.ring, tuple(comps))


def reconstruct(dec: Decomposition) -> BilinearMap:
    """The map ``sum lam [alpha_ij, beta_ij] + sum_i [hat_i alpha, [hat_i beta, T_i]]``."""
    p, d = dec.poset, dec.ring
    out = inner_per_region(p, d, dec.lambda_table())
    extra = {}
    for c, comp in enumerate(dec.components):
        if not comp.T:
            continue
        # hat_i(e_xy) is e_xy for x = y extremal in component c, else zero
        hats = [z for z in p.component_members(c) if p.is_minimal(z) or p.is_maximal(z)]
        units = {z: AlgebraElement._raw(p, d, {(z, z): d.one()}) for z in hats}
        for w in hats:
            inner_br = units[w].bracket(comp.T)
            if not inner_br:
                continue
            for z in hats:
                val = units[z].bracket(inner_br)
                if val:
                    key = ((z, z), (w, w))
                    extra[key] = extra[key] + val if key in extra else val
    return out + BilinearMap(p, d, extra)


def verify_structure_theorem(b: BilinearMap) -> CheckReport:
    """Full pipeline; ``report.name`` is the first stage that failed, or
    ``"structure theorem"`` when everything holds."""
    p = b.poset
    bider = is_biderivation(b)
    if not bider.passed:
        bider.name = "biderivation"
        return bider
    pre = check_preconditions(p)
    if not pre.passed:
        pre.name = "preconditions"
        return pre
    try:
        dec = extract_decomposition(b)
    except DecompositionError as exc:
        exc.report.name = exc.stage
        return exc.report
    rebuilt = reconstruct(dec)
    report = CheckReport("structure theorem")
    report.checked = len(p.pairs) ** 2
    for key in b.differences(rebuilt):
        report.add("round trip", key, b.value(*key), rebuilt.value(*key))
    if not report.passed:
        report.name = "round trip"
    return report
