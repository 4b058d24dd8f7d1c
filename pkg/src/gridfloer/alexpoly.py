"""Hat homology by exact tensor division, and the graded Euler characteristic.

The tilde homology equals the hat homology tensored with one two-dimensional
factor per interior O: the factor for an O on edge e has generators in
bidegrees (0, 0) and (-w(e), -1).  Dividing the tilde generating function by
the product of (1 + t^{-w(e)} z^{-1}) factors therefore recovers the hat
dimensions exactly; a remainder or a negative quotient coefficient means the
pipeline is inconsistent and is reported as an error.

Collapsing Maslov with alternating signs gives the graded Euler
characteristic in the integral group ring of H1 of the complement, the
Alexander polynomial of the spatial graph up to units.
"""

from __future__ import annotations

from dataclasses import dataclass

from .homology import BigradedDims
from .spatial import H1Group, SpatialGraphModel, h1_group


class DivisionError(RuntimeError):
    """Tensor division left a remainder or a negative coefficient."""


def _shift_key(group: H1Group, h: tuple[int, ...], delta: tuple[int, ...]) -> tuple[int, ...]:
    return group.reduce(tuple(a + b for a, b in zip(h, delta))).coeffs


def _divide_once(
    dims: dict[tuple[tuple[int, ...], int], int],
    group: H1Group,
    w_neg: tuple[int, ...],
) -> dict[tuple[tuple[int, ...], int], int]:
    """Divide by (1 + t^{w_neg} z^{-1}), processing Maslov levels top down."""
    work = dict(dims)
    quotient: dict[tuple[tuple[int, ...], int], int] = {}
    while work:
        (h, m) = max(work, key=lambda key: (key[1], key[0]))
        c = work.pop((h, m))
        if c < 0:
            raise DivisionError("negative coefficient during tensor division")
        quotient[(h, m)] = quotient.get((h, m), 0) + c
        lower = (_shift_key(group, h, w_neg), m - 1)
        rest = work.get(lower, 0) - c
        if rest:
            work[lower] = rest
        else:
            work.pop(lower, None)
    return quotient


def hat_dims(tilde: BigradedDims, sg: SpatialGraphModel) -> BigradedDims:
    """Hat homology dimensions from the tilde ones, one division per interior O."""
    group = h1_group(sg)
    work = dict(tilde.dims)
    for ei, edge in enumerate(sg.edges):
        if edge.n_e == 0:
            continue
        w_neg = group.neg(group.basis_element(ei)).coeffs
        for _ in range(edge.n_e):
            work = _divide_once(work, group, w_neg)
    for value in work.values():
        if value < 0:
            raise DivisionError("negative hat dimension after division")
    return BigradedDims({k: v for k, v in work.items() if v})


@dataclass(frozen=True)
class GroupRingPoly:
    """Element of Z[H1], keyed by canonical representatives."""

    coeffs: tuple[tuple[tuple[int, ...], int], ...]  # sorted ((h, coeff), ...)

    @classmethod
    def from_dict(cls, d: dict[tuple[int, ...], int]) -> "GroupRingPoly":
        return cls(tuple(sorted((h, c) for h, c in d.items() if c)))

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def negated(self) -> "GroupRingPoly":
        return GroupRingPoly(tuple((h, -c) for h, c in self.coeffs))

    def translated(self, delta: tuple[int, ...], group: H1Group) -> "GroupRingPoly":
        return GroupRingPoly.from_dict(
            {_shift_key(group, h, delta): c for h, c in self.coeffs})

    def support(self) -> list[tuple[int, ...]]:
        return [h for h, _ in self.coeffs]

    def to_json_obj(self) -> dict:
        return {
            "chi": [{"h": list(h), "coeff": c} for h, c in self.coeffs],
            "normalized": True,
        }


def euler_characteristic(hat: BigradedDims, group: H1Group) -> GroupRingPoly:
    """Signed collapse of Maslov, normalized up to units: the support is
    translated so its lexicographically smallest class is zero and the sign
    is fixed to make that coefficient positive."""
    raw: dict[tuple[int, ...], int] = {}
    for (h, m), d in hat.dims.items():
        raw[h] = raw.get(h, 0) + (d if m % 2 == 0 else -d)
    raw = {h: c for h, c in raw.items() if c}
    return normalize_up_to_units(GroupRingPoly.from_dict(raw), group)


def normalize_up_to_units(p: GroupRingPoly, group: H1Group) -> GroupRingPoly:
    if p.is_zero():
        return p
    smallest = min(p.support())
    shifted = p.translated(tuple(-v for v in smallest), group)
    zero = group.zero().coeffs
    if shifted.as_dict().get(zero, 0) < 0:
        shifted = shifted.negated()
    return shifted


def equal_up_to_units(p: GroupRingPoly, q: GroupRingPoly, group: H1Group) -> bool:
    """True iff q = +-(t^h) p for some class h."""
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    if len(p.coeffs) != len(q.coeffs):
        return False
    if sorted(abs(c) for _, c in p.coeffs) != sorted(abs(c) for _, c in q.coeffs):
        return False
    anchor = min(p.support())
    for h in q.support():
        delta = tuple(a - b for a, b in zip(h, anchor))
        cand = p.translated(delta, group)
        if cand == q or cand.negated() == q:
            return True
    return False


def chi_consistency(tilde: BigradedDims, hat: BigradedDims, sg: SpatialGraphModel) -> bool:
    """chi(tilde) must equal chi(hat) times prod over edges of (1 - t^{-w})^{n_e}."""
    group = h1_group(sg)

    def chi_raw(dims: BigradedDims) -> dict[tuple[int, ...], int]:
        out: dict[tuple[int, ...], int] = {}
        for (h, m), d in dims.dims.items():
            out[h] = out.get(h, 0) + (d if m % 2 == 0 else -d)
        return {h: c for h, c in out.items() if c}

    lhs = chi_raw(tilde)
    rhs = chi_raw(hat)
    for ei, edge in enumerate(sg.edges):
        w_neg = group.neg(group.basis_element(ei)).coeffs
        for _ in range(edge.n_e):
            nxt: dict[tuple[int, ...], int] = {}
            for h, c in rhs.items():
                nxt[h] = nxt.get(h, 0) + c
                k = _shift_key(group, h, w_neg)
                nxt[k] = nxt.get(k, 0) - c
            rhs = {h: c for h, c in nxt.items() if c}
    return lhs == rhs
