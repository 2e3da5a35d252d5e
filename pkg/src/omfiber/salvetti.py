"""The Salvetti poset of an oriented matroid."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .poset import Poset, PosetMap
from .signs import OrientedMatroid, compose, format_sign_vector, negate, sign_leq


class SalvettiError(RuntimeError):
    pass


class SalvettiCell(NamedTuple):
    """A pair ``(σ, T)`` of covector and tope indices with ``σ <= T``."""

    covector: int
    tope: int


@dataclass
class Salvetti:
    om: OrientedMatroid
    poset: Poset
    cells: tuple

    def dimension(self, i: int) -> int:
        """Corank of the covector: ``rank(OM) - height(σ)``."""
        cov = self.cells[i].covector
        return self.om.rank - self.om.covector_poset.height(cov)

    def label(self, i: int) -> str:
        c = self.cells[i]
        return f"({format_sign_vector(self.om.covectors[c.covector])},{format_sign_vector(self.om.topes[c.tope])})"

    def f_vector(self) -> list[int]:
        out = [0] * (self.om.rank + 1)
        for i in range(len(self.cells)):
            out[self.dimension(i)] += 1
        return out

    def maximal_cell(self, tope: int) -> int:
        return self.poset.index(SalvettiCell(0, tope))


def salvetti_poset(om: OrientedMatroid) -> Salvetti:
    covs, topes = om.covectors, om.topes
    cells = []
    for t, tope in enumerate(topes):
        for s, cov in enumerate(covs):
            if sign_leq(cov, tope):
                cells.append(SalvettiCell(s, t))
    # dimension-major order: vertices first, then by covector and tope
    cells.sort(key=lambda c: (-sum(1 for x in covs[c.covector] if x), c.covector, c.tope))
    comp_cache: dict[tuple[int, int], int] = {}

    def comp(s: int, r: int) -> int:
        key = (s, r)
        if key not in comp_cache:
            comp_cache[key] = om.tope_index[compose(covs[s], topes[r])]
        return comp_cache[key]

    cov_leq = om.covector_poset.leq

    def leq(a: SalvettiCell, b: SalvettiCell) -> bool:
        return cov_leq(b.covector, a.covector) and comp(a.covector, b.tope) == a.tope

    poset = Poset.from_relation(cells, leq)
    return Salvetti(om, poset, tuple(cells))


def maximal_cell_ideal_iso(sal: Salvetti, tope: int) -> PosetMap:
    """The isomorphism ``L^∨ -> S_{<=(0,T)}``, ``σ ↦ (σ, σ∘T)``, verified both ways."""
    om = sal.om
    top = sal.maximal_cell(tope)
    ideal = sal.poset.principal_ideal(top)
    sub = sal.poset.induced(ideal)
    forward = []
    for s, cov in enumerate(om.covectors):
        cell = SalvettiCell(s, om.tope_index[compose(cov, om.topes[tope])])
        forward.append(sub.index(cell))
    fmap = PosetMap(om.dual_poset, sub, forward)
    backward = PosetMap(sub, om.dual_poset, [c.covector for c in sub.labels])
    if sorted(forward) != list(range(len(sub))):
        raise SalvettiError("maximal-cell map is not a bijection")
    if any(backward(forward[s]) != s for s in range(len(om.covectors))):
        raise SalvettiError("maps are not mutually inverse")
    if not fmap.is_order_preserving() or not backward.is_order_preserving():
        raise SalvettiError("maximal-cell map is not order preserving")
    return fmap


def antipodal_map(sal: Salvetti) -> list[int]:
    """``(σ, T) ↦ (-σ, -T)`` as a permutation of cell indices."""
    om = sal.om
    out = []
    for c in sal.cells:
        s = om.covector_index[negate(om.covectors[c.covector])]
        t = om.tope_index[negate(om.topes[c.tope])]
        out.append(sal.poset.index(SalvettiCell(s, t)))
    return out
