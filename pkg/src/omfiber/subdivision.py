"""Tope-rank subdivisions of the dual covector complex and of the Salvetti complex.

Cells are sets of topes, stored as bitsets over the global tope order.  For a
base tope B and a covector σ the subdivision of σ consists of the rank slices
(topes of σ at one B-rank) and the rank bands (two consecutive slices, except
the band starting at the top rank of σ).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

from .homology import homology, interval_is_sphere
from .poset import Poset, PosetMap, iter_bits
from .salvetti import Salvetti, SalvettiCell, salvetti_poset
from .signs import OrientedMatroid, SignError, compose, format_sign_vector, negate, separating_set

SLICE = "slice"
BAND = "band"


class SubdivisionError(RuntimeError):
    pass


class RankCell(NamedTuple):
    """A slice or band of topes relative to ``base``; ``k`` is the lowest rank present."""

    bits: int
    kind: str
    k: int
    base: int

    @property
    def topes(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.bits))


class SubdividedSalvettiCell(NamedTuple):
    cell: RankCell
    tope: int


def tope_ranks(om: OrientedMatroid, base: int) -> list[int]:
    b = om.topes[base]
    return [len(separating_set(b, t)) for t in om.topes]


def _classify(bits: int, ranks: list[int]) -> tuple[str, int]:
    rs = {ranks[t] for t in iter_bits(bits)}
    lo, hi = min(rs), max(rs)
    if lo == hi:
        return SLICE, lo
    if hi != lo + 1:
        raise SubdivisionError("tope set spans more than two ranks")
    return BAND, lo


def subdivide_covector(om: OrientedMatroid, cov: int, base: int, ranks: list[int]) -> list[RankCell]:
    """The rank subdivision of one cell σ of L^∨ with respect to ``base``."""
    tset = om.tope_sets[cov]
    by_rank: dict[int, int] = {}
    for t in iter_bits(tset):
        by_rank[ranks[t]] = by_rank.get(ranks[t], 0) | (1 << t)
    far = om.tope_index[compose(om.covectors[cov], negate(om.topes[base]))]
    top = ranks[far]
    out = [RankCell(bits, SLICE, k, base) for k, bits in sorted(by_rank.items())]
    for k in sorted(by_rank):
        if k == top:
            continue
        out.append(RankCell(by_rank[k] | by_rank.get(k + 1, 0), BAND, k, base))
    return out


class CoveringMap:
    """``p(𝔞) = min{σ ∈ L^∨ : 𝔞 ⊆ T(σ)}``, with uniqueness checked on every call."""

    def __init__(self, om: OrientedMatroid):
        self.om = om
        order = sorted(range(len(om.covectors)), key=lambda s: (om.tope_sets[s].bit_count(), s))
        self._order = [(s, om.tope_sets[s]) for s in order]
        self._cache: dict[int, int] = {}

    def __call__(self, bits: int) -> int:
        hit = self._cache.get(bits)
        if hit is not None:
            return hit
        best = None
        for s, ts in self._order:
            if bits & ~ts:
                continue
            if best is None:
                best = (s, ts)
            elif best[1] & ~ts:
                raise SubdivisionError(
                    f"no unique minimal covector covers topes {list(iter_bits(bits))}"
                )
        if best is None:
            raise SubdivisionError(f"no covector covers topes {list(iter_bits(bits))}")
        self._cache[bits] = best[0]
        return best[0]


@dataclass
class RankDual:
    """``rk_B sd L^∨`` together with the projection ``p_B`` onto L^∨."""

    om: OrientedMatroid
    base: int
    poset: Poset
    cells: tuple
    p: PosetMap

    def label(self, i: int) -> str:
        c = self.cells[i]
        return _cell_label(self.om, c, self.base)

    def f_vector(self) -> list[int]:
        h = self.poset.heights
        out = [0] * (max(h) + 1)
        for x in h:
            out[x] += 1
        return out

    def euler(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.f_vector()))


def _cell_label(om: OrientedMatroid, cell: RankCell, tope: int) -> str:
    names = ",".join(format_sign_vector(om.topes[t]) for t in cell.topes)
    return f"{{{names}}}@{format_sign_vector(om.topes[tope])} {cell.kind}:{cell.k}"


def _base_index(om: OrientedMatroid, base) -> int:
    if isinstance(base, int):
        if not 0 <= base < len(om.topes):
            raise SignError(f"tope index {base} out of range")
        return base
    return om.tope_id(tuple(base))


def rank_subdivide_dual(om: OrientedMatroid, base=0, covering: CoveringMap | None = None) -> RankDual:
    base = _base_index(om, base)
    ranks = tope_ranks(om, base)
    covering = covering or CoveringMap(om)
    cells: dict[int, RankCell] = {}
    for cov in range(len(om.covectors)):
        for cell in subdivide_covector(om, cov, base, ranks):
            cells.setdefault(cell.bits, cell)
    ordered = sorted(cells.values(), key=lambda c: (c.bits.bit_count(), c.topes))
    poset = Poset.from_relation(ordered, lambda a, b: a.bits & ~b.bits == 0)
    p = PosetMap(poset, om.dual_poset, [covering(c.bits) for c in ordered])
    return RankDual(om, base, poset, tuple(ordered), p)


@dataclass
class RankSalvetti:
    """``rk sd S`` with the projection ``p̃`` onto the Salvetti poset."""

    om: OrientedMatroid
    salvetti: Salvetti
    poset: Poset
    cells: tuple
    p: PosetMap
    covering: CoveringMap = field(repr=False)

    def label(self, i: int) -> str:
        c = self.cells[i]
        return _cell_label(self.om, c.cell, c.tope)

    def f_vector(self) -> list[int]:
        h = self.poset.heights
        out = [0] * (max(h) + 1)
        for x in h:
            out[x] += 1
        return out

    def euler(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.f_vector()))

    def maximal_cells(self, tope: int) -> list[int]:
        """The bands of the zero covector with respect to ``tope``."""
        return [
            i
            for i, c in enumerate(self.cells)
            if c.tope == tope and self.p(i) == self.salvetti.maximal_cell(tope)
            and c.cell.kind == BAND
        ]


def rank_subdivide_salvetti(om: OrientedMatroid, salvetti: Salvetti | None = None) -> RankSalvetti:
    """Union of the rank subdivisions of all Salvetti cells.

    A pair ``(𝔞, T)`` is kept only when ``p(𝔞) ∘ T = T``: otherwise it is not
    comparable to itself under the defining order, and the same tope set is
    produced as a genuine cell attached to the tope ``p(𝔞) ∘ T``.
    """
    sal = salvetti or salvetti_poset(om)
    covering = CoveringMap(om)
    ranks_by_tope = [tope_ranks(om, t) for t in range(len(om.topes))]
    covs, topes = om.covectors, om.topes

    @lru_cache(maxsize=None)
    def comp(s: int, r: int) -> int:
        return om.tope_index[compose(covs[s], topes[r])]

    cells: dict[tuple[int, int], SubdividedSalvettiCell] = {}
    for c in sal.cells:
        for rc in subdivide_covector(om, c.covector, c.tope, ranks_by_tope[c.tope]):
            if comp(covering(rc.bits), c.tope) != c.tope:
                continue
            cells.setdefault((rc.bits, c.tope), SubdividedSalvettiCell(rc, c.tope))
    ordered = sorted(cells.values(), key=lambda x: (x.cell.bits.bit_count(), x.cell.topes, x.tope))
    pcov = [covering(x.cell.bits) for x in ordered]
    bits = [x.cell.bits for x in ordered]
    tope_of = [x.tope for x in ordered]
    n = len(ordered)
    below = []
    for j in range(n):
        bj, rj = bits[j], tope_of[j]
        acc = 0
        for i in range(n):
            if bits[i] & ~bj == 0 and comp(pcov[i], rj) == tope_of[i]:
                acc |= 1 << i
        below.append(acc)
    poset = Poset(ordered, below)
    target = [sal.poset.index(SalvettiCell(pcov[i], tope_of[i])) for i in range(n)]
    p = PosetMap(poset, sal.poset, target)
    return RankSalvetti(om, sal, poset, tuple(ordered), p, covering)


# ---------------------------------------------------------------------------
# verification


@dataclass
class CheckReport:
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def add(self, name: str, passed: bool, detail=None):
        self.checks[name] = bool(passed)
        if detail is not None:
            self.details[name] = detail

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "details": dict(self.details)}


def verify_subdivision(om: OrientedMatroid, base=0, rd: RankDual | None = None) -> CheckReport:
    """Surrogate checks that ``rk_B sd L^∨`` is a regular cell decomposition of a ball."""
    rd = rd or rank_subdivide_dual(om, base)
    rep = CheckReport()
    h = homology(rd.poset)
    rep.add("ball_homology", h.betti == [1] and not h.torsion, h.to_json())
    rep.add("euler_one", rd.euler() == 1, rd.euler())
    bad = [rd.label(x) for x in range(len(rd.poset)) if not interval_is_sphere(rd.poset, x)]
    rep.add("cw_intervals", not bad, bad or None)
    rep.add("p_order_preserving", rd.p.is_order_preserving())
    rep.add("p_surjective", rd.p.is_surjective())

    ranks = tope_ranks(om, rd.base)
    dual = om.dual_poset
    partition_ok = True
    for s in range(len(om.covectors)):
        slices = [c for c in subdivide_covector(om, s, rd.base, ranks) if c.kind == SLICE]
        union = 0
        for c in slices:
            if union & c.bits:
                partition_ok = False
            union |= c.bits
        covered = 0
        for i in rd.p.preimage(dual.principal_ideal(s)):
            covered |= rd.cells[i].bits
        if union != om.tope_sets[s] or covered != om.tope_sets[s]:
            partition_ok = False
    rep.add("tope_partition", partition_ok)
    return rep


def subdivision_summary(rd: RankDual) -> dict:
    return {
        "base": format_sign_vector(rd.om.topes[rd.base]),
        "n_cells": len(rd.cells),
        "f_vector": rd.f_vector(),
        "euler": rd.euler(),
    }
