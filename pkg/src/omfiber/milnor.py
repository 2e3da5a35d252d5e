"""The combinatorial Milnor fibration ``Q̃ : rk sd S -> C`` and its fibers.

``C`` is the four-cell circle ``{(+,+), (-,-), (0,+), (0,-)}``.  Slices map to
the vertex matching the sign product of their topes, bands to the edge named
by the sign product of their lower slice.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .homology import (
    HomologyReport,
    Matching,
    apply_matching,
    homology,
    os_betti,
    patchwork,
    relative_homology,
)
from .poset import Poset, PosetMap, iter_bits
from .signs import OrientedMatroid, compose, negate, tope_sign
from .subdivision import SLICE, CheckReport, RankSalvetti, rank_subdivide_salvetti, tope_ranks

PP, MM, ZP, ZM = 0, 1, 2, 3
CIRCLE_LABELS = ("(+,+)", "(-,-)", "(0,+)", "(0,-)")


class FibrationError(RuntimeError):
    pass


def circle_poset() -> Poset:
    return Poset.from_covers(CIRCLE_LABELS, [(PP, ZP), (PP, ZM), (MM, ZP), (MM, ZM)])


def vertex_for(sign: int) -> int:
    return PP if sign > 0 else MM


def edge_for(sign: int) -> int:
    return ZP if sign > 0 else ZM


@dataclass
class Fibration:
    om: OrientedMatroid
    rksd: RankSalvetti
    circle: Poset
    q: PosetMap

    @property
    def poset(self) -> Poset:
        return self.rksd.poset

    def fiber_elements(self, c: int) -> list[int]:
        """Indices of ``(Q̃ ↓ c)``."""
        return self.q.fiber_elements(c)

    def fiber(self, c: int) -> Poset:
        return self.poset.induced(self.fiber_elements(c))


def fibration(om: OrientedMatroid, rksd: RankSalvetti | None = None) -> Fibration:
    rs = rksd or rank_subdivide_salvetti(om)
    qvals = [tope_sign(t) for t in om.topes]
    ranks_by_tope: dict[int, list[int]] = {}
    assignment = []
    for cell in rs.cells:
        rc, base = cell.cell, cell.tope
        ranks = ranks_by_tope.setdefault(base, tope_ranks(om, base))
        lower = [t for t in rc.topes if ranks[t] == rc.k]
        signs = {qvals[t] for t in lower}
        if len(signs) != 1:
            raise FibrationError(f"sign product is not constant on {rc}")
        (s,) = signs
        if s != qvals[base] * (-1) ** rc.k:
            raise FibrationError(f"parity law fails on {rc}")
        assignment.append(vertex_for(s) if rc.kind == SLICE else edge_for(s))
    circle = circle_poset()
    q = PosetMap(rs.poset, circle, assignment)
    bad = q.order_violations()
    if bad:
        raise FibrationError(f"Q̃ is not order preserving on covers {bad[:5]}")
    return Fibration(om, rs, circle, q)


def milnor_fiber(fib: Fibration) -> Poset:
    """``F̃ = Q̃^{-1}((+,+))``, checked to be a closed subcomplex."""
    elems = fib.q.preimage([PP])
    if not fib.poset.is_order_ideal(elems):
        raise FibrationError("Milnor fiber is not an order ideal")
    return fib.poset.induced(elems)


@dataclass
class MilnorReport:
    n: int
    fiber_cells: int
    homology: HomologyReport
    chi_projective: int

    @property
    def euler_identity_ok(self) -> bool:
        return self.homology.euler == self.n * self.chi_projective

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "fiber_cells": self.fiber_cells,
            "betti": list(self.homology.betti),
            "torsion": [list(t) for t in self.homology.torsion],
            "euler": self.homology.euler,
            "chi_projective": self.chi_projective,
            "euler_identity_ok": self.euler_identity_ok,
        }


def milnor_report(om: OrientedMatroid, fib: Fibration | None = None) -> MilnorReport:
    fib = fib or fibration(om)
    fiber = milnor_fiber(fib)
    h = homology(fiber)
    chi = os_betti(om.geometric_lattice).chi_projective
    return MilnorReport(om.ground_size, len(fiber), h, chi)


# ---------------------------------------------------------------------------
# quasi-fibration certificate


def check_quasi_fibration(fib: Fibration) -> CheckReport:
    """Every inclusion ``(Q̃↓a) ⊆ (Q̃↓b)`` for ``a < b`` must be a homology isomorphism.

    An inclusion of a full subcomplex induces isomorphisms in all degrees iff the
    relative integral homology vanishes.
    """
    rep = CheckReport()
    fibers = {}
    for c in range(4):
        elems = fib.fiber_elements(c)
        fibers[c] = homology(fib.poset.induced(elems))
        rep.details[f"fiber{CIRCLE_LABELS[c]}"] = fibers[c].to_json()
    first = fibers[PP]
    rep.add("fiber_homology_equal", all(fibers[c].same_as(first) for c in range(4)))
    for a, b in fib.circle.cover_pairs():
        big = fib.fiber_elements(b)
        sub = fib.poset.induced(big)
        small = set(fib.fiber_elements(a))
        inner = [i for i, g in enumerate(big) if g in small]
        rel = relative_homology(sub, inner)
        name = f"inclusion{CIRCLE_LABELS[a]}->{CIRCLE_LABELS[b]}"
        rep.add(name, rel.is_zero, rel.to_json())
    return rep


# ---------------------------------------------------------------------------
# the explicit acyclic matching


@dataclass
class ProofMatching:
    a: int
    b: int
    fiber: list[int]  # global indices of (Q̃↓b)
    matching: Matching  # global indices
    critical: list[int]
    closed_form: list[int]
    acyclic: bool
    critical_is_subcomplex: bool
    shapes: dict = field(default_factory=dict)

    @property
    def closed_form_ok(self) -> bool:
        return self.critical == self.closed_form


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


def closed_form_critical(fib: Fibration, a: int, b: int) -> list[int]:
    """Critical cells predicted in closed form.

    For ``(a, b) = ((+,+), (0,+))``: the fiber over ``a``, the top bands
    ``(τ^R_{[m-1,m]}, R)`` with ``m = |z(τ)|`` and ``Q(τ∘(-R)) = -`` for non-tope
    τ, and the vertices ``(T, T)`` with ``Q(T) = -``.  Swapping signs gives
    ``((-,-), (0,-))``; when the signs of ``a`` and ``b`` differ the top bands are
    replaced by the bottom bands ``(τ^R_{[0,1]}, R)`` with ``Q(R) = -s``.
    """
    om, rs = fib.om, fib.rksd
    s = 1 if a == PP else -1
    t = 1 if b == ZP else -1
    index = {(c.cell.bits, c.tope): i for i, c in enumerate(rs.cells)}
    ranks_by_tope = {r: tope_ranks(om, r) for r in range(len(om.topes))}
    out = set(fib.fiber_elements(a))
    for cell in rs.salvetti.cells:
        tau, r = om.covectors[cell.covector], om.topes[cell.tope]
        if all(tau):
            if tope_sign(r) == -s:
                out.add(index[(1 << cell.tope, cell.tope)])
            continue
        m = sum(1 for x in tau if x == 0)
        far = compose(tau, negate(r))
        ranks = ranks_by_tope[cell.tope]
        if s == t:
            if tope_sign(far) != -s:
                continue
            lo = m - 1
        else:
            if tope_sign(r) != -s:
                continue
            lo = 0
        bits = 0
        for x in iter_bits(om.tope_sets[cell.covector]):
            if ranks[x] in (lo, lo + 1):
                bits |= 1 << x
        out.add(index[(bits, cell.tope)])
    return sorted(out)


def proof_matching(fib: Fibration, a: int = PP, b: int = ZP, strict: bool = True) -> ProofMatching:
    """Fiberwise matching on ``(Q̃↓b)`` over ``p̃``, patched together.

    In every connected component of a point preimage of ``p̃`` the cells lying
    outside ``(Q̃↓a)`` are matched when there are exactly two of them; a single
    such cell stays critical.  With ``strict`` a cycle or a critical set other
    than the closed form raises :class:`FibrationError`.
    """
    if not fib.circle.leq(a, b) or a == b or a not in (PP, MM):
        raise FibrationError("need a vertex a below an edge b of the circle")
    poset, ptilde = fib.poset, fib.rksd.p
    big = fib.fiber_elements(b)
    small = set(fib.fiber_elements(a))
    big_set = set(big)
    by_target: dict[int, list[int]] = {}
    for i in big:
        by_target.setdefault(ptilde(i), []).append(i)

    pairs = []
    shapes = {"matched": 0, "single": 0, "none": 0}
    for target, cells in sorted(by_target.items()):
        uf = _UnionFind(cells)
        cell_set = set(cells)
        for i in cells:
            for j in poset.upper_covers[i]:
                if j in cell_set:
                    uf.union(i, j)
        comps: dict[int, list[int]] = {}
        for i in cells:
            comps.setdefault(uf.find(i), []).append(i)
        for comp in comps.values():
            outside = sorted(i for i in comp if i not in small)
            if len(outside) == 2:
                x, y = outside
                if poset.leq(y, x):
                    x, y = y, x
                if y not in poset.upper_covers[x]:
                    raise FibrationError(f"unmatched component shape {comp}")
                pairs.append((x, y))
                shapes["matched"] += 1
            elif len(outside) == 1:
                shapes["single"] += 1
            elif not outside:
                shapes["none"] += 1
            else:
                raise FibrationError(f"component with {len(outside)} free cells: {comp}")

    # patch together over p̃ restricted to (Q̃↓b)
    sub = poset.induced(big)
    local = {g: i for i, g in enumerate(big)}
    restricted = PosetMap(sub, fib.rksd.salvetti.poset, [ptilde(g) for g in big])
    per_fiber: dict[int, list] = {}
    for x, y in pairs:
        per_fiber.setdefault(ptilde(x), []).append((local[x], local[y]))
    matching_local = patchwork(restricted, {q: Matching(ps) for q, ps in per_fiber.items()})
    morse = apply_matching(sub, matching_local)
    critical = sorted(big[i] for i in morse.critical)
    if not big_set.issuperset(critical):
        raise FibrationError("critical cells escape the fiber")
    pm = ProofMatching(
        a=a,
        b=b,
        fiber=big,
        matching=Matching(pairs),
        critical=critical,
        closed_form=closed_form_critical(fib, a, b),
        acyclic=morse.acyclic,
        critical_is_subcomplex=morse.is_subcomplex,
        shapes=shapes,
    )
    if strict and not (pm.acyclic and pm.closed_form_ok):
        raise FibrationError(
            f"matching over {CIRCLE_LABELS[a]} < {CIRCLE_LABELS[b]} is "
            + ("not acyclic" if not pm.acyclic else "off the closed-form critical set")
        )
    return pm


def check_proof_matching(fib: Fibration, a: int = PP, b: int = ZP) -> CheckReport:
    pm = proof_matching(fib, a, b, strict=False)
    rep = CheckReport()
    tag = f"{CIRCLE_LABELS[a]}<{CIRCLE_LABELS[b]}"
    rep.add(f"acyclic{tag}", pm.acyclic)
    rep.add(f"critical_subcomplex{tag}", pm.critical_is_subcomplex)
    rep.add(
        f"closed_form{tag}",
        pm.closed_form_ok,
        None if pm.closed_form_ok else {"critical": len(pm.critical), "closed_form": len(pm.closed_form)},
    )
    h_big = homology(fib.poset.induced(pm.fiber))
    h_crit = homology(fib.poset.induced(pm.critical))
    h_small = homology(fib.poset.induced(fib.fiber_elements(a)))
    rep.add(f"morse_homology{tag}", h_crit.same_as(h_big), h_crit.to_json())
    rep.add(f"cone_homology{tag}", h_crit.same_as(h_small))
    rep.details[f"pairs{tag}"] = len(pm.matching)
    return rep
