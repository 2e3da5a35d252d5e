"""Integral homology of order complexes, discrete Morse matchings, Möbius data.

Homology is computed over the integers with exact Python ints: the chain complex
is first shrunk by unit-coefficient eliminations (coreductions and free-face
collapses, which never change integral homology) and whatever survives is put
into Smith normal form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .poset import OrderComplex, Poset, PosetError, PosetMap, bits_of, iter_bits


class HomologyError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Invariant factors ``d_1 | d_2 | ... | d_r`` (all positive) and the rank ``r``.

    Dense elimination over Z, always pivoting on an entry of smallest absolute
    value so that intermediate entries stay small.
    """
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag: list[int] = []
    t = 0
    while t < rows and t < cols:
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = a[i][j]
                if v and (pivot is None or abs(v) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
                    if abs(v) == 1:
                        break
            if pivot and abs(a[pivot[0]][pivot[1]]) == 1:
                break
        if pivot is None:
            break
        pi, pj = pivot
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, cols):
                            ri[j] -= q * rt[j]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for i in range(t, rows):
                            a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        dirty = True
            if not dirty:
                # divisibility: p must divide every remaining entry
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                i, _ = bad
                for j in range(t, cols):
                    a[t][j] += a[i][j]
                continue
            # move the smallest remaining entry of row/column t to the pivot
            best = (abs(a[t][t]), t, t)
            for i in range(t + 1, rows):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, cols):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag, len(diag)


# ---------------------------------------------------------------------------
# chain complexes


@dataclass
class HomologyReport:
    betti: list[int]
    torsion: list[tuple[int, int]] = field(default_factory=list)
    euler: int = 0

    def __post_init__(self):
        while self.betti and self.betti[-1] == 0:
            self.betti.pop()
        self.torsion = sorted(self.torsion)
        self.euler = sum((-1) ** k * b for k, b in enumerate(self.betti))

    def same_as(self, other: "HomologyReport") -> bool:
        return self.betti == other.betti and self.torsion == other.torsion

    @property
    def is_zero(self) -> bool:
        return not self.betti and not self.torsion

    def to_json(self) -> dict:
        return {
            "betti": list(self.betti),
            "torsion": [list(t) for t in self.torsion],
            "euler": self.euler,
        }


class ChainComplex:
    """Free chain complex over Z with a sparse boundary.

    ``dims[c]`` is the degree of cell ``c``; ``bd[c]`` maps faces to
    coefficients.  A cell of degree ``-1`` may be used as augmentation.
    """

    def __init__(self, dims: Sequence[int], bd: Sequence[dict]):
        self.dims = list(dims)
        self.bd = [dict(b) for b in bd]

    @classmethod
    def from_simplices(
        cls, by_dim: Sequence[Sequence[tuple]], exclude: Iterable[tuple] = (), augment: bool = False
    ) -> "ChainComplex":
        """Simplicial chain complex; simplices in ``exclude`` are quotiented out."""
        excluded = set(exclude)
        dims: list[int] = []
        bd: list[dict] = []
        index: dict[tuple, int] = {}
        if augment:
            dims.append(-1)
            bd.append({})
        for d, simplices in enumerate(by_dim):
            for s in simplices:
                if s in excluded:
                    continue
                b = {}
                if d == 0:
                    if augment:
                        b[0] = 1
                else:
                    for k in range(d + 1):
                        face = s[:k] + s[k + 1 :]
                        f = index.get(face)
                        if f is not None:
                            b[f] = -1 if k % 2 else 1
                        elif face not in excluded:
                            raise HomologyError(f"missing face {face} of {s}")
                index[s] = len(dims)
                dims.append(d)
                bd.append(b)
        return cls(dims, bd)

    def __len__(self) -> int:
        return len(self.dims)

    def boundary_squared_is_zero(self) -> bool:
        for b in self.bd:
            acc: dict[int, int] = {}
            for f, v in b.items():
                for g, w in self.bd[f].items():
                    acc[g] = acc.get(g, 0) + v * w
            if any(acc.values()):
                return False
        return True

    def homology(self, reduce: bool = True) -> tuple[dict[int, int], dict[int, list[int]]]:
        """Betti numbers and torsion coefficients keyed by degree."""
        dims = list(self.dims)
        bd = [dict(b) for b in self.bd]
        alive = [True] * len(dims)
        if reduce:
            _reduce(dims, bd, alive)
        cells_by_dim: dict[int, list[int]] = {}
        for c, d in enumerate(dims):
            if alive[c]:
                cells_by_dim.setdefault(d, []).append(c)
        ranks: dict[int, int] = {}
        torsion: dict[int, list[int]] = {}
        for d, cells in cells_by_dim.items():
            lower = cells_by_dim.get(d - 1, [])
            if not lower:
                ranks[d] = 0
                continue
            pos = {c: i for i, c in enumerate(lower)}
            mat = [[0] * len(cells) for _ in lower]
            for j, c in enumerate(cells):
                for f, v in bd[c].items():
                    mat[pos[f]][j] = v
            factors, r = smith_normal_form(mat)
            ranks[d] = r
            tors = [x for x in factors if x > 1]
            if tors:
                torsion[d - 1] = tors
        betti = {}
        for d, cells in cells_by_dim.items():
            b = len(cells) - ranks.get(d, 0) - ranks.get(d + 1, 0)
            if b:
                betti[d] = b
        return betti, torsion


def _reduce(dims: list[int], bd: list[dict], alive: list[bool]) -> None:
    """Eliminate pairs (a, b) with ``bd[b][a] = ±1`` in place.

    Fill-free pairs (a face with a single coface, or a cell with a single face)
    are taken first; then sweeps pivot every cell on its unit face with the
    fewest cofaces until no unit coefficient is left.
    """
    cob: list[dict] = [{} for _ in dims]
    for c, b in enumerate(bd):
        for f, v in b.items():
            cob[f][c] = v

    def eliminate(a: int, b: int, todo: list[int]):
        u = bd[b][a]
        for x in list(cob[a]):
            if x == b:
                continue
            k = bd[x][a] * u
            bx = bd[x]
            for f, v in bd[b].items():
                if f == a:
                    continue
                nv = bx.get(f, 0) - k * v
                if nv:
                    bx[f] = nv
                    cob[f][x] = nv
                else:
                    bx.pop(f, None)
                    cob[f].pop(x, None)
                todo.append(f)
            todo.append(x)
        for x in cob[a]:
            if x != b:
                del bd[x][a]
        for f in bd[a]:
            del cob[f][a]
            todo.append(f)
        for f in bd[b]:
            if f != a:
                del cob[f][b]
                todo.append(f)
        for d in cob[b]:
            del bd[d][b]
            todo.append(d)
        bd[a] = {}
        cob[a] = {}
        bd[b] = {}
        cob[b] = {}
        alive[a] = alive[b] = False

    def free_pass(todo: list[int]):
        while todo:
            c = todo.pop()
            if not alive[c]:
                continue
            if len(bd[c]) == 1:
                (a, v), = bd[c].items()
                if v in (1, -1):
                    eliminate(a, c, todo)
                    continue
            if len(cob[c]) == 1:
                (b, v), = cob[c].items()
                if v in (1, -1):
                    eliminate(c, b, todo)

    free_pass(list(range(len(dims) - 1, -1, -1)))
    # sweep the cells, using the cheapest unit face of each one as pivot
    changed = True
    while changed:
        changed = False
        for b in range(len(dims)):
            if not alive[b] or not bd[b]:
                continue
            best = None
            for a, v in bd[b].items():
                if v in (1, -1) and (best is None or len(cob[a]) < best[0]):
                    best = (len(cob[a]), a)
            if best is None:
                continue
            todo: list[int] = []
            eliminate(best[1], b, todo)
            free_pass(todo)
            changed = True


def _report(betti: dict[int, int], torsion: dict[int, list[int]], shift_reduced: bool, nonempty: bool):
    betti = dict(betti)
    torsion = dict(torsion)
    if shift_reduced:
        # reduced -> unreduced
        betti.pop(-1, None)
        if nonempty:
            betti[0] = betti.get(0, 0) + 1
    top = max(list(betti) + list(torsion) + [-1])
    vec = [betti.get(d, 0) for d in range(top + 1)]
    tors = [(d, t) for d in sorted(torsion) for t in torsion[d]]
    return HomologyReport(vec, tors)


def simplicial_homology(by_dim: Sequence[Sequence[tuple]], reduce: bool = True) -> HomologyReport:
    nonempty = bool(by_dim and by_dim[0])
    cc = ChainComplex.from_simplices(by_dim, augment=True)
    betti, torsion = cc.homology(reduce=reduce)
    if betti.get(-1) and nonempty:
        raise HomologyError("augmented complex has homology in degree -1")
    rep = _report(betti, torsion, True, nonempty)
    chi = sum((-1) ** d * len(s) for d, s in enumerate(by_dim))
    if rep.euler != chi:
        raise HomologyError(f"Euler characteristic mismatch: {rep.euler} != {chi}")
    return rep


def homology(oc: OrderComplex | Poset, reduce: bool = True) -> HomologyReport:
    """Unreduced integral homology of the order complex."""
    if isinstance(oc, Poset):
        oc = OrderComplex(oc)
    return simplicial_homology(oc.simplices(), reduce=reduce)


def relative_homology(p: Poset, sub: Iterable[int], reduce: bool = True) -> HomologyReport:
    """H_*(Δ(P), Δ(P|sub)) for a set of element indices ``sub``.

    Δ(P|sub) is the full subcomplex on ``sub``; the relative groups vanish in
    every degree iff the inclusion induces isomorphisms on integral homology.
    """
    mask = bits_of(sub)
    by_dim = OrderComplex(p).simplices()
    inside = [s for simplices in by_dim for s in simplices if all((mask >> v) & 1 for v in s)]
    if not inside:
        return homology(p, reduce=reduce)
    cc = ChainComplex.from_simplices(by_dim, exclude=inside)
    betti, torsion = cc.homology(reduce=reduce)
    return _report(betti, torsion, False, True)


def facets_to_simplices(facets: Iterable[Sequence[int]]) -> list[list[tuple]]:
    """All faces of a simplicial complex given by facets (vertex ids sorted)."""
    from itertools import combinations

    faces: set[tuple] = set()
    for f in facets:
        f = tuple(sorted(f))
        for k in range(1, len(f) + 1):
            faces.update(combinations(f, k))
    by_dim: list[list[tuple]] = []
    for s in sorted(faces, key=lambda s: (len(s), s)):
        while len(by_dim) < len(s):
            by_dim.append([])
        by_dim[len(s) - 1].append(s)
    return by_dim


def sphere_betti(d: int) -> list[int]:
    """Betti vector of the d-sphere; ``d = -1`` is the empty set."""
    if d < 0:
        return []
    if d == 0:
        return [2]
    return [1] + [0] * (d - 1) + [1]


def check_cw_interval(p: Poset, x: int) -> HomologyReport:
    """Homology of Δ(P_{<x}), to be compared against a sphere of dimension height(x)-1."""
    return homology(p.interval_below(x))


def interval_is_sphere(p: Poset, x: int) -> bool:
    rep = check_cw_interval(p, x)
    return not rep.torsion and rep.betti == sphere_betti(p.height(x) - 1)


# ---------------------------------------------------------------------------
# discrete Morse theory


@dataclass
class Matching:
    pairs: list[tuple[int, int]]

    def __post_init__(self):
        self.pairs = sorted(tuple(p) for p in self.pairs)
        seen: set[int] = set()
        for a, b in self.pairs:
            if a in seen or b in seen:
                raise HomologyError(f"element matched twice in pair ({a}, {b})")
            seen.update((a, b))

    @property
    def matched(self) -> set[int]:
        return {x for pair in self.pairs for x in pair}

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass
class MorseResult:
    critical: list[int]
    acyclic: bool
    cycle: list[int] | None
    is_subcomplex: bool
    subcomplex: Poset | None


def find_cycle(p: Poset, m: Matching) -> list[int] | None:
    """A directed cycle in the Hasse diagram with matched edges reversed, or None."""
    flip = set(m.pairs)
    succ: list[list[int]] = [[] for _ in range(len(p))]
    for a, b in p.cover_pairs():
        if (a, b) in flip:
            succ[b].append(a)
        else:
            succ[a].append(b)
    state = [0] * len(p)
    parent = [-1] * len(p)
    for root in range(len(p)):
        if state[root]:
            continue
        stack = [(root, iter(succ[root]))]
        state[root] = 1
        while stack:
            v, it = stack[-1]
            w = next(it, None)
            if w is None:
                state[v] = 2
                stack.pop()
            elif state[w] == 0:
                state[w] = 1
                parent[w] = v
                stack.append((w, iter(succ[w])))
            elif state[w] == 1:
                cyc = [v]
                while cyc[-1] != w:
                    cyc.append(parent[cyc[-1]])
                return cyc[::-1]
    return None


def apply_matching(p: Poset, m: Matching) -> MorseResult:
    covers = set(p.cover_pairs())
    for pair in m.pairs:
        if pair not in covers:
            raise HomologyError(f"pair {pair} is not a cover relation")
    cycle = find_cycle(p, m)
    critical = sorted(set(range(len(p))) - m.matched)
    ideal = p.is_order_ideal(critical)
    return MorseResult(
        critical=critical,
        acyclic=cycle is None,
        cycle=cycle,
        is_subcomplex=ideal,
        subcomplex=p.induced(critical) if ideal and cycle is None else None,
    )


def patchwork(f: PosetMap, per_fiber: dict[int, Matching]) -> Matching:
    """Union of matchings living on the point preimages ``f^{-1}(q)``."""
    pairs = []
    for q, m in sorted(per_fiber.items()):
        for a, b in m.pairs:
            if f(a) != q or f(b) != q:
                raise HomologyError(f"pair ({a}, {b}) is not inside the fiber over {q}")
            pairs.append((a, b))
    union = Matching(pairs)
    cyc = find_cycle(f.domain, union)
    if cyc is not None:
        raise HomologyError(f"patchwork union has a cycle: {cyc}")
    return union


# ---------------------------------------------------------------------------
# Möbius / Orlik-Solomon oracle


@dataclass
class OSBetti:
    betti: list[int]
    chi_projective: int
    mobius: list[int]


def mobius_values(lattice: Poset) -> list[int]:
    """μ(0̂, x) for every x."""
    minima = lattice.minimal_elements()
    if len(minima) != 1:
        raise PosetError("not a lattice: no unique minimum")
    bottom = minima[0]
    mu = [0] * len(lattice)
    for x in lattice.linear_extension():
        mu[x] = 1 if x == bottom else -sum(mu[y] for y in lattice.strictly_below(x))
    return mu


def _is_lattice(p: Poset) -> bool:
    if len(p.minimal_elements()) != 1 or len(p.maximal_elements()) != 1:
        return False
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            ub = p.above[i] & p.above[j]
            joins = [k for k in iter_bits(ub) if p.below[k] & ub == 1 << k]
            if len(joins) != 1:
                return False
    return True


def os_betti(lattice: Poset) -> OSBetti:
    """Complement Betti numbers ``b_k = Σ_{rk X = k} |μ(0̂, X)|``.

    ``chi_projective`` is the Euler characteristic of the projectivized
    complement, i.e. the Poincaré polynomial divided by ``1 + t`` evaluated
    at ``t = -1``.
    """
    if not _is_lattice(lattice):
        raise PosetError("not a lattice")
    mu = mobius_values(lattice)
    heights = lattice.heights
    betti = [0] * (max(heights) + 1)
    for x, m in enumerate(mu):
        betti[heights[x]] += abs(m)
    # synthetic division by (1 + t)
    quotient = []
    carry = 0
    for c in betti[:-1]:
        carry = c - carry
        quotient.append(carry)
    if len(betti) > 1 and betti[-1] != quotient[-1]:
        raise HomologyError("Poincaré polynomial is not divisible by 1 + t")
    chi = sum((-1) ** k * q for k, q in enumerate(quotient)) if quotient else 1
    return OSBetti(betti, chi, mu)


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
