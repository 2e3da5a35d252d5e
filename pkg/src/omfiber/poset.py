"""Finite posets stored as reachability bitsets plus cover relations.

Element ``i`` is always the integer index into :attr:`Poset.labels`; labels are
opaque hashable values.  ``below[i]`` is the bitset of ``{j : j <= i}``
(reflexive).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence


class PosetError(ValueError):
    pass


def iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def bits_of(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


class Poset:
    def __init__(self, labels: Sequence[Hashable], below: Sequence[int], check: bool = True):
        self.labels = tuple(labels)
        self.below = tuple(below)
        n = len(self.labels)
        if len(self.below) != n:
            raise PosetError("labels and below-sets differ in length")
        if check:
            for i, b in enumerate(self.below):
                if not (b >> i) & 1:
                    raise PosetError(f"relation is not reflexive at {self.labels[i]!r}")
                acc = b
                for j in iter_bits(b):
                    acc |= self.below[j]
                if acc != b:
                    raise PosetError(f"relation is not transitive at {self.labels[i]!r}")
                for j in iter_bits(b & ~(1 << i)):
                    if (self.below[j] >> i) & 1:
                        raise PosetError(
                            f"relation is not antisymmetric: {self.labels[i]!r}, {self.labels[j]!r}"
                        )

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_relation(cls, labels: Sequence[Hashable], leq: Callable, check: bool = True) -> "Poset":
        labels = list(labels)
        below = []
        for j, b in enumerate(labels):
            bits = 0
            for i, a in enumerate(labels):
                if i == j or leq(a, b):
                    bits |= 1 << i
            below.append(bits)
        return cls(labels, below, check=check)

    @classmethod
    def from_covers(cls, labels: Sequence[Hashable], covers: Iterable[tuple[int, int]]) -> "Poset":
        n = len(labels)
        lower: list[list[int]] = [[] for _ in range(n)]
        indeg = [0] * n
        upper: list[list[int]] = [[] for _ in range(n)]
        for i, j in covers:
            lower[j].append(i)
            upper[i].append(j)
            indeg[j] += 1
        order = [i for i in range(n) if indeg[i] == 0]
        for i in order:
            for j in upper[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    order.append(j)
        if len(order) != n:
            raise PosetError("cover relation has a directed cycle")
        below = [0] * n
        for j in order:
            b = 1 << j
            for i in lower[j]:
                b |= below[i]
            below[j] = b
        poset = cls(labels, below, check=False)
        given = {(i, j) for i, j in covers}
        if given != set(poset.cover_pairs()):
            raise PosetError("given relations are not exactly the cover relations")
        return poset

    # -- basic queries ------------------------------------------------------

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"Poset(n={len(self)}, covers={len(self.cover_pairs())})"

    @cached_property
    def _index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise PosetError(f"unknown element {label!r}") from None

    def leq(self, i: int, j: int) -> bool:
        return bool((self.below[j] >> i) & 1)

    @cached_property
    def above(self) -> tuple:
        up = [0] * len(self)
        for j, b in enumerate(self.below):
            for i in iter_bits(b):
                up[i] |= 1 << j
        return tuple(up)

    def strictly_below(self, i: int) -> list[int]:
        return list(iter_bits(self.below[i] & ~(1 << i)))

    def _check(self, i: int) -> int:
        if not 0 <= i < len(self):
            raise PosetError(f"unknown element index {i}")
        return i

    def principal_ideal(self, i: int) -> list[int]:
        return list(iter_bits(self.below[self._check(i)]))

    def principal_filter(self, i: int) -> list[int]:
        return list(iter_bits(self.above[self._check(i)]))

    @cached_property
    def lower_covers(self) -> tuple:
        out = []
        for j, b in enumerate(self.below):
            strict = b & ~(1 << j)
            shadow = 0
            for i in iter_bits(strict):
                shadow |= self.below[i] & ~(1 << i)
            out.append(tuple(iter_bits(strict & ~shadow)))
        return tuple(out)

    @cached_property
    def upper_covers(self) -> tuple:
        up: list[list[int]] = [[] for _ in range(len(self))]
        for j, lows in enumerate(self.lower_covers):
            for i in lows:
                up[i].append(j)
        return tuple(tuple(u) for u in up)

    def cover_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for j, lows in enumerate(self.lower_covers) for i in lows]

    def minimal_elements(self) -> list[int]:
        return [i for i, lows in enumerate(self.lower_covers) if not lows]

    def maximal_elements(self) -> list[int]:
        return [i for i, ups in enumerate(self.upper_covers) if not ups]

    @cached_property
    def heights(self) -> tuple:
        """Length of the longest chain ending at each element."""
        h = [0] * len(self)
        for j in self.linear_extension():
            h[j] = max((h[i] + 1 for i in self.lower_covers[j]), default=0)
        return tuple(h)

    def height(self, i: int) -> int:
        return self.heights[i]

    def linear_extension(self) -> list[int]:
        """Elements sorted by number of elements below, ties by index."""
        return sorted(range(len(self)), key=lambda i: (self.below[i].bit_count(), i))

    def is_graded(self) -> bool:
        h = self.heights
        return all(h[j] == h[i] + 1 for i, j in self.cover_pairs())

    # -- derived posets -----------------------------------------------------

    def dual(self) -> "Poset":
        return Poset(self.labels, self.above, check=False)

    def induced(self, elements: Iterable[int]) -> "Poset":
        """Induced subposet on the given indices, kept in increasing index order."""
        elems = sorted(set(elements))
        pos = {old: new for new, old in enumerate(elems)}
        mask = bits_of(elems)
        below = []
        for old in elems:
            bits = 0
            for i in iter_bits(self.below[old] & mask):
                bits |= 1 << pos[i]
            below.append(bits)
        return Poset([self.labels[i] for i in elems], below, check=False)

    def is_order_ideal(self, elements: Iterable[int]) -> bool:
        mask = bits_of(elements)
        return all(self.below[i] & ~mask == 0 for i in iter_bits(mask))

    def order_ideal(self, elements: Iterable[int]) -> list[int]:
        """Order ideal generated by ``elements``."""
        mask = 0
        for i in elements:
            mask |= self.below[i]
        return list(iter_bits(mask))

    def interval_below(self, i: int) -> "Poset":
        """The open lower interval ``P_{<x}``."""
        return self.induced(self.strictly_below(i))

    def relabel(self, perm: Sequence[int]) -> "Poset":
        """Same poset with element ``i`` moved to position ``perm[i]``."""
        n = len(self)
        labels = [None] * n
        below = [0] * n
        for i in range(n):
            labels[perm[i]] = self.labels[i]
            below[perm[i]] = bits_of(perm[j] for j in iter_bits(self.below[i]))
        return Poset(labels, below, check=False)

    # -- chains -------------------------------------------------------------

    def chains(self, max_len: int | None = None):
        """All nonempty chains, each listed bottom to top, grouped by seed element.

        Enumeration order is deterministic: seeds in index order, extensions in
        index order.
        """
        strict_up = [u & ~(1 << i) for i, u in enumerate(self.above)]

        def extend(chain, top):
            yield chain
            if max_len is not None and len(chain) >= max_len:
                return
            for j in iter_bits(strict_up[top]):
                yield from extend(chain + (j,), j)

        for i in range(len(self)):
            yield from extend((i,), i)

    def maximal_chains(self) -> list[tuple[int, ...]]:
        out: list[tuple[int, ...]] = []

        def extend(chain, top):
            ups = self.upper_covers[top]
            if not ups:
                out.append(chain)
                return
            for j in ups:
                extend(chain + (j,), j)

        for m in self.minimal_elements():
            extend((m,), m)
        return out

    def count_maximal_chains(self) -> int:
        """Number of maximal chains by dynamic programming over the Hasse diagram."""
        ways = [0] * len(self)
        for j in self.linear_extension():
            ways[j] = sum(ways[i] for i in self.lower_covers[j]) or 1
        return sum(ways[m] for m in self.maximal_elements())


@dataclass
class PosetMap:
    domain: Poset
    codomain: Poset
    assignment: tuple

    def __post_init__(self):
        self.assignment = tuple(self.assignment)
        if len(self.assignment) != len(self.domain):
            raise PosetError("assignment must cover every domain element")

    def __call__(self, i: int) -> int:
        return self.assignment[i]

    def order_violations(self) -> list[tuple[int, int]]:
        f, cod = self.assignment, self.codomain
        return [(i, j) for i, j in self.domain.cover_pairs() if not cod.leq(f[i], f[j])]

    def is_order_preserving(self) -> bool:
        return not self.order_violations()

    def is_surjective(self) -> bool:
        return set(self.assignment) == set(range(len(self.codomain)))

    def preimage(self, targets: Iterable[int]) -> list[int]:
        ts = set(targets)
        return [i for i, q in enumerate(self.assignment) if q in ts]

    def fiber_elements(self, q: int) -> list[int]:
        """Indices of ``f^{-1}(Q_{<=q})``."""
        return self.preimage(self.codomain.principal_ideal(q))

    def fiber(self, q: int) -> Poset:
        return self.domain.induced(self.fiber_elements(q))


def poset_fiber(f: PosetMap, q: int) -> Poset:
    return f.fiber(q)


@dataclass
class OrderComplex:
    """Δ(P): the simplicial complex of chains of ``poset``."""

    poset: Poset

    @property
    def vertices(self) -> list[int]:
        return list(range(len(self.poset)))

    @cached_property
    def facets(self) -> list[tuple[int, ...]]:
        return self.poset.maximal_chains()

    def simplices(self) -> list[list[tuple[int, ...]]]:
        by_dim: list[list[tuple[int, ...]]] = []
        for chain in self.poset.chains():
            d = len(chain) - 1
            while len(by_dim) <= d:
                by_dim.append([])
            by_dim[d].append(chain)
        return by_dim

    def f_vector(self) -> list[int]:
        return [len(s) for s in self.simplices()]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector()))


def order_complex(p: Poset) -> OrderComplex:
    return OrderComplex(p)
