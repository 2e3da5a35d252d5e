"""Central real hyperplane arrangements and their oriented matroids.

All arithmetic is exact (:class:`fractions.Fraction`).  The covector set is
produced from the cocircuits (sign vectors of the 1-dimensional intersections
of the essentialized arrangement) by closing under composition, and every
covector carries a witness point whose sign pattern is re-checked.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .signs import OrientedMatroid, SignError, compose, format_sign_vector, from_covectors, negate


class ArrangementError(ValueError):
    pass


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(map(Fraction, r)) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def matrix_rank(rows) -> int:
    return len(rref(rows)[1]) if rows else 0


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class Arrangement:
    dim: int
    normals: tuple

    def __post_init__(self):
        normals = tuple(tuple(Fraction(x) for x in v) for v in self.normals)
        object.__setattr__(self, "normals", normals)
        for i, v in enumerate(normals):
            if len(v) != self.dim:
                raise ArrangementError(f"normal {i} has length {len(v)}, expected {self.dim}")

    @classmethod
    def from_rows(cls, rows) -> "Arrangement":
        rows = [list(r) for r in rows]
        if not rows:
            raise ArrangementError("no hyperplanes")
        return cls(len(rows[0]), tuple(map(tuple, rows)))

    def check_simple(self) -> None:
        for i, v in enumerate(self.normals):
            if not any(v):
                raise ArrangementError(f"normal {i} is zero")
        for i, j in combinations(range(len(self.normals)), 2):
            if matrix_rank([self.normals[i], self.normals[j]]) < 2:
                raise ArrangementError(f"normals {i} and {j} are parallel")

    def sign_vector(self, point) -> tuple:
        return tuple(_sign(_dot(a, point)) for a in self.normals)

    def essentialize(self) -> tuple[list[list[Fraction]], list[list[Fraction]], list[int]]:
        """Coordinates of the normals in a basis of their span.

        Returns ``(coords, basis, pivots)``: ``normals[i] = Σ_j coords[i][j] basis[j]``
        and ``basis`` is in reduced row echelon form with the given pivot columns.
        """
        basis, pivots = rref(self.normals)
        coords = [[a[p] for p in pivots] for a in self.normals]
        return coords, basis, pivots


def cocircuits(arr: Arrangement) -> dict[tuple, list[Fraction]]:
    """Cocircuit sign vectors with witness points in the original space."""
    coords, basis, pivots = arr.essentialize()
    r = len(pivots)
    n = len(arr.normals)

    def lift(y):
        v = [Fraction(0)] * arr.dim
        for yj, p in zip(y, pivots):
            v[p] = yj
        return v

    found: dict[tuple, list[Fraction]] = {}
    seen_flats: set[frozenset] = set()
    for subset in combinations(range(n), r - 1):
        rows = [coords[i] for i in subset]
        if matrix_rank(rows) != r - 1:
            continue
        (u,) = nullspace(rows, r)
        values = [_dot(c, u) for c in coords]
        flat = frozenset(i for i, x in enumerate(values) if x == 0)
        if flat in seen_flats:
            continue
        seen_flats.add(flat)
        sv = tuple(_sign(x) for x in values)
        found[sv] = lift(u)
        found[negate(sv)] = lift([-x for x in u])
    return found


def _compose_witness(arr: Arrangement, va, vb):
    """A point realizing sign(va) ∘ sign(vb)."""
    ea = [_dot(a, va) for a in arr.normals]
    eb = [_dot(a, vb) for a in arr.normals]
    eps = Fraction(1)
    for x, y in zip(ea, eb):
        if x != 0 and y != 0:
            eps = min(eps, abs(x) / (2 * abs(y)))
    return [x + eps * y for x, y in zip(va, vb)]


def from_arrangement(arr: Arrangement, labels=()) -> OrientedMatroid:
    """Oriented matroid of a central arrangement, with audited witness points."""
    arr.check_simple()
    n = len(arr.normals)
    cocs = cocircuits(arr)
    zero = (0,) * n
    witnesses: dict[tuple, list[Fraction]] = {zero: [Fraction(0)] * arr.dim}
    witnesses.update(cocs)
    frontier = list(witnesses)
    coc_list = sorted(cocs)
    while frontier:
        nxt = []
        for s in frontier:
            for c in coc_list:
                t = compose(s, c)
                if t not in witnesses:
                    witnesses[t] = _compose_witness(arr, witnesses[s], cocs[c])
                    nxt.append(t)
        frontier = nxt
    for sv, w in witnesses.items():
        if arr.sign_vector(w) != sv:
            raise ArrangementError(f"witness audit failed for {format_sign_vector(sv)}")
    try:
        om = from_covectors(witnesses, labels=labels)
    except SignError as exc:  # pragma: no cover - would mean a construction bug
        raise ArrangementError(str(exc)) from exc
    return OrientedMatroid(om.ground_size, om.covectors, om.labels, witnesses)


def brute_force_covectors(arr: Arrangement, grid: int = 3) -> set[tuple]:
    """Sign vectors of integer sample points in ``[-grid, grid]^dim``.

    Only a lower bound in general; exact for small arrangements with small
    integer normals when the grid is large enough.
    """
    from itertools import product

    return {arr.sign_vector(p) for p in product(range(-grid, grid + 1), repeat=arr.dim)}


# standard test arrangements
def one_line() -> Arrangement:
    return Arrangement.from_rows([[1]])


def braid_a2() -> Arrangement:
    """xy(x - y)."""
    return Arrangement.from_rows([[1, 0], [0, 1], [1, -1]])


def boolean(n: int) -> Arrangement:
    return Arrangement.from_rows([[int(i == j) for j in range(n)] for i in range(n)])


def five_planes() -> Arrangement:
    """xyz(x + y)(y + z)."""
    return Arrangement.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [0, 1, 1]])


SUITE = {
    "one_line": one_line,
    "xy(x-y)": braid_a2,
    "B2": lambda: boolean(2),
    "B3": lambda: boolean(3),
    "xyz(x+y)(y+z)": five_planes,
}
