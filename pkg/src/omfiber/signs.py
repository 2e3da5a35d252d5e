"""Sign vectors, oriented matroids given by covectors, and their basic posets.

Sign vectors are plain tuples over ``{1, -1, 0}``; ground-set elements are the
positions ``0 .. n-1``.  External element names live in
:attr:`OrientedMatroid.labels`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .poset import Poset

SignVector = tuple  # tuple[int, ...] with entries in {1, -1, 0}

_CHAR = {1: "+", -1: "-", 0: "0"}
_PARSE = {"+": 1, "-": -1, "0": 0}
# tope tie-break order: + < - < 0
_RANK = {1: 0, -1: 1, 0: 2}


class SignError(ValueError):
    pass


def parse_sign_vector(text: str) -> SignVector:
    try:
        return tuple(_PARSE[c] for c in text.strip())
    except KeyError as exc:
        raise SignError(f"bad sign character {exc.args[0]!r} in {text!r}") from None


def format_sign_vector(v: Sequence[int]) -> str:
    return "".join(_CHAR[s] for s in v)


def sign_key(v: Sequence[int]) -> tuple:
    """Lexicographic key with ``+ < - < 0``."""
    return tuple(_RANK[s] for s in v)


def _check_lengths(a, b):
    if len(a) != len(b):
        raise SignError(f"length mismatch: {len(a)} != {len(b)}")


def compose(a: SignVector, b: SignVector) -> SignVector:
    _check_lengths(a, b)
    return tuple(x if x else y for x, y in zip(a, b))


def negate(a: SignVector) -> SignVector:
    return tuple(-x for x in a)


def separating_set(a: SignVector, b: SignVector) -> frozenset:
    _check_lengths(a, b)
    return frozenset(e for e, (x, y) in enumerate(zip(a, b)) if x and x == -y)


def zero_set(a: SignVector) -> frozenset:
    return frozenset(e for e, x in enumerate(a) if x == 0)


def sign_leq(a: SignVector, b: SignVector) -> bool:
    """Product order with ``0 < +`` and ``0 < -``."""
    return all(x == 0 or x == y for x, y in zip(a, b))


def to_masks(v: Sequence[int]) -> tuple[int, int]:
    plus = minus = 0
    for e, s in enumerate(v):
        if s > 0:
            plus |= 1 << e
        elif s < 0:
            minus |= 1 << e
    return plus, minus


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    ok: bool
    ground_size: int
    n_covectors: int
    n_topes: int
    rank: int | None
    violation: dict | None = None
    violations: list[dict] = field(default_factory=list)
    loops: list[int] = field(default_factory=list)
    parallel: list[list[int]] = field(default_factory=list)

    @property
    def axioms_ok(self) -> bool:
        return not self.violations

    @property
    def simple(self) -> bool:
        return not self.loops and not self.parallel

    def violated_axioms(self) -> list:
        return [v["axiom"] for v in self.violations]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "rank": self.rank,
            "n_covectors": self.n_covectors,
            "n_topes": self.n_topes,
            "violation": self.violation,
            "violations": self.violations,
            "loops": self.loops,
            "parallel": self.parallel,
        }


def _violation(axiom, *witness) -> dict:
    return {"axiom": axiom, "witness": [w if isinstance(w, (str, int)) else format_sign_vector(w) for w in witness]}


def _maximal(vectors) -> list:
    """Maximal elements of a set of sign vectors under the covector order."""
    masks = {v: to_masks(v) for v in vectors}
    out = []
    for v, (p, m) in masks.items():
        supp = p | m
        if not any(
            (q | r) != supp and (p & ~q) == 0 and (m & ~r) == 0 for w, (q, r) in masks.items()
        ):
            out.append(v)
    return sorted(out, key=sign_key)


def _longest_chain(vectors) -> int:
    # chains in the covector order strictly increase support, so grouping by support
    # size gives a topological order
    vs = sorted(vectors, key=lambda v: sum(1 for s in v if s))
    masks = [to_masks(v) for v in vs]
    best = [0] * len(vs)
    for j, (p, m) in enumerate(masks):
        for i in range(j):
            q, r = masks[i]
            if (q | r) != (p | m) and (q & ~p) == 0 and (r & ~m) == 0:
                best[j] = max(best[j], best[i] + 1)
    return max(best, default=0)


def loops_and_parallels(vectors, n: int) -> tuple[list[int], list[list[int]]]:
    loops = [e for e in range(n) if all(v[e] == 0 for v in vectors)]
    classes: dict[tuple, list[int]] = {}
    for e in range(n):
        if e in loops:
            continue
        key = tuple(v[e] == 0 for v in vectors)
        classes.setdefault(key, []).append(e)
    parallel = sorted(c for c in classes.values() if len(c) > 1)
    return loops, parallel


def validate_axioms(cands: Iterable[Sequence[int]]) -> ValidationReport:
    """Check the four covector axioms (plus simplicity) exhaustively.

    Every violated axiom is listed in ``violations`` with the first witness found in
    the deterministic covector order; ``violation`` is the lowest-numbered one.
    """
    vectors = sorted({tuple(v) for v in cands}, key=lambda v: (sum(1 for s in v if s), sign_key(v)))
    if not vectors:
        raise SignError("empty candidate set")
    n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise SignError("candidate sign vectors have different lengths")
    present = set(vectors)
    violations = []

    zero = (0,) * n
    if zero not in present:
        violations.append(_violation(1, zero))

    for v in vectors:
        if negate(v) not in present:
            violations.append(_violation(2, v))
            break

    masks = [to_masks(v) for v in vectors]
    mask_set = set(masks)
    found = False
    for i, (p1, m1) in enumerate(masks):
        for j, (p2, m2) in enumerate(masks):
            cp = p1 | (p2 & ~m1)
            cm = m1 | (m2 & ~p1)
            if (cp, cm) not in mask_set:
                violations.append(_violation(3, vectors[i], vectors[j]))
                found = True
                break
        if found:
            break

    full = (1 << n) - 1
    found = False
    for i, (p1, m1) in enumerate(masks):
        for j in range(i + 1, len(masks)):
            p2, m2 = masks[j]
            sep = (p1 & m2) | (m1 & p2)
            if not sep:
                continue
            keep = full & ~sep
            cp = (p1 | (p2 & ~m1)) & keep
            cm = (m1 | (m2 & ~p1)) & keep
            e_bits = sep
            while e_bits:
                low = e_bits & -e_bits
                e_bits ^= low
                if not any(
                    (q & keep) == cp and (r & keep) == cm and not ((q | r) & low) for q, r in masks
                ):
                    violations.append(
                        _violation(4, vectors[i], vectors[j], low.bit_length() - 1)
                    )
                    found = True
                    break
            if found:
                break
        if found:
            break

    loops, parallel = loops_and_parallels(vectors, n)
    topes = _maximal(vectors)
    rank = None if violations else _longest_chain(vectors)
    first = violations[0] if violations else None
    if first is None and (loops or parallel):
        first = {
            "axiom": "simple",
            "witness": [str(e) for e in loops] + ["=".join(map(str, c)) for c in parallel],
        }
    return ValidationReport(
        ok=first is None,
        ground_size=n,
        n_covectors=len(vectors),
        n_topes=len(topes),
        rank=rank,
        violation=first,
        violations=violations,
        loops=loops,
        parallel=parallel,
    )


# ---------------------------------------------------------------------------
# oriented matroids


def _covector_key(v):
    return (sum(1 for s in v if s), sign_key(v))


@dataclass(frozen=True, eq=False)
class OrientedMatroid:
    """A simple oriented matroid given by its full covector set.

    Covectors are stored sorted by support size then sign order, so the zero
    vector is index 0 and the topes come last; :attr:`topes` is sorted by
    :func:`sign_key` and is the global tope order used everywhere downstream.
    """

    ground_size: int
    covectors: tuple
    labels: tuple = ()
    witnesses: dict | None = None

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(e) for e in range(self.ground_size)))

    @cached_property
    def topes(self) -> tuple:
        return tuple(sorted((v for v in self.covectors if all(v)), key=sign_key))

    @cached_property
    def covector_index(self) -> dict:
        return {v: i for i, v in enumerate(self.covectors)}

    @cached_property
    def tope_index(self) -> dict:
        return {t: i for i, t in enumerate(self.topes)}

    @cached_property
    def covector_poset(self) -> Poset:
        return Poset.from_relation(self.covectors, sign_leq)

    @cached_property
    def dual_poset(self) -> Poset:
        """L^∨: the covector poset with the order reversed."""
        return self.covector_poset.dual()

    @cached_property
    def rank(self) -> int:
        return self.covector_poset.height(self.covector_index[self.topes[0]])

    @cached_property
    def tope_sets(self) -> tuple:
        """Bitset over tope indices of ``T(σ) = {T : σ ≤ T}`` for each covector σ."""
        out = []
        for v in self.covectors:
            bits = 0
            for j, t in enumerate(self.topes):
                if sign_leq(v, t):
                    bits |= 1 << j
            out.append(bits)
        return tuple(out)

    def index(self, v) -> int:
        try:
            return self.covector_index[tuple(v)]
        except KeyError:
            raise SignError(f"{format_sign_vector(v)} is not a covector") from None

    def tope_id(self, t) -> int:
        try:
            return self.tope_index[tuple(t)]
        except KeyError:
            raise SignError(f"{format_sign_vector(t)} is not a tope") from None

    def rank_from(self, base, tope) -> int:
        return len(separating_set(base, tope))

    def zero_map(self) -> dict:
        """Covector -> zero set."""
        return {v: zero_set(v) for v in self.covectors}

    @cached_property
    def geometric_lattice(self) -> Poset:
        flats = sorted({zero_set(v) for v in self.covectors}, key=lambda f: (len(f), sorted(f)))
        return Poset.from_relation(flats, lambda a, b: a <= b)

    def flat_rank(self, flat) -> int:
        lat = self.geometric_lattice
        return lat.height(lat.index(frozenset(flat)))

    def tope_poset(self, base) -> Poset:
        base = tuple(base)
        self.tope_id(base)
        seps = {t: separating_set(base, t) for t in self.topes}
        return Poset.from_relation(self.topes, lambda r, t: seps[r] <= seps[t])

    def describe(self) -> dict:
        return {
            "n": self.ground_size,
            "rank": self.rank,
            "n_covectors": len(self.covectors),
            "n_topes": len(self.topes),
            "n_flats": len(self.geometric_lattice),
        }


def from_covectors(cands: Iterable[Sequence[int]], labels=(), check: bool = True) -> OrientedMatroid:
    """Build an oriented matroid from a complete covector set.

    With ``check`` the axioms and simplicity are verified and a :class:`SignError`
    carrying the report is raised on failure.
    """
    vectors = sorted({tuple(v) for v in cands}, key=_covector_key)
    if not vectors:
        raise SignError("empty covector set")
    if check:
        report = validate_axioms(vectors)
        if not report.ok:
            err = SignError(f"not a simple oriented matroid: {report.violation}")
            err.report = report
            raise err
    return OrientedMatroid(len(vectors[0]), tuple(vectors), tuple(labels))


def simplify(cands: Iterable[Sequence[int]], labels=()) -> OrientedMatroid:
    """Delete loops and keep the lowest-index member of every parallel class."""
    vectors = {tuple(v) for v in cands}
    n = len(next(iter(vectors)))
    labels = tuple(labels) or tuple(str(e) for e in range(n))
    loops, parallel = loops_and_parallels(vectors, n)
    drop = set(loops)
    for cls in parallel:
        drop.update(cls[1:])
    keep = [e for e in range(n) if e not in drop]
    reduced = {tuple(v[e] for e in keep) for v in vectors}
    return from_covectors(reduced, labels=[labels[e] for e in keep])


def tope_sign(tope: Sequence[int]) -> int:
    """Product of the entries of a tope, as ``+1`` or ``-1``."""
    out = 1
    for s in tope:
        if s == 0:
            raise SignError(f"{format_sign_vector(tope)} has a zero entry")
        out *= s
    return out
