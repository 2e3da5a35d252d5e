"""Plain-text file formats.

``arr <dim> <n>``
    followed by ``n`` rows of ``dim`` rationals (``3`` or ``-1/2``).
``om <n>``
    followed by one covector per line over ``+ - 0``.
``poset <n>``
    followed by ``cover i j`` lines and optional ``label i <text>`` lines.
facets
    one maximal simplex per line, space separated vertex ids.
matching
    ``match a b`` and ``crit c`` lines.

Blank lines and lines starting with ``#`` are ignored everywhere; in the
arrangement and covector formats a trailing ``# comment`` is dropped too.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .arrangement import Arrangement
from .homology import Matching
from .poset import Poset, PosetError
from .signs import SignError, format_sign_vector, parse_sign_vector


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _lines(text: str, inline_comments: bool = True):
    """Yield ``(line_number, stripped_text)`` for meaningful lines."""
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if inline_comments and "#" in line:
            line = line.split("#", 1)[0].rstrip()
        yield no, line


def _header(lines, keyword: str, nargs: int) -> tuple[int, list[int]]:
    try:
        no, line = next(lines)
    except StopIteration:
        raise FormatError(f"empty input, expected '{keyword}' header") from None
    parts = line.split()
    if parts[0] != keyword or len(parts) != nargs + 1:
        raise FormatError(f"expected '{keyword}' header with {nargs} integer(s), got {line!r}", no)
    try:
        vals = [int(x) for x in parts[1:]]
    except ValueError:
        raise FormatError(f"non-integer in header {line!r}", no) from None
    if any(v < 0 for v in vals):
        raise FormatError("negative size in header", no)
    return no, vals


def sniff(text: str) -> str:
    """The header keyword of ``text`` (``arr``, ``om``, ``poset``) or ``facets``."""
    for _, line in _lines(text):
        head = line.split()[0]
        return head if head in ("arr", "om", "poset") else "facets"
    return "facets"


# arrangements


def parse_arrangement(text: str) -> Arrangement:
    lines = _lines(text)
    no, (dim, n) = _header(lines, "arr", 2)
    if dim == 0:
        raise FormatError("dimension must be positive", no)
    rows = []
    for no, line in lines:
        parts = line.split()
        if len(parts) != dim:
            raise FormatError(f"expected {dim} entries, got {len(parts)}", no)
        try:
            rows.append([Fraction(p) for p in parts])
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"bad rational in {line!r}", no) from None
    if len(rows) != n:
        raise FormatError(f"header announces {n} hyperplanes, found {len(rows)}")
    if n == 0:
        raise FormatError("no hyperplanes")
    return Arrangement(dim, tuple(map(tuple, rows)))


def format_arrangement(arr: Arrangement) -> str:
    out = [f"arr {arr.dim} {len(arr.normals)}"]
    out += [" ".join(str(x) for x in row) for row in arr.normals]
    return "\n".join(out) + "\n"


# covectors


def parse_covectors(text: str) -> list[tuple]:
    lines = _lines(text)
    _, (n,) = _header(lines, "om", 1)
    out = []
    for no, line in lines:
        try:
            v = parse_sign_vector(line)
        except SignError as exc:
            raise FormatError(str(exc), no) from None
        if len(v) != n:
            raise FormatError(f"covector {line!r} has length {len(v)}, expected {n}", no)
        out.append(v)
    return out


def format_covectors(vectors: Iterable[Sequence[int]], n: int) -> str:
    out = [f"om {n}"] + [format_sign_vector(v) for v in vectors]
    return "\n".join(out) + "\n"


# posets


def parse_poset(text: str) -> Poset:
    lines = _lines(text, inline_comments=False)
    _, (n,) = _header(lines, "poset", 1)
    covers = []
    labels: list = list(range(n))
    for no, line in lines:
        kind, _, rest = line.partition(" ")
        try:
            if kind == "cover":
                i, j = (int(x) for x in rest.split())
                if not (0 <= i < n and 0 <= j < n):
                    raise FormatError(f"element out of range in {line!r}", no)
                covers.append((i, j))
            elif kind == "label":
                i_text, _, label = rest.strip().partition(" ")
                i = int(i_text)
                if not 0 <= i < n:
                    raise FormatError(f"element out of range in {line!r}", no)
                labels[i] = label
            else:
                raise FormatError(f"unknown directive {kind!r}", no)
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"malformed line {line!r}", no) from None
    try:
        return Poset.from_covers(labels, covers)
    except PosetError as exc:
        raise FormatError(f"not a poset: {exc}") from None


def format_poset(p: Poset, labels: Sequence[str] | None = None) -> str:
    out = [f"poset {len(p)}"]
    out += [f"cover {i} {j}" for i, j in p.cover_pairs()]
    if labels is not None:
        out += [f"label {i} {lab}" for i, lab in enumerate(labels)]
    return "\n".join(out) + "\n"


# facets


def parse_facets(text: str) -> list[tuple[int, ...]]:
    out = []
    for no, line in _lines(text):
        try:
            vs = tuple(sorted(int(x) for x in line.split()))
        except ValueError:
            raise FormatError(f"non-integer vertex in {line!r}", no) from None
        if any(v < 0 for v in vs) or len(set(vs)) != len(vs):
            raise FormatError(f"bad simplex {line!r}", no)
        out.append(vs)
    return out


def format_facets(facets: Iterable[Sequence[int]]) -> str:
    return "".join(" ".join(map(str, f)) + "\n" for f in facets)


# matchings


def parse_matching(text: str) -> tuple[Matching, list[int]]:
    pairs, crit = [], []
    for no, line in _lines(text):
        parts = line.split()
        try:
            if parts[0] == "match" and len(parts) == 3:
                pairs.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "crit" and len(parts) == 2:
                crit.append(int(parts[1]))
            else:
                raise FormatError(f"malformed line {line!r}", no)
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"non-integer in {line!r}", no) from None
    return Matching(pairs), sorted(crit)


def format_matching(m: Matching, critical: Iterable[int]) -> str:
    out = [f"match {a} {b}" for a, b in m.pairs]
    out += [f"crit {c}" for c in sorted(critical)]
    return "".join(x + "\n" for x in out)


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not UTF-8 ({exc.reason})") from None
