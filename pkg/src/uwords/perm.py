"""Words, reduced forms and d-dimensional permutations.

A d-dimensional n-permutation is stored as a tuple of d-1 rows, each a tuple
holding a permutation of 1..n.  The increasing top row is implicit and never
stored.  Rows are 0-indexed here; human-facing text calls them rows 2..d.

Equal values inside a row are *incomparable*: a window such as ``1 1 2``
stands for every permutation that orders the two 1s either way while keeping
both below the 2.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import MalformedInputError

Row = tuple[int, ...]
Matrix = tuple[Row, ...]

ABOVE = "above"
BELOW = "below"


def _dense_rank(w: Sequence) -> Row:
    ranks = {v: r for r, v in enumerate(sorted(set(w)), start=1)}
    return tuple(ranks[v] for v in w)


def _check_word(w) -> None:
    if len(w) == 0:
        raise MalformedInputError("empty word")
    for v in w:
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise MalformedInputError(f"entries must be positive integers, got {v!r}")


def reduce_word(w: Sequence[int]) -> Row:
    """Replace the k-th smallest distinct value by k.

    Equal inputs map to equal outputs, so ``reduce_word([4, 1, 4]) == (2, 1, 2)``.
    """
    _check_word(w)
    return _dense_rank(w)


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    """Coerce nested iterables to a rectangular tuple-of-tuples matrix."""
    m = tuple(tuple(r) for r in rows)
    if not m:
        raise MalformedInputError("matrix has no rows")
    width = len(m[0])
    for r in m:
        if len(r) != width:
            raise MalformedInputError("ragged matrix")
        _check_word(r)
    return m


def reduce_matrix(m: Iterable[Iterable[int]]) -> Matrix:
    return tuple(_dense_rank(r) for r in as_matrix(m))


def order_isomorphic(u: Sequence[int], v: Sequence[int]) -> bool:
    if len(u) != len(v):
        raise MalformedInputError(f"length mismatch: {len(u)} vs {len(v)}")
    return reduce_word(u) == reduce_word(v)


def adjoin_relative(w: Sequence[int], anchor: int, direction: str) -> Row:
    """Append ``anchor+`` or ``anchor-`` to ``w`` and reduce.

    The new symbol sits strictly between ``anchor`` and the next larger
    (``above``) or next smaller (``below``) value of ``w``; when no such
    neighbour exists it becomes the new maximum or minimum.
    """
    _check_word(w)
    if anchor not in w:
        raise MalformedInputError(f"anchor {anchor} not present in {tuple(w)}")
    if direction == ABOVE:
        new = anchor + 0.5
    elif direction == BELOW:
        new = anchor - 0.5
    else:
        raise MalformedInputError(f"direction must be {ABOVE!r} or {BELOW!r}")
    return _dense_rank([*w, new])


def enumerate_dperms(n: int, d: int) -> Iterator[Matrix]:
    """Yield every d-dimensional n-permutation, lexicographic on concatenated rows."""
    if n < 1 or d < 2:
        raise MalformedInputError(f"need n >= 1 and d >= 2, got n={n}, d={d}")
    perms = list(itertools.permutations(range(1, n + 1)))
    yield from itertools.product(perms, repeat=d - 1)


def count_dperms(n: int, d: int) -> int:
    return factorial(n) ** (d - 1)


class WindowExpansion(NamedTuple):
    source: Matrix
    covered: tuple[Matrix, ...]


@lru_cache(maxsize=65536)
def _expand_row(row: Row) -> tuple[Row, ...]:
    # Each tie group of size g occupies a block of g consecutive ranks; all
    # g! assignments of that block to the group's positions are produced.
    groups: dict[int, list[int]] = {}
    for pos, v in enumerate(row):
        groups.setdefault(v, []).append(pos)
    choices = []
    start = 1
    for v in sorted(groups):
        positions = groups[v]
        block = range(start, start + len(positions))
        choices.append([(positions, p) for p in itertools.permutations(block)])
        start += len(positions)
    out = []
    for combo in itertools.product(*choices):
        perm = [0] * len(row)
        for positions, ranks in combo:
            for pos, r in zip(positions, ranks):
                perm[pos] = r
        out.append(tuple(perm))
    out.sort()
    return tuple(out)


def row_expansion_size(row: Sequence[int]) -> int:
    counts: dict[int, int] = {}
    for v in row:
        counts[v] = counts.get(v, 0) + 1
    return prod(factorial(c) for c in counts.values())


def expansion_size(window: Sequence[Sequence[int]]) -> int:
    return prod(row_expansion_size(r) for r in window)


def expand_window(window: Iterable[Iterable[int]]) -> WindowExpansion:
    """All d-dimensional permutations encoded by a window with incomparable ties."""
    m = as_matrix(window)
    per_row = [_expand_row(_dense_rank(r)) for r in m]
    return WindowExpansion(m, tuple(itertools.product(*per_row)))


def format_matrix(m: Iterable[Iterable[int]]) -> str:
    """Canonical text: rows newline-separated, entries space-separated."""
    return "\n".join(" ".join(str(v) for v in r) for r in m)


def compact(m: Iterable[Iterable[int]]) -> str:
    """Short label such as ``132/231``; falls back to commas once values reach 10."""
    rows = [tuple(r) for r in m]
    sep = "" if all(v < 10 for r in rows for v in r) else ","
    return "/".join(sep.join(str(v) for v in r) for r in rows)


def parse_compact(text: str) -> Matrix:
    rows = []
    for part in text.strip().split("/"):
        if "," in part:
            rows.append(tuple(int(x) for x in part.split(",")))
        else:
            rows.append(tuple(int(x) for x in part))
    return as_matrix(rows)
