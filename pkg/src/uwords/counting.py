"""Exact counts: twin cycles, removal bounds, admissible lengths, Eulerian circuits.

Everything here is integer or Fraction arithmetic.  Graph arguments may be a
:class:`~uwords.graph.ClusterGraph` or any sequence of ``(tail, head)`` pairs.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import comb, factorial
from typing import Hashable, Sequence

from .errors import InternalConsistencyError, MalformedInputError, NotEulerianError, ResourceGuardError
from .graph import EulerianDiagnosis, degree_balance, is_strongly_connected

BRUTE_FORCE_EDGE_LIMIT = 16


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise MalformedInputError(msg)


def _exact(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise InternalConsistencyError(f"{what} is not an integer: {x}")
    return x.numerator


def cycle_count(n: int, d: int, i: int) -> int:
    """Number of disjoint (n-1)-cycles formed by bundles of 2^i parallel edges."""
    _need(n >= 3 and d >= 2 and 1 <= i <= d - 1, f"need n >= 3, d >= 2, 1 <= i <= d-1; got {n}, {d}, {i}")
    starts = comb(d - 1, i) * factorial(n - 1) ** i * 2 ** (d - i - 1)
    return _exact(Fraction(starts, n - 1), "cycle count")


def max_removals(n: int, d: int) -> int:
    """Largest number of removal steps: the closed-form bound on i."""
    _need(n >= 2 and d >= 2, f"need n >= 2 and d >= 2, got {n}, {d}")
    f = factorial(n - 1)
    bound = Fraction(2 ** (d - 1), n - 1) * ((1 + f) ** (d - 1) - (1 + Fraction(f, 2)) ** (d - 1))
    value = _exact(bound, "removal bound")
    if n >= 3:
        summed = sum((2**i - 1) * cycle_count(n, d, i) for i in range(1, d))
        if summed != value:
            raise InternalConsistencyError(f"closed form {value} != summed cycle capacities {summed}")
    return value


def admissible_lengths(n: int, d: int) -> list[int]:
    """u-word lengths reachable by 0..max_removals steps, longest first."""
    base = factorial(n) ** (d - 1) + n - 1
    return [base - i * (n - 1) for i in range(max_removals(n, d) + 1)]


def uword_lower_bound(n: int, d: int) -> int:
    """2^bound: distinct u-words obtainable by choosing which steps to apply."""
    return 2 ** max_removals(n, d)


# -- arborescences and BEST --------------------------------------------------

def _arcs(g) -> list[tuple[Hashable, Hashable]]:
    return g.arcs() if hasattr(g, "arcs") else [tuple(e) for e in g]


def _vertices(g, arcs) -> list:
    if hasattr(g, "vertices"):
        return list(g.vertices)
    seen: dict = {}
    for u, v in arcs:
        seen.setdefault(u, None)
        seen.setdefault(v, None)
    return list(seen)


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free elimination; all intermediates are integers."""
    a = [list(map(int, r)) for r in matrix]
    size = len(a)
    if size == 0:
        return 1
    sign, prev = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for r in range(k + 1, size):
            for c in range(k + 1, size):
                a[r][c] = (a[r][c] * a[k][k] - a[r][k] * a[k][c]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def count_arborescences(g, root) -> int:
    """Spanning trees with every edge directed toward ``root``.

    Determinant of the out-degree Laplacian with the root's row and column
    deleted; loops cancel out of the Laplacian.
    """
    arcs = _arcs(g)
    vertices = _vertices(g, arcs)
    if not vertices:
        return 0
    if root not in vertices:
        raise MalformedInputError(f"root {root!r} is not a vertex")
    others = [v for v in vertices if v != root]
    idx = {v: k for k, v in enumerate(others)}
    lap = [[0] * len(others) for _ in others]
    for u, v in arcs:
        if u == v or u == root:
            continue
        lap[idx[u]][idx[u]] += 1
        if v != root:
            lap[idx[u]][idx[v]] -= 1
    return bareiss_determinant(lap)


def eulerian_diagnosis(g) -> EulerianDiagnosis:
    arcs = _arcs(g)
    vertices = _vertices(g, arcs)
    unbalanced = degree_balance(vertices, arcs)
    return EulerianDiagnosis(not unbalanced, is_strongly_connected(vertices, arcs), unbalanced)


def best_eulerian_count(g, start_edge: tuple) -> int:
    """Eulerian circuits beginning with ``start_edge`` (parallel edges distinguishable)."""
    arcs = _arcs(g)
    if tuple(start_edge) not in arcs:
        raise MalformedInputError(f"start edge {start_edge!r} not in graph")
    diag = eulerian_diagnosis(g)
    if not diag.ok:
        raise NotEulerianError(diag)
    outdeg = Counter(u for u, _ in arcs)
    product = 1
    for v in _vertices(g, arcs):
        product *= factorial(outdeg[v] - 1)
    return count_arborescences(g, start_edge[0]) * product


def brute_force_eulerian_count(g, start_edge: tuple, edge_limit: int = BRUTE_FORCE_EDGE_LIMIT) -> int:
    """Exhaustive count of closed trails that start with ``start_edge`` and use every edge once."""
    arcs = _arcs(g)
    if len(arcs) > edge_limit:
        raise ResourceGuardError(f"{len(arcs)} edges exceeds brute-force limit {edge_limit}")
    start_edge = tuple(start_edge)
    if start_edge not in arcs:
        raise MalformedInputError(f"start edge {start_edge!r} not in graph")
    first = arcs.index(start_edge)
    out: dict = {}
    for k, (u, _) in enumerate(arcs):
        out.setdefault(u, []).append(k)
    used = [False] * len(arcs)
    used[first] = True
    home = start_edge[0]

    def walk(v, remaining: int) -> int:
        if remaining == 0:
            return 1 if v == home else 0
        total = 0
        for k in out.get(v, ()):
            if not used[k]:
                used[k] = True
                total += walk(arcs[k][1], remaining - 1)
                used[k] = False
        return total

    return walk(start_edge[1], len(arcs) - 1)
