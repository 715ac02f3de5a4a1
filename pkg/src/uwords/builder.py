"""Eulerian traversal of the clustered graph and its rendering as a u-word.

The matrix grows one column per path edge.  Each row is extended on its own:
first by reusing an existing value (or one past the maximum) when that already
gives the required pattern, otherwise by inserting a value just below the
appropriate interior entry and shifting every entry at or above it up by one.
"""
from __future__ import annotations

import json
import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .compress import RemovalPlan, iter_removals, plan_removals
from .errors import (
    InfeasibleExtensionError,
    InternalConsistencyError,
    MalformedInputError,
    NotEulerianError,
    UnsupportedParameterError,
)
from .graph import DEFAULT_EDGE_BUDGET, ClusterGraph, Edge, build_cluster_graph, check_eulerian
from .perm import Matrix, Row, _dense_rank, as_matrix, compact, count_dperms, format_matrix, reduce_matrix


@dataclass(frozen=True)
class UWordMatrix:
    n: int
    d: int
    rows: Matrix
    removals: int = 0
    plan_digest: str | None = field(default=None, compare=False)

    @property
    def columns(self) -> int:
        return len(self.rows[0])

    def to_text(self) -> str:
        return f"{self.d} {self.n} {self.columns}\n{format_matrix(self.rows)}\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "d": self.d,
                "n": self.n,
                "columns": self.columns,
                "rows": [list(r) for r in self.rows],
                "removals": self.removals,
                "plan_digest": self.plan_digest,
            }
        )

    def normalized(self) -> "UWordMatrix":
        """Same u-word with each row relabelled to 1..k; windows are unaffected."""
        return UWordMatrix(self.n, self.d, reduce_matrix(self.rows), self.removals, self.plan_digest)


def eulerian_path(g: ClusterGraph, seed: int | None = None) -> list[Edge]:
    """Closed Eulerian trail from the smallest signature (Hierholzer).

    Out-edges are taken in label order, or in a seeded shuffled order.
    """
    diag = check_eulerian(g)
    if not diag.ok:
        raise NotEulerianError(diag)
    adj = {v: list(es) for v, es in g.out_edges.items()}
    if seed is not None:
        rng = random.Random(seed)
        for v in sorted(adj):
            rng.shuffle(adj[v])
    pos = dict.fromkeys(adj, 0)
    start = min(g.vertices)
    stack: list[tuple[Matrix, Edge | None]] = [(start, None)]
    circuit: list[Edge] = []
    while stack:
        v, via = stack[-1]
        if pos[v] < len(adj[v]):
            e = adj[v][pos[v]]
            pos[v] += 1
            stack.append((e.target, e))
        else:
            stack.pop()
            if via is not None:
                circuit.append(via)
    circuit.reverse()
    if len(circuit) != len(g.edges):
        raise InternalConsistencyError("Hierholzer walk missed edges")
    return circuit


class _RowState:
    """One row under construction plus its sorted distinct values."""

    def __init__(self, values: Sequence[int]):
        self.values = list(values)
        self.distinct = sorted(set(self.values))

    def extend(self, b: Row) -> None:
        n = len(b)
        interior = self.values[len(self.values) - (n - 1):]
        last = b[-1]
        lo = hi = None
        for x, r in zip(interior, b[:-1]):
            if r == last:
                lo = hi = x
                break
            if r < last and (lo is None or x > lo):
                lo = x
            elif r > last and (hi is None or x < hi):
                hi = x
        if lo is not None and lo == hi:
            v = lo
        else:
            v = self._reuse(lo, hi)
            if v is None:
                # hi is the b[-1]-th smallest interior value
                v = hi
                self.values = [x + 1 if x >= v else x for x in self.values]
                k = bisect_left(self.distinct, v)
                self.distinct[k:] = [x + 1 for x in self.distinct[k:]]
        k = bisect_left(self.distinct, v)
        if k == len(self.distinct) or self.distinct[k] != v:
            self.distinct.insert(k, v)
        self.values.append(v)
        got = _dense_rank(self.values[len(self.values) - n:])
        if got != tuple(_dense_rank(b)):
            raise InfeasibleExtensionError(
                f"row {self.values} cannot be extended to match {b}: window reduces to {got}"
            )

    def _reuse(self, lo: int | None, hi: int | None) -> int | None:
        k = 0 if lo is None else bisect_right(self.distinct, lo)
        if k < len(self.distinct) and (hi is None or self.distinct[k] < hi):
            return self.distinct[k]
        if hi is None:
            return self.distinct[-1] + 1
        return None


def _check_compatible(x: Sequence[Sequence[int]], b: Matrix) -> None:
    n = len(b[0])
    if len(x) != len(b):
        raise MalformedInputError("row count mismatch between partial u-word and edge")
    for xr, br in zip(x, b):
        if _dense_rank(xr[len(xr) - (n - 1):]) != _dense_rank(br[:-1]):
            raise MalformedInputError(f"edge {compact(b)} does not continue the current suffix")


def extend_matrix(x: Iterable[Iterable[int]], b: Iterable[Iterable[int]]) -> Matrix:
    """Append one column to partial u-word ``x`` so its last window reduces to ``b``."""
    x, b = as_matrix(x), as_matrix(b)
    _check_compatible(x, b)
    out = []
    for xr, br in zip(x, b):
        st = _RowState(xr)
        st.extend(br)
        out.append(tuple(st.values))
    return tuple(out)


def build_uword(path: Sequence[Edge | Matrix], n: int | None = None, d: int | None = None) -> UWordMatrix:
    labels = [as_matrix(p.label if isinstance(p, Edge) else p) for p in path]
    if not labels:
        raise MalformedInputError("empty path")
    first = reduce_matrix(labels[0])
    states = [_RowState(r) for r in first]
    for b in labels[1:]:
        _check_compatible([s.values for s in states], b)
        for st, br in zip(states, b):
            st.extend(br)
    n = n or len(first[0])
    d = d or len(first) + 1
    return UWordMatrix(n, d, tuple(tuple(s.values) for s in states))


def window_fidelity(u: UWordMatrix, path: Sequence[Edge | Matrix]) -> list[int]:
    """Indices k where columns k..k+n-1 do not reduce to the k-th path label."""
    bad = []
    for k, p in enumerate(path):
        label = p.label if isinstance(p, Edge) else p
        window = tuple(_dense_rank(r[k:k + u.n]) for r in u.rows)
        if window != reduce_matrix(label):
            bad.append(k)
    return bad


def compressed_graph(
    n: int,
    d: int,
    removals: int = 0,
    plan: RemovalPlan | None = None,
    edge_budget: int = DEFAULT_EDGE_BUDGET,
) -> tuple[ClusterGraph, RemovalPlan]:
    """Fresh clustered graph with ``removals`` canonical steps (or ``plan``) applied."""
    if n < 2 or d < 2:
        raise UnsupportedParameterError(f"need n >= 2 and d >= 2, got n={n}, d={d}")
    if (removals or (plan and plan.steps)) and n < 3:
        raise UnsupportedParameterError("compression requires n >= 3")
    g = build_cluster_graph(n, d, edge_budget)
    if plan is None:
        plan = plan_removals(g, removals)
    for g in iter_removals(g, plan):
        pass
    return g, plan


def generate(
    n: int,
    d: int,
    removals: int = 0,
    seed: int | None = None,
    plan: RemovalPlan | None = None,
    edge_budget: int = DEFAULT_EDGE_BUDGET,
) -> UWordMatrix:
    """A u-word of (n!)^(d-1) + n - 1 - removals*(n-1) columns."""
    from .compress import post_removal_diagnosis

    g, plan = compressed_graph(n, d, removals, plan, edge_budget)
    diag = post_removal_diagnosis(g)
    if not diag.ok:
        raise NotEulerianError(diag)
    path = eulerian_path(g, seed)
    u = build_uword(path, n, d)
    steps = len(plan.steps)
    expected = count_dperms(n, d) + n - 1 - steps * (n - 1)
    if u.columns != expected:
        raise InternalConsistencyError(f"built {u.columns} columns, expected {expected}")
    return UWordMatrix(n, d, u.rows, steps, plan.digest())
