"""Clustered graph of overlapping d-dimensional permutations.

Vertices are signatures: the reduced first n-1 columns shared by every
permutation in a cluster.  Each permutation contributes one edge, from the
cluster of its first n-1 columns to the cluster of its last n-1 columns.
After compression an edge label may carry a tied row ``s1 s2 ... s(n-1) s1``
standing for two permutations at once.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    InternalConsistencyError,
    MalformedInputError,
    ResourceGuardError,
    UnsupportedParameterError,
)
from .perm import Matrix, _dense_rank, as_matrix, compact, count_dperms, enumerate_dperms

DEFAULT_EDGE_BUDGET = 10**7

INCREASING = "inc"
DECREASING = "dec"


def _window_signature(m: Matrix, cols: slice) -> Matrix:
    out = []
    for r in m:
        part = r[cols]
        if len(set(part)) != len(part):
            raise MalformedInputError(f"tied entries inside signature columns of {compact(m)}")
        out.append(_dense_rank(part))
    return tuple(out)


def signature_of(m: Iterable[Iterable[int]]) -> Matrix:
    """Reduced form of the first n-1 columns (the source cluster)."""
    m = as_matrix(m)
    if len(m[0]) < 2:
        raise MalformedInputError("need at least 2 columns")
    return _window_signature(m, slice(0, -1))


def target_signature_of(m: Iterable[Iterable[int]]) -> Matrix:
    """Reduced form of the last n-1 columns (the target cluster)."""
    m = as_matrix(m)
    if len(m[0]) < 2:
        raise MalformedInputError("need at least 2 columns")
    return _window_signature(m, slice(1, None))


@dataclass(frozen=True, order=True)
class Edge:
    label: Matrix
    source: Matrix
    target: Matrix

    def __str__(self) -> str:
        return compact(self.label)


class EulerianDiagnosis(NamedTuple):
    balanced: bool
    strongly_connected: bool
    unbalanced: tuple[Matrix, ...] = ()

    @property
    def ok(self) -> bool:
        return self.balanced and self.strongly_connected


@dataclass(frozen=True)
class ClusterGraph:
    n: int
    d: int
    vertices: tuple[Matrix, ...]
    edges: tuple[Edge, ...] = field(repr=False)

    @cached_property
    def by_label(self) -> dict[Matrix, Edge]:
        return {e.label: e for e in self.edges}

    @cached_property
    def out_edges(self) -> dict[Matrix, tuple[Edge, ...]]:
        out: dict[Matrix, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.source].append(e)
        return {v: tuple(sorted(es)) for v, es in out.items()}

    def arcs(self) -> list[tuple[Matrix, Matrix]]:
        return [(e.source, e.target) for e in self.edges]

    def with_edges(self, edges: Iterable[Edge]) -> "ClusterGraph":
        return ClusterGraph(self.n, self.d, self.vertices, tuple(sorted(edges)))


def build_cluster_graph(n: int, d: int, edge_budget: int = DEFAULT_EDGE_BUDGET) -> ClusterGraph:
    if n < 2 or d < 2:
        raise UnsupportedParameterError(f"need n >= 2 and d >= 2, got n={n}, d={d}")
    total = count_dperms(n, d)
    if total > edge_budget:
        raise ResourceGuardError(f"(n!)^(d-1) = {total} edges exceeds budget {edge_budget}")
    vertices = tuple(enumerate_dperms(n - 1, d))
    edges = []
    for p in enumerate_dperms(n, d):
        src = tuple(_dense_rank(r[:-1]) for r in p)
        dst = tuple(_dense_rank(r[1:]) for r in p)
        edges.append(Edge(p, src, dst))
    edges.sort()
    return ClusterGraph(n, d, vertices, tuple(edges))


# -- types and twins ---------------------------------------------------------

class TypeIndex(NamedTuple):
    i: int
    non_monotone_rows: tuple[int, ...]
    monotone_pattern: tuple[tuple[int, str], ...]


def _monotone(row: Sequence[int]) -> str | None:
    n = len(row)
    if all(row[k] == k + 1 for k in range(n)):
        return INCREASING
    if all(row[k] == n - k for k in range(n)):
        return DECREASING
    return None


def classify_type(p: Iterable[Iterable[int]]) -> TypeIndex:
    """Type i > 0 when i rows have |x_n - x_1| = 1 and every other row is monotone."""
    p = as_matrix(p)
    if len(p[0]) < 3:
        raise UnsupportedParameterError("twin types are only defined for n >= 3")
    twin_rows, pattern = [], []
    for j, r in enumerate(p):
        kind = _monotone(r)
        if kind is not None:
            pattern.append((j, kind))
        elif abs(r[-1] - r[0]) == 1:
            twin_rows.append(j)
        else:
            return TypeIndex(0, (), ())
    if not twin_rows:
        return TypeIndex(0, (), ())
    return TypeIndex(len(twin_rows), tuple(twin_rows), tuple(pattern))


@dataclass(frozen=True)
class TwinClass:
    i: int
    cluster: Matrix
    rows: tuple[int, ...]
    monotone_pattern: tuple[tuple[int, str], ...]
    members: tuple[Matrix, ...]

    @property
    def key(self):
        return (self.i, self.cluster, self.rows, self.monotone_pattern)

    @property
    def target(self) -> Matrix:
        return target_signature_of(self.members[0])


@dataclass(frozen=True)
class TwinCycle:
    i: int
    rows: tuple[int, ...]
    monotone_pattern: tuple[tuple[int, str], ...]
    bundles: tuple[TwinClass, ...]

    @property
    def clusters(self) -> tuple[Matrix, ...]:
        return tuple(b.cluster for b in self.bundles)


def twin_classes(g: ClusterGraph) -> list[TwinClass]:
    """Group every type-i (i > 0) edge label of a fresh graph into its twin class."""
    if g.n < 3:
        raise UnsupportedParameterError("twin classes require n >= 3")
    groups: dict[tuple, list[Matrix]] = defaultdict(list)
    for e in g.edges:
        t = classify_type(e.label)
        if t.i:
            groups[(t.i, e.source, t.non_monotone_rows, t.monotone_pattern)].append(e.label)
    classes = []
    for (i, cluster, rows, pattern), members in sorted(groups.items()):
        if len(members) != 2**i:
            raise InternalConsistencyError(
                f"twin class at {compact(cluster)} rows {rows} has {len(members)} members, expected {2**i}"
            )
        classes.append(TwinClass(i, cluster, rows, pattern, tuple(sorted(members))))
    return classes


def parallel_cycles(g: ClusterGraph) -> list[TwinCycle]:
    """Partition all twin-class bundles into cycles of length n-1, in canonical order.

    Canonical order is ascending exponent, then smallest cluster signature on the
    cycle; each cycle lists its bundles starting from that smallest cluster.
    """
    classes = twin_classes(g)
    index = {(c.cluster, c.rows, c.monotone_pattern): c for c in classes}
    seen: set = set()
    cycles = []
    for start in classes:
        if start.key in seen:
            continue
        chain = [start]
        seen.add(start.key)
        cur = start
        while True:
            nxt = index.get((cur.target, cur.rows, cur.monotone_pattern))
            if nxt is None:
                raise InternalConsistencyError(f"bundle from {compact(cur.cluster)} has no continuation")
            if nxt.key == start.key:
                break
            if nxt.key in seen:
                raise InternalConsistencyError("twin bundles do not form disjoint cycles")
            seen.add(nxt.key)
            chain.append(nxt)
            cur = nxt
        if len(chain) != g.n - 1:
            raise InternalConsistencyError(f"twin cycle of length {len(chain)}, expected {g.n - 1}")
        k = min(range(len(chain)), key=lambda t: chain[t].cluster)
        chain = chain[k:] + chain[:k]
        cycles.append(TwinCycle(start.i, start.rows, start.monotone_pattern, tuple(chain)))
    cycles.sort(key=lambda c: (c.i, c.bundles[0].cluster, c.rows, c.monotone_pattern))
    return cycles


# -- Eulerian diagnosis ------------------------------------------------------

def _reachable(start, adj) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def is_strongly_connected(vertices: Sequence, arcs: Iterable[tuple]) -> bool:
    """Every vertex reaches, and is reached from, the first vertex."""
    if not vertices:
        return True
    fwd: dict = defaultdict(set)
    back: dict = defaultdict(set)
    for u, v in arcs:
        fwd[u].add(v)
        back[v].add(u)
    root = vertices[0]
    everything = set(vertices)
    return _reachable(root, fwd) >= everything and _reachable(root, back) >= everything


def degree_balance(vertices: Sequence, arcs: Iterable[tuple]) -> tuple:
    indeg: dict = defaultdict(int)
    outdeg: dict = defaultdict(int)
    for u, v in arcs:
        outdeg[u] += 1
        indeg[v] += 1
    return tuple(v for v in vertices if indeg[v] != outdeg[v])


def check_eulerian(g: ClusterGraph) -> EulerianDiagnosis:
    arcs = g.arcs()
    unbalanced = degree_balance(g.vertices, arcs)
    return EulerianDiagnosis(not unbalanced, is_strongly_connected(g.vertices, arcs), unbalanced)


# -- export ------------------------------------------------------------------

def to_dot(g: ClusterGraph, name: str = "clusters") -> str:
    """Graphviz DOT text; nodes in lexicographic signature order, one arc per edge."""
    ids = {v: f"c{k}" for k, v in enumerate(sorted(g.vertices))}
    lines = [f"digraph {name} {{"]
    for v in sorted(g.vertices):
        lines.append(f'  {ids[v]} [label="{compact(v)}"];')
    for e in g.edges:
        lines.append(f'  {ids[e.source]} -> {ids[e.target]} [label="{compact(e.label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
