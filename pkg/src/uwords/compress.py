"""Planning and applying cycle-removal steps on the clustered graph.

The 2^i edges of a twin bundle are indexed by sign vectors over the bundle's
non-monotone rows: coordinate ``ABOVE`` means the last entry of that row is just
above the first, ``BELOW`` just below, and ``TIED`` that the row has been
compressed to ``s1 ... s(n-1) s1``.  A merge unites two blocks that agree on
their tied coordinates and differ in exactly one other coordinate, so every
intermediate block is a subcube and always has an edge label.

One removal step performs the same merge in every bundle of a twin cycle, which
keeps the graph balanced and drops n-1 edges.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import (
    BoundExceededError,
    InternalConsistencyError,
    MalformedInputError,
    PlanStaleError,
    UnsupportedParameterError,
)
from .graph import (
    INCREASING,
    ClusterGraph,
    Edge,
    TwinClass,
    TwinCycle,
    check_eulerian,
    parallel_cycles,
)
from .perm import (
    Matrix,
    _dense_rank,
    compact,
    count_dperms,
    expand_window,
    expansion_size,
    parse_compact,
)

ABOVE, BELOW, TIED = 0, 1, 2

Block = tuple[int, ...]


def removal_capacity(cycle: TwinCycle | int) -> int:
    """How many removal steps a twin cycle with exponent i supports: 2^i - 1."""
    i = cycle if isinstance(cycle, int) else cycle.i
    return 2**i - 1


class MergeDirective(NamedTuple):
    first: Matrix
    second: Matrix
    row: int


class RemovalStep(NamedTuple):
    cycle: int
    directives: tuple[MergeDirective, ...]


@dataclass(frozen=True)
class RemovalPlan:
    n: int
    d: int
    steps: tuple[RemovalStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def serialize(self) -> str:
        """Line-oriented text: ``cycle first+second ... row`` per step.

        Row numbers are written in d-line numbering (2..d) like everywhere else
        that rows face a human.
        """
        lines = ["# uwords removal plan", f"# n={self.n} d={self.d} steps={len(self.steps)}"]
        for step in self.steps:
            rows = {m.row for m in step.directives}
            if len(rows) != 1:
                raise MalformedInputError("serialization needs one tied row per step")
            pairs = " ".join(f"{compact(m.first)}+{compact(m.second)}" for m in step.directives)
            lines.append(f"{step.cycle} {pairs} {rows.pop() + 2}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.serialize().encode()).hexdigest()[:16]


def parse_plan(text: str) -> RemovalPlan:
    n = d = None
    steps = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                if key == "n":
                    n = int(val)
                elif key == "d":
                    d = int(val)
            continue
        toks = line.split()
        if len(toks) < 3:
            raise MalformedInputError(f"bad plan line: {line!r}")
        try:
            cycle, row = int(toks[0]), int(toks[-1]) - 2
            directives = []
            for pair in toks[1:-1]:
                a, b = pair.split("+")
                directives.append(MergeDirective(parse_compact(a), parse_compact(b), row))
        except ValueError as exc:
            raise MalformedInputError(f"bad plan line: {line!r}") from exc
        steps.append(RemovalStep(cycle, tuple(directives)))
    if n is None or d is None:
        raise MalformedInputError("plan header must give n= and d=")
    return RemovalPlan(n, d, tuple(steps))


# -- block bookkeeping -------------------------------------------------------

def block_label(bundle: TwinClass, block: Block, n: int) -> Matrix:
    """Edge label of a subcube of the bundle's twins."""
    coord = {row: k for k, row in enumerate(bundle.rows)}
    pattern = dict(bundle.monotone_pattern)
    rows = []
    for j, sig in enumerate(bundle.cluster):
        if j in pattern:
            up = tuple(range(1, n + 1))
            rows.append(up if pattern[j] == INCREASING else up[::-1])
            continue
        first = sig[0]
        state = block[coord[j]]
        if state == TIED:
            rows.append(sig + (first,))
        else:
            rows.append(_dense_rank([*sig, first + (0.5 if state == ABOVE else -0.5)]))
    return tuple(rows)


def next_merge(blocks: Iterable[Block]) -> tuple[int, Block, Block] | None:
    """Smallest (row coordinate, first, second) among mergeable block pairs."""
    blocks = sorted(blocks)
    best = None
    for x, a in enumerate(blocks):
        for b in blocks[x + 1:]:
            diff = [k for k in range(len(a)) if a[k] != b[k]]
            if len(diff) != 1 or TIED in (a[diff[0]], b[diff[0]]):
                continue
            cand = (diff[0], a, b)
            if best is None or cand < best:
                best = cand
    return best


def merge_sequence(i: int, steps: int) -> list[tuple[int, Block, Block]]:
    """The first ``steps`` merges of the canonical scheme on a 2^i hypercube."""
    if steps > removal_capacity(i):
        raise BoundExceededError(steps, removal_capacity(i))
    blocks = {tuple((v >> (i - 1 - k)) & 1 for k in range(i)) for v in range(2**i)}
    out = []
    for _ in range(steps):
        found = next_merge(blocks)
        if found is None:
            raise InternalConsistencyError(f"no mergeable blocks left among {sorted(blocks)}")
        k, a, b = found
        blocks -= {a, b}
        blocks.add(a[:k] + (TIED,) + a[k + 1:])
        out.append(found)
    return out


# -- planning ----------------------------------------------------------------

def _cycle_steps(g: ClusterGraph, cid: int, cycle: TwinCycle, count: int) -> list[RemovalStep]:
    steps = []
    for k, a, b in merge_sequence(cycle.i, count):
        row = cycle.rows[k]
        directives = tuple(
            MergeDirective(block_label(bundle, a, g.n), block_label(bundle, b, g.n), row)
            for bundle in cycle.bundles
        )
        steps.append(RemovalStep(cid, directives))
    return steps


def _checked_cycles(g: ClusterGraph) -> list[TwinCycle]:
    from .counting import max_removals

    if g.n < 3:
        raise UnsupportedParameterError("compression requires n >= 3")
    cycles = parallel_cycles(g)
    total = sum(removal_capacity(c) for c in cycles)
    if total != max_removals(g.n, g.d):
        raise InternalConsistencyError(f"cycle capacities sum to {total}, formula gives {max_removals(g.n, g.d)}")
    return cycles


def plan_removals(g: ClusterGraph, count: int) -> RemovalPlan:
    """Deterministic plan of ``count`` steps.

    Cycles are taken in canonical order and each is exhausted before the next.
    """
    if count < 0:
        raise MalformedInputError("removal count must be non-negative")
    if count == 0:
        return RemovalPlan(g.n, g.d)
    cycles = _checked_cycles(g)
    bound = sum(removal_capacity(c) for c in cycles)
    if count > bound:
        raise BoundExceededError(count, bound)
    steps: list[RemovalStep] = []
    for cid, cycle in enumerate(cycles):
        take = min(removal_capacity(cycle), count - len(steps))
        if take == 0:
            break
        steps.extend(_cycle_steps(g, cid, cycle, take))
    return RemovalPlan(g.n, g.d, tuple(steps))


def plan_from_allocation(g: ClusterGraph, allocation: Mapping[int, int]) -> RemovalPlan:
    """Plan that spends ``allocation[cycle_id]`` steps on each listed cycle."""
    cycles = _checked_cycles(g)
    steps: list[RemovalStep] = []
    for cid in sorted(allocation):
        if not 0 <= cid < len(cycles):
            raise MalformedInputError(f"no cycle with id {cid}")
        steps.extend(_cycle_steps(g, cid, cycles[cid], allocation[cid]))
    return RemovalPlan(g.n, g.d, tuple(steps))


# -- application -------------------------------------------------------------

def tie_row(label: Matrix, row: int) -> Matrix:
    """Replace the last entry of ``row`` by a copy of its first entry."""
    r = label[row]
    return label[:row] + (_dense_rank(r[:-1] + (r[0],)),) + label[row + 1:]


def _merge(edges: dict[Matrix, Edge], m: MergeDirective) -> None:
    try:
        a, b = edges[m.first], edges[m.second]
    except KeyError as exc:
        raise PlanStaleError(f"edge {compact(exc.args[0])} not in graph") from None
    merged = tie_row(a.label, m.row)
    if (a.source, a.target) != (b.source, b.target) or tie_row(b.label, m.row) != merged or a.label == b.label:
        raise PlanStaleError(f"{compact(a.label)} and {compact(b.label)} cannot merge on row {m.row + 2}")
    if merged in edges:
        raise PlanStaleError(f"merged label {compact(merged)} already present")
    cover = set(expand_window(merged).covered)
    if cover != set(expand_window(a.label).covered) | set(expand_window(b.label).covered):
        raise PlanStaleError(f"merge of {compact(a.label)} and {compact(b.label)} changes coverage")
    del edges[a.label], edges[b.label]
    edges[merged] = Edge(merged, a.source, a.target)


def apply_step(g: ClusterGraph, step: RemovalStep) -> ClusterGraph:
    edges = dict(g.by_label)
    for m in step.directives:
        _merge(edges, m)
    return g.with_edges(edges.values())


def iter_removals(g: ClusterGraph, plan: RemovalPlan) -> Iterator[ClusterGraph]:
    """Graph after each step of ``plan`` in turn."""
    if (plan.n, plan.d) != (g.n, g.d):
        raise PlanStaleError(f"plan is for n={plan.n}, d={plan.d}")
    edges = dict(g.by_label)
    for step in plan.steps:
        for m in step.directives:
            _merge(edges, m)
        yield g.with_edges(edges.values())


def apply_removals(g: ClusterGraph, plan: RemovalPlan) -> ClusterGraph:
    out = g
    for out in iter_removals(g, plan):
        pass
    return out


class RemovalDiagnosis(NamedTuple):
    balanced: bool
    strongly_connected: bool
    exact_cover: bool
    missing: int
    duplicated: int

    @property
    def ok(self) -> bool:
        return self.balanced and self.strongly_connected and self.exact_cover


def coverage_counts(labels: Sequence[Matrix], n: int, d: int) -> tuple[int, int]:
    """(missing, duplicated) permutation counts for a collection of edge labels."""
    seen = set()
    total = 0
    for label in labels:
        total += expansion_size(label)
        seen.update(expand_window(label).covered)
    return count_dperms(n, d) - len(seen), total - len(seen)


def post_removal_diagnosis(g: ClusterGraph) -> RemovalDiagnosis:
    eul = check_eulerian(g)
    missing, duplicated = coverage_counts([e.label for e in g.edges], g.n, g.d)
    exact = missing == 0 and duplicated == 0
    return RemovalDiagnosis(eul.balanced, eul.strongly_connected, exact, missing, duplicated)
