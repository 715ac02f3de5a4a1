from collections import Counter, defaultdict
from math import factorial

import pytest

from uwords.counting import cycle_count
from uwords.errors import MalformedInputError, ResourceGuardError, UnsupportedParameterError
from uwords.graph import (
    DECREASING,
    INCREASING,
    build_cluster_graph,
    check_eulerian,
    classify_type,
    parallel_cycles,
    signature_of,
    target_signature_of,
    to_dot,
    twin_classes,
)
from uwords.perm import _dense_rank, enumerate_dperms

SMALL = [(n, d) for n in (3, 4) for d in (2, 3, 4)]


def test_signatures():
    assert signature_of([(1, 3, 2), (1, 3, 2)]) == ((1, 2), (1, 2))
    assert signature_of([(1, 2), (1, 2)]) == ((1,), (1,))
    assert signature_of([(2, 1, 5, 3, 4), (4, 1, 2, 5, 3)]) == ((2, 1, 4, 3), (3, 1, 2, 4))
    assert target_signature_of([(1, 2, 3), (1, 3, 2)]) == ((1, 2), (2, 1))
    assert target_signature_of([(1, 2), (1, 2)]) == ((1,), (1,))
    assert target_signature_of([(1, 2, 1), (1, 2, 1)]) == ((2, 1), (2, 1))
    with pytest.raises(MalformedInputError):
        signature_of([(1, 1, 2)])


def test_graph_n3_d2():
    g = build_cluster_graph(3, 2)
    assert len(g.vertices) == 2 and len(g.edges) == 6
    pairs = Counter((e.source, e.target) for e in g.edges)
    a, b = ((1, 2),), ((2, 1),)
    assert pairs == {(a, a): 1, (a, b): 2, (b, a): 2, (b, b): 1}


def test_single_cluster_for_n2():
    g = build_cluster_graph(2, 3)
    assert g.vertices == (((1,), (1,)),)
    assert len(g.edges) == 4 and all(e.source == e.target for e in g.edges)


def test_graph_n3_d3():
    g = build_cluster_graph(3, 3)
    assert len(g.vertices) == 4 and len(g.edges) == 36
    assert set(Counter(e.source for e in g.edges).values()) == {9}


def test_edge_budget_guard():
    with pytest.raises(ResourceGuardError):
        build_cluster_graph(4, 3, edge_budget=100)
    with pytest.raises(UnsupportedParameterError):
        build_cluster_graph(1, 3)


@pytest.mark.parametrize("n, d", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2), (3, 4), (3, 5)])
def test_fresh_graph_invariants(n, d):
    g = build_cluster_graph(n, d)
    assert len(g.vertices) == factorial(n - 1) ** (d - 1)
    assert len(g.edges) == factorial(n) ** (d - 1)
    assert check_eulerian(g).ok
    for e in g.edges:
        assert signature_of(e.label) == e.source
        assert target_signature_of(e.label) == e.target


def test_classify_type():
    t = classify_type([(4, 3, 2, 1), (2, 1, 4, 3), (1, 4, 3, 2), (1, 2, 3, 4)])
    assert t.i == 2 and t.non_monotone_rows == (1, 2)
    assert t.monotone_pattern == ((0, DECREASING), (3, INCREASING))
    assert classify_type([(1, 2, 3), (1, 3, 2)]).i == 1
    assert classify_type([(3, 1, 2), (2, 3, 1), (1, 2, 3)]).i == 2
    assert classify_type([(1, 2, 3), (1, 2, 3)]).i == 0
    assert classify_type([(1, 3, 2, 4)]).i == 0
    with pytest.raises(UnsupportedParameterError):
        classify_type([(1, 2)])


def test_twin_examples():
    g = build_cluster_graph(3, 3)
    classes = {frozenset(c.members) for c in twin_classes(g)}
    assert frozenset({((1, 3, 2), (1, 3, 2)), ((1, 3, 2), (2, 3, 1)), ((2, 3, 1), (1, 3, 2)), ((2, 3, 1), (2, 3, 1))}) in classes
    assert frozenset({((1, 2, 3), (1, 3, 2)), ((1, 2, 3), (2, 3, 1))}) in classes
    g4 = build_cluster_graph(4, 4)
    members = {m for c in twin_classes(g4) if c.i == 3 for m in c.members}
    assert ((3, 1, 2, 4), (2, 4, 1, 3), (2, 3, 4, 1)) in members


def brute_twin_classes(n, d):
    groups = defaultdict(set)
    for p in enumerate_dperms(n, d):
        rows, mono = [], []
        ok = True
        for j, r in enumerate(p):
            if r == tuple(range(1, n + 1)):
                mono.append((j, "+"))
            elif r == tuple(range(n, 0, -1)):
                mono.append((j, "-"))
            elif abs(r[0] - r[-1]) == 1:
                rows.append(j)
            else:
                ok = False
        if ok and rows:
            sig = tuple(_dense_rank(r[:-1]) for r in p)
            groups[(sig, tuple(rows), tuple(mono))].add(p)
    return groups


@pytest.mark.parametrize("n, d", SMALL)
def test_twin_classes_match_brute_force(n, d):
    g = build_cluster_graph(n, d)
    ours = {frozenset(c.members) for c in twin_classes(g)}
    theirs = {frozenset(v) for v in brute_twin_classes(n, d).values()}
    assert ours == theirs


@pytest.mark.parametrize("n, d", SMALL)
def test_one_full_class_per_cluster(n, d):
    g = build_cluster_graph(n, d)
    full = Counter(c.cluster for c in twin_classes(g) if c.i == d - 1)
    assert set(full) == set(g.vertices) and set(full.values()) == {1}
    for c in twin_classes(g):
        assert len(c.members) == 2**c.i


def test_some_clusters_lack_lower_twin_classes():
    g = build_cluster_graph(4, 3)
    with_one = {c.cluster for c in twin_classes(g) if c.i == 1}
    assert with_one and with_one != set(g.vertices)
    # every cluster still has its top-exponent class when d = 2
    g2 = build_cluster_graph(4, 2)
    assert {c.cluster for c in twin_classes(g2)} == set(g2.vertices)


@pytest.mark.parametrize("n, d", SMALL)
def test_bundles_are_exclusive(n, d):
    g = build_cluster_graph(n, d)
    pair_count = Counter((e.source, e.target) for e in g.edges)
    for c in twin_classes(g):
        targets = {e.target for e in g.edges if e.label in set(c.members)}
        assert len(targets) == 1
        (y,) = targets
        assert pair_count[(c.cluster, y)] == 2**c.i
    # distinct i-twin classes in one cluster are fed from distinct clusters
    by_cluster = defaultdict(list)
    for c in twin_classes(g):
        by_cluster[(c.cluster, c.i)].append(c)
    feeder = {}
    for c in twin_classes(g):
        feeder[(c.target, c.rows, c.monotone_pattern)] = c.cluster
    for (x, i), cs in by_cluster.items():
        sources = [feeder[(x, c.rows, c.monotone_pattern)] for c in cs]
        assert len(set(sources)) == len(sources)


@pytest.mark.parametrize("n, d", SMALL)
def test_twin_cycles(n, d):
    g = build_cluster_graph(n, d)
    cycles = parallel_cycles(g)
    covered = [b.key for c in cycles for b in c.bundles]
    assert len(covered) == len(set(covered)) == len(twin_classes(g))
    for c in cycles:
        assert len(c.bundles) == n - 1
        assert len(set(c.clusters)) == n - 1
        for t, b in enumerate(c.bundles):
            nxt = c.bundles[(t + 1) % len(c.bundles)]
            assert b.target == nxt.cluster
            assert (b.i, b.rows, b.monotone_pattern) == (c.i, c.rows, c.monotone_pattern)
            for j in c.rows:
                s = b.cluster[j]
                assert nxt.cluster[j] == _dense_rank(s[1:] + (s[0],))
    per_i = Counter(c.i for c in cycles)
    assert per_i == {i: cycle_count(n, d, i) for i in range(1, d)}


@pytest.mark.parametrize("n, d, i, count", [(3, 3, 1, 4), (3, 3, 2, 2), (3, 2, 1, 1), (4, 2, 1, 2)])
def test_cycle_examples(n, d, i, count):
    assert sum(c.i == i for c in parallel_cycles(build_cluster_graph(n, d))) == count


def test_n3_d2_cycle_passes_both_clusters():
    (c,) = parallel_cycles(build_cluster_graph(3, 2))
    assert set(c.clusters) == {((1, 2),), ((2, 1),)}


def test_canonical_cycle_order():
    cycles = parallel_cycles(build_cluster_graph(3, 3))
    keys = [(c.i, c.bundles[0].cluster) for c in cycles]
    assert keys == sorted(keys)
    assert [c.i for c in cycles] == [1, 1, 1, 1, 2, 2]
    assert cycles == parallel_cycles(build_cluster_graph(3, 3))


def test_check_eulerian_detects_damage():
    g = build_cluster_graph(3, 3)
    assert check_eulerian(g) == (True, True, ())
    drop = next(e for e in g.edges if e.source != e.target)
    broken = g.with_edges(e for e in g.edges if e != drop)
    diag = check_eulerian(broken)
    assert not diag.balanced and set(diag.unbalanced) == {drop.source, drop.target}
    loop = next(e for e in g.edges if e.source == e.target)
    assert check_eulerian(g.with_edges(e for e in g.edges if e != loop)).balanced
    assert check_eulerian(build_cluster_graph(2, 3)).ok


def test_strong_connectivity_failure():
    g = build_cluster_graph(3, 2)
    only_loops = g.with_edges(e for e in g.edges if e.source == e.target)
    diag = check_eulerian(only_loops)
    assert diag.balanced and not diag.strongly_connected


def test_dot_export():
    text = to_dot(build_cluster_graph(3, 2))
    assert text.startswith("digraph clusters {")
    assert 'c0 [label="12"];' in text and 'c1 [label="21"];' in text
    assert 'c0 -> c0 [label="123"];' in text
    assert text.count("->") == 6
    assert text == to_dot(build_cluster_graph(3, 2))
