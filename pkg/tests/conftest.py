from __future__ import annotations

import random
from pathlib import Path

import pytest

from uwords.io import parse_matrix
from uwords.perm import parse_compact

FIXTURES = Path(__file__).parent / "fixtures"


def load_matrix(name: str):
    return parse_matrix((FIXTURES / name).read_text())


def load_path(name: str):
    return [parse_compact(line) for line in (FIXTURES / name).read_text().split()]


def random_eulerian_multigraph(rng: random.Random, max_vertices: int = 6, max_edges: int = 12):
    """Loop-free, strongly connected, balanced multigraph built from cycles."""
    k = rng.randint(2, max_vertices)
    order = list(range(k))
    rng.shuffle(order)
    arcs = [(order[t], order[(t + 1) % k]) for t in range(k)]
    while len(arcs) < max_edges:
        room = max_edges - len(arcs)
        if room < 2 or rng.random() < 0.25:
            break
        length = rng.randint(2, min(room, 4))
        walk = [rng.randrange(k)]
        for _ in range(length - 1):
            walk.append(rng.choice([v for v in range(k) if v != walk[-1]]))
        if walk[-1] == walk[0]:
            continue
        arcs.extend(zip(walk, walk[1:] + walk[:1]))
    rng.shuffle(arcs)
    return arcs


# -- acceptance summary ------------------------------------------------------

_criteria: dict[str, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion this test belongs to")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    label = getattr(report, "criterion", None)
    if label is not None:
        _criteria.setdefault(label, []).append(report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria):
        results = _criteria[label]
        verdict = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"{verdict}  {label}  ({sum(results)}/{len(results)} checks)")
