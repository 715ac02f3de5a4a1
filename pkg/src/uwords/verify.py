"""Exact-cover check of candidate u-words and u-cycles.

Every window of n consecutive columns is expanded into the permutations it
encodes (ties anywhere in a row are incomparable), and the multiset of all
expansions must equal the set of d-dimensional n-permutations exactly.
This module never consults the graph or the builder.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .errors import MalformedInputError
from .perm import Matrix, as_matrix, compact, count_dperms, enumerate_dperms, expand_window, expansion_size

DEFAULT_REPORT_LIMIT = 50
DETAIL_BUDGET = 10**6


def _windows(u: Matrix, n: int, cyclic: bool) -> list[Matrix]:
    length = len(u[0])
    if cyclic:
        return [tuple(tuple(r[(k + t) % length] for t in range(n)) for r in u) for k in range(length)]
    return [tuple(r[k:k + n] for r in u) for k in range(length - n + 1)]


def _validated(u: Iterable[Iterable[int]], n: int) -> Matrix:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise MalformedInputError(f"n must be a positive integer, got {n!r}")
    m = as_matrix(u)
    if len(m[0]) < n:
        raise MalformedInputError(f"need at least n={n} columns, got {len(m[0])}")
    return m


def oracle_cover_multiset(u: Iterable[Iterable[int]], n: int, cyclic: bool = False) -> Counter:
    """Multiset of all permutations covered by the windows of ``u``."""
    m = _validated(u, n)
    cover: Counter = Counter()
    for w in _windows(m, n, cyclic):
        cover.update(expand_window(w).covered)
    return cover


@dataclass
class VerifyReport:
    accepted: bool
    n: int
    d: int
    cyclic: bool
    windows: int
    expected: int
    covered_total: int
    missing_count: int | None
    duplicated_count: int | None
    missing: list[Matrix] = field(default_factory=list)
    duplicated: list[tuple[Matrix, int]] = field(default_factory=list)
    window_of_fault: list[int] = field(default_factory=list)
    truncated: bool = False

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "n": self.n,
            "d": self.d,
            "cyclic": self.cyclic,
            "windows": self.windows,
            "expected": self.expected,
            "covered_total": self.covered_total,
            "missing_count": self.missing_count,
            "duplicated_count": self.duplicated_count,
            "missing": [[list(r) for r in p] for p in self.missing],
            "duplicated": [{"permutation": [list(r) for r in p], "count": c} for p, c in self.duplicated],
            "window_of_fault": self.window_of_fault,
            "truncated": self.truncated,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_text(self) -> str:
        kind = "u-cycle" if self.cyclic else "u-word"
        head = f"{'accepted' if self.accepted else 'rejected'}: {kind} for d={self.d}, n={self.n}"
        lines = [head, f"windows {self.windows}, covered {self.covered_total} of {self.expected}"]
        if not self.accepted:
            lines.append(f"missing {self.missing_count}, duplicated {self.duplicated_count}")
            lines.extend(f"  missing {compact(p)}" for p in self.missing)
            lines.extend(f"  duplicated {compact(p)} x{c}" for p, c in self.duplicated)
            if self.window_of_fault:
                lines.append("  faulty windows " + " ".join(str(k) for k in self.window_of_fault))
            if self.truncated:
                lines.append("  (lists truncated)")
        return "\n".join(lines) + "\n"


def _verify(u, n: int, cyclic: bool, limit: int) -> VerifyReport:
    m = _validated(u, n)
    d = len(m) + 1
    windows = _windows(m, n, cyclic)
    expected = count_dperms(n, d)
    total = sum(expansion_size(w) for w in windows)
    report = VerifyReport(False, n, d, cyclic, len(windows), expected, total, None, None)
    if total > DETAIL_BUDGET:
        # Size law already decides the verdict; details would be too large.
        report.truncated = True
        return report

    cover: Counter = Counter()
    owners: dict[Matrix, list[int]] = {}
    for k, w in enumerate(windows):
        for p in expand_window(w).covered:
            cover[p] += 1
            owners.setdefault(p, []).append(k)
    dups = sorted((p, c) for p, c in cover.items() if c > 1)
    report.duplicated_count = sum(c - 1 for _, c in dups)
    report.missing_count = expected - len(cover)
    report.accepted = total == expected and not dups and report.missing_count == 0
    if report.accepted:
        return report

    report.duplicated = dups[:limit]
    report.window_of_fault = sorted({k for p, _ in dups for k in owners[p]})
    if report.missing_count and expected <= DETAIL_BUDGET:
        missing = (p for p in enumerate_dperms(n, d) if p not in cover)
        report.missing = [p for _, p in zip(range(limit), missing)]
    report.truncated = len(dups) > limit or len(report.missing) < report.missing_count
    return report


def verify_uword(u: Iterable[Iterable[int]], n: int, limit: int = DEFAULT_REPORT_LIMIT) -> VerifyReport:
    """Check that every permutation occurs in exactly one linear window."""
    return _verify(u, n, False, limit)


def verify_ucycle(u: Iterable[Iterable[int]], n: int, limit: int = DEFAULT_REPORT_LIMIT) -> VerifyReport:
    """Same as :func:`verify_uword` with windows wrapping around the end."""
    return _verify(u, n, True, limit)
