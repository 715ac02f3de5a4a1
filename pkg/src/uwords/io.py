"""Reading matrices in the text and JSON formats used by the CLI.

Text format: an optional header line ``d n L`` followed by d-1 lines of L
space-separated positive integers.  Without a header every non-blank line
is a row.  JSON format: an object with a ``rows`` array and optional ``n``.
"""
from __future__ import annotations

import json

from .errors import MalformedInputError
from .perm import Matrix, as_matrix


def _ints(line: str) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise MalformedInputError(f"non-integer entry in line {line!r}") from exc


def parse_matrix(text: str) -> tuple[Matrix, int | None]:
    """Return ``(rows, n)`` where ``n`` is known only if the input states it."""
    stripped = text.strip()
    if not stripped:
        raise MalformedInputError("empty input")
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
            rows = obj["rows"]
        except (ValueError, KeyError, TypeError) as exc:
            raise MalformedInputError(f"bad JSON matrix: {exc}") from exc
        n = obj.get("n")
        if n is not None and (isinstance(n, bool) or not isinstance(n, int)):
            raise MalformedInputError("JSON field n must be an integer")
        return as_matrix(rows), n

    lines = [_ints(line) for line in stripped.splitlines() if line.strip()]
    head = lines[0]
    if len(lines) >= 2 and len(head) == 3:
        d, n, length = head
        body = lines[1:]
        if d >= 2 and len(body) == d - 1 and all(len(r) == length for r in body):
            return as_matrix(body), n
    return as_matrix(lines), None
