"""Index coding problem model: receivers, normalization, validation, JSON I/O.

Message indices are 0-based inside the library and 1-based in files and in
anything printed for people (``x1 ... xn``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence


class ProblemError(ValueError):
    """Raised when a problem description is malformed or invalid."""

    def __init__(self, message: str, violations: Sequence["Violation"] = ()):
        super().__init__(message)
        self.violations = list(violations)


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    receiver: int | None = None


@dataclass(frozen=True)
class RawReceiver:
    """A receiver as written in a problem file; may want several messages."""

    wants: frozenset[int]
    knows: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "wants", frozenset(self.wants))
        object.__setattr__(self, "knows", frozenset(self.knows))


@dataclass(frozen=True)
class Receiver:
    """Single-demand receiver: wants message ``wants`` and knows ``knows``."""

    wants: int
    knows: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "knows", frozenset(self.knows))

    @property
    def side_info(self) -> tuple[int, ...]:
        return tuple(sorted(self.knows))


@dataclass(frozen=True)
class IndexCodingProblem:
    n: int
    receivers: tuple[Receiver, ...]
    priority: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "receivers", tuple(self.receivers))
        if not self.priority:
            object.__setattr__(self, "priority", tuple(range(len(self.receivers))))
        else:
            object.__setattr__(self, "priority", tuple(self.priority))

    @property
    def m(self) -> int:
        return len(self.receivers)

    def with_priority(self, priority: Sequence[int]) -> "IndexCodingProblem":
        return IndexCodingProblem(self.n, self.receivers, tuple(priority))

    def is_single_unicast(self) -> bool:
        """Every receiver ``i`` wants ``x_i`` and ``m == n``."""
        return self.m == self.n and all(r.wants == i for i, r in enumerate(self.receivers))


def normalize(raw: Sequence[RawReceiver]) -> list[Receiver]:
    """Split multi-demand receivers into adjacent single-demand copies."""
    out: list[Receiver] = []
    for k, r in enumerate(raw):
        if not r.wants:
            raise ProblemError(f"receiver {k + 1} wants nothing")
        for w in sorted(r.wants):
            out.append(Receiver(w, r.knows))
    return out


def validate(icp: IndexCodingProblem) -> list[Violation]:
    """Every invariant violation found; an empty list means the problem is valid."""
    found: list[Violation] = []
    if icp.n < 1:
        found.append(Violation("size", f"message count must be >= 1, got {icp.n}"))
    if icp.m < 1:
        found.append(Violation("size", "problem has no receivers"))
    for k, r in enumerate(icp.receivers):
        if not 0 <= r.wants < icp.n:
            found.append(Violation("range", f"wanted message x{r.wants + 1} out of range", k))
        bad = sorted(j for j in r.knows if not 0 <= j < icp.n)
        if bad:
            names = ", ".join(f"x{j + 1}" for j in bad)
            found.append(Violation("range", f"side information {names} out of range", k))
        if r.wants in r.knows:
            found.append(Violation("wanted-known", "wanted message in side information", k))
    if sorted(icp.priority) != list(range(icp.m)):
        found.append(Violation("priority", "priority is not a permutation of the receivers"))
    return found


def check(icp: IndexCodingProblem) -> IndexCodingProblem:
    found = validate(icp)
    if found:
        lines = "; ".join(
            (f"R{v.receiver + 1}: " if v.receiver is not None else "") + v.message for v in found
        )
        raise ProblemError(f"invalid problem: {lines}", found)
    return icp


def _indices(values: Any, what: str) -> frozenset[int]:
    if isinstance(values, int):
        values = [values]
    if not isinstance(values, list) or not all(isinstance(v, int) for v in values):
        raise ProblemError(f"{what} must be a list of 1-based message indices")
    return frozenset(v - 1 for v in values)


def from_dict(doc: dict) -> IndexCodingProblem:
    """Build a problem from the JSON document layout (1-based indices).

    ``{"n": 5, "receivers": [{"wants": [1], "knows": [2, 3]}, ...],
    "priority": [1, 2, 3, 4, 5]}``; ``priority`` is optional.
    """
    if not isinstance(doc, dict):
        raise ProblemError("problem document must be a JSON object")
    if "n" not in doc or "receivers" not in doc:
        raise ProblemError("problem document needs 'n' and 'receivers'")
    n = doc["n"]
    if not isinstance(n, int):
        raise ProblemError("'n' must be an integer")
    if not isinstance(doc["receivers"], list):
        raise ProblemError("'receivers' must be a list")
    raw = []
    for k, entry in enumerate(doc["receivers"]):
        if not isinstance(entry, dict) or "wants" not in entry:
            raise ProblemError(f"receiver {k + 1}: needs a 'wants' field")
        wants = _indices(entry["wants"], f"receiver {k + 1} 'wants'")
        knows = _indices(entry.get("knows", []), f"receiver {k + 1} 'knows'")
        if wants & knows:
            raise ProblemError(
                f"receiver {k + 1}: wanted message in side information",
                [Violation("wanted-known", "wanted message in side information", k)],
            )
        raw.append(RawReceiver(wants, knows))
    receivers = normalize(raw)
    priority: tuple[int, ...] = ()
    if doc.get("priority") is not None:
        pr = doc["priority"]
        if not isinstance(pr, list) or not all(isinstance(p, int) for p in pr):
            raise ProblemError("'priority' must be a list of 1-based receiver indices")
        priority = tuple(p - 1 for p in pr)
    return check(IndexCodingProblem(n, tuple(receivers), priority))


def to_dict(icp: IndexCodingProblem) -> dict:
    return {
        "n": icp.n,
        "receivers": [
            {"wants": [r.wants + 1], "knows": [j + 1 for j in r.side_info]} for r in icp.receivers
        ],
        "priority": [p + 1 for p in icp.priority],
    }


def load_problem(path: str | Path) -> IndexCodingProblem:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return from_dict(doc)


def single_unicast(n: int, knows: Sequence[Sequence[int]], priority: Sequence[int] = ()) -> IndexCodingProblem:
    """Convenience constructor: receiver ``i`` wants ``x_i``; ``knows`` is 1-based."""
    receivers = tuple(Receiver(i, frozenset(j - 1 for j in k)) for i, k in enumerate(knows))
    return check(IndexCodingProblem(n, receivers, tuple(p - 1 for p in priority)))
