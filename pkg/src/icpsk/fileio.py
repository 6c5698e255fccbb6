"""Text formats: code lists, pair files, optimizer dumps and run manifests."""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from .codes import IndexCode, format_code, parse_code
from .geometry import PskMapping

_PAIR = re.compile(r"^\(\s*(\{[^}]*\})\s*,\s*(\([^)]*\))\s*\)$")
_BRACED = re.compile(r"\{[^}]*\}")


class FormatError(ValueError):
    """Malformed code list or pair file; the message carries the line number."""


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_pair(text: str, n: int) -> tuple[IndexCode, PskMapping]:
    """``({x1, x2+x3, x4+x5},(0,1,2,3,4,5,6,7))`` -> (code, mapping)."""
    m = _PAIR.match(text.strip())
    if not m:
        raise FormatError(f"not a (code, mapping) pair: {text.strip()!r}")
    code = parse_code(m.group(1), n)
    M = PskMapping.parse(m.group(2))
    if M.order != 1 << code.N:
        raise FormatError(f"mapping has {M.order} points but the code needs {1 << code.N}")
    return code, M


def format_pair(code: IndexCode, M: PskMapping) -> str:
    return f"({format_code(code)},{M.render()})"


def parse_pairs(text: str, n: int, source: str = "<pairs>") -> list[tuple[IndexCode, PskMapping]]:
    out = []
    for lineno, line in _content_lines(text):
        try:
            out.append(parse_pair(line, n))
        except ValueError as exc:
            raise FormatError(f"{source}:{lineno}: {exc}") from exc
    if not out:
        raise FormatError(f"{source}: no pairs found")
    return out


def load_pairs(path: str | Path, n: int) -> list[tuple[IndexCode, PskMapping]]:
    return parse_pairs(Path(path).read_text(), n, str(path))


def parse_codes(text: str, n: int, source: str = "<codes>") -> list[IndexCode]:
    """Codes in braces (any number per line) or one unbraced code per line."""
    out = []
    for lineno, line in _content_lines(text):
        chunks = _BRACED.findall(line) or [line]
        for chunk in chunks:
            try:
                out.append(parse_code(chunk, n))
            except ValueError as exc:
                raise FormatError(f"{source}:{lineno}: {exc}") from exc
    if not out:
        raise FormatError(f"{source}: no codes found")
    return out


def load_codes(spec: str, n: int) -> list[IndexCode]:
    """``spec`` is a path to a code list, or the codes themselves inline."""
    p = Path(spec)
    if p.is_file():
        return parse_codes(p.read_text(), n, str(p))
    return parse_codes(spec, n, "--codes")


def sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


@dataclass
class RunManifest:
    command: str
    problem: str
    problem_sha256: str
    tool_version: str
    parameters: dict = field(default_factory=dict)
    seed: int | None = None
    inputs: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return canonical_json(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        return cls(**json.loads(text))


def cascade_document(result, manifest: RunManifest | None = None) -> dict:
    """JSON-ready view of a :class:`~icpsk.optimizer.CascadeResult`."""
    trace = [
        {
            "receiver": s.receiver + 1,
            "eta": s.eta,
            "survivors": s.survivors,
            "gap": s.gap,
            "delta": s.delta,
            "gain_db": s.gain,
            "skipped": s.skipped,
        }
        for s in result.trace
    ]
    pairs = []
    for p in result.pairs():
        pairs.append(
            {
                "pair": p.render(),
                "code": [f"{c:0{p.code.n}b}" for c in p.code.columns],
                "mapping": list(p.mapping.words),
                "distances": list(p.profile.distances),
                "gains_db": list(p.profile.gains),
            }
        )
    doc = {
        "N": result.N,
        "arbitrary": result.arbitrary,
        "survivors": result.count,
        "trace": trace,
        "pairs": pairs,
    }
    if manifest is not None:
        doc["manifest"] = asdict(manifest)
    return doc
