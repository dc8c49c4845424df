"""Aldebaran (.aut) reading and writing."""

import logging
import re
from typing import BinaryIO, List, Tuple

from src.errors import AutParseError, LtsError
from src.model.lts import Lts

logger = logging.getLogger(__name__)

_HEADER = re.compile(r"^des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_EDGE = re.compile(r'^\(\s*(\d+)\s*,\s*(?:"((?:[^"\\]|\\.)*)"|([^,"]*?))\s*,\s*(\d+)\s*\)\s*$')


def aut_dumps(lts: Lts) -> str:
    lines = [f"des ({lts.initial}, {lts.num_transitions}, {lts.num_states})"]
    lines.extend(f'({src}, "{label}", {dst})' for src, label, dst in lts.transitions)
    return "\n".join(lines) + "\n"


def aut_write(lts: Lts, sink: BinaryIO) -> None:
    """Write ``lts`` to a binary stream; transitions come out in sorted order."""
    sink.write(aut_dumps(lts).encode("utf-8"))


def aut_loads(text: str) -> Lts:
    lines = text.splitlines()
    if not lines:
        raise AutParseError("missing des header", None)
    match = _HEADER.match(lines[0])
    if match is None:
        raise AutParseError("malformed des header", 1)
    initial, expected, num_states = (int(g) for g in match.groups())

    edges: List[Tuple[int, str, int]] = []
    seen = set()
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        if len(edges) == expected:
            raise AutParseError(f"more transitions than the {expected} declared", lineno)
        edge = _EDGE.match(raw.strip())
        if edge is None:
            raise AutParseError(f"malformed transition {raw.strip()!r}", lineno)
        src, quoted, bare, dst = edge.groups()
        src, dst = int(src), int(dst)
        label = quoted if quoted is not None else bare.strip()
        if src >= num_states or dst >= num_states:
            raise AutParseError(f"state index out of range (S = {num_states})", lineno)
        if (src, label, dst) in seen:
            raise AutParseError("duplicate transition", lineno)
        seen.add((src, label, dst))
        edges.append((src, label, dst))

    if len(edges) != expected:
        raise AutParseError(f"header declares {expected} transitions, found {len(edges)}", None)
    try:
        lts = Lts(initial, num_states, tuple(edges))
    except LtsError as e:
        raise AutParseError(str(e), 1) from e
    logger.debug("read AUT with %d states and %d transitions", num_states, expected)
    return lts


def aut_read(source: BinaryIO) -> Lts:
    """Parse an AUT byte stream; errors name the offending line."""
    return aut_loads(source.read().decode("utf-8"))
