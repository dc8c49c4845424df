"""Explicit labelled transition systems."""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Tuple

from src.errors import LtsError

Transition = Tuple[int, str, int]


@dataclass(frozen=True)
class Lts:
    """Immutable LTS over dense state indices ``0..num_states-1``.

    Labels are stored as rendered text; transitions are kept sorted by
    (source, label, target) so equal systems compare equal.
    """

    initial: int
    num_states: int
    transitions: Tuple[Transition, ...] = field(default=())

    def __post_init__(self):
        if self.num_states < 1:
            raise LtsError("an LTS has at least one state")
        if not 0 <= self.initial < self.num_states:
            raise LtsError(f"initial state {self.initial} out of range")
        ordered = tuple(sorted(self.transitions))
        for i, (src, label, dst) in enumerate(ordered):
            if not (0 <= src < self.num_states and 0 <= dst < self.num_states):
                raise LtsError(f"transition ({src}, {label!r}, {dst}) out of range")
            if i and ordered[i - 1] == (src, label, dst):
                raise LtsError(f"duplicate transition ({src}, {label!r}, {dst})")
        object.__setattr__(self, "transitions", ordered)

    @classmethod
    def build(cls, initial: int, num_states: int, transitions: Iterable[Transition]) -> "Lts":
        """Construct from possibly repeated transitions, dropping duplicates."""
        return cls(initial, num_states, tuple(set(transitions)))

    @property
    def num_transitions(self) -> int:
        return len(self.transitions)

    @cached_property
    def successors(self) -> Tuple[Tuple[Tuple[str, int], ...], ...]:
        out: List[List[Tuple[str, int]]] = [[] for _ in range(self.num_states)]
        for src, label, dst in self.transitions:
            out[src].append((label, dst))
        return tuple(tuple(s) for s in out)

    @cached_property
    def predecessors(self) -> Tuple[Tuple[Tuple[str, int], ...], ...]:
        out: List[List[Tuple[str, int]]] = [[] for _ in range(self.num_states)]
        for src, label, dst in self.transitions:
            out[dst].append((label, src))
        return tuple(tuple(p) for p in out)

    @cached_property
    def alphabet(self) -> Tuple[str, ...]:
        return tuple(sorted({label for _, label, _ in self.transitions}))

    def renumber(self, mapping: Dict[int, int]) -> "Lts":
        """Apply a bijective state renumbering."""
        if sorted(mapping) != list(range(self.num_states)) or sorted(mapping.values()) != list(
            range(self.num_states)
        ):
            raise LtsError("renumbering must be a bijection on the state set")
        return Lts(
            mapping[self.initial],
            self.num_states,
            tuple((mapping[s], label, mapping[d]) for s, label, d in self.transitions),
        )
