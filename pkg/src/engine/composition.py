"""Multiway-rendezvous parallel composition.

A ``Network`` runs its leaves side by side. Each leaf lists the sync keys
``(gate, node)`` it takes part in; a label whose key appears in several sync
sets is performed jointly by all of them with identical offers, any other
label interleaves. Gates in the hide set are relabelled ``i`` after matching.
A network is itself usable as a leaf of an enclosing network.
"""

import logging
from functools import lru_cache
from itertools import product
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Sequence, Tuple

from src.errors import CompositionError
from src.model.labels import TAU_LABEL, Label, SyncKey

logger = logging.getLogger(__name__)

Move = Tuple[Label, Any]
GlobalState = Tuple[Any, ...]


class Process:
    """A leaf: a name, an initial state and a pure step function."""

    def __init__(self, name: str, initial: Any, step: Callable[[Any], Sequence[Move]]):
        self.name = name
        self.initial = initial
        self._step = step
        self._indexed = lru_cache(maxsize=None)(self._index)

    def step(self, state: Any) -> Tuple[Move, ...]:
        return tuple(self._step(state))

    def _index(self, state: Any) -> Tuple[Tuple[Move, ...], Dict[Label, List[Any]]]:
        moves = self.step(state)
        by_label: Dict[Label, List[Any]] = {}
        for label, target in moves:
            by_label.setdefault(label, []).append(target)
        return moves, by_label

    def indexed(self, state: Any):
        """Moves of ``state`` together with a label -> targets lookup."""
        return self._indexed(state)

    def __repr__(self) -> str:
        return f"Process({self.name!r})"


class Network(Process):
    def __init__(
        self,
        name: str,
        leaves: Sequence[Process],
        sync_sets: Sequence[Iterable[SyncKey]],
        hide: Iterable[str] = (),
        memoize: bool = False,
    ):
        if len(leaves) != len(sync_sets):
            raise CompositionError("one sync set per leaf is required")
        self.leaves: Tuple[Process, ...] = tuple(leaves)
        self.sync_sets: Tuple[FrozenSet[SyncKey], ...] = tuple(frozenset(s) for s in sync_sets)
        self.hide: FrozenSet[str] = frozenset(hide)
        self.memoize = memoize
        participants: Dict[SyncKey, List[int]] = {}
        for i, keys in enumerate(self.sync_sets):
            for key in keys:
                participants.setdefault(key, []).append(i)
        self._participants = {k: tuple(v) for k, v in participants.items() if len(v) > 1}
        logger.debug(
            "network %s: %d leaves, %d rendezvous keys, hiding %s",
            name,
            len(self.leaves),
            len(self._participants),
            sorted(self.hide) or "nothing",
        )
        step = lru_cache(maxsize=None)(self._global_step) if memoize else self._global_step
        super().__init__(name, tuple(leaf.initial for leaf in self.leaves), step)
        if not memoize:
            self._indexed = self._index

    def _global_step(self, state: GlobalState) -> Tuple[Move, ...]:
        indexed = [leaf.indexed(s) for leaf, s in zip(self.leaves, state)]
        out: Dict[Move, None] = {}
        for i, (moves, _) in enumerate(indexed):
            for label, target in moves:
                key = label.key
                parts = self._participants.get(key) if key is not None else None
                if parts is None or i not in parts:
                    nxt = state[:i] + (target,) + state[i + 1:]
                    out[(self._visible(label), nxt)] = None
                    continue
                if parts[0] != i:
                    continue
                choices = [[target]]
                for j in parts[1:]:
                    targets = indexed[j][1].get(label)
                    if not targets:
                        break
                    choices.append(targets)
                else:
                    for combo in product(*choices):
                        nxt = list(state)
                        for j, t in zip(parts, combo):
                            nxt[j] = t
                        out[(self._visible(label), tuple(nxt))] = None
        return tuple(out)

    def _visible(self, label: Label) -> Label:
        return TAU_LABEL if label.gate in self.hide else label

    def __repr__(self) -> str:
        return f"Network({self.name!r}, {len(self.leaves)} leaves)"


def global_step(net: Network, g: GlobalState) -> Tuple[Move, ...]:
    """All (label, successor) pairs of global state ``g``, in deterministic order."""
    if len(g) != len(net.leaves):
        raise CompositionError(f"state arity {len(g)} does not match {len(net.leaves)} leaves")
    return net.step(g)


def permute(net: Network, order: Sequence[int]) -> Network:
    """Same leaves and sync sets, reordered so that leaf ``order[k]`` comes k-th."""
    if sorted(order) != list(range(len(net.leaves))):
        raise CompositionError(f"{list(order)} is not a permutation of {len(net.leaves)} leaves")
    return Network(
        net.name,
        [net.leaves[k] for k in order],
        [net.sync_sets[k] for k in order],
        net.hide,
        net.memoize,
    )


def flatten(net: Network) -> Network:
    """Pull the leaves of nested networks up to one level.

    Each leaf keeps its own sync set and inner hide sets move to the top. This
    preserves behaviour when every leaf lists each key it offers on and hidden
    gates are only synchronised inside the network that hides them.
    """
    leaves: List[Process] = []
    syncs: List[FrozenSet[SyncKey]] = []
    hidden = set(net.hide)

    def walk(node: Network):
        hidden.update(node.hide)
        for leaf, keys in zip(node.leaves, node.sync_sets):
            if isinstance(leaf, Network):
                walk(leaf)
            else:
                leaves.append(leaf)
                syncs.append(keys)

    walk(net)
    return Network(net.name + "/flat", leaves, syncs, hidden)
