"""Strong bisimulation: minimization and equivalence by signature refinement."""

import logging
from collections import deque
from typing import Dict, List, Tuple

from src.model.lts import Lts

logger = logging.getLogger(__name__)


def _refine(num_states: int, successors) -> List[int]:
    """Coarsest stable partition, as a block number per state.

    Blocks are numbered in order of their smallest state, so the result only
    depends on the input numbering.
    """
    block = [0] * num_states
    count = 1 if num_states else 0
    rounds = 0
    while True:
        rounds += 1
        ids: Dict[Tuple, int] = {}
        new_block = []
        for s in range(num_states):
            sig = (block[s], frozenset((label, block[d]) for label, d in successors[s]))
            new_block.append(ids.setdefault(sig, len(ids)))
        block = new_block
        if len(ids) == count:
            break
        count = len(ids)
    logger.debug("partition of %d states stable after %d rounds: %d blocks", num_states, rounds, count)
    return block


def minimize(lts: Lts) -> Lts:
    """Quotient of ``lts`` by strong bisimulation, restricted to reachable blocks.

    The quotient is renumbered breadth-first from the initial block.
    """
    block = _refine(lts.num_states, lts.successors)
    edges: Dict[int, set] = {}
    for src, label, dst in lts.transitions:
        edges.setdefault(block[src], set()).add((label, block[dst]))

    order: Dict[int, int] = {block[lts.initial]: 0}
    queue = deque([block[lts.initial]])
    while queue:
        b = queue.popleft()
        for _, d in sorted(edges.get(b, ())):
            if d not in order:
                order[d] = len(order)
                queue.append(d)

    transitions = [
        (order[b], label, order[d]) for b in order for label, d in edges.get(b, ())
    ]
    result = Lts(0, len(order), transitions)
    logger.info(
        "minimized %d states / %d transitions to %d states / %d transitions",
        lts.num_states,
        lts.num_transitions,
        result.num_states,
        result.num_transitions,
    )
    return result


def bisimilar(left: Lts, right: Lts) -> bool:
    """Strong bisimilarity of the initial states, decided on the disjoint union."""
    offset = left.num_states
    successors = list(left.successors) + [
        tuple((label, d + offset) for label, d in succ) for succ in right.successors
    ]
    block = _refine(offset + right.num_states, successors)
    return block[left.initial] == block[right.initial + offset]
