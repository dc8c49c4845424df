"""Breadth-first state-space exploration, sink classification and traces."""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.errors import TraceError, UnreachableStateError
from src.model.labels import TERMINATED
from src.model.lts import Lts
from src.engine.composition import GlobalState, Network

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 50_000

Trace = List[str]


class ExplorationLimits(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_states: int = Field(default=2_000_000, ge=1)
    max_transitions: int = Field(default=20_000_000, ge=1)
    workers: int = Field(default=1, ge=1)


@dataclass
class ExplorationStats:
    states: int
    transitions: int
    seconds: float


@dataclass
class ExplorationResult:
    lts: Lts
    deadlock_states: List[int]
    terminated_states: List[int]
    truncated: bool
    stats: ExplorationStats
    states: List[GlobalState] = field(repr=False, default_factory=list)
    parents: List[Optional[Tuple[int, str]]] = field(repr=False, default_factory=list)

    @property
    def deadlock_free(self) -> bool:
        return not self.deadlock_states


def classify(lts: Lts) -> Tuple[List[int], List[int]]:
    """Deadlocks have no transition; terminated states only loop on TERMINATED."""
    deadlocks, terminated = [], []
    for state, succ in enumerate(lts.successors):
        if not succ:
            deadlocks.append(state)
        elif all(label == TERMINATED and dst == state for label, dst in succ):
            terminated.append(state)
    return deadlocks, terminated


def explore(net: Network, limits: ExplorationLimits = ExplorationLimits()) -> ExplorationResult:
    """Explore every reachable global state of ``net`` in breadth-first order.

    States are numbered in discovery order. With several workers the successor
    computation of a frontier layer is spread over a thread pool; merging stays
    sequential in frontier order so numbering matches the single-worker run.
    """
    started = time.perf_counter()
    index: Dict[Any, int] = {net.initial: 0}
    states: List[GlobalState] = [net.initial]
    parents: List[Optional[Tuple[int, str]]] = [None]
    transitions: List[Tuple[int, str, int]] = []
    truncated = False
    frontier = [0]
    pool = ThreadPoolExecutor(max_workers=limits.workers) if limits.workers > 1 else None

    def expand(src: int):
        return net.step(states[src])

    try:
        while frontier and not truncated:
            if pool is None:
                expansions = map(expand, frontier)
            else:
                expansions = pool.map(expand, frontier)
            next_frontier: List[int] = []
            for src, moves in zip(frontier, expansions):
                for label, target in moves:
                    dst = index.get(target)
                    if dst is None:
                        if len(states) >= limits.max_states:
                            truncated = True
                            break
                        dst = len(states)
                        index[target] = dst
                        states.append(target)
                        parents.append((src, label.text))
                        next_frontier.append(dst)
                        if dst % PROGRESS_EVERY == 0:
                            logger.info("explored %d states, %d transitions", dst, len(transitions))
                    if len(transitions) >= limits.max_transitions:
                        truncated = True
                        break
                    transitions.append((src, label.text, dst))
                if truncated:
                    break
            frontier = next_frontier
    finally:
        if pool is not None:
            pool.shutdown()

    lts = Lts.build(0, len(states), transitions)
    if truncated:
        logger.warning(
            "exploration of %s truncated at %d states / %d transitions",
            net.name,
            lts.num_states,
            lts.num_transitions,
        )
        # Sinks of a partial graph say nothing about the real system.
        deadlocks, terminated = [], []
    else:
        deadlocks, terminated = classify(lts)
    stats = ExplorationStats(lts.num_states, lts.num_transitions, time.perf_counter() - started)
    logger.info(
        "%s: %d states, %d transitions, %d deadlocks, %d terminated in %.2fs",
        net.name,
        stats.states,
        stats.transitions,
        len(deadlocks),
        len(terminated),
        stats.seconds,
    )
    return ExplorationResult(lts, deadlocks, terminated, truncated, stats, states, parents)


def shortest_trace(result: ExplorationResult, target: int) -> Trace:
    """Minimum-length label sequence from the initial state to ``target``."""
    if not 0 <= target < len(result.parents):
        raise UnreachableStateError(f"state {target} was not reached")
    trace: Trace = []
    node = target
    while result.parents[node] is not None:
        src, label = result.parents[node]
        trace.append(label)
        node = src
    trace.reverse()
    return trace


def replay_trace(net: Network, trace: Sequence[str]) -> GlobalState:
    """Follow ``trace`` from the initial state; each label must select one successor."""
    state = net.initial
    for step, label in enumerate(trace):
        targets = list(dict.fromkeys(t for lbl, t in net.step(state) if lbl.text == label))
        if not targets:
            raise TraceError(f"{label!r} is not enabled", step)
        if len(targets) > 1:
            raise TraceError(f"{label!r} leads to {len(targets)} different states", step)
        state = targets[0]
    return state


def read_trace(text: str) -> Trace:
    return [line.strip() for line in text.splitlines() if line.strip()]


def write_trace(trace: Sequence[str]) -> str:
    return "".join(f"{label}\n" for label in trace)


def format_report(
    result: ExplorationResult, scenario: str, variant: str, include_time: bool = True
) -> str:
    """Fixed-field ``key: value`` exploration report."""
    fields = [
        ("scenario", scenario),
        ("variant", variant),
        ("states", result.stats.states),
        ("transitions", result.stats.transitions),
        ("deadlocks", len(result.deadlock_states)),
        ("terminated", len(result.terminated_states)),
        ("truncated", "yes" if result.truncated else "no"),
    ]
    if include_time:
        fields.append(("seconds", f"{result.stats.seconds:.2f}"))
    return "".join(f"{key}: {value}\n" for key, value in fields)
