"""Small builders shared by the test modules."""

import random
from collections import deque

from src.engine.composition import Network, Process
from src.model.labels import TERMINATED
from src.model.lts import Lts

TERMINATION = (TERMINATED, None)


def table_process(name, table, initial=0):
    """Leaf from a {state: [(label, target), ...]} table."""
    return Process(name, initial, lambda s: tuple(table.get(s, ())))


def single(process):
    """One-leaf network around ``process``."""
    return Network(process.name, [process], [{TERMINATION}])


def random_lts(rng: random.Random, max_states=6, labels=("a", "b", "i")) -> Lts:
    n = rng.randint(1, max_states)
    transitions = {
        (rng.randrange(n), rng.choice(labels), rng.randrange(n)) for _ in range(rng.randint(0, 3 * n))
    }
    return Lts(rng.randrange(n), n, tuple(transitions))


def texts(moves):
    return [label.text for label, _ in moves]


def fire(step, state, text):
    """Successor of ``state`` under the single move labelled ``text``."""
    targets = [t for label, t in step(state) if label.text == text]
    assert len(targets) == 1, f"{text!r}: {len(targets)} matches in {texts(step(state))}"
    return targets[0]


def reachable(step, initial):
    seen = {initial}
    queue = deque([initial])
    while queue:
        s = queue.popleft()
        for _, t in step(s):
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen
