import random

import pytest

from src.engine.bisim import bisimilar, minimize
from src.model.lts import Lts

from tests.helpers import random_lts


def test_equivalent_branches_collapse():
    lts = Lts(0, 5, ((0, "a", 1), (0, "a", 2), (1, "b", 3), (2, "b", 4)))
    small = minimize(lts)
    assert (small.num_states, small.num_transitions) == (3, 2)
    assert small == Lts(0, 3, ((0, "a", 1), (1, "b", 2)))


def test_unreachable_states_are_dropped():
    lts = Lts(0, 3, ((0, "a", 0), (1, "b", 2)))
    assert minimize(lts) == Lts(0, 1, ((0, "a", 0),))


def test_branching_structure_matters():
    # a.(b + c) versus a.b + a.c
    left = Lts(0, 4, ((0, "a", 1), (1, "b", 2), (1, "c", 3)))
    right = Lts(0, 5, ((0, "a", 1), (0, "a", 2), (1, "b", 3), (2, "c", 4)))
    assert not bisimilar(left, right)
    assert bisimilar(left, left)


def test_internal_steps_are_not_abstracted():
    assert not bisimilar(Lts(0, 3, ((0, "i", 1), (1, "a", 2))), Lts(0, 2, ((0, "a", 1),)))


def test_cycles_unfold():
    one = Lts(0, 1, ((0, "a", 0),))
    three = Lts(1, 3, ((0, "a", 1), (1, "a", 2), (2, "a", 0)))
    assert bisimilar(one, three)
    assert minimize(three) == one


@pytest.mark.parametrize("seed", range(30))
def test_minimize_is_sound_and_idempotent(seed):
    lts = random_lts(random.Random(seed), max_states=8)
    small = minimize(lts)
    assert bisimilar(lts, small)
    assert bisimilar(small, lts)
    again = minimize(small)
    assert (again.num_states, again.num_transitions) == (small.num_states, small.num_transitions)
    assert small.num_states <= lts.num_states


def test_renumbering_preserves_bisimilarity():
    rng = random.Random(7)
    for _ in range(20):
        lts = random_lts(rng)
        order = list(range(lts.num_states))
        rng.shuffle(order)
        assert bisimilar(lts, lts.renumber(dict(enumerate(order))))


@pytest.mark.parametrize("seed", range(20))
def test_bisimilarity_is_transitive(seed):
    rng = random.Random(seed)
    lts = random_lts(rng, max_states=7)
    order = list(range(lts.num_states))
    rng.shuffle(order)
    renumbered = lts.renumber(dict(enumerate(order)))
    small = minimize(lts)
    assert bisimilar(renumbered, lts) and bisimilar(lts, small)
    assert bisimilar(renumbered, small)
    others = [random_lts(rng, max_states=3, labels=("a", "b")) for _ in range(6)]
    for a in others:
        for b in others:
            for c in others:
                if bisimilar(a, b) and bisimilar(b, c):
                    assert bisimilar(a, c)
