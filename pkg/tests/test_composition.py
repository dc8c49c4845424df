import pytest

from src.engine.bisim import bisimilar
from src.engine.composition import Network, flatten, global_step, permute
from src.engine.explorer import explore
from src.errors import CompositionError
from src.model.labels import PCIND, PDIND, TAU, TERMINATED_LABEL, make_label
from src.protocol.catalog import ScenarioConfig
from src.protocol.node import make_main, make_node
from src.protocol.types import START

from tests.helpers import TERMINATION, table_process, texts

CLOCK0 = make_label(PCIND, 0)
CLOCK1 = make_label(PCIND, 1)


def pair():
    a = table_process("a", {0: [(CLOCK0, 1)], 1: [(TERMINATED_LABEL, 1)]})
    b = table_process("b", {0: [(CLOCK0, 1), (CLOCK1, 0)], 1: [(TERMINATED_LABEL, 1)]})
    keys = {(PCIND, "0"), TERMINATION}
    return Network("pair", [a, b], [keys, keys])


def test_rendezvous_and_interleaving():
    net = pair()
    assert global_step(net, (0, 0)) == ((CLOCK0, (1, 1)), (CLOCK1, (0, 0)))
    assert global_step(net, (1, 1)) == ((TERMINATED_LABEL, (1, 1)),)


def test_a_shared_key_blocks_until_everyone_offers_it():
    assert global_step(pair(), (0, 1)) == ()


def test_hiding():
    net = pair()
    hidden = Network("hidden", net.leaves, net.sync_sets, hide=[PCIND])
    assert texts(global_step(hidden, (0, 0))) == [TAU, TAU]


def test_construction_errors():
    net = pair()
    with pytest.raises(CompositionError):
        Network("bad", net.leaves, net.sync_sets[:1])
    with pytest.raises(CompositionError):
        permute(net, [0, 0])
    with pytest.raises(CompositionError):
        global_step(net, (0,))


def test_node_hides_upper_gates(small_config):
    node = make_node(0, small_config, hide_upper=True)
    moves = node.step(node.initial)
    assert not any(label.gate.startswith(("LD", "TD")) for label, _ in moves)
    assert make_label(PDIND, 0, START) in [label for label, _ in moves]
    assert TAU in texts(moves)


def test_flat_and_nested_main_are_bisimilar(small_config):
    nested = explore(make_main(small_config)).lts
    flat = explore(make_main(small_config, flat=True)).lts
    assert nested.num_states == flat.num_states
    assert bisimilar(nested, flat)


def test_node_permutation_is_bisimilar(small_config):
    main = make_main(small_config)
    swapped = permute(main, [1, 0, 2])
    assert bisimilar(explore(main).lts, explore(swapped).lts)
    assert explore(main).lts.num_transitions == explore(swapped).lts.num_transitions


def test_flatten_keeps_leaf_sync_sets(small_config):
    flat = flatten(make_main(small_config, hide_upper=True))
    assert [leaf.name for leaf in flat.leaves] == [
        "link0", "trans0", "appli0", "link1", "trans1", "appli1", "bus"
    ]
    assert (PCIND, "0") in flat.sync_sets[0] and (PCIND, "0") not in flat.sync_sets[1]
    assert "LDREQ" in flat.hide


def test_only_the_first_request_is_enabled_initially(small_config):
    main = make_main(small_config)
    assert texts(global_step(main, main.initial)) == ["TDREQ !0 !1 !d0"]
    assert len(global_step(flatten(main), flatten(main).initial)) == 1


def test_symmetric_traffic_is_bisimilar_under_node_permutation():
    config = ScenarioConfig(name="ring", scenario="S2", n=2, budget=1, faults="none")
    main = make_main(config)
    swapped = explore(permute(main, [1, 0, 2])).lts
    lts = explore(main).lts
    assert (lts.num_states, lts.num_transitions) == (swapped.num_states, swapped.num_transitions)
    assert bisimilar(lts, swapped)
    assert bisimilar(swapped, lts)
