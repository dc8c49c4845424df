"""Node and system assembly: Link || Trans || Appli per node, all nodes || Bus."""

import logging
from typing import FrozenSet, List

from src.engine.composition import Network, Process, flatten
from src.model.labels import (
    LINK_TRANS_GATES,
    PHY_GATES,
    TERMINATED,
    TRANS_APPLI_GATES,
    UPPER_GATES,
    SyncKey,
)
from src.protocol.appli import appli_initial, appli_step
from src.protocol.bus import bus_initial, bus_step
from src.protocol.catalog import ScenarioConfig
from src.protocol.link import link_initial, link_step
from src.protocol.trans import trans_initial, trans_step
from src.protocol.types import DEFAULT_DOMAINS, PayloadDomains

logger = logging.getLogger(__name__)

TERMINATION: SyncKey = (TERMINATED, None)


def gate_keys(gates, node: int) -> FrozenSet[SyncKey]:
    return frozenset((gate, str(node)) for gate in gates)


def make_node(
    node: int,
    config: ScenarioConfig,
    hide_upper: bool = False,
    domains: PayloadDomains = DEFAULT_DOMAINS,
) -> Network:
    """Link, Trans and Appli of one node, rendezvous on the LD* and TD* gates."""
    n = config.n
    link = Process(f"link{node}", link_initial(node, n, domains), link_step)
    trans = Process(f"trans{node}", trans_initial(node, n, config.variant, domains), trans_step)
    appli = Process(
        f"appli{node}",
        appli_initial(node, n, config.scenario, config.budget, domains),
        appli_step,
    )
    syncs = [
        gate_keys(LINK_TRANS_GATES + PHY_GATES, node) | {TERMINATION},
        gate_keys(LINK_TRANS_GATES + TRANS_APPLI_GATES, node) | {TERMINATION},
        gate_keys(TRANS_APPLI_GATES, node) | {TERMINATION},
    ]
    hide = UPPER_GATES if hide_upper else ()
    return Network(f"node{node}", [link, trans, appli], syncs, hide, memoize=True)


def make_main(
    config: ScenarioConfig,
    hide_upper: bool = False,
    flat: bool = False,
    domains: PayloadDomains = DEFAULT_DOMAINS,
) -> Network:
    """Every node in parallel with the bus, rendezvous on the PA*, PD* and PC* gates.

    ``flat`` builds the same system with all leaves at one level.
    """
    n = config.n
    nodes: List[Network] = [make_node(k, config, hide_upper, domains) for k in range(n)]
    bus = Process("bus", bus_initial(n, config.fault_flags(), domains), bus_step)
    syncs = [gate_keys(PHY_GATES, k) | {TERMINATION} for k in range(n)]
    bus_keys = frozenset().union(*(gate_keys(PHY_GATES, k) for k in range(n))) | {TERMINATION}
    main = Network(config.name, nodes + [bus], syncs + [bus_keys])
    logger.info(
        "assembled %s: %s, n=%d, budget=%d, variant %s, faults %s",
        config.name,
        config.scenario,
        n,
        config.budget,
        config.variant,
        config.faults_text,
    )
    return flatten(main) if flat else main
