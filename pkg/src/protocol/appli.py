"""Application processes driving the transaction layer.

Three traffic patterns:

* S1: node 0 sends its budget of addressed requests to node 1.
* S2: every node sends its budget to node (i + 1) mod n, concurrently.
* S3: node 0 sends a broadcast first and addressed requests to node 1 after
  that; node 1 answers each addressed request with Hold and a concatenated
  response while its own budget lasts.

Every node answers addressed indications.
"""

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import List, Optional, Tuple

from src.model.labels import TDCON, TDIND, TDREQ, TDRES, TERMINATED_LABEL, Label, make_label
from src.protocol.trans import confirmations, indications
from src.protocol.types import (
    BROADCAST,
    DEFAULT_DOMAINS,
    Dest,
    HoldRelease,
    IndKind,
    PayloadDomains,
    Token,
)


class Scenario(Token):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"


HOLD_NODE = 1


@dataclass(frozen=True)
class AppliState:
    node: int
    n: int
    scenario: Scenario
    requests: int
    budget: int
    awaiting: bool = False
    owed: Optional[int] = None
    concat_to: Optional[int] = None
    domains: PayloadDomains = DEFAULT_DOMAINS


Move = Tuple[Label, AppliState]


def appli_initial(
    node: int, n: int, scenario: Scenario, budget: int, domains: PayloadDomains = DEFAULT_DOMAINS
) -> AppliState:
    if budget < 0:
        raise ValueError("request budget must be non-negative")
    return AppliState(node, n, Scenario(scenario), budget, budget, domains=domains)


def is_initiator(s: AppliState) -> bool:
    if s.scenario is Scenario.S2:
        return True
    return s.node == 0


def next_destination(s: AppliState) -> Dest:
    if s.scenario is Scenario.S2:
        return (s.node + 1) % s.n
    if s.scenario is Scenario.S3 and s.budget == s.requests:
        return BROADCAST
    return 1


def is_done(s: AppliState) -> bool:
    own_work = is_initiator(s) and s.budget > 0
    return not (own_work or s.awaiting or s.owed is not None or s.concat_to is not None)


def _wants_hold(s: AppliState) -> bool:
    return (
        s.scenario is Scenario.S3
        and s.node == HOLD_NODE
        and s.budget > 0
        and not s.awaiting
    )


@lru_cache(maxsize=None)
def appli_step(s: AppliState) -> Tuple[Move, ...]:
    moves: List[Move] = []
    if s.owed is not None:
        hold = _wants_hold(s)
        hr = HoldRelease.HOLD if hold else HoldRelease.RELEASE
        after = replace(s, owed=None, concat_to=s.owed if hold else None)
        moves += [(make_label(TDRES, s.node, ack, hr), after) for ack in s.domains.acks]
    elif s.concat_to is not None:
        moves += [
            (
                make_label(TDREQ, s.node, s.concat_to, data),
                replace(s, concat_to=None, budget=s.budget - 1, awaiting=True),
            )
            for data in s.domains.data
        ]
    elif is_initiator(s) and s.budget > 0 and not s.awaiting:
        dest = next_destination(s)
        moves += [
            (make_label(TDREQ, s.node, dest, data), replace(s, budget=s.budget - 1, awaiting=True))
            for data in s.domains.data
        ]

    if s.awaiting:
        moves += [
            (make_label(TDCON, s.node, *conf), replace(s, awaiting=False))
            for conf in confirmations(s.domains)
        ]
    if s.owed is None and s.concat_to is None:
        for ind in indications(s.node, s.n, s.domains):
            after = replace(s, owed=int(ind[1])) if ind[0] == IndKind.ADDR else s
            moves.append((make_label(TDIND, s.node, *ind), after))
    if is_done(s):
        moves.append((TERMINATED_LABEL, s))
    return tuple(dict.fromkeys(moves))
