"""Transition labels: a gate plus rendered value offers."""

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple

from src.errors import LtsError

TAU = "i"
TERMINATED = "TERMINATED"

# Link <-> transaction layer
LDREQ = "LDREQ"
LDCON = "LDCON"
LDIND = "LDIND"
LDRES = "LDRES"
# Link <-> phy (bus)
PAREQ = "PAREQ"
PACON = "PACON"
PDREQ = "PDREQ"
PDIND = "PDIND"
PCIND = "PCIND"
# Transaction <-> application
TDREQ = "TDREQ"
TDCON = "TDCON"
TDIND = "TDIND"
TDRES = "TDRES"

LINK_TRANS_GATES = (LDREQ, LDCON, LDIND, LDRES)
PHY_GATES = (PAREQ, PACON, PDREQ, PDIND, PCIND)
TRANS_APPLI_GATES = (TDREQ, TDCON, TDIND, TDRES)
UPPER_GATES = LINK_TRANS_GATES + TRANS_APPLI_GATES

# Allowed offer counts per gate; the node id is always the first offer.
GATE_ARITY = {
    TAU: (0,),
    TERMINATED: (0,),
    LDREQ: (3,),
    LDCON: (2, 3),
    LDIND: (5,),
    LDRES: (3,),
    PAREQ: (2,),
    PACON: (2,),
    PDREQ: (2,),
    PDIND: (2,),
    PCIND: (1,),
    TDREQ: (3,),
    TDCON: (2, 3),
    TDIND: (5,),
    TDRES: (3,),
}

SyncKey = Tuple[str, Optional[str]]


@dataclass(frozen=True)
class Label:
    gate: str
    offers: Tuple[str, ...] = ()

    def __post_init__(self):
        arity = GATE_ARITY.get(self.gate)
        if arity is None:
            raise LtsError(f"unknown gate {self.gate!r}")
        if len(self.offers) not in arity:
            raise LtsError(f"gate {self.gate} takes {arity} offers, got {len(self.offers)}")

    @cached_property
    def text(self) -> str:
        return render_label(self)

    @property
    def key(self) -> Optional[SyncKey]:
        """Synchronisation key (gate, node); ``None`` for the internal action."""
        if self.gate == TAU:
            return None
        if self.gate == TERMINATED:
            return (TERMINATED, None)
        return (self.gate, self.offers[0])


def render_label(label: Label) -> str:
    """Canonical text ``GATE !o1 !o2``; the internal action renders as ``i``."""
    if label.gate == TAU:
        return TAU
    return " !".join((label.gate,) + tuple(label.offers))


def make_label(gate: str, *offers) -> Label:
    return Label(gate, tuple(str(o) for o in offers))


TAU_LABEL = Label(TAU)
TERMINATED_LABEL = Label(TERMINATED)
