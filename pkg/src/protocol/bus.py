"""The bus: the physical layers of all nodes together with the cable.

Arbitration, clocking, signal distribution with fault injection, conflict
resolution and the two kinds of gap. Dropping a delivery and starting an
arbitration reset gap are internal ``i`` steps.
"""

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import List, Tuple, Union

from src.model.labels import (
    PACON,
    PAREQ,
    PCIND,
    PDIND,
    PDREQ,
    TAU_LABEL,
    TERMINATED_LABEL,
    Label,
    make_label,
)
from src.protocol.types import (
    ARBRESGAP,
    DEFAULT_DOMAINS,
    DUMMY,
    END,
    SUBACTGAP,
    ArbKind,
    ArbResult,
    BoolTable,
    DestSig,
    PayloadDomains,
    Signal,
    Token,
    corrupt,
    dest_values,
    is_ack,
    is_data,
    is_dest,
    is_header,
    signal_alphabet,
    table_any,
    table_const,
    table_members,
    table_set,
)


class GapKind(Token):
    SUBACTION = "SUBACTION"
    RESET = "RESET"


@dataclass(frozen=True)
class FaultFlags:
    invalidate_dest: bool = True
    corrupt: bool = True
    drop: bool = True
    dummy: bool = True


# Phases

@dataclass(frozen=True)
class BusIdle:
    pass


@dataclass(frozen=True)
class Decide:
    requester: int


@dataclass(frozen=True)
class Busy:
    """``after_data``: the last signal was data, so a dummy extension may follow.
    ``after_source``: the last signal opened a packet, so the next one is its destination.
    """

    owner: int
    clocked: bool = False
    after_data: bool = False
    after_source: bool = False


@dataclass(frozen=True)
class Distribute:
    """``destination``: the signal is the second of a packet and may be invalidated."""

    sender: int
    signal: Signal
    cursor: int
    destination: bool = False


@dataclass(frozen=True)
class AfterEnd:
    """Granting pending immediate requests; ``clocking`` is owed a PCIND."""

    owners: BoolTable
    clocking: Union[int, None] = None


@dataclass(frozen=True)
class Resolve:
    owners: BoolTable


@dataclass(frozen=True)
class GapBroadcast:
    kind: GapKind
    cursor: int = 0


BusPhase = Union[BusIdle, Decide, Busy, Distribute, AfterEnd, Resolve, GapBroadcast]


@dataclass(frozen=True)
class BusState:
    n: int
    phase: BusPhase
    fairness: BoolTable
    immediate: BoolTable
    corrupted_dest: BoolTable
    lost: BoolTable
    faults: FaultFlags = FaultFlags()
    domains: PayloadDomains = DEFAULT_DOMAINS


Move = Tuple[Label, BusState]


def bus_initial(
    n: int, faults: FaultFlags = FaultFlags(), domains: PayloadDomains = DEFAULT_DOMAINS
) -> BusState:
    if n < 2:
        raise ValueError("the bus connects at least two nodes")
    empty = table_const(n, False)
    return BusState(n, BusIdle(), empty, empty, empty, empty, faults, domains)


def _next_recipient(s: BusState, sender: int, after: int) -> int:
    """First node id >= ``after`` other than the sender; ``n`` when none is left."""
    node = after
    while node < s.n and node == sender:
        node += 1
    return node


def _start_distribution(s: BusState, sender: int, sig: Signal, destination: bool = False) -> BusState:
    return replace(s, phase=Distribute(sender, sig, _next_recipient(s, sender, 0), destination))


def _after_end(s: BusState) -> BusState:
    """State reached once End has reached every recipient."""
    s = replace(s, corrupted_dest=table_const(s.n, False))
    if table_any(s.immediate):
        return _grant_next(replace(s, phase=AfterEnd(table_const(s.n, False))))
    return replace(s, phase=GapBroadcast(GapKind.SUBACTION))


def _grant_next(s: BusState) -> BusState:
    """Leave the confirmation phase once every immediate requester was granted."""
    phase = s.phase
    if phase.clocking is not None or table_any(s.immediate):
        return s
    owners = table_members(phase.owners)
    if len(owners) == 1:
        return replace(s, phase=Busy(owners[0], clocked=True))
    return replace(s, phase=Resolve(phase.owners))


def _deliveries(
    s: BusState, recipient: int, sig: Signal, destination: bool
) -> List[Tuple[Label, Signal, bool]]:
    """(label, delivered signal, marks corrupted-dest) options for one recipient."""
    faults = s.faults
    options: List[Tuple[Label, Signal, bool]] = []
    if is_header(sig) and s.corrupted_dest[recipient]:
        bad = corrupt(sig)
        options.append((make_label(PDIND, recipient, bad), bad, False))
    else:
        options.append((make_label(PDIND, recipient, sig), sig, False))
        if destination and faults.invalidate_dest:
            for other in dest_values(s.n):
                if other != sig.dest:
                    wrong = DestSig(other)
                    options.append((make_label(PDIND, recipient, wrong), wrong, True))
        if (is_header(sig) or is_data(sig) or is_ack(sig)) and faults.corrupt:
            bad = corrupt(sig)
            if bad != sig:
                options.append((make_label(PDIND, recipient, bad), bad, False))
    if (is_header(sig) or is_data(sig) or is_ack(sig)) and faults.drop:
        options.append((TAU_LABEL, None, False))
    return options


def _distribute(s: BusState, phase: Distribute) -> List[Move]:
    moves: List[Move] = []
    recipient = phase.cursor
    for label, _, marks in _deliveries(s, recipient, phase.signal, phase.destination):
        nxt = s
        if marks:
            nxt = replace(nxt, corrupted_dest=table_set(nxt.corrupted_dest, recipient, True))
        cursor = _next_recipient(s, phase.sender, recipient + 1)
        if cursor < s.n:
            moves.append((label, replace(nxt, phase=replace(phase, cursor=cursor))))
            continue
        if phase.signal == END:
            moves.append((label, _after_end(nxt)))
            continue
        after_data = is_data(phase.signal) and s.faults.dummy
        after_source = is_dest(phase.signal) and not phase.destination
        busy = Busy(phase.sender, after_data=after_data, after_source=after_source)
        moves.append((label, replace(nxt, phase=busy)))
    return moves


def _arbitration_requests(s: BusState, owner: Union[int, None], immediate: bool) -> List[Move]:
    """Fair requests outside Idle are answered LOST later; immediate ones are recorded."""
    moves: List[Move] = []
    phase = s.phase
    for j in range(s.n):
        if j == owner:
            continue
        if not s.lost[j] and not (isinstance(phase, Decide) and phase.requester == j):
            moves.append(
                (make_label(PAREQ, j, ArbKind.FAIR), replace(s, lost=table_set(s.lost, j, True)))
            )
        if immediate and not s.immediate[j]:
            moves.append(
                (
                    make_label(PAREQ, j, ArbKind.IMMEDIATE),
                    replace(s, immediate=table_set(s.immediate, j, True)),
                )
            )
    return moves


def _lost_confirmations(s: BusState) -> List[Move]:
    return [
        (make_label(PACON, j, ArbResult.LOST), replace(s, lost=table_set(s.lost, j, False)))
        for j in table_members(s.lost)
    ]


def _idle(s: BusState, phase: BusIdle) -> List[Move]:
    moves: List[Move] = []
    for j in range(s.n):
        if not s.lost[j]:
            moves.append((make_label(PAREQ, j, ArbKind.FAIR), replace(s, phase=Decide(j))))
    moves += _lost_confirmations(s)
    if table_any(s.fairness):
        reset = replace(s, phase=GapBroadcast(GapKind.RESET), fairness=table_const(s.n, False))
        moves.append((TAU_LABEL, reset))
    if not table_any(s.lost):
        moves.append((TERMINATED_LABEL, s))
    return moves


def _decide(s: BusState, phase: Decide) -> List[Move]:
    j = phase.requester
    if s.fairness[j]:
        moves = [(make_label(PACON, j, ArbResult.LOST), replace(s, phase=BusIdle()))]
    else:
        won = replace(s, phase=Busy(j), fairness=table_set(s.fairness, j, True))
        moves = [(make_label(PACON, j, ArbResult.WON), won)]
    return moves + _arbitration_requests(s, j, immediate=False) + _lost_confirmations(s)


def _busy(s: BusState, phase: Busy) -> List[Move]:
    owner = phase.owner
    if phase.clocked:
        moves = [
            (
                make_label(PDREQ, owner, sig),
                _start_distribution(s, owner, sig, phase.after_source and is_dest(sig)),
            )
            for sig in signal_alphabet(s.n, s.domains)
        ]
    else:
        clocked = Busy(owner, True, after_source=phase.after_source)
        moves = [(make_label(PCIND, owner), replace(s, phase=clocked))]
        if phase.after_data:
            # Length fault: the packet is extended right after its data signal.
            moves.append((TAU_LABEL, _start_distribution(s, owner, DUMMY)))
    return moves + _arbitration_requests(s, owner, immediate=True) + _lost_confirmations(s)


def _distribution(s: BusState, phase: Distribute) -> List[Move]:
    return (
        _distribute(s, phase)
        + _arbitration_requests(s, phase.sender, immediate=True)
        + _lost_confirmations(s)
    )


def _confirm(s: BusState, phase: AfterEnd) -> List[Move]:
    if phase.clocking is not None:
        nxt = replace(s, phase=replace(phase, clocking=None))
        moves = [(make_label(PCIND, phase.clocking), _grant_next(nxt))]
    else:
        j = table_members(s.immediate)[0]
        granted = replace(
            s,
            immediate=table_set(s.immediate, j, False),
            phase=AfterEnd(table_set(phase.owners, j, True), clocking=j),
        )
        moves = [(make_label(PACON, j, ArbResult.WON), granted)]
    return moves + _arbitration_requests(s, None, immediate=False) + _lost_confirmations(s)


def _resolve(s: BusState, phase: Resolve) -> List[Move]:
    owners = table_members(phase.owners)
    moves: List[Move] = []
    if len(owners) > 1:
        for j in owners:
            left = replace(s, phase=Resolve(table_set(phase.owners, j, False)))
            moves.append((make_label(PDREQ, j, END), left))
    else:
        (j,) = owners
        for sig in signal_alphabet(s.n, s.domains):
            if sig == END:
                nxt = replace(s, phase=GapBroadcast(GapKind.SUBACTION))
            else:
                nxt = _start_distribution(s, j, sig)
            moves.append((make_label(PDREQ, j, sig), nxt))
    return moves + _arbitration_requests(s, None, immediate=False) + _lost_confirmations(s)


def _gap(s: BusState, phase: GapBroadcast) -> List[Move]:
    sig = SUBACTGAP if phase.kind is GapKind.SUBACTION else ARBRESGAP
    if phase.cursor + 1 < s.n:
        nxt = replace(s, phase=replace(phase, cursor=phase.cursor + 1))
    else:
        nxt = replace(s, phase=BusIdle())
    moves = [(make_label(PDIND, phase.cursor, sig), nxt)]
    return moves + _arbitration_requests(s, None, immediate=False) + _lost_confirmations(s)


_HANDLERS = {
    BusIdle: _idle,
    Decide: _decide,
    Busy: _busy,
    Distribute: _distribution,
    AfterEnd: _confirm,
    Resolve: _resolve,
    GapBroadcast: _gap,
}


@lru_cache(maxsize=None)
def bus_step(s: BusState) -> Tuple[Move, ...]:
    return tuple(dict.fromkeys(_HANDLERS[type(s.phase)](s, s.phase)))
