"""Link-layer process of one node.

``link_step`` enumerates every (label, successor) pair of a link state. Inputs
from the bus (PDIND) are offered for the whole signal alphabet so the link
never blocks a delivery in a state that is meant to listen to the cable.
"""

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Type, Union

from src.model.labels import (
    LDCON,
    LDIND,
    LDREQ,
    LDRES,
    PACON,
    PAREQ,
    PCIND,
    PDIND,
    PDREQ,
    TERMINATED_LABEL,
    Label,
    make_label,
)
from src.protocol.types import (
    BROADCAST,
    DEFAULT_DOMAINS,
    END,
    PREFIX,
    START,
    AckSig,
    ArbKind,
    ArbResult,
    Confirmation,
    Crc,
    Dest,
    HoldRelease,
    IndKind,
    Packet,
    PayloadDomains,
    Signal,
    Token,
    dest_values,
    is_ack,
    is_data,
    is_dest,
    is_gap,
    is_header,
    is_node_dest,
    is_terminator,
    make_packet,
    packet_signals,
    signal_alphabet,
)


class AckPhase(Token):
    EXPECT_START = "EXPECT_START"
    EXPECT_ACK = "EXPECT_ACK"
    EXPECT_END = "EXPECT_END"


class Addressing(Token):
    UNKNOWN = "UNKNOWN"
    TO_ME = "TO_ME"
    BROADCAST = "BROADCAST"
    OTHER = "OTHER"


class SendAckPhase(Token):
    AWAIT_RESPONSE = "AWAIT_RESPONSE"
    EMIT_RELEASE = "EMIT_RELEASE"
    EMIT_HOLD = "EMIT_HOLD"
    HOLDING = "HOLDING"


# Control points

@dataclass(frozen=True)
class Idle:
    """Initial state. With a buffered packet the link asks for fair arbitration."""


@dataclass(frozen=True)
class AwaitArb:
    pass


@dataclass(frozen=True)
class SendMode:
    remaining: Tuple[Signal, ...]
    dest: Dest
    clocked: bool = False


@dataclass(frozen=True)
class AwaitAck:
    phase: AckPhase = AckPhase.EXPECT_START
    seen: Optional[AckSig] = None


@dataclass(frozen=True)
class ReceiveMode:
    received: Tuple[Signal, ...] = ()
    addressing: Addressing = Addressing.UNKNOWN
    arb_pending: bool = False


@dataclass(frozen=True)
class IgnoreUntilGap:
    arb_pending: bool = False


@dataclass(frozen=True)
class AwaitGrant:
    pass


@dataclass(frozen=True)
class Terminate:
    clocked: bool = False


@dataclass(frozen=True)
class SendAckMode:
    phase: SendAckPhase = SendAckPhase.AWAIT_RESPONSE
    remaining: Tuple[Signal, ...] = ()
    clocked: bool = False


@dataclass(frozen=True)
class Emit:
    """Output-only point: offer ``label`` once, then continue in ``then``."""

    label: Label
    then: "LinkMode"


LinkMode = Union[
    Idle, AwaitArb, SendMode, AwaitAck, ReceiveMode, IgnoreUntilGap, AwaitGrant, Terminate, SendAckMode, Emit
]


@dataclass(frozen=True)
class LinkState:
    node: int
    n: int
    mode: LinkMode
    buffer: Optional[Packet] = None
    domains: PayloadDomains = DEFAULT_DOMAINS


Move = Tuple[Label, LinkState]

# Control point -> (IEEE state, sub-process name of the reference models).
MODE_NAMES: Dict[Type, Tuple[str, str]] = {
    Idle: ("L0", "Link1"),
    AwaitArb: ("L1", "Link2req"),
    SendMode: ("L2", "Link3"),
    AwaitAck: ("L3", "Link3RA"),
    ReceiveMode: ("L4", "Link4"),
    IgnoreUntilGap: ("L5", "Link5"),
    AwaitGrant: ("L6", "Link2resp"),
    Terminate: ("L6", "Link6"),
    SendAckMode: ("L7", "Link7"),
}


def link_state_name(s: LinkState) -> Tuple[str, str]:
    mode = s.mode
    while isinstance(mode, Emit):
        mode = mode.then
    l_state, name = MODE_NAMES[type(mode)]
    if isinstance(mode, AwaitAck) and mode.phase is AckPhase.EXPECT_END:
        name = "Link3RE"
    elif isinstance(mode, ReceiveMode):
        k = len(mode.received)
        if k < 2:
            name = "Link4DH"
        elif k == 2:
            name = "Link4RH"
        elif k == 3:
            name = "Link4RD"
        elif mode.addressing is Addressing.BROADCAST:
            name = "Link4BRec"
        elif mode.addressing is Addressing.TO_ME:
            name = "Link4DRec"
        else:
            name = "Link4RE"
    return l_state, name


def link_initial(node: int, n: int, domains: PayloadDomains = DEFAULT_DOMAINS) -> LinkState:
    if n < 2 or not 0 <= node < n:
        raise ValueError(f"invalid link {node} in a {n}-node configuration")
    return LinkState(node, n, Idle(), None, domains)


def _go(s: LinkState, mode: LinkMode, **changes) -> LinkState:
    return replace(s, mode=mode, **changes)


def _listen(s: LinkState, react) -> List[Move]:
    """One PDIND move per alphabet signal; ``react`` maps a signal to the next mode."""
    return [
        (make_label(PDIND, s.node, sig), _go(s, react(sig)))
        for sig in signal_alphabet(s.n, s.domains)
    ]


def _clock(s: LinkState, mode, emit: Signal, after) -> List[Move]:
    """PCIND when unclocked; otherwise emit one signal and continue in ``after``."""
    if not mode.clocked:
        return [(make_label(PCIND, s.node), _go(s, replace(mode, clocked=True)))]
    return [(make_label(PDREQ, s.node, emit), after)]


def _frame(p: Packet) -> Tuple[Signal, ...]:
    return (START,) + packet_signals(p) + (END,)


def _accept_requests(s: LinkState, then) -> List[Move]:
    """LDREQ for every other destination and data value."""
    moves = []
    for dest in dest_values(s.n):
        if dest == s.node:
            continue
        for data in s.domains.data:
            packet = make_packet(s.node, dest, s.domains.headers[0], data)
            moves.append((make_label(LDREQ, s.node, dest, data), then(packet)))
    return moves


def _idle(s: LinkState, mode: Idle) -> List[Move]:
    moves: List[Move] = []
    if s.buffer is None:
        moves += _accept_requests(s, lambda p: replace(s, buffer=p))
    else:
        moves.append((make_label(PAREQ, s.node, ArbKind.FAIR), _go(s, AwaitArb())))
    moves += _listen(s, lambda sig: ReceiveMode() if sig == START else mode)
    if s.buffer is None:
        moves.append((TERMINATED_LABEL, s))
    return moves


def _await_arb(s: LinkState, mode: AwaitArb) -> List[Move]:
    packet = s.buffer
    return [
        (
            make_label(PACON, s.node, ArbResult.WON),
            _go(s, SendMode(_frame(packet), packet.dest.dest), buffer=None),
        ),
        (make_label(PACON, s.node, ArbResult.LOST), _go(s, Idle())),
    ]


def _send(s: LinkState, mode: SendMode) -> List[Move]:
    rest = mode.remaining[1:]
    if rest:
        after = SendMode(rest, mode.dest)
    elif mode.dest is BROADCAST:
        after = Emit(make_label(LDCON, s.node, Confirmation.BROADSENT), IgnoreUntilGap())
    else:
        after = AwaitAck()
    return _clock(s, mode, mode.remaining[0], _go(s, after))


def _emit(s: LinkState, mode: Emit) -> List[Move]:
    return [(mode.label, _go(s, mode.then))]


def _await_ack(s: LinkState, mode: AwaitAck) -> List[Move]:
    ackmiss = make_label(LDCON, s.node, Confirmation.ACKMISS)

    def react(sig: Signal):
        if is_gap(sig):
            return Emit(ackmiss, Idle())
        if mode.phase is AckPhase.EXPECT_START:
            return AwaitAck(AckPhase.EXPECT_ACK) if sig == START else mode
        if mode.phase is AckPhase.EXPECT_ACK:
            if is_ack(sig):
                return AwaitAck(AckPhase.EXPECT_END, sig)
            return Emit(ackmiss, IgnoreUntilGap())
        if is_terminator(sig) and mode.seen.crc is Crc.VALID:
            ackrec = make_label(LDCON, s.node, Confirmation.ACKREC, mode.seen.ack)
            # A Prefix-terminated ack announces a concatenated response.
            return Emit(ackrec, IgnoreUntilGap() if sig == END else Idle())
        return Emit(ackmiss, IgnoreUntilGap())

    return _listen(s, react)


def _receive(s: LinkState, mode: ReceiveMode) -> List[Move]:
    deviation = IgnoreUntilGap(mode.arb_pending)

    def react(sig: Signal):
        if is_gap(sig):
            return IgnoreUntilGap(True) if mode.arb_pending else Idle()
        got = mode.received + (sig,)
        k = len(mode.received)
        if k == 0:
            return ReceiveMode(got) if is_node_dest(sig) else deviation
        if k == 1:
            if sig == END:
                return IgnoreUntilGap()
            if not is_dest(sig):
                return deviation
            if sig.dest == s.node:
                request = make_label(PAREQ, s.node, ArbKind.IMMEDIATE)
                return Emit(request, ReceiveMode(got, Addressing.TO_ME, True))
            if sig.dest is BROADCAST:
                return ReceiveMode(got, Addressing.BROADCAST)
            return IgnoreUntilGap()
        if k == 2:
            if is_header(sig) and sig.crc is Crc.VALID:
                return replace(mode, received=got)
            return deviation
        if k == 3:
            return replace(mode, received=got) if is_data(sig) else deviation
        if not is_terminator(sig):
            return deviation
        source, data = mode.received[0].dest, mode.received[3]
        if mode.addressing is Addressing.BROADCAST:
            if data.crc is not Crc.VALID:
                return IgnoreUntilGap()
            ind = make_label(LDIND, s.node, IndKind.BCAST, source, data.data, data.crc)
            return Emit(ind, IgnoreUntilGap())
        ind = make_label(LDIND, s.node, IndKind.ADDR, source, data.data, data.crc)
        return Emit(ind, AwaitGrant())

    return _listen(s, react)


def _ignore(s: LinkState, mode: IgnoreUntilGap) -> List[Move]:
    moves: List[Move] = []
    if mode.arb_pending:
        # The immediate request may still be granted; the grant is used to send End.
        moves.append((make_label(PACON, s.node, ArbResult.WON), _go(s, Terminate())))
        moves += _listen(s, lambda sig: mode)
    else:
        moves += _listen(s, lambda sig: Idle() if is_gap(sig) else mode)
    return moves


def _await_grant(s: LinkState, mode: AwaitGrant) -> List[Move]:
    return [(make_label(PACON, s.node, ArbResult.WON), _go(s, SendAckMode()))]


def _terminate(s: LinkState, mode: Terminate) -> List[Move]:
    return _clock(s, mode, END, _go(s, IgnoreUntilGap()))


def _send_ack(s: LinkState, mode: SendAckMode) -> List[Move]:
    moves: List[Move] = []
    if mode.phase is SendAckPhase.AWAIT_RESPONSE:
        for ack in s.domains.acks:
            for hr in HoldRelease:
                if hr is HoldRelease.RELEASE:
                    phase, last = SendAckPhase.EMIT_RELEASE, END
                else:
                    phase, last = SendAckPhase.EMIT_HOLD, PREFIX
                nxt = SendAckMode(phase, (START, AckSig(ack), last), mode.clocked)
                moves.append((make_label(LDRES, s.node, ack, hr), _go(s, nxt)))
        # Keep the cable busy until the transaction layer responds.
        return moves + _clock(s, mode, PREFIX, _go(s, replace(mode, clocked=False)))

    if mode.phase is SendAckPhase.HOLDING:
        if s.buffer is None:
            moves += _accept_requests(
                s, lambda p: _go(s, SendMode(_frame(p), p.dest.dest, mode.clocked))
            )
            return moves + _clock(s, mode, PREFIX, _go(s, replace(mode, clocked=False)))
        packet = s.buffer
        after = _go(s, SendMode(_frame(packet)[1:], packet.dest.dest), buffer=None)
        return _clock(s, mode, START, after)

    rest = mode.remaining[1:]
    if rest:
        after = replace(mode, remaining=rest, clocked=False)
    elif mode.phase is SendAckPhase.EMIT_HOLD:
        after = SendAckMode(SendAckPhase.HOLDING)
    else:
        after = Idle()
    return _clock(s, mode, mode.remaining[0], _go(s, after))


_HANDLERS = {
    Idle: _idle,
    AwaitArb: _await_arb,
    SendMode: _send,
    Emit: _emit,
    AwaitAck: _await_ack,
    ReceiveMode: _receive,
    IgnoreUntilGap: _ignore,
    AwaitGrant: _await_grant,
    Terminate: _terminate,
    SendAckMode: _send_ack,
}


@lru_cache(maxsize=None)
def link_step(s: LinkState) -> Tuple[Move, ...]:
    """All (label, successor) pairs of ``s``, transaction-side gates first."""
    return tuple(dict.fromkeys(_HANDLERS[type(s.mode)](s, s.mode)))
