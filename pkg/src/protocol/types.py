"""Wire and service vocabulary: signals, packets, checksums and the bus tables.

Every value renders to the fixed upper-case text used in label offers.
"""

from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Tuple, Union

from src.errors import SignalDomainError


class Token(str, Enum):
    def __str__(self) -> str:
        return self.value


class Crc(Token):
    VALID = "VALID"
    CORRUPTED = "CORRUPTED"


class ArbKind(Token):
    FAIR = "FAIR"
    IMMEDIATE = "IMMEDIATE"


class ArbResult(Token):
    WON = "WON"
    LOST = "LOST"


class HoldRelease(Token):
    HOLD = "HOLD"
    RELEASE = "RELEASE"


class Confirmation(Token):
    ACKREC = "ACKREC"
    ACKMISS = "ACKMISS"
    BROADSENT = "BROADSENT"


class IndKind(Token):
    """Whether an indicated packet was addressed to the node or broadcast."""

    ADDR = "ADDR"
    BCAST = "BCAST"


class Broadcast(Token):
    BCAST = "BCAST"


BROADCAST = Broadcast.BCAST
Dest = Union[int, Broadcast]


@dataclass(frozen=True)
class PayloadDomains:
    headers: Tuple[str, ...] = ("h0",)
    data: Tuple[str, ...] = ("d0",)
    acks: Tuple[str, ...] = ("a0",)

    def __post_init__(self):
        for name in ("headers", "data", "acks"):
            if not getattr(self, name):
                raise ValueError(f"payload domain {name!r} must be non-empty")


DEFAULT_DOMAINS = PayloadDomains()


# Signals

@dataclass(frozen=True)
class Marker:
    """Payload-free signal: delimiters, gaps and the dummy extension."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class DestSig:
    dest: Dest

    def __str__(self) -> str:
        return f"DEST !{self.dest}"


@dataclass(frozen=True)
class HeaderSig:
    header: str
    crc: Crc = Crc.VALID

    def __str__(self) -> str:
        return f"HEADER !{self.header} !{self.crc}"


@dataclass(frozen=True)
class DataSig:
    data: str
    crc: Crc = Crc.VALID

    def __str__(self) -> str:
        return f"DATA !{self.data} !{self.crc}"


@dataclass(frozen=True)
class AckSig:
    ack: str
    crc: Crc = Crc.VALID

    def __str__(self) -> str:
        return f"ACK !{self.ack} !{self.crc}"


START = Marker("START")
END = Marker("END")
PREFIX = Marker("PREFIX")
SUBACTGAP = Marker("SUBACTGAP")
ARBRESGAP = Marker("ARBRESGAP")
DUMMY = Marker("DUMMY")

MARKERS = (START, END, PREFIX, SUBACTGAP, ARBRESGAP, DUMMY)

Signal = Union[Marker, DestSig, HeaderSig, DataSig, AckSig]
CheckedSignal = Union[HeaderSig, DataSig, AckSig]


def is_dest(s: Signal) -> bool:
    return isinstance(s, DestSig)


def is_header(s: Signal) -> bool:
    return isinstance(s, HeaderSig)


def is_data(s: Signal) -> bool:
    return isinstance(s, DataSig)


def is_ack(s: Signal) -> bool:
    return isinstance(s, AckSig)


def is_gap(s: Signal) -> bool:
    return s == SUBACTGAP or s == ARBRESGAP


def is_terminator(s: Signal) -> bool:
    return s == END or s == PREFIX


def is_node_dest(s: Signal) -> bool:
    return isinstance(s, DestSig) and s.dest is not BROADCAST


def corrupt(s: Signal) -> CheckedSignal:
    """Same signal with a corrupted checksum; only header, data and ack signals have one."""
    if not isinstance(s, (HeaderSig, DataSig, AckSig)):
        raise SignalDomainError(f"{s} carries no checksum")
    return replace(s, crc=Crc.CORRUPTED)


def get_crc(s: Signal) -> Crc:
    if not isinstance(s, (HeaderSig, DataSig, AckSig)):
        raise SignalDomainError(f"{s} carries no checksum")
    return s.crc


def get_dest(s: Signal) -> Dest:
    if not isinstance(s, DestSig):
        raise SignalDomainError(f"{s} is not a destination signal")
    return s.dest


def dest_values(n: int) -> Tuple[Dest, ...]:
    return tuple(range(n)) + (BROADCAST,)


@lru_cache(maxsize=None)
def signal_alphabet(n: int, domains: PayloadDomains = DEFAULT_DOMAINS) -> Tuple[Signal, ...]:
    """Every signal that can appear on a cable shared by ``n`` nodes, in a fixed order."""
    signals = list(MARKERS)
    signals.extend(DestSig(d) for d in dest_values(n))
    for crc in Crc:
        signals.extend(HeaderSig(h, crc) for h in domains.headers)
    for crc in Crc:
        signals.extend(DataSig(d, crc) for d in domains.data)
    for crc in Crc:
        signals.extend(AckSig(a, crc) for a in domains.acks)
    return tuple(signals)


# Packets

@dataclass(frozen=True)
class Packet:
    """Four signals: source marker, destination, header, data."""

    source: DestSig
    dest: DestSig
    header: HeaderSig
    data: DataSig

    def __post_init__(self):
        if not (
            is_node_dest(self.source)
            and is_dest(self.dest)
            and is_header(self.header)
            and is_data(self.data)
        ):
            raise SignalDomainError("packet must be (DestSig node, DestSig, HeaderSig, DataSig)")


def make_packet(source: int, dest: Dest, header: str, data: str) -> Packet:
    return Packet(DestSig(source), DestSig(dest), HeaderSig(header), DataSig(data))


def packet_signals(p: Packet) -> Tuple[Signal, Signal, Signal, Signal]:
    return (p.source, p.dest, p.header, p.data)


# Boolean tables indexed by node id

BoolTable = Tuple[bool, ...]


def _check_index(t: BoolTable, i: int) -> None:
    if not 0 <= i < len(t):
        raise IndexError(f"node {i} outside table of size {len(t)}")


def table_const(n: int, b: bool) -> BoolTable:
    return (b,) * n


def table_get(t: BoolTable, i: int) -> bool:
    _check_index(t, i)
    return t[i]


def table_set(t: BoolTable, i: int, b: bool) -> BoolTable:
    _check_index(t, i)
    return t[:i] + (b,) + t[i + 1:]


def table_any(t: BoolTable) -> bool:
    return any(t)


def table_members(t: BoolTable) -> Tuple[int, ...]:
    return tuple(i for i, b in enumerate(t) if b)
