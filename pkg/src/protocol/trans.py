"""Transaction layer: a requester half and a responder half running side by side."""

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import List, Tuple, Union

from src.model.labels import (
    LDCON,
    LDIND,
    LDREQ,
    LDRES,
    TDCON,
    TDIND,
    TDREQ,
    TDRES,
    TERMINATED_LABEL,
    Label,
    make_label,
)
from src.protocol.types import (
    DEFAULT_DOMAINS,
    Confirmation,
    Crc,
    HoldRelease,
    IndKind,
    PayloadDomains,
    Token,
    dest_values,
)


class Variant(Token):
    OK = "ok"
    KO = "ko"


# Requester half

@dataclass(frozen=True)
class ReqIdle:
    pass


@dataclass(frozen=True)
class ReqForward:
    dest: str
    data: str


@dataclass(frozen=True)
class ReqAwait:
    pass


@dataclass(frozen=True)
class ReqConfirm:
    confirmation: Tuple[str, ...]


# Responder half

@dataclass(frozen=True)
class RespIdle:
    pass


@dataclass(frozen=True)
class RespIndicate:
    indication: Tuple[str, ...]


@dataclass(frozen=True)
class RespAwait:
    pass


@dataclass(frozen=True)
class RespReply:
    ack: str
    hold: HoldRelease


Requester = Union[ReqIdle, ReqForward, ReqAwait, ReqConfirm]
Responder = Union[RespIdle, RespIndicate, RespAwait, RespReply]


@dataclass(frozen=True)
class TransState:
    node: int
    n: int
    variant: Variant
    req: Requester = ReqIdle()
    resp: Responder = RespIdle()
    domains: PayloadDomains = DEFAULT_DOMAINS


Move = Tuple[Label, TransState]


def trans_initial(
    node: int, n: int, variant: Variant, domains: PayloadDomains = DEFAULT_DOMAINS
) -> TransState:
    return TransState(node, n, Variant(variant), ReqIdle(), RespIdle(), domains)


@lru_cache(maxsize=None)
def confirmations(domains: PayloadDomains) -> Tuple[Tuple[str, ...], ...]:
    """Every LDCON/TDCON payload after the node id."""
    out = [(str(Confirmation.ACKREC), ack) for ack in domains.acks]
    out += [(str(Confirmation.ACKMISS),), (str(Confirmation.BROADSENT),)]
    return tuple(out)


@lru_cache(maxsize=None)
def indications(node: int, n: int, domains: PayloadDomains) -> Tuple[Tuple[str, ...], ...]:
    """Every LDIND/TDIND payload after the node id: kind, source, data, data crc."""
    return tuple(
        (str(kind), str(src), data, str(crc))
        for kind in IndKind
        for src in range(n)
        if src != node
        for data in domains.data
        for crc in Crc
    )


def _requester(s: TransState) -> List[Move]:
    req = s.req
    if isinstance(req, ReqIdle):
        return [
            (make_label(TDREQ, s.node, dest, data), replace(s, req=ReqForward(str(dest), data)))
            for dest in dest_values(s.n)
            if dest != s.node
            for data in s.domains.data
        ]
    if isinstance(req, ReqForward):
        return [(make_label(LDREQ, s.node, req.dest, req.data), replace(s, req=ReqAwait()))]
    if isinstance(req, ReqAwait):
        return [
            (make_label(LDCON, s.node, *conf), replace(s, req=ReqConfirm(conf)))
            for conf in confirmations(s.domains)
        ]
    return [(make_label(TDCON, s.node, *req.confirmation), replace(s, req=ReqIdle()))]


def _responder(s: TransState) -> List[Move]:
    resp = s.resp
    if isinstance(resp, RespIdle):
        return [
            (make_label(LDIND, s.node, *ind), replace(s, resp=RespIndicate(ind)))
            for ind in indications(s.node, s.n, s.domains)
        ]
    if isinstance(resp, RespIndicate):
        if resp.indication[0] == IndKind.ADDR:
            after = RespAwait()
        elif s.variant is Variant.KO:
            # Original behaviour: a broadcast is answered like an addressed packet,
            # but the link never takes a response for a broadcast.
            after = RespReply(s.domains.acks[0], HoldRelease.RELEASE)
        else:
            after = RespIdle()
        return [(make_label(TDIND, s.node, *resp.indication), replace(s, resp=after))]
    if isinstance(resp, RespAwait):
        return [
            (make_label(TDRES, s.node, ack, hr), replace(s, resp=RespReply(ack, hr)))
            for ack in s.domains.acks
            for hr in HoldRelease
        ]
    return [(make_label(LDRES, s.node, resp.ack, resp.hold), replace(s, resp=RespIdle()))]


@lru_cache(maxsize=None)
def trans_step(s: TransState) -> Tuple[Move, ...]:
    moves = _requester(s) + _responder(s)
    if isinstance(s.req, ReqIdle) and isinstance(s.resp, RespIdle):
        moves.append((TERMINATED_LABEL, s))
    return tuple(dict.fromkeys(moves))
