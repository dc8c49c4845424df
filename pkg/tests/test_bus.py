from dataclasses import replace

import pytest

from src.protocol.bus import (
    AfterEnd,
    BusIdle,
    Busy,
    Decide,
    Distribute,
    FaultFlags,
    GapBroadcast,
    GapKind,
    Resolve,
    bus_initial,
    bus_step,
)
from src.protocol.types import DUMMY, END, DataSig, DestSig, HeaderSig

from tests.helpers import fire, texts

NO_FAULTS = FaultFlags(False, False, False, False)


def at(phase, n=2, faults=FaultFlags(), **tables):
    return replace(bus_initial(n, faults), phase=phase, **tables)


def delivery_moves(state):
    """Moves of a distribution phase that are not arbitration requests."""
    return [(label, t) for label, t in bus_step(state) if not label.text.startswith("PAREQ")]


def test_initial_offers():
    assert texts(bus_step(bus_initial(2))) == ["PAREQ !0 !FAIR", "PAREQ !1 !FAIR", "TERMINATED"]
    with pytest.raises(ValueError):
        bus_initial(1)


def test_fair_arbitration_round():
    s = fire(bus_step, bus_initial(2), "PAREQ !0 !FAIR")
    assert s.phase == Decide(0)
    assert texts(bus_step(s)) == ["PACON !0 !WON", "PAREQ !1 !FAIR"]
    s = fire(bus_step, s, "PACON !0 !WON")
    assert s.phase == Busy(0) and s.fairness == (True, False)
    assert texts(bus_step(s)) == ["PCIND !0", "PAREQ !1 !FAIR", "PAREQ !1 !IMMEDIATE"]
    s = fire(bus_step, s, "PCIND !0")
    assert len(bus_step(s)) == 15 + 2


def test_fairness_blocks_a_second_win():
    s = at(Decide(0), fairness=(True, False))
    assert fire(bus_step, s, "PACON !0 !LOST").phase == BusIdle()


def test_fair_request_while_busy_is_lost_later():
    s = fire(bus_step, at(Busy(0)), "PAREQ !1 !FAIR")
    assert s.lost == (False, True)
    assert "PACON !1 !LOST" in texts(bus_step(s))
    idle = replace(s, phase=BusIdle())
    assert "TERMINATED" not in texts(bus_step(idle))
    assert fire(bus_step, s, "PACON !1 !LOST").lost == (False, False)


def test_data_faults_at_a_distribute_state():
    phase = Distribute(0, DataSig("d0"), 1)
    faulty = delivery_moves(at(phase))
    clean = delivery_moves(at(phase, faults=NO_FAULTS))
    assert texts(clean) == ["PDIND !1 !DATA !d0 !VALID"]
    assert texts(faulty) == ["PDIND !1 !DATA !d0 !VALID", "PDIND !1 !DATA !d0 !CORRUPTED", "i"]
    assert len(faulty) > len(clean)
    assert all(t.phase == Busy(0, after_data=True) for _, t in faulty)
    assert clean[0][1].phase == Busy(0)


def test_dummy_extension_is_an_internal_step():
    s = at(Busy(0, after_data=True))
    assert texts(bus_step(s))[:2] == ["PCIND !0", "i"]
    s = fire(bus_step, s, "i")
    assert s.phase == Distribute(0, DUMMY, 1)
    assert fire(bus_step, s, "PDIND !1 !DUMMY").phase == Busy(0)
    assert "i" not in texts(bus_step(fire(bus_step, at(Busy(0, after_data=True)), "PCIND !0")))


def test_destination_invalidation_marks_the_recipient():
    s = at(Distribute(0, DestSig(1), 1, destination=True))
    moves = delivery_moves(s)
    assert texts(moves) == ["PDIND !1 !DEST !1", "PDIND !1 !DEST !0", "PDIND !1 !DEST !BCAST"]
    assert moves[0][1].corrupted_dest == (False, False)
    assert moves[1][1].corrupted_dest == (False, True)
    marked = at(Distribute(0, HeaderSig("h0"), 1), corrupted_dest=(False, True))
    assert texts(delivery_moves(marked)) == ["PDIND !1 !HEADER !h0 !CORRUPTED", "i"]


def test_only_the_second_packet_signal_is_invalidated():
    s = at(Busy(0, clocked=True))
    s = fire(bus_step, fire(bus_step, s, "PDREQ !0 !START"), "PDIND !1 !START")
    s = fire(bus_step, fire(bus_step, s, "PCIND !0"), "PDREQ !0 !DEST !0")
    assert s.phase == Distribute(0, DestSig(0), 1)
    assert texts(delivery_moves(s)) == ["PDIND !1 !DEST !0"]
    s = fire(bus_step, s, "PDIND !1 !DEST !0")
    assert s.phase == Busy(0, after_source=True)
    s = fire(bus_step, fire(bus_step, s, "PCIND !0"), "PDREQ !0 !DEST !1")
    assert s.phase == Distribute(0, DestSig(1), 1, destination=True)
    assert len(delivery_moves(s)) == 3
    s = fire(bus_step, s, "PDIND !1 !DEST !1")
    s = fire(bus_step, fire(bus_step, s, "PCIND !0"), "PDREQ !0 !HEADER !h0 !VALID")
    assert s.phase == Distribute(0, HeaderSig("h0"), 1)


def test_end_without_immediate_requests_starts_a_gap():
    s = fire(bus_step, at(Distribute(0, END, 1), corrupted_dest=(False, True)), "PDIND !1 !END")
    assert s.phase == GapBroadcast(GapKind.SUBACTION) and s.corrupted_dest == (False, False)
    s = fire(bus_step, s, "PDIND !0 !SUBACTGAP")
    s = fire(bus_step, s, "PDIND !1 !SUBACTGAP")
    assert s.phase == BusIdle()


def test_end_with_an_immediate_request_grants_it():
    s = fire(bus_step, at(Distribute(0, END, 1), immediate=(False, True)), "PDIND !1 !END")
    assert isinstance(s.phase, AfterEnd)
    assert texts(bus_step(s))[0] == "PACON !1 !WON"
    s = fire(bus_step, s, "PACON !1 !WON")
    s = fire(bus_step, s, "PCIND !1")
    assert s.phase == Busy(1, clocked=True) and s.immediate == (False, False)


def test_several_owners_resolve_by_sending_end():
    s = at(Resolve((False, True, True)), n=3)
    ends = [m for m in texts(bus_step(s)) if m.startswith("PDREQ")]
    assert ends == ["PDREQ !1 !END", "PDREQ !2 !END"]
    s = fire(bus_step, s, "PDREQ !1 !END")
    assert s.phase == Resolve((False, False, True))
    assert fire(bus_step, s, "PDREQ !2 !END").phase == GapBroadcast(GapKind.SUBACTION)


def test_arbitration_reset_gap():
    s = at(BusIdle(), fairness=(True, False))
    assert "i" in texts(bus_step(s))
    s = fire(bus_step, s, "i")
    assert s.phase == GapBroadcast(GapKind.RESET) and s.fairness == (False, False)
    assert texts(bus_step(s))[0] == "PDIND !0 !ARBRESGAP"
