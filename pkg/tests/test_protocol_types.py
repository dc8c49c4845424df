import pytest

from src.errors import SignalDomainError
from src.protocol.types import (
    ARBRESGAP,
    BROADCAST,
    DUMMY,
    END,
    PREFIX,
    START,
    SUBACTGAP,
    AckSig,
    Crc,
    DataSig,
    DestSig,
    HeaderSig,
    Packet,
    PayloadDomains,
    corrupt,
    get_crc,
    get_dest,
    is_gap,
    is_node_dest,
    is_terminator,
    make_packet,
    packet_signals,
    signal_alphabet,
    table_any,
    table_const,
    table_get,
    table_members,
    table_set,
)


def test_alphabet_sizes():
    assert len(signal_alphabet(2)) == 15
    assert len(set(signal_alphabet(2))) == 15
    assert len(signal_alphabet(3)) == 16
    wide = PayloadDomains(headers=("h0", "h1"), data=("d0", "d1", "d2"), acks=("a0",))
    assert len(signal_alphabet(2, wide)) == 6 + 3 + 2 * (2 + 3 + 1)


def test_alphabet_order_is_fixed():
    alphabet = signal_alphabet(2)
    assert alphabet[:6] == (START, END, PREFIX, SUBACTGAP, ARBRESGAP, DUMMY)
    assert alphabet[6:9] == (DestSig(0), DestSig(1), DestSig(BROADCAST))
    assert alphabet[-1] == AckSig("a0", Crc.CORRUPTED)


def test_rendering():
    assert str(DestSig(BROADCAST)) == "DEST !BCAST"
    assert str(DestSig(1)) == "DEST !1"
    assert str(HeaderSig("h0")) == "HEADER !h0 !VALID"
    assert str(DataSig("d0", Crc.CORRUPTED)) == "DATA !d0 !CORRUPTED"
    assert str(SUBACTGAP) == "SUBACTGAP"


def test_corrupt_is_partial():
    assert corrupt(DataSig("d0")) == DataSig("d0", Crc.CORRUPTED)
    assert get_crc(corrupt(AckSig("a0"))) is Crc.CORRUPTED
    for sig in (START, DestSig(0), DUMMY):
        with pytest.raises(SignalDomainError):
            corrupt(sig)
    with pytest.raises(SignalDomainError):
        get_crc(END)
    with pytest.raises(SignalDomainError):
        get_dest(HeaderSig("h0"))
    assert get_dest(DestSig(BROADCAST)) is BROADCAST


def test_predicates():
    assert is_gap(SUBACTGAP) and is_gap(ARBRESGAP) and not is_gap(END)
    assert is_terminator(END) and is_terminator(PREFIX) and not is_terminator(START)
    assert is_node_dest(DestSig(0)) and not is_node_dest(DestSig(BROADCAST))


def test_packets():
    packet = make_packet(0, BROADCAST, "h0", "d0")
    assert packet_signals(packet) == (DestSig(0), DestSig(BROADCAST), HeaderSig("h0"), DataSig("d0"))
    with pytest.raises(SignalDomainError):
        Packet(DestSig(BROADCAST), DestSig(1), HeaderSig("h0"), DataSig("d0"))
    with pytest.raises(SignalDomainError):
        Packet(DestSig(0), DestSig(1), DataSig("d0"), HeaderSig("h0"))


def test_tables():
    t = table_const(3, False)
    assert not table_any(t)
    t = table_set(t, 2, True)
    assert table_get(t, 2) and table_members(t) == (2,)
    with pytest.raises(IndexError):
        table_set(t, 3, True)
    with pytest.raises(IndexError):
        table_get(t, -1)


def test_payload_domains_must_be_non_empty():
    with pytest.raises(ValueError):
        PayloadDomains(data=())
