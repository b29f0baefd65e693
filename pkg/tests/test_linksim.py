import io
import json
import random

import pytest

from asconuav import linksim
from asconuav.errors import (AuthenticationError, FrameError, ParameterError, ReplayError,
                             SessionError)
from asconuav.linksim import (Channel, ChannelModel, ReplayWindow, ScenarioConfig, WireFrame,
                              open_session, run_scenario)

KEY = bytes(range(16))


def _session(cipher="ascon128a", seed=1):
    return open_session(cipher, KEY, rng=random.Random(seed))


# -- frames ---------------------------------------------------------------------

def test_frame_pack_unpack_roundtrip():
    f = WireFrame(2, b"saltsalt", 7, b"hdr", b"payload", b"T" * 16)
    raw = f.pack()
    assert len(raw) == 21 + 3 + 7 + 16
    assert WireFrame.unpack(raw) == f
    assert f.nonce == b"saltsalt" + (7).to_bytes(8, "big")


def test_frame_unpack_rejects_garbage():
    with pytest.raises(FrameError):
        WireFrame.unpack(b"\x01\x02")
    f = WireFrame(1, bytes(8), 0, b"hh", b"", b"t" * 16).pack()
    with pytest.raises(FrameError):
        WireFrame.unpack(f[:-17])


def test_empty_payload_frame_still_carries_tag():
    tx, rx = _session()
    frame = tx.send(b"h", b"")
    assert frame.payload == b"" and len(frame.tag) == 16
    assert rx.receive(frame.pack()) == (b"h", b"")


def test_aes_ctr_frames_have_no_tag():
    tx, rx = _session("aes128ctr")
    frame = tx.send(b"h", b"hello")
    assert frame.tag == b"" and not rx.authenticated
    assert rx.receive(frame.pack()) == (b"h", b"hello")


def test_cipher_names():
    assert linksim.cipher_id_for("Ascon-128") == 1
    assert linksim.cipher_id_for("aes128") == 3
    with pytest.raises(ParameterError):
        linksim.cipher_id_for("chacha20")
    with pytest.raises(ParameterError):
        open_session("ascon128", bytes(15))


# -- sessions and nonces ------------------------------------------------------

def test_sequence_counts_sends():
    tx, _ = _session()
    for _ in range(5):
        tx.send(b"", b"x")
    assert tx.seq == 5


def test_nonces_are_salt_and_consecutive_sequence():
    tx, _ = _session()
    nonces = [tx.send(b"", b"").nonce for _ in range(2000)]
    assert nonces == [tx.session_salt + i.to_bytes(8, "big") for i in range(2000)]


def test_fresh_salts_differ():
    # 10^6 sessions against a 2^64 salt space: a collision has odds near 2^-25
    salts = {open_session("ascon128", KEY)[0].session_salt for _ in range(1_000_000)}
    assert len(salts) == 1_000_000


def test_sequence_exhaustion():
    tx, _ = _session("aes128ctr")
    tx.seq = (1 << 32) - 1
    tx.send(b"", b"last")
    with pytest.raises(SessionError):
        tx.send(b"", b"one too many")


def test_out_of_order_and_gaps_accepted():
    tx, rx = _session()
    frames = [tx.send(b"h", bytes([i])) for i in range(6)]
    for i in (5, 0, 2):
        assert rx.receive(frames[i].pack())[1] == bytes([i])


@pytest.mark.parametrize("cipher", ["ascon128", "ascon128a", "aes128ctr"])
def test_acceptance_independent_of_earlier_losses(cipher):
    rng = random.Random(17)
    for trial in range(20):
        tx, rx = _session(cipher, seed=trial)
        payloads = [rng.randbytes(rng.randint(0, 30)) for _ in range(120)]
        frames = [tx.send(b"h", p) for p in payloads]
        loss = rng.choice((0.1, 0.5, 0.9))
        for i in (i for i in range(120) if rng.random() > loss):
            assert rx.receive(frames[i].pack()) == (b"h", payloads[i])


def test_replay_rejected():
    tx, rx = _session()
    raw = tx.send(b"h", b"once").pack()
    rx.receive(raw)
    with pytest.raises(ReplayError):
        rx.receive(raw)


def test_failed_frame_does_not_consume_sequence():
    tx, rx = _session()
    raw = bytearray(tx.send(b"h", b"data").pack())
    good = bytes(raw)
    raw[-1] ^= 1
    with pytest.raises(AuthenticationError):
        rx.receive(bytes(raw))
    assert rx.receive(good) == (b"h", b"data")


def test_wrong_session_rejected():
    tx, _ = _session(seed=1)
    _, other = _session(seed=2)
    with pytest.raises(AuthenticationError):
        other.receive(tx.send(b"", b"x").pack())
    with pytest.raises(AuthenticationError):
        other.receive(b"short")


def test_replay_window_edges():
    w = ReplayWindow(4)
    for s in (0, 1, 2, 3):
        assert w.check(s)
        w.mark(s)
    assert not w.check(2)
    w.mark(10)
    assert not w.check(6)  # fell out of the window
    assert w.check(7) and w.check(9) and not w.check(10)


def test_corrupted_aead_frames_never_accepted():
    rng = random.Random(99)
    tx, rx = _session("ascon128")
    accepted = 0
    for _ in range(10_000):
        raw = bytearray(tx.send(b"hdr", rng.randbytes(rng.randint(0, 40))).pack())
        bit = rng.randrange(len(raw) * 8)
        raw[bit >> 3] ^= 0x80 >> (bit & 7)
        try:
            rx.receive(bytes(raw))
            accepted += 1
        except (AuthenticationError, ReplayError):
            pass
    assert accepted == 0


# -- channel ---------------------------------------------------------------------

def test_identity_channel():
    ch = Channel(ChannelModel())
    for i in range(100):
        assert ch.transmit(bytes([i]) * 10, i) == [(i, bytes([i]) * 10)]
    assert ch.dropped == ch.corrupted == 0


def test_full_loss():
    ch = Channel(ChannelModel(loss_p=1.0))
    assert all(ch.transmit(b"x") == [] for _ in range(100))
    assert ch.dropped == 100 and ch.flush() == []


def test_full_corruption_flips_everything():
    assert linksim.channel_transmit(b"\x0f", ChannelModel(corrupt_q=1.0)) == b"\xf0"


def test_bit_flip_rate():
    ch = Channel(ChannelModel(corrupt_q=0.01, seed=3))
    data = bytes(1000)
    flips = sum(bin(b).count("1") for _ in range(50) for b in ch.transmit(data)[0][1])
    # 400000 bits at q=0.01: mean 4000, sd about 63
    assert abs(flips - 4000) < 6 * 63


def test_channel_is_seeded():
    def run(seed):
        ch = Channel(ChannelModel(0.3, 0.01, 3, seed))
        out = []
        for i in range(200):
            out.extend(ch.transmit(bytes(20), i))
        return out + ch.flush()
    assert run(5) == run(5)
    assert run(5) != run(6)


def test_reorder_window_bounds_delay():
    ch = Channel(ChannelModel(reorder_window=3, seed=1))
    order = []
    for i in range(500):
        order.extend(ident for ident, _ in ch.transmit(b"x", i))
    order.extend(ident for ident, _ in ch.flush())
    assert sorted(order) == list(range(500))
    assert order != list(range(500))
    # nothing is released more than window steps late
    assert all(pos - ident <= 3 for pos, ident in enumerate(order) if ident < 497)


def test_channel_model_validation():
    for kwargs in ({"loss_p": 1.5}, {"corrupt_q": -0.1}, {"reorder_window": -1}):
        with pytest.raises(ParameterError):
            ChannelModel(**kwargs)


# -- scenarios ----------------------------------------------------------------------

def test_clean_scenario_delivers_everything():
    stats = run_scenario(ScenarioConfig(packets=200, seed=4))
    assert stats.delivered == 200 and stats.balanced()
    assert stats.delivered_corrupt == 0 and stats.goodput_Bps > 0


def test_scenario_accounting_balances():
    for cipher in ("ascon128", "ascon128a", "aes128ctr"):
        stats = run_scenario(ScenarioConfig(cipher=cipher, packets=500, loss_p=0.2,
                                            corrupt_q=0.002, reorder_window=4, seed=8))
        assert stats.balanced(), stats.counts()
        assert stats.lost > 0


def test_scenario_counts_are_deterministic():
    cfg = ScenarioConfig(packets=400, loss_p=0.1, corrupt_q=0.001, reorder_window=2, seed=11)
    assert run_scenario(cfg).counts() == run_scenario(cfg).counts()


def test_aead_vs_ctr_under_corruption():
    kw = dict(packets=600, corrupt_q=0.002, seed=21)
    aead_stats = run_scenario(ScenarioConfig(cipher="ascon128a", **kw))
    ctr_stats = run_scenario(ScenarioConfig(cipher="aes128ctr", **kw))
    assert aead_stats.delivered_corrupt == 0 and aead_stats.auth_failed > 0
    assert ctr_stats.delivered_corrupt > 0


def test_trace_records_every_outcome():
    buf = io.StringIO()
    stats = run_scenario(ScenarioConfig(packets=100, loss_p=0.3, seed=2), trace=buf)
    recs = [json.loads(l) for l in buf.getvalue().splitlines()]
    assert len(recs) == stats.sent - stats.in_flight
    assert sum(r["outcome"] == "lost" for r in recs) == stats.lost
    assert all(r["latency_s"] >= 0 for r in recs if r["outcome"] == "delivered")


def test_config_file(tmp_path):
    p = tmp_path / "s.ini"
    p.write_text("cipher = ascon128\npackets = 12\nloss_p = 0.25\nkey = " + KEY.hex() + "\n")
    cfg = ScenarioConfig.from_file(p)
    assert (cfg.cipher, cfg.packets, cfg.loss_p, cfg.key) == ("ascon128", 12, 0.25, KEY)
    p.write_text("[scenario]\npackets = 3\n")
    assert ScenarioConfig.from_file(p).packets == 3
    p.write_text("packetz = 3\n")
    with pytest.raises(ParameterError, match="unknown scenario key"):
        ScenarioConfig.from_file(p)
    p.write_text("packets = many\n")
    with pytest.raises(ParameterError):
        ScenarioConfig.from_file(p)


def test_scenario_validation():
    with pytest.raises(ParameterError):
        ScenarioConfig(cipher="des")
    with pytest.raises(ParameterError):
        ScenarioConfig(payload_min=10, payload_max=5)
    with pytest.raises(ParameterError):
        ScenarioConfig(loss_p=2.0)
