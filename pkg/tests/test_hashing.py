import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import ascon_ref
from asconuav import hashing, permutation
from asconuav.errors import ParameterError
from asconuav.hashing import ASCON_HASH, ASCON_HASHA, ASCON_XOF, ASCON_XOFA, Hasher

ORACLE_NAMES = {ASCON_HASH: "Ascon-Hash", ASCON_HASHA: "Ascon-Hasha",
                ASCON_XOF: "Ascon-Xof", ASCON_XOFA: "Ascon-Xofa"}


def test_parameter_table():
    rows = [(p.output_bits, p.rate_bits, p.capacity_bits, p.rounds_a, p.rounds_b)
            for p in (ASCON_HASH, ASCON_XOF, ASCON_HASHA, ASCON_XOFA)]
    assert rows == [(256, 64, 256, 12, 12), (None, 64, 256, 12, 12),
                    (256, 64, 256, 12, 8), (None, 64, 256, 12, 8)]


@pytest.mark.parametrize("params", list(ORACLE_NAMES))
def test_pinned_init_state_matches_derivation(params):
    assert params.compute_init_state() == params.init_state
    s = [params.iv, 0, 0, 0, 0]
    ascon_ref.ascon_permutation(s, 12)
    assert tuple(s) == params.init_state


def test_empty_message_digests():
    assert hashing.hash(b"").hex().upper() == \
        "7346BC14F036E87AE03D0997913088F5F68411434B3CF8B54FA796A80D251F91"
    assert hashing.hash(b"", ASCON_HASHA).hex().upper() == \
        "AECD027026D0675F9DE7A8AD8CCF512DB64B1EDCF0B20C388A0C7CC617AAA2C4"


def test_xof_single_zero_byte_pinned():
    assert hashing.xof(b"\x00", 32).hex().upper() == \
        "B2EDBB27AC8397A55BC83D137C151DE9EDE048338FE907F0D3629E717846FEDC"


def test_xof_differs_from_hash_on_empty():
    assert hashing.xof(b"", 32, ASCON_XOF) != hashing.hash(b"", ASCON_HASH)


@pytest.mark.parametrize("params", [ASCON_HASH, ASCON_HASHA])
def test_digest_length_and_determinism(params, rng):
    for n in list(range(0, 40)) + [1024, 4096]:
        m = rng.randbytes(n)
        d = hashing.hash(m, params)
        assert len(d) == 32 and d == hashing.hash(m, params)


@pytest.mark.parametrize("params", list(ORACLE_NAMES))
def test_matches_oracle(params, rng):
    for _ in range(60):
        m = rng.randbytes(rng.randint(0, 300))
        n = 32 if not params.is_xof else rng.randint(1, 100)
        ours = hashing.hash(m, params) if not params.is_xof else hashing.xof(m, n, params)
        assert ours == ascon_ref.ascon_hash(m, ORACLE_NAMES[params], n)


@pytest.mark.parametrize("params", [ASCON_XOF, ASCON_XOFA])
def test_xof_prefix(params, rng):
    for _ in range(100):
        m = rng.randbytes(rng.randint(0, 64))
        assert hashing.xof(m, 16, params) == hashing.xof(m, 64, params)[:16]


@given(m=st.binary(max_size=100), a=st.integers(1, 80), b=st.integers(1, 80))
@settings(max_examples=100, deadline=None)
def test_xof_prefix_property(m, a, b):
    lo, hi = sorted((a, b))
    assert hashing.xof(m, lo, ASCON_XOFA) == hashing.xof(m, hi, ASCON_XOFA)[:lo]


def test_avalanche(rng):
    dists = []
    for _ in range(1000):
        m = bytearray(rng.randbytes(rng.randint(1, 32)))
        h1 = hashing.hash(bytes(m))
        bit = rng.randrange(len(m) * 8)
        m[bit // 8] ^= 1 << (bit % 8)
        h2 = hashing.hash(bytes(m))
        dists.append(bin(int.from_bytes(h1, "big") ^ int.from_bytes(h2, "big")).count("1"))
    assert 108 <= sum(dists) / len(dists) <= 148


def test_xof_zero_length_rejected():
    with pytest.raises(ParameterError):
        hashing.xof(b"", 0)


def test_wrong_mode_rejected():
    with pytest.raises(ParameterError):
        hashing.hash(b"", ASCON_XOF)
    with pytest.raises(ParameterError):
        hashing.xof(b"", 32, ASCON_HASH)


@pytest.mark.parametrize("chunks", [[b""], [b"abc", b"defghijk", b"l"], [b"x" * 8, b"y" * 8, b""]])
def test_incremental_matches_one_shot(chunks):
    h = Hasher(ASCON_HASH)
    for c in chunks:
        h.update(c)
    assert h.digest() == hashing.hash(b"".join(chunks))


def test_hasher_single_use():
    h = Hasher()
    h.digest()
    with pytest.raises(ParameterError):
        h.update(b"more")


@pytest.fixture
def rounds_log(monkeypatch):
    calls = []
    real = permutation.permute

    def counting(state, rounds):
        calls.append(rounds)
        return real(state, rounds)
    monkeypatch.setattr(permutation, "permute", counting)
    return calls


@pytest.mark.parametrize("params", [ASCON_HASH, ASCON_HASHA])
@pytest.mark.parametrize("length", [0, 7, 8, 20])
def test_round_usage(params, length, rounds_log):
    hashing.hash(bytes(length), params)
    blocks = length // 8 + 1
    # blocks-1 absorbs with p^b, one p^a after the last block, 3 squeezes with p^b
    expected = [params.rounds_b] * (blocks - 1) + [12] + [params.rounds_b] * 3
    assert rounds_log == expected
