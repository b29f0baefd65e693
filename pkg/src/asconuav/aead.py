"""Ascon-128 and Ascon-128a authenticated encryption.

The duplex sponge runs in four phases: initialization (IV, key, nonce), an
associated-data absorb, the plaintext/ciphertext duplex, and finalization
which re-injects the key and extracts a 128-bit tag.

The rate portion of the state is handled as a single integer of ``rate_bits``
bits (``x0`` for Ascon-128, ``x0 || x1`` for Ascon-128a), which lets one code
path serve both variants.
"""
from __future__ import annotations

import hmac
from dataclasses import dataclass

from . import permutation
from .errors import AuthenticationError, ParameterError
from .permutation import MASK64, SpongeState

KEY_BYTES = 16
NONCE_BYTES = 16
TAG_BYTES = 16


@dataclass(frozen=True)
class AeadVariantParams:
    name: str
    rate_bits: int
    rounds_a: int
    rounds_b: int
    key_bits: int = 128

    @property
    def capacity_bits(self) -> int:
        return 320 - self.rate_bits

    @property
    def rate_bytes(self) -> int:
        return self.rate_bits // 8

    @property
    def iv(self) -> int:
        """k, r, a, b as one byte each, then zero padding to 64 bits."""
        return int.from_bytes(
            bytes([self.key_bits, self.rate_bits, self.rounds_a, self.rounds_b, 0, 0, 0, 0]), "big"
        )


ASCON_128 = AeadVariantParams("Ascon-128", rate_bits=64, rounds_a=12, rounds_b=6)
ASCON_128A = AeadVariantParams("Ascon-128a", rate_bits=128, rounds_a=12, rounds_b=8)

VARIANTS = {p.name: p for p in (ASCON_128, ASCON_128A)}


@dataclass(frozen=True)
class AeadSealed:
    ciphertext: bytes
    tag: bytes

    def __post_init__(self):
        if len(self.tag) != TAG_BYTES:
            raise ParameterError(f"tag must be {TAG_BYTES} bytes, got {len(self.tag)}")

    def to_bytes(self) -> bytes:
        return self.ciphertext + self.tag

    @classmethod
    def from_bytes(cls, data: bytes) -> "AeadSealed":
        if len(data) < TAG_BYTES:
            raise ParameterError("sealed message shorter than the tag")
        return cls(bytes(data[:-TAG_BYTES]), bytes(data[-TAG_BYTES:]))


def _check_key_nonce(key: bytes, nonce: bytes) -> None:
    if len(key) != KEY_BYTES:
        raise ParameterError(f"key must be {KEY_BYTES} bytes, got {len(key)}")
    if len(nonce) != NONCE_BYTES:
        raise ParameterError(f"nonce must be {NONCE_BYTES} bytes, got {len(nonce)}")


def _get_rate(s: SpongeState, params: AeadVariantParams) -> int:
    if params.rate_bits == 64:
        return s[0]
    return (s[0] << 64) | s[1]


def _set_rate(s: SpongeState, rate: int, params: AeadVariantParams) -> SpongeState:
    if params.rate_bits == 64:
        return SpongeState(rate, s[1], s[2], s[3], s[4])
    return SpongeState(rate >> 64, rate & MASK64, s[2], s[3], s[4])


def _pad(data: bytes, rate_bytes: int) -> bytes:
    """Append 1 || 0* up to the next multiple of the rate (always >= 1 byte)."""
    return data + b"\x80" + bytes(rate_bytes - 1 - len(data) % rate_bytes)


def initialize(key: bytes, nonce: bytes, params: AeadVariantParams) -> SpongeState:
    _check_key_nonce(key, nonce)
    k0 = int.from_bytes(key[:8], "big")
    k1 = int.from_bytes(key[8:], "big")
    n0 = int.from_bytes(nonce[:8], "big")
    n1 = int.from_bytes(nonce[8:], "big")
    s = permutation.permute((params.iv, k0, k1, n0, n1), params.rounds_a)
    return SpongeState(s[0], s[1], s[2], s[3] ^ k0, s[4] ^ k1)


def process_associated_data(state: SpongeState, ad: bytes, params: AeadVariantParams) -> SpongeState:
    rb = params.rate_bytes
    s = state
    if ad:
        padded = _pad(ad, rb)
        for i in range(0, len(padded), rb):
            block = int.from_bytes(padded[i:i + rb], "big")
            s = permutation.permute(_set_rate(s, _get_rate(s, params) ^ block, params), params.rounds_b)
    # domain separation, applied whether or not there was associated data
    return SpongeState(s[0], s[1], s[2], s[3], s[4] ^ 1)


def _finalize(s: SpongeState, key: bytes, params: AeadVariantParams) -> bytes:
    k0 = int.from_bytes(key[:8], "big")
    k1 = int.from_bytes(key[8:], "big")
    words = list(s)
    off = params.rate_bits // 64
    words[off] ^= k0
    words[off + 1] ^= k1
    s = permutation.permute(words, params.rounds_a)
    return (s[3] ^ k0).to_bytes(8, "big") + (s[4] ^ k1).to_bytes(8, "big")


def _encrypt_body(s: SpongeState, plaintext: bytes, params: AeadVariantParams):
    rb = params.rate_bytes
    padded = _pad(plaintext, rb)
    out = []
    last = len(padded) - rb
    for i in range(0, last, rb):
        rate = _get_rate(s, params) ^ int.from_bytes(padded[i:i + rb], "big")
        out.append(rate.to_bytes(rb, "big"))
        s = permutation.permute(_set_rate(s, rate, params), params.rounds_b)
    rate = _get_rate(s, params) ^ int.from_bytes(padded[last:], "big")
    out.append(rate.to_bytes(rb, "big")[:len(plaintext) % rb])
    return _set_rate(s, rate, params), b"".join(out)


def _decrypt_body(s: SpongeState, ciphertext: bytes, params: AeadVariantParams):
    rb = params.rate_bytes
    n_full = len(ciphertext) // rb
    out = []
    for i in range(0, n_full * rb, rb):
        c = int.from_bytes(ciphertext[i:i + rb], "big")
        out.append((_get_rate(s, params) ^ c).to_bytes(rb, "big"))
        s = permutation.permute(_set_rate(s, c, params), params.rounds_b)
    # final (possibly empty) partial block: splice ciphertext bytes into the
    # rate, keep the remaining state bytes and add the padding bit after them
    tail = ciphertext[n_full * rb:]
    n = len(tail)
    shift = 8 * (rb - n)
    rate = _get_rate(s, params)
    c = int.from_bytes(tail, "big") << shift
    out.append(((rate ^ c) >> shift).to_bytes(n, "big") if n else b"")
    low = (1 << shift) - 1
    rate = c | (rate & low) ^ (0x80 << (shift - 8))
    return _set_rate(s, rate, params), b"".join(out)


def seal(key: bytes, nonce: bytes, ad: bytes, plaintext: bytes,
         params: AeadVariantParams = ASCON_128) -> AeadSealed:
    s = initialize(key, nonce, params)
    s = process_associated_data(s, ad, params)
    s, ciphertext = _encrypt_body(s, plaintext, params)
    return AeadSealed(ciphertext, _finalize(s, key, params))


def open(key: bytes, nonce: bytes, ad: bytes, sealed: AeadSealed,
         params: AeadVariantParams = ASCON_128) -> bytes:
    """Verify and decrypt. Raises AuthenticationError on any tag mismatch."""
    s = initialize(key, nonce, params)
    s = process_associated_data(s, ad, params)
    s, plaintext = _decrypt_body(s, sealed.ciphertext, params)
    expected = _finalize(s, key, params)
    if not hmac.compare_digest(expected, sealed.tag):
        raise AuthenticationError()
    return plaintext


def encrypt(key: bytes, nonce: bytes, ad: bytes, plaintext: bytes,
            params: AeadVariantParams = ASCON_128) -> bytes:
    """``seal`` returning the wire form ciphertext || tag."""
    return seal(key, nonce, ad, plaintext, params).to_bytes()


def decrypt(key: bytes, nonce: bytes, ad: bytes, data: bytes,
            params: AeadVariantParams = ASCON_128) -> bytes:
    return open(key, nonce, ad, AeadSealed.from_bytes(data), params)
