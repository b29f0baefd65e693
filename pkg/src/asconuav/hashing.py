"""Ascon-Hash, Ascon-Hasha, Ascon-Xof and Ascon-Xofa.

All four share a 64-bit rate. The message is padded with 1 || 0*, absorbed
with p^b between blocks, then p^a runs once before squeezing 64-bit blocks
with p^b between them. The post-initialization states are precomputed; see
``HashVariantParams.compute_init_state`` for how they are derived.
"""
from __future__ import annotations

import builtins
from dataclasses import dataclass
from typing import Optional

from . import permutation
from .errors import ParameterError
from .permutation import SpongeState

RATE_BYTES = 8
DIGEST_BYTES = 32


@dataclass(frozen=True)
class HashVariantParams:
    name: str
    rounds_a: int
    rounds_b: int
    output_bits: Optional[int]  # None: caller chooses the length (XOF)
    init_state: SpongeState
    rate_bits: int = 64

    @property
    def capacity_bits(self) -> int:
        return 320 - self.rate_bits

    @property
    def is_xof(self) -> bool:
        return self.output_bits is None

    @property
    def iv(self) -> int:
        # 0 || r || a || a-b || 32-bit output length (0 for XOFs)
        out = self.output_bits or 0
        head = bytes([0, self.rate_bits, self.rounds_a, self.rounds_a - self.rounds_b])
        return int.from_bytes(head + out.to_bytes(4, "big"), "big")

    def __hash__(self):
        # the module-level hash() shadows the builtin the generated method would use
        return builtins.hash((self.name, self.rounds_a, self.rounds_b, self.output_bits))

    def compute_init_state(self) -> SpongeState:
        return permutation.permute((self.iv, 0, 0, 0, 0), self.rounds_a)


ASCON_HASH = HashVariantParams(
    "Ascon-Hash", 12, 12, 256,
    SpongeState(0xEE9398AADB67F03D, 0x8BB21831C60F1002, 0xB48A92DB98D5DA62,
                0x43189921B8F8E3E8, 0x348FA5C9D525E140),
)
ASCON_HASHA = HashVariantParams(
    "Ascon-Hasha", 12, 8, 256,
    SpongeState(0x01470194FC6528A6, 0x738EC38AC0ADFFA7, 0x2EC8E3296C76384C,
                0xD6F6A54D7F52377D, 0xA13C42A223BE8D87),
)
ASCON_XOF = HashVariantParams(
    "Ascon-Xof", 12, 12, None,
    SpongeState(0xB57E273B814CD416, 0x2B51042562AE2420, 0x66A3A7768DDF2218,
                0x5AAD0A7A8153650C, 0x4F3E0E32539493B6),
)
ASCON_XOFA = HashVariantParams(
    "Ascon-Xofa", 12, 8, None,
    SpongeState(0x44906568B77B9832, 0xCD8D6CAE53455532, 0xF7B5212756422129,
                0x246885E1DE0D225B, 0xA8CB5CE33449973F),
)

VARIANTS = {p.name: p for p in (ASCON_HASH, ASCON_HASHA, ASCON_XOF, ASCON_XOFA)}


class Hasher:
    """Incremental absorb/squeeze. Single owner; not for concurrent updates."""

    def __init__(self, params: HashVariantParams = ASCON_HASH):
        self.params = params
        self._state = params.init_state
        self._buffer = b""
        self._finished = False

    def update(self, data: bytes) -> "Hasher":
        if self._finished:
            raise ParameterError("hasher already finalized")
        buf = self._buffer + bytes(data)
        full = len(buf) - len(buf) % RATE_BYTES
        s = self._state
        rb = self.params.rounds_b
        for i in range(0, full, RATE_BYTES):
            s = permutation.permute(
                (s[0] ^ int.from_bytes(buf[i:i + RATE_BYTES], "big"), s[1], s[2], s[3], s[4]), rb
            )
        self._state = s
        self._buffer = buf[full:]
        return self

    def read(self, length: int) -> bytes:
        """Finalize and squeeze ``length`` bytes."""
        if length < 1:
            raise ParameterError("output length must be at least 1 byte")
        if self._finished:
            raise ParameterError("hasher already finalized")
        self._finished = True
        p = self.params
        last = self._buffer + b"\x80" + bytes(RATE_BYTES - 1 - len(self._buffer))
        s = self._state
        s = permutation.permute((s[0] ^ int.from_bytes(last, "big"), s[1], s[2], s[3], s[4]), p.rounds_a)
        out = [s[0].to_bytes(8, "big")]
        for _ in range((length - 1) // RATE_BYTES):
            s = permutation.permute(s, p.rounds_b)
            out.append(s[0].to_bytes(8, "big"))
        return b"".join(out)[:length]

    def digest(self) -> bytes:
        if self.params.is_xof:
            raise ParameterError(f"{self.params.name} needs an explicit output length; use read()")
        return self.read(self.params.output_bits // 8)


def hash(message: bytes, params: HashVariantParams = ASCON_HASH) -> bytes:
    if params.is_xof:
        raise ParameterError(f"{params.name} is an XOF; call xof() with an output length")
    return Hasher(params).update(message).digest()


def xof(message: bytes, output_len_bytes: int, params: HashVariantParams = ASCON_XOF) -> bytes:
    if not params.is_xof:
        raise ParameterError(f"{params.name} has a fixed output length; call hash()")
    if output_len_bytes < 1:
        raise ParameterError("output_len_bytes must be >= 1")
    return Hasher(params).update(message).read(output_len_bytes)
