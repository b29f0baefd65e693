"""The Ascon permutation over a 320-bit state of five 64-bit words.

Each round adds a round constant to ``x2``, runs the 5-bit S-box across all
64 bit-columns of the state, then diffuses every word with two rotations.
``permute`` is the fused fast path; the step functions are exported
separately so they can be tested (and composed) on their own.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

from .errors import ParameterError

MASK64 = 0xFFFFFFFFFFFFFFFF
MAX_ROUNDS = 12

# 12-round schedule; a b-round permutation uses the last b entries.
ROUND_CONSTANTS = tuple(((0xF - i) << 4) | i for i in range(MAX_ROUNDS))

# Column value is x0 x1 x2 x3 x4 read as a 5-bit number, x0 most significant.
SBOX = (
    0x04, 0x0B, 0x1F, 0x14, 0x1A, 0x15, 0x09, 0x02,
    0x1B, 0x05, 0x08, 0x12, 0x1D, 0x03, 0x06, 0x1C,
    0x1E, 0x13, 0x07, 0x0E, 0x00, 0x0D, 0x11, 0x18,
    0x10, 0x0C, 0x01, 0x19, 0x16, 0x0A, 0x0F, 0x17,
)
INV_SBOX = tuple(SBOX.index(v) for v in range(32))

ROTATIONS = ((19, 28), (61, 39), (1, 6), (10, 17), (7, 41))


class SpongeState(NamedTuple):
    x0: int
    x1: int
    x2: int
    x3: int
    x4: int

    @classmethod
    def from_bytes(cls, data: bytes) -> "SpongeState":
        if len(data) != 40:
            raise ParameterError(f"state needs 40 bytes, got {len(data)}")
        return cls(*(int.from_bytes(data[i:i + 8], "big") for i in range(0, 40, 8)))

    def to_bytes(self) -> bytes:
        return b"".join(w.to_bytes(8, "big") for w in self)

    def __xor__(self, other: Sequence[int]) -> "SpongeState":
        return SpongeState(*(a ^ b for a, b in zip(self, other)))

    def __repr__(self) -> str:
        return "SpongeState(" + " ".join(f"{w:016x}" for w in self) + ")"


ZERO_STATE = SpongeState(0, 0, 0, 0, 0)


def rotr(value: int, n: int) -> int:
    return ((value >> n) | (value << (64 - n))) & MASK64


def _check_rounds(rounds: int) -> None:
    if not 1 <= rounds <= MAX_ROUNDS:
        raise ParameterError(f"rounds must be in 1..{MAX_ROUNDS}, got {rounds}")


def round_constant(round_index: int, total_rounds: int) -> int:
    _check_rounds(total_rounds)
    if not 0 <= round_index < total_rounds:
        raise ParameterError(f"round_index must be in 0..{total_rounds - 1}, got {round_index}")
    return ROUND_CONSTANTS[MAX_ROUNDS - total_rounds + round_index]


def add_round_constant(state: Sequence[int], round_index: int, total_rounds: int) -> SpongeState:
    x0, x1, x2, x3, x4 = state
    return SpongeState(x0, x1, x2 ^ round_constant(round_index, total_rounds), x3, x4)


def substitution_layer(state: Sequence[int]) -> SpongeState:
    """Bit-sliced S-box: all 64 columns at once with word-wide logic."""
    x0, x1, x2, x3, x4 = state
    x0 ^= x4
    x4 ^= x3
    x2 ^= x1
    t0 = ~x0 & x1
    t1 = ~x1 & x2
    t2 = ~x2 & x3
    t3 = ~x3 & x4
    t4 = ~x4 & x0
    x0 ^= t1
    x1 ^= t2
    x2 ^= t3
    x3 ^= t4
    x4 ^= t0
    x1 ^= x0
    x0 ^= x4
    x3 ^= x2
    x2 = ~x2
    return SpongeState(x0 & MASK64, x1 & MASK64, x2 & MASK64, x3 & MASK64, x4 & MASK64)


def _apply_columnwise(state: Sequence[int], table: Sequence[int]) -> SpongeState:
    out = [0, 0, 0, 0, 0]
    for j in range(64):
        col = 0
        for w in state:
            col = (col << 1) | ((w >> j) & 1)
        v = table[col]
        for i in range(5):
            out[i] |= ((v >> (4 - i)) & 1) << j
    return SpongeState(*out)


def substitution_layer_table(state: Sequence[int]) -> SpongeState:
    """Column-by-column lookup form of ``substitution_layer`` (slow; for checking)."""
    return _apply_columnwise(state, SBOX)


def inverse_substitution_layer(state: Sequence[int]) -> SpongeState:
    return _apply_columnwise(state, INV_SBOX)


def linear_layer(state: Sequence[int]) -> SpongeState:
    return SpongeState(*(w ^ rotr(w, a) ^ rotr(w, b) for w, (a, b) in zip(state, ROTATIONS)))


def permute(state: Sequence[int], rounds: int) -> SpongeState:
    """Apply ``rounds`` rounds (the last ``rounds`` of the 12-round schedule)."""
    _check_rounds(rounds)
    x0, x1, x2, x3, x4 = state
    M = MASK64
    for c in ROUND_CONSTANTS[MAX_ROUNDS - rounds:]:
        x2 ^= c
        # substitution layer
        x0 ^= x4
        x4 ^= x3
        x2 ^= x1
        t0 = ~x0 & x1
        t1 = ~x1 & x2
        t2 = ~x2 & x3
        t3 = ~x3 & x4
        t4 = ~x4 & x0
        x0 ^= t1
        x1 ^= t2
        x2 ^= t3
        x3 ^= t4
        x4 ^= t0
        x1 ^= x0
        x0 ^= x4
        x3 ^= x2
        x2 = ~x2 & M
        # linear layer; rotations written out so no call overhead per word
        x0 ^= ((x0 >> 19) | (x0 << 45)) & M ^ ((x0 >> 28) | (x0 << 36)) & M
        x1 ^= ((x1 >> 61) | (x1 << 3)) & M ^ ((x1 >> 39) | (x1 << 25)) & M
        x2 ^= ((x2 >> 1) | (x2 << 63)) & M ^ ((x2 >> 6) | (x2 << 58)) & M
        x3 ^= ((x3 >> 10) | (x3 << 54)) & M ^ ((x3 >> 17) | (x3 << 47)) & M
        x4 ^= ((x4 >> 7) | (x4 << 57)) & M ^ ((x4 >> 41) | (x4 << 23)) & M
    return SpongeState(x0 & M, x1 & M, x2, x3, x4)


def permute_stepwise(state: Sequence[int], rounds: int) -> SpongeState:
    """Same map as ``permute`` built from the individual step functions."""
    _check_rounds(rounds)
    s = SpongeState(*state)
    for i in range(rounds):
        s = linear_layer(substitution_layer(add_round_constant(s, i, rounds)))
    return s
