"""AES-128: FIPS-197 key schedule, the four round transforms and their
inverses, single-block encrypt/decrypt, and a counter mode for bulk data.

Block state is 16 bytes in column-major order: ``state[row + 4 * col]``.
Transforms take any 16-byte sequence and return ``bytes``.
"""
from __future__ import annotations

from typing import Sequence, Tuple, Union

from .errors import ParameterError

BLOCK_BYTES = 16
ROUNDS = 10

SBOX = (
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
)
INV_SBOX = bytes(SBOX.index(v) for v in range(256))
SBOX = bytes(SBOX)

RCON = (0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36)


def xtime(b: int) -> int:
    b <<= 1
    return (b ^ 0x11B) if b & 0x100 else b


def gf_mul(a: int, b: int) -> int:
    """Multiply in GF(2^8) modulo x^8 + x^4 + x^3 + x + 1."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a = xtime(a)
        b >>= 1
    return r


MUL2, MUL3, MUL9, MUL11, MUL13, MUL14 = (
    bytes(gf_mul(x, k) for x in range(256)) for k in (2, 3, 9, 11, 13, 14)
)

# ShiftRows as a gather: output position i takes input position _SHIFT[i].
_SHIFT = tuple((r + 4 * ((c + r) % 4)) for c in range(4) for r in range(4))
_INV_SHIFT = tuple((r + 4 * ((c - r) % 4)) for c in range(4) for r in range(4))


def _check_block(block: Sequence[int]) -> None:
    if len(block) != BLOCK_BYTES:
        raise ParameterError(f"AES block must be {BLOCK_BYTES} bytes, got {len(block)}")


def sub_bytes(state: Sequence[int]) -> bytes:
    return bytes(SBOX[b] for b in state)


def inv_sub_bytes(state: Sequence[int]) -> bytes:
    return bytes(INV_SBOX[b] for b in state)


def shift_rows(state: Sequence[int]) -> bytes:
    """Row r rotates left by r positions."""
    return bytes(state[i] for i in _SHIFT)


def inv_shift_rows(state: Sequence[int]) -> bytes:
    return bytes(state[i] for i in _INV_SHIFT)


def mix_columns(state: Sequence[int]) -> bytes:
    out = bytearray(16)
    for c in range(0, 16, 4):
        a0, a1, a2, a3 = state[c:c + 4]
        out[c] = MUL2[a0] ^ MUL3[a1] ^ a2 ^ a3
        out[c + 1] = a0 ^ MUL2[a1] ^ MUL3[a2] ^ a3
        out[c + 2] = a0 ^ a1 ^ MUL2[a2] ^ MUL3[a3]
        out[c + 3] = MUL3[a0] ^ a1 ^ a2 ^ MUL2[a3]
    return bytes(out)


def inv_mix_columns(state: Sequence[int]) -> bytes:
    out = bytearray(16)
    for c in range(0, 16, 4):
        a0, a1, a2, a3 = state[c:c + 4]
        out[c] = MUL14[a0] ^ MUL11[a1] ^ MUL13[a2] ^ MUL9[a3]
        out[c + 1] = MUL9[a0] ^ MUL14[a1] ^ MUL11[a2] ^ MUL13[a3]
        out[c + 2] = MUL13[a0] ^ MUL9[a1] ^ MUL14[a2] ^ MUL11[a3]
        out[c + 3] = MUL11[a0] ^ MUL13[a1] ^ MUL9[a2] ^ MUL14[a3]
    return bytes(out)


def add_round_key(state: Sequence[int], round_key: Sequence[int]) -> bytes:
    return bytes(a ^ b for a, b in zip(state, round_key))


AesKeySchedule = Tuple[bytes, ...]


def expand_key(key: bytes) -> AesKeySchedule:
    """Expand a 16-byte key into 11 round keys of 16 bytes each."""
    if len(key) != 16:
        raise ParameterError(f"AES-128 key must be 16 bytes, got {len(key)}")
    words = [list(key[i:i + 4]) for i in range(0, 16, 4)]
    for i in range(4, 44):
        t = list(words[i - 1])
        if i % 4 == 0:
            t = t[1:] + t[:1]
            t = [SBOX[b] for b in t]
            t[0] ^= RCON[i // 4 - 1]
        words.append([a ^ b for a, b in zip(words[i - 4], t)])
    return tuple(bytes(sum(words[4 * r:4 * r + 4], [])) for r in range(ROUNDS + 1))


def _schedule(key_or_schedule: Union[bytes, AesKeySchedule]) -> AesKeySchedule:
    if isinstance(key_or_schedule, tuple):
        if len(key_or_schedule) != ROUNDS + 1:
            raise ParameterError("AES-128 schedule must hold 11 round keys")
        return key_or_schedule
    return expand_key(key_or_schedule)


def encrypt_block(schedule: Union[bytes, AesKeySchedule], block: bytes) -> bytes:
    rk = _schedule(schedule)
    _check_block(block)
    s = add_round_key(block, rk[0])
    for r in range(1, ROUNDS):
        s = add_round_key(mix_columns(shift_rows(sub_bytes(s))), rk[r])
    return add_round_key(shift_rows(sub_bytes(s)), rk[ROUNDS])


def decrypt_block(schedule: Union[bytes, AesKeySchedule], block: bytes) -> bytes:
    rk = _schedule(schedule)
    _check_block(block)
    s = inv_sub_bytes(inv_shift_rows(add_round_key(block, rk[ROUNDS])))
    for r in range(ROUNDS - 1, 0, -1):
        s = inv_sub_bytes(inv_shift_rows(inv_mix_columns(add_round_key(s, rk[r]))))
    return add_round_key(s, rk[0])


def ctr_process(key: Union[bytes, AesKeySchedule], counter_nonce: bytes, data: bytes) -> bytes:
    """Counter-mode keystream XOR; encryption and decryption are the same call.

    The last 4 bytes of ``counter_nonce`` are a big-endian block counter that
    increments per block and must not wrap within one message.
    """
    if len(counter_nonce) != BLOCK_BYTES:
        raise ParameterError(f"counter block must be {BLOCK_BYTES} bytes")
    rk = _schedule(key)
    prefix = bytes(counter_nonce[:12])
    start = int.from_bytes(counter_nonce[12:], "big")
    n_blocks = -(-len(data) // BLOCK_BYTES)
    if start + n_blocks > 1 << 32:
        raise ParameterError("32-bit block counter would wrap")
    stream = b"".join(
        encrypt_block(rk, prefix + (start + i).to_bytes(4, "big")) for i in range(n_blocks)
    )
    n = len(data)
    return (int.from_bytes(data, "big") ^ int.from_bytes(stream[:n], "big")).to_bytes(n, "big")
