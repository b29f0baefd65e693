"""Write tests/data/aes128_block_kat.txt.

The first three records are published vectors (all-zero key/block, FIPS-197
Appendix B and Appendix C.1). The rest are random cases computed with the
``cryptography`` package's AES, an implementation independent of this one.
"""
import random
from pathlib import Path

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

PUBLISHED = [
    ("00000000000000000000000000000000", "00000000000000000000000000000000",
     "66e94bd4ef8a2c3b884cfa59ca342b2e"),
    ("2b7e151628aed2a6abf7158809cf4f3c", "3243f6a8885a308d313198a2e0370734",
     "3925841d02dc09fbdc118597196a0b32"),
    ("000102030405060708090a0b0c0d0e0f", "00112233445566778899aabbccddeeff",
     "69c4e0d86a7b0430d8cdb78070b4c55a"),
]


def ecb(key, block):
    enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    return enc.update(block) + enc.finalize()


if __name__ == "__main__":
    rng = random.Random(197)
    records = [(k, p, c) for k, p, c in PUBLISHED]
    for _ in range(61):
        key, pt = rng.randbytes(16), rng.randbytes(16)
        records.append((key.hex(), pt.hex(), ecb(key, pt).hex()))
    for k, p, c in PUBLISHED:
        assert ecb(bytes.fromhex(k), bytes.fromhex(p)).hex() == c
    out = Path(__file__).resolve().parent.parent / "data" / "aes128_block_kat.txt"
    out.write_text("\n\n".join(
        f"Count = {i}\nKey = {k.upper()}\nPT = {p.upper()}\nCT = {c.upper()}"
        for i, (k, p, c) in enumerate(records, 1)) + "\n")
