"""Name registry shared by the CLI, the benchmark and KAT replay.

Names are matched case-insensitively with ``-`` and ``_`` ignored, so
``Ascon-128a``, ``ascon128a`` and ``ASCON_128A`` all resolve to the same entry.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import aead, hashing
from .errors import ParameterError


@dataclass(frozen=True)
class Algorithm:
    id: str
    display: str
    kind: str  # "aead", "hash", "xof" or "cipher"
    params: Union[aead.AeadVariantParams, hashing.HashVariantParams, None] = None


ALGORITHMS = {
    a.id: a
    for a in (
        Algorithm("ascon128", "Ascon-128", "aead", aead.ASCON_128),
        Algorithm("ascon128a", "Ascon-128a", "aead", aead.ASCON_128A),
        Algorithm("asconhash", "Ascon-Hash", "hash", hashing.ASCON_HASH),
        Algorithm("asconhasha", "Ascon-Hasha", "hash", hashing.ASCON_HASHA),
        Algorithm("asconxof", "Ascon-Xof", "xof", hashing.ASCON_XOF),
        Algorithm("asconxofa", "Ascon-Xofa", "xof", hashing.ASCON_XOFA),
        Algorithm("aes128", "AES-128", "cipher"),
    )
}
# counter-mode AES is what "aes128" means everywhere except block KATs
ALIASES = {"aes128ctr": "aes128", "aes": "aes128"}

BENCH_SET = ("ascon128", "ascon128a", "asconhash", "asconhasha", "asconxof", "asconxofa", "aes128")


def normalize(name: str) -> str:
    key = name.lower().replace("-", "").replace("_", "")
    return ALIASES.get(key, key)


def lookup(name: str, kinds=None) -> Algorithm:
    algo = ALGORITHMS.get(normalize(name))
    allowed = [a for a in ALGORITHMS.values() if kinds is None or a.kind in kinds]
    if algo is None or algo not in allowed:
        valid = ", ".join(a.id for a in allowed)
        raise ParameterError(f"unknown algorithm {name!r}; valid names: {valid}")
    return algo
