"""Ascon AEAD/hash family and AES-128 in pure Python, with a timing harness
and a lossy UAV-link simulator for comparing them."""

from . import aead, aes, bench, hashing, kat, linksim, permutation
from .aead import ASCON_128, ASCON_128A, AeadSealed
from .errors import AuthenticationError, DatasetError, ParameterError, ReplayError, SessionError
from .hashing import ASCON_HASH, ASCON_HASHA, ASCON_XOF, ASCON_XOFA

__version__ = "0.1.0"

__all__ = [
    "aead", "aes", "bench", "hashing", "kat", "linksim", "permutation",
    "ASCON_128", "ASCON_128A", "AeadSealed",
    "ASCON_HASH", "ASCON_HASHA", "ASCON_XOF", "ASCON_XOFA",
    "AuthenticationError", "DatasetError", "ParameterError", "ReplayError", "SessionError",
]
