"""Known-answer-test files in the NIST LWC layout.

Records are blank-line separated blocks of ``Name = HEX`` lines::

    Count = 1
    Key = 000102...
    Nonce = 000102...
    PT =
    AD =
    CT = E355159F...

AEAD records carry ``CT`` = ciphertext || tag; hash records carry ``Msg`` and
``MD``; AES block records carry ``Key``, ``PT`` and ``CT``. Files ending in
``.gz`` are read transparently.
"""
from __future__ import annotations

import gzip
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

from . import aead, aes, hashing
from .algorithms import Algorithm, lookup
from .errors import AuthenticationError, DatasetError

Record = Dict[str, str]

_HEX_FIELDS = {
    "aead": ("Key", "Nonce", "PT", "AD", "CT"),
    "hash": ("Msg", "MD"),
    "xof": ("Msg", "MD"),
    "block": ("Key", "PT", "CT"),
}


def read_text(path: Union[str, Path]) -> str:
    path = Path(path)
    if path.suffix == ".gz":
        with gzip.open(path, "rt") as fh:
            return fh.read()
    return path.read_text()


def parse_records(text: str) -> List[Record]:
    records: List[Record] = []
    current: Record = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            if current:
                records.append(current)
                current = {}
            continue
        if line.startswith("#"):
            continue
        name, sep, value = line.partition("=")
        if not sep:
            where = f"count {current['Count']}" if "Count" in current else f"line {lineno}"
            raise DatasetError(f"{where}: expected 'Name = value', got {raw!r}")
        current[name.strip()] = value.strip()
    if current:
        records.append(current)
    return records


def load(path: Union[str, Path]) -> List[Record]:
    records = parse_records(read_text(path))
    if not records:
        raise DatasetError("no records")
    return records


def format_records(records: Iterable[Record]) -> str:
    blocks = ["\n".join(f"{k} = {v}" for k, v in rec.items()) for rec in records]
    return "\n\n".join(blocks) + "\n"


def _fields(rec: Record, kind: str) -> Dict[str, bytes]:
    out = {}
    for name in _HEX_FIELDS[kind]:
        if name not in rec:
            raise DatasetError(f"count {rec.get('Count', '?')}: missing field {name}")
        try:
            out[name] = bytes.fromhex(rec[name])
        except ValueError:
            raise DatasetError(f"count {rec.get('Count', '?')}: field {name} is not valid hex") from None
    return out


@dataclass
class KatResult:
    count: str
    ok: bool
    detail: str = ""


def check_record(rec: Record, algo: Algorithm) -> KatResult:
    count = rec.get("Count", "?")
    if algo.kind == "aead":
        f = _fields(rec, "aead")
        ct = aead.encrypt(f["Key"], f["Nonce"], f["AD"], f["PT"], algo.params)
        if ct != f["CT"]:
            return KatResult(count, False, "ciphertext/tag mismatch")
        try:
            pt = aead.decrypt(f["Key"], f["Nonce"], f["AD"], f["CT"], algo.params)
        except AuthenticationError:
            return KatResult(count, False, "decryption rejected the expected ciphertext")
        return KatResult(count, pt == f["PT"], "" if pt == f["PT"] else "decrypted plaintext mismatch")
    if algo.kind in ("hash", "xof"):
        f = _fields(rec, algo.kind)
        if algo.kind == "hash":
            md = hashing.hash(f["Msg"], algo.params)
        else:
            md = hashing.xof(f["Msg"], len(f["MD"]), algo.params)
        return KatResult(count, md == f["MD"], "" if md == f["MD"] else "digest mismatch")
    f = _fields(rec, "block")
    schedule = aes.expand_key(f["Key"])
    ct = aes.encrypt_block(schedule, f["PT"])
    if ct != f["CT"]:
        return KatResult(count, False, "ciphertext mismatch")
    ok = aes.decrypt_block(schedule, f["CT"]) == f["PT"]
    return KatResult(count, ok, "" if ok else "decryption mismatch")


def replay(records: List[Record], algorithm: str) -> List[KatResult]:
    algo = lookup(algorithm)
    return [check_record(rec, algo) for rec in records]


def guess_algorithm(path: Union[str, Path]) -> Optional[str]:
    """Infer the algorithm from a KAT filename such as ``..._ascon128a.txt``."""
    stem = Path(path).name.lower()
    for name in ("ascon128a", "ascon128", "asconhasha", "asconhash", "asconxofa", "asconxof", "aes128"):
        if name in stem:
            return name
    return None
