"""Simulated UAV telemetry link: per-packet encryption over a lossy channel.

A sender seals every telemetry frame independently under the nonce
``session_salt || seq``; the receiver checks each frame on its own, so a lost
packet never prevents later packets from being opened. The channel is an
in-process, seed-driven model that drops frames, flips bits and optionally
reorders within a bounded window.

Wire layout (big-endian)::

    version:1 | cipher_id:1 | session_salt:8 | seq:8 | header_len:2 | tag_len:1
    | header | payload (ciphertext) | tag

``tag_len`` is 16 for the Ascon AEADs and 0 for AES-128-CTR, which carries no
integrity protection at all.
"""
from __future__ import annotations

import configparser
import heapq
import json
import math
import random
import secrets
import struct
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Dict, List, Optional, Tuple, Union

from . import aead, aes
from .errors import AuthenticationError, FrameError, ParameterError, ReplayError, SessionError

VERSION = 1
SALT_BYTES = 8
TAG_BYTES = aead.TAG_BYTES
WINDOW_SIZE = 64

_FIXED = struct.Struct(">BB8sQHB")

CIPHER_IDS = {"ascon128": 1, "ascon128a": 2, "aes128ctr": 3}
CIPHER_NAMES = {v: k for k, v in CIPHER_IDS.items()}
_AEAD_PARAMS = {1: aead.ASCON_128, 2: aead.ASCON_128A}

SEQ_LIMIT = {1: 1 << 64, 2: 1 << 64, 3: 1 << 32}  # CTR packs seq into 32 bits of its IV


def cipher_id_for(name: Union[str, int]) -> int:
    if isinstance(name, int):
        if name not in CIPHER_NAMES:
            raise ParameterError(f"unknown cipher id {name}")
        return name
    key = name.lower().replace("-", "").replace("_", "")
    if key in ("aes128", "aes"):
        key = "aes128ctr"
    if key not in CIPHER_IDS:
        raise ParameterError(f"unknown cipher {name!r}; valid: {', '.join(CIPHER_IDS)}")
    return CIPHER_IDS[key]


@dataclass(frozen=True)
class WireFrame:
    cipher_id: int
    session_salt: bytes
    seq: int
    header: bytes
    payload: bytes
    tag: bytes = b""
    version: int = VERSION

    @property
    def nonce(self) -> bytes:
        return self.session_salt + self.seq.to_bytes(8, "big")

    def pack(self) -> bytes:
        return (
            _FIXED.pack(self.version, self.cipher_id, self.session_salt, self.seq,
                        len(self.header), len(self.tag))
            + self.header + self.payload + self.tag
        )

    @classmethod
    def unpack(cls, data: bytes) -> "WireFrame":
        if len(data) < _FIXED.size:
            raise FrameError("frame shorter than fixed header")
        version, cid, salt, seq, hlen, tlen = _FIXED.unpack_from(data)
        body = data[_FIXED.size:]
        if hlen + tlen > len(body):
            raise FrameError("length fields exceed frame size")
        header = body[:hlen]
        payload = body[hlen:len(body) - tlen]
        tag = body[len(body) - tlen:]
        return cls(cid, salt, seq, bytes(header), bytes(payload), bytes(tag), version)


def _ctr_iv(salt: bytes, seq: int) -> bytes:
    return salt + seq.to_bytes(4, "big") + bytes(4)


class ReplayWindow:
    """Sliding bitmap over the last ``size`` sequence numbers."""

    def __init__(self, size: int = WINDOW_SIZE):
        self.size = size
        self.highest = -1
        self.bitmap = 0  # bit i set: highest - i has been accepted

    def check(self, seq: int) -> bool:
        if seq > self.highest:
            return True
        offset = self.highest - seq
        if offset >= self.size:
            return False
        return not (self.bitmap >> offset) & 1

    def mark(self, seq: int) -> None:
        if seq > self.highest:
            shift = seq - self.highest
            self.bitmap = ((self.bitmap << shift) | 1) & ((1 << self.size) - 1)
            self.highest = seq
        else:
            self.bitmap |= 1 << (self.highest - seq)


class Sender:
    def __init__(self, cipher_id: int, key: bytes, session_salt: bytes):
        self.cipher_id = cipher_id
        self.key = key
        self.session_salt = session_salt
        self.seq = 0
        self._schedule = aes.expand_key(key) if cipher_id == 3 else None

    def send(self, header: bytes, payload: bytes) -> WireFrame:
        seq = self.seq
        if seq >= SEQ_LIMIT[self.cipher_id]:
            raise SessionError("sequence space exhausted; open a new session")
        self.seq += 1
        if self._schedule is not None:
            ct = aes.ctr_process(self._schedule, _ctr_iv(self.session_salt, seq), payload)
            return WireFrame(self.cipher_id, self.session_salt, seq, header, ct)
        nonce = self.session_salt + seq.to_bytes(8, "big")
        sealed = aead.seal(self.key, nonce, header, payload, _AEAD_PARAMS[self.cipher_id])
        return WireFrame(self.cipher_id, self.session_salt, seq, header, sealed.ciphertext, sealed.tag)


class Receiver:
    def __init__(self, cipher_id: int, key: bytes, session_salt: bytes, window_size: int = WINDOW_SIZE):
        self.cipher_id = cipher_id
        self.key = key
        self.session_salt = session_salt
        self.window = ReplayWindow(window_size)
        self._schedule = aes.expand_key(key) if cipher_id == 3 else None

    @property
    def authenticated(self) -> bool:
        return self._schedule is None

    def receive(self, frame: Union[bytes, WireFrame]) -> Tuple[bytes, bytes]:
        """Return (header, payload) or raise AuthenticationError / ReplayError.

        Malformed frames and frames for another session are reported as
        AuthenticationError as well.
        """
        if not isinstance(frame, WireFrame):
            try:
                frame = WireFrame.unpack(frame)
            except FrameError as exc:
                raise AuthenticationError(f"malformed frame: {exc}") from None
        expected_tag = TAG_BYTES if self.authenticated else 0
        if (frame.version != VERSION or frame.cipher_id != self.cipher_id
                or frame.session_salt != self.session_salt or len(frame.tag) != expected_tag):
            raise AuthenticationError("frame does not belong to this session")
        if not self.window.check(frame.seq):
            raise ReplayError(f"sequence number {frame.seq} rejected by replay window")
        if self._schedule is not None:
            if frame.seq >= SEQ_LIMIT[3]:
                raise AuthenticationError("sequence number out of range")
            payload = aes.ctr_process(self._schedule, _ctr_iv(frame.session_salt, frame.seq), frame.payload)
        else:
            payload = aead.open(self.key, frame.nonce, frame.header,
                                aead.AeadSealed(frame.payload, frame.tag), _AEAD_PARAMS[self.cipher_id])
        self.window.mark(frame.seq)
        return frame.header, payload


def open_session(cipher: Union[str, int], key: bytes,
                 rng: Optional[random.Random] = None) -> Tuple[Sender, Receiver]:
    """New sender/receiver pair sharing a fresh random 8-byte salt.

    The salt comes from ``secrets`` unless a seeded ``rng`` is supplied.
    """
    cid = cipher_id_for(cipher)
    if len(key) != 16:
        raise ParameterError("key must be 16 bytes")
    salt = rng.randbytes(SALT_BYTES) if rng is not None else secrets.token_bytes(SALT_BYTES)
    return Sender(cid, key, salt), Receiver(cid, key, salt)


# -- channel ------------------------------------------------------------------

@dataclass(frozen=True)
class ChannelModel:
    loss_p: float = 0.0
    corrupt_q: float = 0.0
    reorder_window: int = 0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.loss_p <= 1.0:
            raise ParameterError("loss_p must be in [0, 1]")
        if not 0.0 <= self.corrupt_q <= 1.0:
            raise ParameterError("corrupt_q must be in [0, 1]")
        if self.reorder_window < 0:
            raise ParameterError("reorder_window must be >= 0")


class Channel:
    """Seeded lossy channel.

    ``transmit`` returns whatever the channel releases at this step: nothing
    (dropped or held back for reordering) or one or more ``(ident, bytes)``
    pairs. Each frame is held for a uniform 0..reorder_window steps.
    """

    def __init__(self, model: ChannelModel):
        self.model = model
        self.rng = random.Random(model.seed)
        self.dropped = 0
        self.corrupted = 0
        self._step = 0
        self._held: list = []
        self._counter = 0
        q = model.corrupt_q
        self._log_keep = math.log1p(-q) if 0.0 < q < 1.0 else None

    def _flip_bits(self, data: bytes) -> bytes:
        q = self.model.corrupt_q
        if q == 0.0 or not data:
            return data
        nbits = len(data) * 8
        if q == 1.0:
            return bytes(b ^ 0xFF for b in data)
        out = None
        pos = -1
        while True:
            # geometric gap to the next flipped bit
            pos += 1 + int(math.log(1.0 - self.rng.random()) / self._log_keep)
            if pos >= nbits:
                break
            if out is None:
                out = bytearray(data)
            out[pos >> 3] ^= 0x80 >> (pos & 7)
        return data if out is None else bytes(out)

    def transmit(self, data: bytes, ident=None) -> List[Tuple[object, bytes]]:
        self._step += 1
        if self.model.loss_p and self.rng.random() < self.model.loss_p:
            self.dropped += 1
        else:
            out = self._flip_bits(data)
            if out is not data:
                self.corrupted += 1
            delay = self.rng.randint(0, self.model.reorder_window) if self.model.reorder_window else 0
            heapq.heappush(self._held, (self._step + delay, self._counter, ident, out))
            self._counter += 1
        return self._release(self._step)

    def _release(self, step) -> List[Tuple[object, bytes]]:
        ready = []
        while self._held and self._held[0][0] <= step:
            _, _, ident, data = heapq.heappop(self._held)
            ready.append((ident, data))
        return ready

    def flush(self) -> List[Tuple[object, bytes]]:
        return self._release(math.inf)

    @property
    def in_flight(self) -> int:
        return len(self._held)


def channel_transmit(frame: bytes, model: ChannelModel, rng: Optional[random.Random] = None) -> Optional[bytes]:
    """One-shot form: None if dropped, else the (possibly corrupted) frame."""
    ch = Channel(model)
    if rng is not None:
        ch.rng = rng
    out = ch.transmit(frame)
    return out[0][1] if out else None


# -- scenarios --------------------------------------------------------------

@dataclass
class LinkStats:
    cipher: str
    authenticated: bool
    sent: int = 0
    delivered: int = 0
    lost: int = 0
    auth_failed: int = 0
    replayed: int = 0
    in_flight: int = 0
    delivered_corrupt: int = 0
    accepted_bytes: int = 0
    elapsed_s: float = 0.0
    latencies: List[float] = field(default_factory=list)

    @property
    def goodput_Bps(self) -> float:
        return self.accepted_bytes / self.elapsed_s if self.elapsed_s > 0 else 0.0

    def balanced(self) -> bool:
        return self.sent == self.delivered + self.lost + self.auth_failed + self.replayed + self.in_flight

    def counts(self) -> Dict[str, int]:
        return {k: getattr(self, k) for k in
                ("sent", "delivered", "lost", "auth_failed", "replayed", "in_flight",
                 "delivered_corrupt", "accepted_bytes")}

    def to_table(self) -> str:
        lat = sorted(self.latencies)
        mean = math.fsum(lat) / len(lat) if lat else float("nan")
        p99 = lat[min(len(lat) - 1, int(0.99 * len(lat)))] if lat else float("nan")
        rows = list(self.counts().items()) + [
            ("authenticated", self.authenticated),
            ("elapsed_s", f"{self.elapsed_s:.3f}"),
            ("goodput_Bps", f"{self.goodput_Bps:.1f}"),
            ("latency_mean_s", f"{mean:.6f}"),
            ("latency_p99_s", f"{p99:.6f}"),
        ]
        width = max(len(k) for k, _ in rows)
        return f"cipher: {self.cipher}\n" + "\n".join(f"{k:<{width}}  {v}" for k, v in rows) + "\n"


@dataclass
class ScenarioConfig:
    cipher: str = "ascon128a"
    packets: int = 1000
    payload_min: int = 16
    payload_max: int = 64
    loss_p: float = 0.0
    corrupt_q: float = 0.0
    reorder_window: int = 0
    seed: int = 0
    key: Optional[bytes] = None

    def __post_init__(self):
        cipher_id_for(self.cipher)
        if self.packets < 0:
            raise ParameterError("packets must be >= 0")
        if not 0 <= self.payload_min <= self.payload_max:
            raise ParameterError("need 0 <= payload_min <= payload_max")
        if self.key is not None and len(self.key) != 16:
            raise ParameterError("key must be 16 bytes")
        ChannelModel(self.loss_p, self.corrupt_q, self.reorder_window, self.seed)

    @property
    def channel(self) -> ChannelModel:
        return ChannelModel(self.loss_p, self.corrupt_q, self.reorder_window, self.seed)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ScenarioConfig":
        """Read ``key = value`` lines; a leading ``[scenario]`` section is optional."""
        text = Path(path).read_text()
        parser = configparser.ConfigParser()
        if not text.lstrip().startswith("["):
            text = "[scenario]\n" + text
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ParameterError(f"bad scenario file: {exc}") from None
        sec = parser[parser.sections()[0]] if parser.sections() else {}
        kwargs = {}
        casts = {"packets": int, "payload_min": int, "payload_max": int, "reorder_window": int,
                 "seed": int, "loss_p": float, "corrupt_q": float, "cipher": str,
                 "key": bytes.fromhex}
        for name, value in sec.items():
            if name not in casts:
                raise ParameterError(f"unknown scenario key {name!r}")
            try:
                kwargs[name] = casts[name](value)
            except ValueError:
                raise ParameterError(f"bad value for {name}: {value!r}") from None
        return cls(**kwargs)


def run_scenario(config: ScenarioConfig, trace: Optional[IO[str]] = None) -> LinkStats:
    """Drive send -> channel -> receive for ``config.packets`` frames.

    Latency is measured from the start of the send call to acceptance by the
    receiver. ``trace`` receives one JSON record per packet outcome.
    """
    rng = random.Random(config.seed)
    key = config.key if config.key is not None else rng.randbytes(16)
    sender, receiver = open_session(config.cipher, key, rng=random.Random(rng.getrandbits(64)))
    payload_rng = random.Random(rng.getrandbits(64))
    channel = Channel(config.channel)
    stats = LinkStats(CIPHER_NAMES[sender.cipher_id], receiver.authenticated)
    sent_payloads: Dict[int, bytes] = {}
    sent_at: Dict[int, int] = {}
    clock = time.perf_counter_ns

    def record(seq, outcome, latency=None, nbytes=0):
        if trace is not None:
            trace.write(json.dumps({"seq": seq, "outcome": outcome, "latency_s": latency, "bytes": nbytes}) + "\n")

    def deliver(batch):
        for seq, data in batch:
            try:
                _, payload = receiver.receive(data)
            except AuthenticationError:
                stats.auth_failed += 1
                record(seq, "auth_failed")
            except ReplayError:
                stats.replayed += 1
                record(seq, "replayed")
            else:
                latency = (clock() - sent_at.pop(seq)) * 1e-9
                stats.delivered += 1
                stats.accepted_bytes += len(payload)
                stats.latencies.append(latency)
                outcome = "delivered"
                if payload != sent_payloads[seq]:
                    stats.delivered_corrupt += 1
                    outcome = "delivered_corrupt"
                record(seq, outcome, latency, len(payload))
            sent_payloads.pop(seq, None)
            sent_at.pop(seq, None)

    start = clock()
    for i in range(config.packets):
        size = payload_rng.randint(config.payload_min, config.payload_max)
        payload = payload_rng.randbytes(size)
        header = struct.pack(">BQ", i % 4, i * 50)  # telemetry type, timestamp (ms)
        t0 = clock()
        frame = sender.send(header, payload)
        stats.sent += 1
        sent_payloads[frame.seq] = payload
        sent_at[frame.seq] = t0
        dropped_before = channel.dropped
        batch = channel.transmit(frame.pack(), frame.seq)
        if channel.dropped != dropped_before:
            stats.lost += 1
            record(frame.seq, "lost")
            del sent_payloads[frame.seq], sent_at[frame.seq]
        deliver(batch)
    deliver(channel.flush())
    stats.in_flight = channel.in_flight
    stats.elapsed_s = (clock() - start) * 1e-9
    return stats
