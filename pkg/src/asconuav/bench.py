"""Dataset-driven timing harness.

Every algorithm runs over every dataset entry; AEADs and AES-CTR are timed
for encrypt+decrypt of each entry, hashes and XOFs for one digest. From the
per-entry durations the harness derives

* peak time      -- the largest single duration,
* average time   -- sum of durations / number of runs,
* throughput     -- total bytes processed / total processing time (B/s).

Timed sections use ``time.perf_counter_ns`` and run single-threaded.
"""
from __future__ import annotations

import csv
import io
import json
import math
import platform
import random
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Sequence, Union

from . import aead, aes, hashing
from .algorithms import BENCH_SET, Algorithm, lookup
from .errors import DatasetError, ParameterError

CSV_COLUMNS = ("algorithm", "n", "peak_s", "avg_s", "throughput_Bps")
XOF_BENCH_BYTES = 32
OUTLIER_FACTOR = 10.0

NOTES = (
    "throughput = total bytes / total processing time (bytes per second)",
    "AES-128 runs in counter mode without authentication; the Ascon AEADs also compute and verify a tag",
    "hash and XOF variants have no decryption step; one digest per input is timed",
    "a warm-up pass precedes the timed runs and is excluded from the samples",
)


@dataclass
class TimingSamples:
    durations: List[float]
    sizes: List[int]

    def __post_init__(self):
        if not self.durations:
            raise ParameterError("timing samples are empty")
        if len(self.durations) != len(self.sizes):
            raise ParameterError("durations and sizes differ in length")
        if any(d < 0 for d in self.durations) or any(s < 0 for s in self.sizes):
            raise ParameterError("durations and sizes must be non-negative")

    @property
    def n(self) -> int:
        return len(self.durations)

    @property
    def total_time(self) -> float:
        return math.fsum(self.durations)

    @property
    def total_bytes(self) -> int:
        return sum(self.sizes)


def _durations(samples: Union[TimingSamples, Sequence[float]]) -> Sequence[float]:
    d = samples.durations if isinstance(samples, TimingSamples) else samples
    if len(d) == 0:
        raise ParameterError("timing samples are empty")
    return d


def peak_time(samples: Union[TimingSamples, Sequence[float]]) -> float:
    return max(_durations(samples))


def average_time(samples: Union[TimingSamples, Sequence[float]]) -> float:
    d = _durations(samples)
    return math.fsum(d) / len(d)


def throughput(total_bytes: int, total_time: float) -> float:
    if not total_time > 0:
        raise ParameterError(f"total_time must be positive, got {total_time}")
    return total_bytes / total_time


# -- datasets ---------------------------------------------------------------

def load_dataset(path: Union[str, Path]) -> List[bytes]:
    """Newline-delimited hex, one plaintext per line; blank lines are skipped."""
    entries = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                entries.append(bytes.fromhex(line))
            except ValueError:
                raise DatasetError("malformed hex", line=lineno) from None
    if not entries:
        raise DatasetError("dataset empty")
    return entries


def generate_dataset(n: int, min_size: int = 16, max_size: int = 1024, seed: int = 0) -> List[bytes]:
    """``n`` random entries, sizes uniform on [min_size, max_size]."""
    if n < 1:
        raise ParameterError("dataset needs at least one entry")
    if not 1 <= min_size <= max_size:
        raise ParameterError("need 1 <= min_size <= max_size")
    rng = random.Random(seed)
    return [rng.randbytes(rng.randint(min_size, max_size)) for _ in range(n)]


def write_dataset(path: Union[str, Path], entries: Iterable[bytes]) -> None:
    with open(path, "w") as fh:
        for e in entries:
            fh.write(e.hex() + "\n")


# -- the timed loop -----------------------------------------------------------

@dataclass
class AlgorithmResult:
    algorithm: str
    samples: TimingSamples
    authenticated: bool
    encrypt_samples: Optional[TimingSamples] = None
    decrypt_samples: Optional[TimingSamples] = None

    @property
    def n(self) -> int:
        return self.samples.n

    @property
    def peak_time_s(self) -> float:
        return peak_time(self.samples)

    @property
    def average_time_s(self) -> float:
        return average_time(self.samples)

    @property
    def overall_throughput_Bps(self) -> float:
        return throughput(self.samples.total_bytes, self.samples.total_time)

    @property
    def throughput_trace(self) -> List[float]:
        return [s / d if d > 0 else math.inf for d, s in zip(self.samples.durations, self.samples.sizes)]

    @property
    def outliers(self) -> int:
        """Samples slower than OUTLIER_FACTOR times the median."""
        med = statistics.median(self.samples.durations)
        return sum(d > OUTLIER_FACTOR * med for d in self.samples.durations)


@dataclass
class BenchReport:
    results: List[AlgorithmResult]
    dataset: str
    iterations: int
    environment: str = field(default_factory=lambda: environment_note())
    notes: Sequence[str] = NOTES

    def rows(self):
        for r in self.results:
            yield {
                "algorithm": r.algorithm,
                "n": r.n,
                "peak_s": r.peak_time_s,
                "avg_s": r.average_time_s,
                "throughput_Bps": r.overall_throughput_Bps,
            }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in self.rows():
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
        return buf.getvalue()

    def to_jsonl(self) -> str:
        lines = []
        for r, row in zip(self.results, self.rows()):
            row = dict(row, outliers=r.outliers, total_bytes=r.samples.total_bytes,
                       authenticated=r.authenticated)
            lines.append(json.dumps(row))
        return "\n".join(lines) + "\n"

    def to_table(self, split: bool = False) -> str:
        head = f"{'algorithm':<12} {'n':>6} {'peak_s':>12} {'avg_s':>12} {'throughput_B/s':>16} {'outliers':>8}"
        if split:
            head += f" {'avg_enc_s':>12} {'avg_dec_s':>12}"
        lines = [f"dataset: {self.dataset}  iterations: {self.iterations}",
                 f"host: {self.environment}", "", head, "-" * len(head)]
        for r in self.results:
            lines.append(
                f"{r.algorithm:<12} {r.n:>6} {r.peak_time_s:>12.6f} {r.average_time_s:>12.6f} "
                f"{r.overall_throughput_Bps:>16.1f} {r.outliers:>8}"
                + (f" {average_time(r.encrypt_samples):>12.6f} {average_time(r.decrypt_samples):>12.6f}"
                   if split else "")
            )
        lines.append("")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines) + "\n"


def environment_note() -> str:
    return f"{platform.python_implementation()} {platform.python_version()} on {platform.platform()} ({platform.machine()})"


def _make_ops(algo: Algorithm, key: bytes):
    """Return (encrypt, decrypt) callables taking (data, nonce)."""
    if algo.kind == "aead":
        params = algo.params

        def enc(data, nonce):
            return aead.seal(key, nonce, b"", data, params)

        def dec(sealed, nonce):
            return aead.open(key, nonce, b"", sealed, params)
        return enc, dec
    if algo.kind == "cipher":
        schedule = aes.expand_key(key)

        def ctr(data, nonce):
            # zero the block counter so long inputs never wrap it
            return aes.ctr_process(schedule, nonce[:12] + bytes(4), data)
        return ctr, ctr
    if algo.kind == "hash":
        params = algo.params
        return (lambda data, nonce: hashing.hash(data, params)), None
    params = algo.params
    return (lambda data, nonce: hashing.xof(data, XOF_BENCH_BYTES, params)), None


def run_benchmark(
    dataset: Sequence[bytes],
    algorithms: Sequence[str] = BENCH_SET,
    iterations: int = 1,
    key: bytes = bytes(range(16)),
    nonce: bytes = bytes(16),
    nonce_policy: str = "counter",
    warmup: int = 10,
    dataset_name: str = "in-memory",
    clock: Callable[[], int] = time.perf_counter_ns,
    progress: Optional[Callable[[str], None]] = None,
) -> BenchReport:
    """Time each algorithm over ``dataset`` ``iterations`` times.

    ``nonce_policy`` is ``"counter"`` (nonce + run index, unique per run) or
    ``"fixed"`` (same nonce every run; only meaningful for timing).
    """
    if not algorithms:
        raise ParameterError("need at least one algorithm")
    if iterations < 1:
        raise ParameterError("iterations must be >= 1")
    if not dataset:
        raise DatasetError("dataset empty")
    if nonce_policy not in ("counter", "fixed"):
        raise ParameterError(f"unknown nonce policy {nonce_policy!r}")
    algos = [lookup(a) for a in algorithms]
    base = int.from_bytes(nonce, "big")

    def nonce_for(i):
        if nonce_policy == "fixed":
            return nonce
        return ((base + i) % (1 << 128)).to_bytes(16, "big")

    results = []
    for algo in algos:
        if progress:
            progress(algo.display)
        enc, dec = _make_ops(algo, key)
        for i, data in enumerate(dataset[:warmup]):
            out = enc(data, nonce_for(i))
            if dec is not None:
                dec(out, nonce_for(i))
        enc_d, dec_d, total_d, sizes = [], [], [], []
        run = 0
        for _ in range(iterations):
            for data in dataset:
                n = nonce_for(run)
                run += 1
                t0 = clock()
                out = enc(data, n)
                t1 = clock()
                if dec is not None:
                    back = dec(out, n)
                    t2 = clock()
                else:
                    back, t2 = None, t1
                if dec is not None and back != data:
                    raise RuntimeError(f"{algo.display}: roundtrip mismatch")
                enc_d.append((t1 - t0) * 1e-9)
                dec_d.append((t2 - t1) * 1e-9)
                total_d.append((t2 - t0) * 1e-9)
                sizes.append(len(data))
        if dec is None:
            # a digest is the whole operation; report it for both directions
            dec_d = list(enc_d)
        results.append(AlgorithmResult(
            algorithm=algo.display,
            samples=TimingSamples(total_d, sizes),
            authenticated=algo.kind == "aead",
            encrypt_samples=TimingSamples(enc_d, list(sizes)),
            decrypt_samples=TimingSamples(dec_d, list(sizes)),
        ))
    return BenchReport(results, dataset_name, iterations)


def plot_report(report: BenchReport, path: Union[str, Path]) -> None:
    """Bar charts of peak/average time and throughput plus the per-input
    throughput traces. Needs matplotlib."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = [r.algorithm for r in report.results]
    fig, axes = plt.subplots(2, 2, figsize=(12, 8))
    axes[0][0].bar(names, [r.peak_time_s for r in report.results])
    axes[0][0].set_title("Peak time (s)")
    axes[0][1].bar(names, [r.average_time_s for r in report.results])
    axes[0][1].set_title("Average time (s)")
    axes[1][0].bar(names, [r.overall_throughput_Bps for r in report.results])
    axes[1][0].set_title("Overall throughput (B/s)")
    for r in report.results:
        axes[1][1].plot([t for t in r.throughput_trace if math.isfinite(t)], label=r.algorithm, lw=0.7)
    axes[1][1].set_title("Throughput per input (B/s)")
    axes[1][1].legend(fontsize="small")
    for ax in (axes[0][0], axes[0][1], axes[1][0]):
        ax.tick_params(axis="x", rotation=30)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
