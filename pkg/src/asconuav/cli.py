"""Command-line entry point: ``asconuav <subcommand> ...``.

Exit codes: 0 success, 1 authentication/verification failure, 2 usage
error, 3 parse or I/O error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import aead, aes, bench, hashing, kat, linksim
from .algorithms import BENCH_SET, lookup
from .errors import AuthenticationError, DatasetError, ParameterError

EXIT_OK = 0
EXIT_AUTH = 1
EXIT_USAGE = 2
EXIT_PARSE = 3

log = logging.getLogger("asconuav")


class UsageError(Exception):
    pass


def parse_hex(value: str, what: str, length=None) -> bytes:
    """Hex string, or ``env:NAME`` to read the hex from an environment variable."""
    if value.startswith("env:"):
        name = value[4:]
        if name not in os.environ:
            raise UsageError(f"{what}: environment variable {name} is not set")
        value = os.environ[name]
    value = value.strip()
    if len(value) % 2:
        raise UsageError(f"{what}: hex string has odd length")
    try:
        data = bytes.fromhex(value)
    except ValueError:
        raise UsageError(f"{what}: not a valid hex string") from None
    if length is not None and len(data) != length:
        raise UsageError(f"{what}: expected {length} bytes, got {len(data)}")
    return data


def _read_input(args) -> bytes:
    if args.input in (None, "-"):
        return sys.stdin.buffer.read()
    return Path(args.input).read_bytes()


def _write_output(args, data: bytes, text: bool = False) -> None:
    """Binary to files and pipes; hex on a terminal or when --hex is set."""
    to_stdout = args.out in (None, "-")
    if text:
        payload = data
    elif getattr(args, "hex", False) or (to_stdout and sys.stdout.isatty()):
        payload = data.hex().encode() + b"\n"
    else:
        payload = data
    if to_stdout:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    else:
        Path(args.out).write_bytes(payload)


def _cipher_algo(name: str):
    if name is None:
        raise UsageError("--algorithm is required (ascon128, ascon128a, aes128ctr)")
    try:
        return lookup(name, kinds=("aead", "cipher"))
    except ParameterError as exc:
        raise UsageError(str(exc)) from None


def cmd_seal(args) -> int:
    algo = _cipher_algo(args.algorithm)
    if args.key is None or args.nonce is None:
        raise UsageError("--key and --nonce are required")
    key = parse_hex(args.key, "--key", 16)
    nonce = parse_hex(args.nonce, "--nonce", 16)
    ad = parse_hex(args.ad, "--ad") if args.ad else b""
    data = _read_input(args)
    if algo.kind == "cipher":
        out = aes.ctr_process(key, nonce, data)
    else:
        out = aead.encrypt(key, nonce, ad, data, algo.params)
    _write_output(args, out)
    return EXIT_OK


def cmd_open(args) -> int:
    algo = _cipher_algo(args.algorithm)
    if args.key is None or args.nonce is None:
        raise UsageError("--key and --nonce are required")
    key = parse_hex(args.key, "--key", 16)
    nonce = parse_hex(args.nonce, "--nonce", 16)
    ad = parse_hex(args.ad, "--ad") if args.ad else b""
    data = _read_input(args)
    if args.hex_input:
        data = parse_hex(data.decode("ascii", "replace"), "input")
    if algo.kind == "cipher":
        out = aes.ctr_process(key, nonce, data)
    else:
        if len(data) < aead.TAG_BYTES:
            print("error: input shorter than the authentication tag", file=sys.stderr)
            return EXIT_AUTH
        try:
            out = aead.decrypt(key, nonce, ad, data, algo.params)
        except AuthenticationError:
            print("error: authentication failed", file=sys.stderr)
            return EXIT_AUTH
    _write_output(args, out)
    return EXIT_OK


def cmd_hash(args) -> int:
    try:
        algo = lookup(args.algorithm or "asconhash", kinds=("hash", "xof"))
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    if algo.kind == "xof":
        if args.length is None:
            raise UsageError(f"{algo.id} needs --length")
        if args.length < 1:
            raise UsageError("--length must be at least 1")
        digest = hashing.xof(_read_input(args), args.length, algo.params)
    else:
        digest = hashing.hash(_read_input(args), algo.params)
    _write_output(args, digest.hex().encode() + b"\n", text=True)
    return EXIT_OK


def cmd_kat(args) -> int:
    path = args.path or args.input
    if path is None:
        raise UsageError("give a KAT file path")
    name = args.algorithm or kat.guess_algorithm(path)
    if name is None:
        raise UsageError("cannot infer the algorithm from the filename; pass --algorithm")
    try:
        algo = lookup(name)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    records = kat.load(path)
    failures = 0
    for rec in records:
        res = kat.check_record(rec, algo)
        if not res.ok:
            failures += 1
        if not res.ok or not args.quiet:
            status = "pass" if res.ok else f"FAIL ({res.detail})"
            print(f"count {res.count}: {status}")
    print(f"{algo.display}: {len(records) - failures}/{len(records)} records passed")
    return EXIT_OK if failures == 0 else EXIT_AUTH


def cmd_gen_dataset(args) -> int:
    entries = bench.generate_dataset(args.count, args.min_size, args.max_size, args.seed)
    if args.out in (None, "-"):
        sys.stdout.write("".join(e.hex() + "\n" for e in entries))
    else:
        bench.write_dataset(args.out, entries)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.input:
        dataset = bench.load_dataset(args.input)
        desc = f"{args.input} ({len(dataset)} entries)"
    else:
        dataset = bench.generate_dataset(args.count, args.min_size, args.max_size, args.seed)
        desc = f"generated: {args.count} entries, {args.min_size}..{args.max_size} bytes, seed {args.seed}"
    names = [n for n in (args.algorithm or ",".join(BENCH_SET)).split(",") if n]
    try:
        algos = [lookup(n).id for n in names]
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    key = parse_hex(args.key, "--key", 16) if args.key else bytes(range(16))
    nonce = parse_hex(args.nonce, "--nonce", 16) if args.nonce else bytes(16)
    report = bench.run_benchmark(
        dataset, algos, iterations=args.iterations, key=key, nonce=nonce,
        nonce_policy=args.nonce_policy, dataset_name=desc,
        progress=lambda name: log.info("benchmarking %s", name),
    )
    render = {"table": lambda: report.to_table(split=args.split), "csv": report.to_csv,
              "jsonl": report.to_jsonl}[args.format]
    text = render()
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
    if args.plot:
        bench.plot_report(report, args.plot)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.config:
        cfg = linksim.ScenarioConfig.from_file(args.config)
    else:
        cfg = linksim.ScenarioConfig(
            cipher=args.algorithm or "ascon128a", packets=args.packets,
            payload_min=args.payload_min, payload_max=args.payload_max,
            loss_p=args.loss, corrupt_q=args.corrupt, reorder_window=args.reorder,
            seed=args.seed, key=parse_hex(args.key, "--key", 16) if args.key else None,
        )
    ciphers = list(linksim.CIPHER_IDS) if args.compare else [cfg.cipher]
    out = []
    for c in ciphers:
        run_cfg = linksim.ScenarioConfig(**{**cfg.__dict__, "cipher": c})
        trace = open(args.trace, "w") if args.trace and not args.compare else None
        try:
            stats = linksim.run_scenario(run_cfg, trace=trace)
        finally:
            if trace:
                trace.close()
        out.append(stats.to_table())
    text = "\n".join(out)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-a", "--algorithm", help="algorithm name")
    common.add_argument("--key", help="16-byte key as hex, or env:NAME")
    common.add_argument("--nonce", help="16-byte nonce as hex, or env:NAME")
    common.add_argument("--ad", help="associated data as hex")
    common.add_argument("--in", dest="input", help="input path (default: stdin)")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="asconuav", description="Ascon/AES toolkit, benchmark and link simulator")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn in (("seal", cmd_seal), ("open", cmd_open)):
        sp = sub.add_parser(name, parents=[common], help=f"{name} data (ascon128, ascon128a, aes128ctr)")
        sp.add_argument("--hex", action="store_true", help="write hex instead of binary")
        if name == "open":
            sp.add_argument("--hex-input", action="store_true", help="input is hex text")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("hash", parents=[common], help="hash or XOF of the input")
    sp.add_argument("--length", type=int, help="XOF output length in bytes")
    sp.set_defaults(func=cmd_hash)

    sp = sub.add_parser("kat", parents=[common], help="replay a known-answer file")
    sp.add_argument("path", nargs="?")
    sp.add_argument("-q", "--quiet", action="store_true", help="only print failures and the summary")
    sp.set_defaults(func=cmd_kat)

    sp = sub.add_parser("gen-dataset", parents=[common], help="write a seeded random dataset")
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--min-size", type=int, default=16)
    sp.add_argument("--max-size", type=int, default=1024)
    sp.set_defaults(func=cmd_gen_dataset)

    sp = sub.add_parser("bench", parents=[common], help="run the timing benchmark")
    sp.add_argument("--iterations", type=int, default=1)
    sp.add_argument("--format", choices=("table", "csv", "jsonl"), default="table")
    sp.add_argument("--csv", help="also write CSV to this path")
    sp.add_argument("--plot", help="write comparison charts to this image path")
    sp.add_argument("--split", action="store_true", help="show encrypt/decrypt averages separately")
    sp.add_argument("--nonce-policy", choices=("counter", "fixed"), default="counter")
    sp.add_argument("--count", type=int, default=1000, help="entries to generate when --in is absent")
    sp.add_argument("--min-size", type=int, default=16)
    sp.add_argument("--max-size", type=int, default=1024)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("simulate", parents=[common], help="run a lossy-link scenario")
    sp.add_argument("--config", help="scenario file (key = value lines)")
    sp.add_argument("--packets", type=int, default=1000)
    sp.add_argument("--payload-min", type=int, default=16)
    sp.add_argument("--payload-max", type=int, default=64)
    sp.add_argument("--loss", type=float, default=0.0)
    sp.add_argument("--corrupt", type=float, default=0.0)
    sp.add_argument("--reorder", type=int, default=0)
    sp.add_argument("--trace", help="write per-packet JSON lines here")
    sp.add_argument("--compare", action="store_true", help="run every cipher on the same scenario")
    sp.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParameterError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DatasetError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
