"""Command-line front end.

Subcommands:
  sketch    build sketch file(s) from a vector file
  estimate  combine sketch-file pairs and print the (median) L1 estimate
  exact     print the exact L1-difference of two vector files
  selftest  run the built-in oracle suites

Vector files are text: either one signed integer per line (dense, line
number = coordinate) or two whitespace-separated fields "index value"
(sparse, 1-based indices, missing indices are zero). stdout carries only
the result; diagnostics go to stderr.

Exit codes: 0 success, 1 selftest failure, 2 malformed input file,
3 parameter error or incompatible sketches, 4 decode-failure majority.
"""

from __future__ import annotations

import argparse
import statistics
import sys
from hashlib import blake2b

import numpy as np

from . import selftest, sketchio
from .estimator import IncompatibleSketches, L1DiffSketch
from .hashing import derive_seed
from .kset import EstimateFailure


class InputError(Exception):
    """Malformed vector file (exit 2)."""


class ParamError(Exception):
    """Bad parameters or incompatible sketches (exit 3)."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; those are parameter errors here (exit 3)
    def error(self, message):
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(3)


def _parse_seed(text: str) -> bytes:
    try:
        raw = bytes.fromhex(text)
    except ValueError as exc:
        raise ParamError(f"seed must be hex: {exc}") from exc
    if not raw:
        raise ParamError("seed must not be empty")
    return blake2b(raw, digest_size=32).digest()


def load_vector(path: str, n: int | None = None, max_mag: int | None = None) -> np.ndarray:
    """Parse a VectorFile; raises InputError with a line number on trouble."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    rows = []
    mode = None  # "dense" | "sparse"
    for lineno, line in enumerate(lines, start=1):
        parts = line.split()
        if not parts:
            continue
        if mode is None:
            mode = "sparse" if len(parts) == 2 else "dense"
        if len(parts) != (2 if mode == "sparse" else 1):
            raise InputError(f"{path}:{lineno}: expected {mode} row, got {line!r}")
        try:
            nums = [int(t) for t in parts]
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from exc
        rows.append((lineno, nums))
    if mode is None:
        mode = "dense"
    if mode == "dense":
        if n is not None and len(rows) != n:
            raise InputError(f"{path}: {len(rows)} values, expected n = {n}")
        vec = np.zeros(len(rows), dtype=np.int64)
        for pos, (lineno, nums) in enumerate(rows):
            vec[pos] = nums[0]
    else:
        if n is None:
            n = max((nums[0] for _, nums in rows), default=0)
        vec = np.zeros(n, dtype=np.int64)
        seen = set()
        for lineno, (i, v) in rows:
            if not 1 <= i <= n:
                raise InputError(f"{path}:{lineno}: index {i} outside [1, {n}]")
            if i in seen:
                raise InputError(f"{path}:{lineno}: duplicate index {i}")
            seen.add(i)
            vec[i - 1] = v
    if max_mag is not None and len(vec) and int(np.abs(vec).max()) > max_mag:
        bad = int(np.argmax(np.abs(vec)))
        raise InputError(
            f"{path}: coordinate {bad + 1} has magnitude {abs(int(vec[bad]))} "
            f"> {max_mag}"
        )
    return vec


def _rep_path(base: str, rep: int, reps: int) -> str:
    if reps == 1:
        return base
    stem, dot, ext = base.rpartition(".")
    if dot:
        return f"{stem}.rep{rep}.{ext}"
    return f"{base}.rep{rep}"


def cmd_sketch(args) -> int:
    if not 0 < args.eps <= 1:
        raise ParamError("--eps must lie in (0, 1]")
    if args.n < 1 or args.max_mag < 1 or args.reps < 1:
        raise ParamError("--n, --max-mag and --reps must be positive")
    master = _parse_seed(args.seed)
    vec = load_vector(args.input, n=args.n, max_mag=args.max_mag)
    for rep in range(args.reps):
        seed = derive_seed(master, b"rep", rep)
        sk = L1DiffSketch.new(args.eps, args.n, args.max_mag, seed)
        sk.ingest_vector(vec)
        path = _rep_path(args.output, rep, args.reps)
        nbytes = sketchio.write_file(path, sk)
        print(f"wrote {path} ({nbytes} bytes)", file=sys.stderr)
    return 0


def cmd_estimate(args) -> int:
    files = args.sketches
    if len(files) < 2 or len(files) % 2 != 0:
        raise ParamError("need an even number of sketch files (pairs)")
    try:
        pairs = [
            (sketchio.read_file(files[i]), sketchio.read_file(files[i + 1]))
            for i in range(0, len(files), 2)
        ]
    except OSError as exc:
        raise InputError(str(exc)) from exc
    except (sketchio.BadMagic, sketchio.UnsupportedVersion,
            sketchio.CorruptParams) as exc:
        raise InputError(f"bad sketch file: {exc}") from exc
    estimates = []
    failures = 0
    for a, b in pairs:
        try:
            estimates.append(a.combine(b).estimate())
        except IncompatibleSketches as exc:
            raise ParamError(f"incompatible sketches: {exc}") from exc
        except EstimateFailure as exc:
            failures += 1
            print(f"repetition failed to decode: {exc}", file=sys.stderr)
    if 2 * failures > len(pairs):
        print(f"{failures} of {len(pairs)} repetitions failed", file=sys.stderr)
        return 4
    print(f"{statistics.median(estimates):.10g}")
    return 0


def cmd_exact(args) -> int:
    x = load_vector(args.x)
    y = load_vector(args.y)
    if len(x) != len(y):
        # sparse files infer n from the max index; pad the shorter side
        if args.pad_sparse:
            n = max(len(x), len(y))
            x = np.pad(x, (0, n - len(x)))
            y = np.pad(y, (0, n - len(y)))
        else:
            raise ParamError(f"dimension mismatch: {len(x)} vs {len(y)}")
    print(int(np.abs(x - y).sum()))
    return 0


def cmd_selftest(args) -> int:
    if args.trials < 0:
        raise ParamError("--trials must be nonnegative")
    seed = _parse_seed(args.seed)
    if args.trials == 0:
        print("warning: --trials 0 runs nothing; vacuous pass", file=sys.stderr)
    results = selftest.run_all(args.trials, seed)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(
            f"{status} {r.name}: rate {r.rate:.4f} (threshold {r.threshold}, "
            f"{r.trials} trials)"
        )
        ok = ok and r.passed
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="l1diff", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sketch", help="sketch a vector file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True,
                   help="output path (reps > 1 inserts .repK)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-mag", type=int, required=True,
                   help="coordinate magnitude bound M")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", required=True, help="shared seed, hex")
    p.add_argument("--reps", type=int, default=1,
                   help="independent repetitions (median amplification)")
    p.set_defaults(func=cmd_sketch)

    p = sub.add_parser("estimate", help="estimate L1 from sketch pairs")
    p.add_argument("sketches", nargs="+", metavar="SKETCH",
                   help="A0 B0 [A1 B1 ...]")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("exact", help="exact L1-difference of two vector files")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--pad-sparse", action="store_true",
                   help="pad shorter vector with zeros instead of failing")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("selftest", help="run the built-in oracle suites")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", default="a5" * 8)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ParamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
