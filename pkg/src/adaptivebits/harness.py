"""Workload harness: trace generation, replay, verification, CSV stats.

Trace format (plain text, one operation per line, '#' comments):

    # adaptivebits trace v1
    kind bits            header: bits | array:<width> | seq:<sigma>
    n0 1024              initial size, content drawn from the seed
    seed 42              drives initial content and position resolution
    A U                  access/read          (bits, array, seq)
    R 1 U                rank of bit/symbol   (bits, seq)
    S 0 U                select of bit/symbol (bits, seq)
    I U 1                insert value/symbol
    D U                  delete
    W U 0                write value          (bits, array)
    A 17 = 1             positions may be literal; '= x' is an expected
                         answer ('-' for none), checked under --verify

Symbolic positions 'U' resolve uniformly over the currently valid range at
execution time, so a trace stays valid as n drifts.  Replaying the same
trace always resolves identically: the resolver is seeded from the header.

Updates are insert/delete/write for bitvectors, insert/delete for arrays
(writes are reads' peers there) and for sequences.  The generator draws an
update with probability 1/q per op and tracks n, so every emitted op is
valid at execution time.

Exit codes: 0 ok, 1 verification mismatch, 2 usage or parse error.
CSV goes to stdout, one row per --window ops; diagnostics go to stderr.
"""

import argparse
import random
import sys
import time

from .bitvector import AdaptiveBitvector
from .fixed_array import AdaptiveArray
from .oracle import NaiveBits, NaiveCells, NaiveSeq
from .wavelet import AdaptiveWaveletMatrix

TRACE_MAGIC = "# adaptivebits trace v1"
CSV_MAGIC = "# adaptivebits-stats-csv v1"
CSV_HEADER = ("window,ops,m,u,q,visits_per_query,visits_per_update,"
              "flatten_count,split_count,overhead_ratio,elapsed_ns")


class TraceError(Exception):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class Mismatch(Exception):
    def __init__(self, op_index, lineno, text, expected, got):
        super().__init__(
            f"mismatch at op {op_index} (line {lineno}): {text!r}: "
            f"expected {expected}, got {got}")


def parse_kind(text):
    if text == "bits":
        return ("bits", None)
    if text.startswith("array:"):
        width = int(text.split(":", 1)[1])
        if not 1 <= width <= 64:
            raise ValueError(f"cell width {width} out of range [1, 64]")
        return ("array", width)
    if text.startswith("seq:"):
        sigma = int(text.split(":", 1)[1])
        if sigma < 2:
            raise ValueError(f"alphabet size {sigma} must be at least 2")
        return ("seq", sigma)
    raise ValueError(f"unknown kind {text!r} (bits | array:<width> | seq:<sigma>)")


# ---------------------------------------------------------------------------
# generation


def generate(kind, n0, total_ops, q, seed):
    """Deterministic trace text: one update per q ops in expectation."""
    base, param = parse_kind(kind)
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if total_ops < 1:
        raise ValueError(f"total_ops must be >= 1, got {total_ops}")
    if n0 < 0:
        raise ValueError(f"n0 must be >= 0, got {n0}")
    rng = random.Random(seed)
    p_update = 1.0 / q
    lines = [TRACE_MAGIC, f"kind {kind}", f"n0 {n0}", f"seed {seed}"]
    if base == "bits":
        def value():
            return rng.randint(0, 1)
        updates = "IDW"
        queries = "ARS"
    elif base == "array":
        def value():
            return rng.randrange(1 << param)
        updates = "ID"
        queries = "AW"
    else:
        def value():
            return rng.randint(1, param)
        updates = "ID"
        queries = "ARS"
    n = n0
    for _ in range(total_ops):
        update = rng.random() < p_update
        if update or n == 0:
            op = rng.choice(updates) if n > 0 else "I"
            if op == "I":
                lines.append(f"I U {value()}")
                n += 1
            elif op == "D":
                lines.append("D U")
                n -= 1
            else:
                lines.append(f"W U {value()}")
        else:
            op = rng.choice(queries)
            if op == "A":
                lines.append("A U")
            elif op == "W":
                lines.append(f"W U {value()}")
            elif op == "R":
                lines.append(f"R {value()} U" if base != "bits"
                             else f"R {rng.randint(0, 1)} U")
            else:
                lines.append(f"S {value()} U" if base != "bits"
                             else f"S {rng.randint(0, 1)} U")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parsing


def parse_trace(stream):
    """-> (kind_text, n0, seed, ops) with ops as (lineno, text, op, args, expected)."""
    kind = None
    n0 = None
    seed = None
    ops = []
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        expected = None
        if "=" in line:
            line, _, tail = line.partition("=")
            line = line.strip()
            tail = tail.strip()
            expected = None if tail == "-" else int(tail)
            has_expected = True
        else:
            has_expected = False
        tokens = line.split()
        head = tokens[0]
        if head == "kind":
            try:
                parse_kind(tokens[1])
            except (IndexError, ValueError) as exc:
                raise TraceError(lineno, str(exc))
            kind = tokens[1]
            continue
        if head == "n0":
            n0 = int(tokens[1])
            continue
        if head == "seed":
            seed = int(tokens[1])
            continue
        if head not in ("A", "R", "S", "I", "D", "W"):
            raise TraceError(lineno, f"unknown op {head!r}")
        want = {"A": 1, "R": 2, "S": 2, "I": 2, "D": 1, "W": 2}[head]
        args = tokens[1:]
        if len(args) != want:
            raise TraceError(lineno, f"op {head} takes {want} arguments, got {len(args)}")
        parsed = []
        for tok in args:
            if tok == "U":
                parsed.append("U")
            else:
                try:
                    parsed.append(int(tok))
                except ValueError:
                    raise TraceError(lineno, f"bad argument {tok!r}")
        ops.append((lineno, line, head, parsed, expected if has_expected else "absent"))
    if kind is None or n0 is None or seed is None:
        raise TraceError(0, "header must declare kind, n0 and seed before ops")
    return kind, n0, seed, ops


# ---------------------------------------------------------------------------
# execution


class _Run:
    """One structure (plus optional oracle shadow) driven by a trace."""

    def __init__(self, kind_text, n0, seed, verify):
        self.base, self.param = parse_kind(kind_text)
        self.rng = random.Random(seed)
        self.verify = verify
        if self.base == "bits":
            payload = self.rng.getrandbits(n0) if n0 else 0
            self.adaptive = AdaptiveBitvector.from_payload(payload, n0)
            self.oracle = NaiveBits()
            self.oracle.x, self.oracle.n = payload, n0
        elif self.base == "array":
            cells = [self.rng.randrange(1 << self.param) for _ in range(n0)]
            self.adaptive = AdaptiveArray.from_cells(self.param, cells)
            self.oracle = NaiveCells(self.param, cells)
        else:
            syms = [self.rng.randint(1, self.param) for _ in range(n0)]
            self.adaptive = AdaptiveWaveletMatrix.from_symbols(self.param, syms)
            self.oracle = NaiveSeq(self.param, syms)
            self.counts = {}
            for c in syms:
                self.counts[c] = self.counts.get(c, 0) + 1
        self.n = n0

    def _count_of(self, key):
        if self.base == "bits":
            return self.adaptive.ones if key else self.n - self.adaptive.ones
        return self.counts.get(key, 0)

    def resolve(self, op, args):
        """Replace symbolic positions by draws over the current valid range."""
        out = list(args)
        pos_index = 0 if op in ("A", "I", "D", "W") else 1
        if out[pos_index] == "U":
            if op == "I":
                out[pos_index] = self.rng.randint(1, self.n + 1)
            elif op == "R":
                out[pos_index] = self.rng.randint(0, self.n)
            elif op == "S":
                out[pos_index] = self.rng.randint(1, max(self._count_of(out[0]), 1))
            else:
                if self.n < 1:
                    raise ValueError(f"cannot resolve {op} position on empty structure")
                out[pos_index] = self.rng.randint(1, self.n)
        return out

    def apply(self, op, args):
        """-> (answer, compare) where compare says whether verify checks it."""
        a = self.adaptive
        o = self.oracle if self.verify else None
        base = self.base
        if op == "A":
            i = args[0]
            got = a.access(i) if base != "array" else a.read(i)
            if o is not None:
                want = o.access(i) if base != "array" else o.read(i)
                self._expect(want, got)
            return got, True
        if op == "R":
            key, i = args
            got = a.rank(key, i)
            if o is not None:
                self._expect(o.rank(key, i), got)
            return got, True
        if op == "S":
            key, j = args
            got = a.select(key, j)
            if o is not None:
                self._expect(o.select(key, j), got)
            return got, True
        if op == "I":
            i, v = args
            a.insert(i, v)
            if o is not None:
                o.insert(i, v)
            self.n += 1
            if base == "seq":
                self.counts[v] = self.counts.get(v, 0) + 1
            return None, False
        if op == "D":
            i = args[0]
            got = a.delete(i)
            if o is not None:
                self._expect(o.delete(i), got)
            self.n -= 1
            if base == "seq":
                self.counts[got] -= 1
            return got, True
        # W
        i, v = args
        got = a.write(i, v)
        if o is not None:
            self._expect(o.write(i, v), got)
        return got, True

    def _expect(self, want, got):
        if want != got:
            raise _OracleDiff(want, got)

    def stats_snapshot(self):
        if self.base == "seq":
            combined = {}
            for bv in self.adaptive.levels:
                for key, val in bv.stats().snapshot().items():
                    combined[key] = combined.get(key, 0) + val
            return combined
        return self.adaptive.stats().snapshot()

    def overhead_ratio(self):
        if self.base == "seq":
            payload = 0
            over = 0
            for bv in self.adaptive.levels:
                rep = bv.space_report()
                payload += rep.payload_bits
                over += rep.total_bits - rep.payload_bits
            return over / max(payload, 1)
        return self.adaptive.space_report().overhead_ratio


class _OracleDiff(Exception):
    def __init__(self, want, got):
        self.want = want
        self.got = got


def run_trace(stream, verify=False, window=1000, out=None, err=None):
    """Execute a trace; emits CSV rows, returns the process exit code."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        kind_text, n0, seed, ops = parse_trace(stream)
        runner = _Run(kind_text, n0, seed, verify)
    except TraceError as exc:
        print(f"trace error: {exc}", file=err)
        return 2
    except (ValueError, OverflowError) as exc:
        print(f"trace error: {exc}", file=err)
        return 2
    print(CSV_MAGIC, file=out)
    print(CSV_HEADER, file=out)
    prev = runner.stats_snapshot()
    window_index = 0
    done = 0
    t0 = time.perf_counter_ns()

    def flush_row(count):
        nonlocal prev, window_index, t0
        now = time.perf_counter_ns()
        cur = runner.stats_snapshot()
        dm = cur["m"] - prev["m"]
        du = cur["u"] - prev["u"]
        dqv = cur["query_visits"] - prev["query_visits"]
        duv = cur["update_visits"] - prev["update_visits"]
        row = ",".join([
            str(window_index),
            str(count),
            str(dm),
            str(du),
            f"{dm / max(du, 1):.4f}",
            f"{dqv / max(dm, 1):.4f}",
            f"{duv / max(du, 1):.4f}",
            str(cur["flatten_count"] - prev["flatten_count"]),
            str(cur["split_count"] - prev["split_count"]),
            f"{runner.overhead_ratio():.6f}",
            str(now - t0),
        ])
        print(row, file=out)
        prev = cur
        window_index += 1
        t0 = now

    for op_index, (lineno, text, op, args, expected) in enumerate(ops, 1):
        try:
            resolved = runner.resolve(op, args)
            answer, comparable = runner.apply(op, resolved)
        except _OracleDiff as diff:
            flush_row(done % window)
            print(f"mismatch at op {op_index} (line {lineno}): {text!r}: "
                  f"oracle says {diff.want}, adaptive says {diff.got}", file=err)
            return 1
        except (ValueError, OverflowError) as exc:
            print(f"trace error: line {lineno}: {text!r}: {exc}", file=err)
            return 2
        if verify and expected != "absent" and comparable and answer != expected:
            flush_row(done % window)
            print(f"mismatch at op {op_index} (line {lineno}): {text!r}: "
                  f"expected {expected}, got {answer}", file=err)
            return 1
        done += 1
        if done % window == 0:
            flush_row(window)
    if done % window:
        flush_row(done % window)
    return 0


def annotate_trace(stream, out=None, err=None):
    """Replay on the oracle alone, appending '= answer' to answering ops.

    This is how golden traces are produced: expectations come from the
    reference implementation, never from the adaptive structure.
    """
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        kind_text, n0, seed, ops = parse_trace(stream)
    except TraceError as exc:
        print(f"trace error: {exc}", file=err)
        return 2
    rng = random.Random(seed)
    base, param = parse_kind(kind_text)
    if base == "bits":
        payload = rng.getrandbits(n0) if n0 else 0
        oracle = NaiveBits()
        oracle.x, oracle.n = payload, n0
        ones = payload.bit_count()
        counts = {1: ones, 0: n0 - ones}
    elif base == "array":
        oracle = NaiveCells(param, [rng.randrange(1 << param) for _ in range(n0)])
        counts = {}
    else:
        syms = [rng.randint(1, param) for _ in range(n0)]
        oracle = NaiveSeq(param, syms)
        counts = {}
        for c in syms:
            counts[c] = counts.get(c, 0) + 1
    print(TRACE_MAGIC, file=out)
    print(f"kind {kind_text}", file=out)
    print(f"n0 {n0}", file=out)
    print(f"seed {seed}", file=out)
    n = n0
    for lineno, text, op, args, _expected in ops:
        try:
            resolved = list(args)
            pos_index = 0 if op in ("A", "I", "D", "W") else 1
            if resolved[pos_index] == "U":
                if op == "I":
                    resolved[pos_index] = rng.randint(1, n + 1)
                elif op == "R":
                    resolved[pos_index] = rng.randint(0, n)
                elif op == "S":
                    resolved[pos_index] = rng.randint(1, max(counts.get(resolved[0], 0), 1))
                else:
                    if n < 1:
                        raise ValueError(f"cannot resolve {op} on empty structure")
                    resolved[pos_index] = rng.randint(1, n)
            if op == "A":
                ans = oracle.access(resolved[0]) if base != "array" else oracle.read(resolved[0])
            elif op == "R":
                ans = oracle.rank(resolved[0], resolved[1])
            elif op == "S":
                ans = oracle.select(resolved[0], resolved[1])
            elif op == "I":
                oracle.insert(resolved[0], resolved[1])
                n += 1
                if base != "array":
                    counts[resolved[1]] = counts.get(resolved[1], 0) + 1
                ans = "skip"
            elif op == "D":
                ans = oracle.delete(resolved[0])
                n -= 1
                if base != "array":
                    counts[ans] -= 1
            else:
                ans = oracle.write(resolved[0], resolved[1])
                if base == "bits":
                    counts[resolved[1]] = counts.get(resolved[1], 0)  # unchanged totals
                    if ans != resolved[1]:
                        counts[resolved[1]] += 1
                        counts[ans] -= 1
        except (ValueError, IndexError, OverflowError) as exc:
            print(f"trace error: line {lineno}: {text!r}: {exc}", file=err)
            return 2
        if ans == "skip":
            print(text, file=out)
        else:
            print(f"{text} = {'-' if ans is None else ans}", file=out)
    return 0


# ---------------------------------------------------------------------------
# CLI


def build_parser():
    parser = argparse.ArgumentParser(
        prog="adaptivebits",
        description="Generate and replay operation traces against the "
                    "adaptive structures, verifying against the naive oracle.",
        epilog=f"CSV schema ({CSV_MAGIC}): {CSV_HEADER}. "
               "elapsed_ns is wall time per window; all other columns are "
               "deterministic for a given trace.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    gen = sub.add_parser("generate", help="emit a trace on stdout")
    gen.add_argument("--kind", required=True, help="bits | array:<width> | seq:<sigma>")
    gen.add_argument("--n0", type=int, default=0, help="initial size (default 0)")
    gen.add_argument("--ops", type=int, required=True, help="number of operations")
    gen.add_argument("--q", type=int, default=1,
                     help="target queries per update; updates drawn with probability 1/q")
    gen.add_argument("--seed", type=int, default=0)
    run = sub.add_parser("run", help="replay a trace, CSV stats on stdout")
    run.add_argument("--trace", help="trace path (default: standard input)")
    run.add_argument("--verify", action="store_true",
                     help="shadow every op on the oracle and compare all answers")
    run.add_argument("--window", type=int, default=1000, help="ops per CSV row")
    run.add_argument("--annotate", action="store_true",
                     help="replay the oracle only and print the trace with "
                          "'= answer' suffixes (golden-file producer)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "generate":
        try:
            sys.stdout.write(generate(args.kind, args.n0, args.ops, args.q, args.seed))
        except ValueError as exc:
            print(f"usage error: {exc}", file=sys.stderr)
            return 2
        return 0
    if args.window < 1:
        print("usage error: --window must be >= 1", file=sys.stderr)
        return 2
    if args.trace:
        with open(args.trace, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    else:
        lines = sys.stdin.readlines()
    if args.annotate:
        return annotate_trace(lines)
    return run_trace(lines, verify=args.verify, window=args.window)


if __name__ == "__main__":
    sys.exit(main())
