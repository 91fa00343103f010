"""Command-line interface: ``filter``, ``match``, ``gen`` and ``check``.

Exit codes: 0 success, 1 a checking suite found violations, 2 malformed
input (flags or files), 3 semantic errors such as a bad buffer size or an
unknown label. Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from collections import deque
from typing import Callable, Iterable

from . import oracles
from .automata import BOTTOM, InputError, Nfa, TimedAutomaton, TimedWord
from .io import Event, FormatError, check_labels, format_event, iter_events, load_automaton, write_stats
from .timed import RunSuppressor, TimedMasker, build_timed_filter
from .untimed import LazyUntimedFilter, UntimedMasker, build_untimed_filter

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_SEMANTIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _open_input(path: str | None):
    return sys.stdin if path in (None, "-") else open(path, encoding="utf-8")


def _load_pattern(path: str, timed: bool):
    a = load_automaton(path)
    if timed and not isinstance(a, TimedAutomaton):
        raise InputError(f"{path}: --timed needs a 'kind ta' pattern")
    if not timed and not isinstance(a, Nfa):
        raise InputError(f"{path}: a 'kind ta' pattern needs --timed")
    return a


# ---------------------------------------------------------------------------
# output sinks


class _Writer:
    def __init__(self, out, timed: bool):
        self.out = out
        self.timed = timed
        self.lines = 0

    def event(self, e: Event) -> None:
        self.out.write(format_event(e.label, e.time, e.text) + "\n")
        self.lines += 1

    def run_token(self, first: Event, last: Event, count: int) -> None:
        token = f"_ x{count}"
        if self.timed:
            token += f"\t{first.text}\t{last.text}"
        self.out.write(token + "\n")
        self.lines += 1


class _PairSink:
    """Keep the first and last event of each masked run (runs of 1 or 2 are unchanged)."""

    def __init__(self, writer: _Writer):
        self.writer = writer
        self.sup = RunSuppressor()

    def push(self, e: Event) -> None:
        for kept in self.sup.push((e.label, e)):
            self.writer.event(kept[1])

    def close(self) -> None:
        for kept in self.sup.flush():
            self.writer.event(kept[1])


class _RunLengthSink:
    """Replace each masked run by one ``_ xK`` token (first and last timestamps when timed)."""

    def __init__(self, writer: _Writer):
        self.writer = writer
        self.first = self.last = None
        self.count = 0

    def push(self, e: Event) -> None:
        if e.label == BOTTOM:
            if not self.count:
                self.first = e
            self.last = e
            self.count += 1
            return
        self.close()
        self.writer.event(e)

    def close(self) -> None:
        if self.count:
            self.writer.run_token(self.first, self.last, self.count)
        self.first = self.last = None
        self.count = 0


class _PlainSink:
    def __init__(self, writer: _Writer):
        self.push = writer.event

    def close(self) -> None:
        pass


def stream_filter(
    events: Iterable[Event],
    push: Callable[[Event], bool],
    flush: Callable[[], list[bool]],
    n: int,
    emit: Callable[[Event, bool], None],
) -> None:
    """Emit each event with its verdict exactly ``n`` events after it was read."""
    pending: deque = deque()
    for e in events:
        verdict = push(e)
        pending.append(e)
        if len(pending) > n:
            emit(pending.popleft(), verdict)
    skip = n - len(pending)  # flush verdicts that still belong to the initial buffer
    for k, verdict in enumerate(flush()):
        if k >= skip:
            emit(pending.popleft(), verdict)


# ---------------------------------------------------------------------------
# commands


def cmd_filter(args) -> int:
    pattern = _load_pattern(args.pattern, args.timed)
    N = args.buffer
    t0 = time.perf_counter()
    if args.timed:
        f = build_timed_filter(pattern, N, lazy=args.otf)
        masker = TimedMasker(f)

        def push(e: Event) -> bool:
            return masker.push(e.label, e.time)

        def flush() -> list[bool]:
            return masker.flush()
    else:
        f = LazyUntimedFilter(pattern, N) if args.otf else build_untimed_filter(pattern, N)
        masker = UntimedMasker(f)

        def push(e: Event) -> bool:
            return masker.push(e.label) != BOTTOM

        def flush() -> list[bool]:
            return [c != BOTTOM for c in masker.flush()]

    build_time = time.perf_counter() - t0
    writer = _Writer(sys.stdout, args.timed)
    sink = {"none": _PlainSink, "pairs": _PairSink, "binary": _RunLengthSink}[args.suppress](writer)
    counts = {"input": 0, "masked": 0}

    def emit(e: Event, passed: bool) -> None:
        counts["input"] += 1
        if not passed:
            counts["masked"] += 1
            e = Event(BOTTOM, e.time, e.text)
        sink.push(e)

    t1 = time.perf_counter()
    with _open_input(args.input) as fh:
        events = check_labels(iter_events(fh, args.timed), pattern.alphabet)
        stream_filter(events, push, flush, N, emit)
    sink.close()
    filter_time = time.perf_counter() - t1
    if args.stats:
        stats = {
            "input_length": counts["input"],
            "output_length": writer.lines,
            "output_length_raw": counts["input"],
            "masked": counts["masked"],
            "passed": counts["input"] - counts["masked"],
            "filter_states": f.num_states,
            "buffer": N,
            "build_time_s": build_time,
            "filter_time_s": filter_time,
            "peak_rss_kb": _peak_rss_kb(),
        }
        with open(args.stats, "w", encoding="utf-8") as out:
            write_stats(out, stats)
    return EXIT_OK


def _peak_rss_kb() -> int:
    try:
        import resource
    except ImportError:  # not available on every platform
        return -1
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss


def cmd_match(args) -> int:
    pattern = _load_pattern(args.pattern, args.timed)
    with _open_input(args.input) as fh:
        events = list(check_labels(iter_events(fh, args.timed), pattern.alphabet, allow_bottom=True))
    if args.timed:
        matches = oracles.timed_index_match(TimedWord(tuple(e.as_pair() for e in events)), pattern)
    else:
        matches = oracles.untimed_match_set([e.label for e in events], pattern)
    for i, j in matches:
        sys.stdout.write(f"{i} {j}\n")
    return EXIT_OK


def cmd_gen(args) -> int:
    labels = [a for a in args.alphabet.split(",") if a]
    if not labels or len(set(labels)) != len(labels) or any(a == "_" or a.strip() != a for a in labels):
        raise FormatError(f"bad alphabet {args.alphabet!r}")
    if args.length < 0:
        raise FormatError("--length must be non-negative")
    if args.rate <= 0:
        raise FormatError("--rate must be positive")
    rng = random.Random(args.seed)
    t = 0.0
    out = sys.stdout
    for _ in range(args.length):
        a = rng.choice(labels)
        if args.timed:
            nxt = t + rng.expovariate(args.rate)
            while nxt <= t:  # a zero draw or a rounding collision
                nxt = t + rng.expovariate(args.rate)
            t = nxt
            out.write(f"{a}\t{t!r}\n")
        else:
            out.write(a + "\n")
    return EXIT_OK


def cmd_check(args) -> int:
    if args.trials < 0:
        raise FormatError("--trials must be non-negative")
    t0 = time.perf_counter()
    if args.suite == "lemma1" and args.exhaustive:
        report = oracles.lemma1_exhaustive()
    else:
        report = oracles.SUITES[args.suite](args.seed, args.trials)
    elapsed = time.perf_counter() - t0
    out = sys.stdout
    out.write(report.line() + "\n")
    write_stats(out, {"suite": report.name, "seed": args.seed, "trials": report.trials,
                      "violations": report.violations, "time_s": elapsed})
    if report.violations:
        for ce in report.counterexamples:
            out.write(f"counterexample\t{ce!r}\n")
        return EXIT_VIOLATION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="moorefilter", description="Moore-machine filters for (timed) pattern matching.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("filter", help="mask events that cannot belong to a match")
    f.add_argument("--pattern", required=True, help="automaton file (kind nfa or ta)")
    f.add_argument("--buffer", "-N", type=int, required=True, help="buffer size N")
    f.add_argument("--timed", action="store_true", help="timed words and a timed-automaton pattern")
    f.add_argument(
        "--suppress",
        nargs="?",
        const="pairs",
        default="none",
        choices=("pairs", "binary"),
        help="shorten masked runs: keep first/last event (default) or write '_ xK' tokens (binary)",
    )
    f.add_argument("--otf", action="store_true", help="determinize on the fly instead of up front")
    f.add_argument("--stats", metavar="FILE", help="write key<TAB>value statistics to FILE")
    f.add_argument("--input", metavar="FILE", help="read the word from FILE instead of standard input")
    f.set_defaults(func=cmd_filter)

    m = sub.add_parser("match", help="print the index match set of a word")
    m.add_argument("--pattern", required=True)
    m.add_argument("--timed", action="store_true")
    m.add_argument("--input", metavar="FILE")
    m.set_defaults(func=cmd_match)

    g = sub.add_parser("gen", help="generate a reproducible random word")
    g.add_argument("--alphabet", required=True, help="comma separated labels")
    g.add_argument("--length", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--timed", action="store_true")
    g.add_argument("--rate", type=float, default=1.0, help="events per time unit (timed mode)")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="run a randomized checking suite")
    c.add_argument("--suite", required=True, choices=sorted(oracles.SUITES))
    c.add_argument("--trials", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--exhaustive", action="store_true", help="lemma1: all short words for the fixed patterns")
    c.set_defaults(func=cmd_check)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sys.stdout.reconfigure(line_buffering=True)
    except (AttributeError, ValueError):
        pass
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"moorefilter: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"moorefilter: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InputError as exc:
        print(f"moorefilter: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
