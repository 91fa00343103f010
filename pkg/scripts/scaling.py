"""Filtering time and run-state memory against the input length.

Generates random timed logs over the pattern alphabet, streams them through
the filter and reports wall time, a least-squares linear fit (slope and
R^2) and the traced peak memory of the streaming run.
"""

import argparse
import gc
import random
import statistics
import time
import tracemalloc
from dataclasses import dataclass

from moorefilter.patterns import TIMED
from moorefilter.timed import TimedMasker, build_timed_filter


@dataclass
class Config:
    pattern: str = "accel"
    buffer: int = 10
    lengths: tuple[int, ...] = (1_000, 3_000, 10_000, 30_000, 100_000)
    repeats: int = 3
    rate: float = 1.0
    seed: int = 0


def events(labels, n, seed, rate):
    rng = random.Random(seed)
    t = 0.0
    for _ in range(n):
        t += rng.expovariate(rate) + 1e-9
        yield rng.choice(labels), t


def stream(f, evs) -> int:
    m = TimedMasker(f)
    passed = sum(m.push(a, t) for a, t in evs)
    return passed + sum(m.flush())


def run(cfg: Config):
    f = build_timed_filter(TIMED[cfg.pattern](), cfg.buffer)
    labels = f.alphabet.symbols
    rows = []
    for n in cfg.lengths:
        best = float("inf")
        for r in range(cfg.repeats):
            t0 = time.perf_counter()
            passed = stream(f, events(labels, n, cfg.seed + r, cfg.rate))
            best = min(best, time.perf_counter() - t0)
        gc.collect()
        tracemalloc.start()
        stream(f, events(labels, n, cfg.seed, cfg.rate))
        peak = tracemalloc.get_traced_memory()[1]
        tracemalloc.stop()
        rows.append((n, best, peak, passed))
    xs = [r[0] for r in rows]
    ys = [r[1] for r in rows]
    fit = statistics.linear_regression(xs, ys)
    mean = statistics.fmean(ys)
    ss_res = sum((y - fit.slope * x - fit.intercept) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - mean) ** 2 for y in ys)
    return f, rows, fit, 1 - ss_res / ss_tot if ss_tot else 1.0


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--pattern", default=Config.pattern, choices=sorted(TIMED))
    p.add_argument("--buffer", "-N", type=int, default=Config.buffer)
    p.add_argument("--lengths", nargs="+", type=int, default=list(Config.lengths))
    p.add_argument("--repeats", type=int, default=Config.repeats)
    p.add_argument("--rate", type=float, default=Config.rate)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    cfg = Config(a.pattern, a.buffer, tuple(a.lengths), a.repeats, a.rate, a.seed)
    f, rows, fit, r2 = run(cfg)
    print(f"# pattern={cfg.pattern} N={cfg.buffer} filter_states={f.num_states}")
    print("length\ttime_s\tpeak_traced_bytes\tpassed")
    for n, secs, peak, passed in rows:
        print(f"{n}\t{secs:.4f}\t{peak}\t{passed}")
    print(f"# slope={fit.slope * 1e6:.3f} us/event intercept={fit.intercept:.4f} s R^2={r2:.5f}")


if __name__ == "__main__":
    main()
