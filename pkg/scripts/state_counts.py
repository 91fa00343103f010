"""Reachable non-buffer state counts of the benchmark-shaped timed filters.

Prints one tab-separated row per (pattern, N) with the state count and the
construction time; the defaults cover N = 1..10.
"""

import argparse
import time
from dataclasses import dataclass

from moorefilter.patterns import TIMED
from moorefilter.timed import build_timed_filter


@dataclass
class Config:
    patterns: tuple[str, ...] = ("gear", "torque", "accel")
    buffers: tuple[int, ...] = tuple(range(1, 11))


def run(cfg: Config) -> list[tuple[str, int, int, float]]:
    rows = []
    for name in cfg.patterns:
        ta = TIMED[name]()
        for N in cfg.buffers:
            t0 = time.perf_counter()
            f = build_timed_filter(ta, N)
            rows.append((name, N, f.num_states, time.perf_counter() - t0))
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--patterns", nargs="+", default=list(Config.patterns), choices=sorted(TIMED))
    p.add_argument("--buffers", nargs="+", type=int, default=list(Config.buffers))
    args = p.parse_args()
    cfg = Config(tuple(args.patterns), tuple(args.buffers))
    print("pattern\tN\tstates\tbuild_s")
    for name, N, n, secs in run(cfg):
        print(f"{name}\t{N}\t{n}\t{secs:.4f}")


if __name__ == "__main__":
    main()
