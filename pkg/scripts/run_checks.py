"""Run every randomized checking suite at its default size and print one line each."""

import argparse
import time
from dataclasses import dataclass, field

from moorefilter import oracles


@dataclass
class Config:
    seed: int = 2024
    trials: dict = field(
        default_factory=lambda: {
            "soundness": 1000,
            "completeness": 200,
            "monotonicity": 500,
            "timed-soundness": 500,
            "lemma1": 200,
            "inclusion": 50,
        }
    )


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--scale", type=float, default=1.0, help="multiply every trial count")
    args = p.parse_args()
    cfg = Config(seed=args.seed)
    failed = 0
    for name, trials in cfg.trials.items():
        t0 = time.perf_counter()
        rep = oracles.SUITES[name](cfg.seed, max(1, int(trials * args.scale)))
        print(f"{rep.line()}\ttime_s={time.perf_counter() - t0:.2f}")
        failed += not rep.ok
    t0 = time.perf_counter()
    rep = oracles.lemma1_exhaustive()
    print(f"{rep.line()}\t(exhaustive)\ttime_s={time.perf_counter() - t0:.2f}")
    failed += not rep.ok
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
