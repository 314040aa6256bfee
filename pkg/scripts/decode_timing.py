"""Wall time of the decoders against sentence length and stack bound.

    python scripts/decode_timing.py --out timing.csv
"""
import argparse
import csv
import time
from dataclasses import dataclass

import numpy as np

from parsetag.decode import DecoderConfig, beam_decode, dp_decode, dp_decode_dependent
from parsetag.linearize import Scheme
from parsetag.score import Dependency, TagVocab, random_scores


@dataclass
class Config:
    lengths: tuple = (10, 20, 40, 80, 160)
    depths: tuple = (4, 8, 16)
    labels: int = 3
    beam_size: int = 16
    repeats: int = 5
    seed: int = 0
    out: str = "timing.csv"


def _best_time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    vocab = TagVocab.from_labels([f"L{i}" for i in range(cfg.labels)])
    with open(cfg.out, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["decoder", "n", "d", "seconds"])
        for d in cfg.depths:
            for n in cfg.lengths:
                indep = random_scores(rng, n, vocab, scheme=Scheme.IN)
                dep = random_scores(rng, n, vocab, Dependency.LEFT, Scheme.PRE)
                runs = {
                    "dp": lambda: dp_decode(indep, DecoderConfig(Scheme.IN, max_stack=d)),
                    "dp-dep": lambda: dp_decode_dependent(
                        dep, DecoderConfig(Scheme.PRE, Dependency.LEFT, max_stack=d)),
                    "beam": lambda: beam_decode(
                        indep, DecoderConfig(Scheme.IN, max_stack=d, beam_size=cfg.beam_size)),
                }
                for name, fn in runs.items():
                    secs = _best_time(fn, cfg.repeats)
                    writer.writerow([name, n, d, f"{secs:.6f}"])
                    print(f"{name:>6} n={n:<4} d={d:<3} {secs * 1000:8.2f} ms")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeats", type=int, default=Config.repeats)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--out", default=Config.out)
    a = p.parse_args()
    main(Config(repeats=a.repeats, seed=a.seed, out=a.out))
