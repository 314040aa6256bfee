"""Mean and max shift-tag deviation per scheme as trees lean left or right.

    python scripts/deviation_vs_branching.py --out deviation.csv
"""
import argparse
import csv
import random
from dataclasses import dataclass

from parsetag.align import deviation_histogram
from parsetag.linearize import Scheme
from parsetag.sampling import random_branching_tree


@dataclass
class Config:
    trees: int = 500
    max_words: int = 40
    biases: tuple = (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0)
    seed: int = 0
    out: str = "deviation.csv"


def main(cfg: Config):
    with open(cfg.out, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["right_bias", "scheme", "mean_deviation", "max_deviation"])
        for bias in cfg.biases:
            rng = random.Random(cfg.seed)
            trees = [random_branching_tree(rng, rng.randint(1, cfg.max_words), bias)
                     for _ in range(cfg.trees)]
            for scheme in Scheme:
                hist = deviation_histogram(trees, scheme)
                writer.writerow([bias, scheme.value, f"{hist.mean:.4f}", hist.max])
                print(f"right_bias={bias:.2f} {scheme.value:>4}: mean {hist.mean:6.3f}  "
                      f"max {hist.max}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trees", type=int, default=Config.trees)
    p.add_argument("--max-words", type=int, default=Config.max_words)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--out", default=Config.out)
    a = p.parse_args()
    main(Config(trees=a.trees, max_words=a.max_words, seed=a.seed, out=a.out))
