"""Paired tag/word alignment and the deviation of shift tags from their words."""
from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .linearize import Scheme, linearize


def paired_alignment(tags: Sequence) -> list[tuple[int, ...]]:
    """1-based tag indices per word: ``(2n-1, 2n)``, the last word gets one.

    >>> paired_alignment(["a", "b", "c"])
    [(1, 2), (3,)]
    """
    m = len(tags)
    if m % 2 == 0:
        raise ValueError(f"paired alignment needs an odd number of tags, got {m}")
    n = (m + 1) // 2
    return [(2 * k - 1, 2 * k) for k in range(1, n)] + [(m,)]


def aligned_row(index: int) -> int:
    """Word row that paired alignment assigns to 1-based tag ``index``."""
    return (index + 1) // 2


@dataclass(frozen=True)
class DeviationProfile:
    per_word: tuple[int, ...]

    @property
    def max(self) -> int:
        return max(self.per_word)

    @property
    def mean(self) -> float:
        return sum(self.per_word) / len(self.per_word)


def deviation_profile(tree, scheme: Scheme | str) -> DeviationProfile:
    """Distance between each word and the row its shift tag is aligned to."""
    tags = linearize(tree, scheme)
    shift_positions = [m for m, tag in enumerate(tags, 1) if tag.is_shift]
    return DeviationProfile(tuple(abs(n - aligned_row(m))
                                  for n, m in enumerate(shift_positions, 1)))


@dataclass(frozen=True)
class DeviationHistogram:
    counts: tuple[tuple[int, int], ...]  # (deviation, count), ascending
    total_words: int
    mean: float
    max: int

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["deviation", "count"])
            writer.writerows(self.counts)


def deviation_histogram(trees: Iterable, scheme: Scheme | str,
                        bins: int | None = None) -> DeviationHistogram:
    """Word-level deviation counts over a corpus.

    ``bins`` caps the number of integer bins; larger deviations land in the
    last one. By default every observed value gets its own bin.
    """
    counter: Counter = Counter()
    total = 0
    for tree in trees:
        for d in deviation_profile(tree, scheme).per_word:
            counter[d] += 1
            total += d
    if not counter:
        raise ValueError("empty corpus")
    n_words = sum(counter.values())
    top = max(counter)
    if bins is not None:
        if bins < 1:
            raise ValueError("bins must be positive")
        clipped: Counter = Counter()
        for d, c in counter.items():
            clipped[min(d, bins - 1)] += c
        counter, top_bin = clipped, bins - 1
    else:
        top_bin = top
    counts = tuple((d, counter.get(d, 0)) for d in range(top_bin + 1))
    return DeviationHistogram(counts, n_words, total / n_words, top)
