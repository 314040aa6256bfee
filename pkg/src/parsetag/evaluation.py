"""Labeled bracket scoring, stack-depth statistics and correlation."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import stats

from .linearize import Scheme, linearize, required_measure
from .treebank import Leaf, Tree, words

PTB_PUNCT = frozenset({"''", "``", ".", ":", ","})


@dataclass(frozen=True)
class EvalConfig:
    """evalb-style switches; the defaults score every labeled bracket."""

    delete_punct: bool = False
    punct_tags: frozenset = PTB_PUNCT
    label_equiv: Mapping[str, str] = field(default_factory=dict)
    include_root: bool = True
    include_preterminals: bool = False


DEFAULT_EVAL = EvalConfig()


def brackets(tree, config: EvalConfig = DEFAULT_EVAL) -> Counter:
    """Multiset of ``(label, start, end)`` spans, 1-based and inclusive."""
    out: Counter = Counter()

    def visit(node, start, is_root):
        # returns the number of scored words under node
        if isinstance(node, Leaf):
            if config.delete_punct and node.pos in config.punct_tags:
                return 0
            if config.include_preterminals:
                out[(config.label_equiv.get(node.pos, node.pos), start, start)] += 1
            return 1
        width = 0
        for child in node.children:
            width += visit(child, start + width, False)
        if width and (config.include_root or not is_root):
            out[(config.label_equiv.get(node.label, node.label), start, start + width - 1)] += 1
        return width

    visit(tree, 1, True)
    return out


@dataclass(frozen=True)
class Counts:
    matched: int
    gold: int
    pred: int

    def __add__(self, other):
        return Counts(self.matched + other.matched, self.gold + other.gold,
                      self.pred + other.pred)

    @property
    def prf(self) -> tuple[float, float, float]:
        return _prf(self.matched, self.gold, self.pred)


def _prf(matched, gold, pred):
    if gold == 0 and pred == 0:
        return 100.0, 100.0, 100.0
    p = 100.0 * matched / pred if pred else 0.0
    r = 100.0 * matched / gold if gold else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def bracket_counts(gold, pred, config: EvalConfig = DEFAULT_EVAL) -> Counts:
    gw, pw = words(gold), words(pred)
    if len(gw) != len(pw):
        raise ValueError(f"yield mismatch: {len(gw)} gold words vs {len(pw)} predicted")
    g, p = brackets(gold, config), brackets(pred, config)
    return Counts(sum((g & p).values()), sum(g.values()), sum(p.values()))


def bracket_prf(gold, pred, config: EvalConfig = DEFAULT_EVAL) -> tuple[float, float, float]:
    """Precision, recall and F1 in percent for one sentence."""
    return bracket_counts(gold, pred, config).prf


def corpus_prf(gold: Sequence, pred: Sequence,
               config: EvalConfig = DEFAULT_EVAL) -> tuple[float, float, float]:
    """Micro-averaged precision, recall and F1 over aligned corpora."""
    if len(gold) != len(pred):
        raise ValueError(f"{len(gold)} gold trees vs {len(pred)} predicted")
    total = Counts(0, 0, 0)
    for g, p in zip(gold, pred):
        total = total + bracket_counts(g, p, config)
    return total.prf


def fmt_pct(x: float) -> str:
    """Two decimals, half-up."""
    return str(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def write_report(ids: Sequence[str], gold: Sequence, pred: Sequence, path,
                 config: EvalConfig = DEFAULT_EVAL) -> tuple[float, float, float]:
    """Per-sentence TSV report with a closing summary row; returns the summary."""
    total = Counts(0, 0, 0)
    with open(path, "w", encoding="utf-8") as f:
        f.write("sentence_id\tprecision\trecall\tf1\n")
        for sid, g, p in zip(ids, gold, pred):
            c = bracket_counts(g, p, config)
            total = total + c
            f.write("\t".join([sid, *map(fmt_pct, c.prf)]) + "\n")
        f.write("\t".join(["ALL", *map(fmt_pct, total.prf)]) + "\n")
    return total.prf


# ------------------------------------------------------------ stack depth

def required_stack_depth(tree, scheme: Scheme | str) -> int:
    """Stack measure a decoder needs to produce this tree's linearization."""
    return required_measure(linearize(tree, scheme), scheme)


def coverage_curve(trees: Iterable, scheme: Scheme | str,
                   max_depth: int | None = None) -> list[tuple[int, float]]:
    """Fraction of trees whose required depth is at most ``k``, for ``k = 1..``."""
    depths = [required_stack_depth(t, scheme) for t in trees]
    if not depths:
        raise ValueError("empty corpus")
    top = max(depths) if max_depth is None else max_depth
    counts = Counter(depths)
    curve, covered = [], 0
    for k in range(0, top + 1):
        covered += counts.get(k, 0)
        if k >= 1:
            curve.append((k, covered / len(depths)))
    return curve


# ------------------------------------------------------------ correlation

@dataclass(frozen=True)
class Correlation:
    r: float
    p_value: float


def pearson(xs: Sequence[float], ys: Sequence[float]) -> Correlation:
    """Product-moment correlation with a two-sided t-test p-value."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be equal-length sequences")
    n = len(x)
    if n < 3:
        raise ValueError("pearson needs at least 3 pairs")
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise ValueError("degenerate variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return Correlation(r, 0.0)
    t = r * math.sqrt((n - 2) / (1 - r * r))
    return Correlation(r, float(2 * stats.t.sf(abs(t), n - 2)))
