"""Synthetic trees for property checks and experiments."""
from __future__ import annotations

import itertools
import random
from typing import Sequence

from .treebank import Leaf, Tree

LABELS = ("S", "NP", "VP", "PP", "ADJP")
POS = ("N", "V", "D", "P", "J")


def _leaves(rng: random.Random, n: int, pos: Sequence[str]) -> list[Leaf]:
    return [Leaf(rng.choice(pos), f"w{i}") for i in range(n)]


def random_binary_tree(rng: random.Random, n: int, labels: Sequence[str] = LABELS,
                       pos: Sequence[str] = POS):
    """Binary tree over ``n`` words with uniformly chosen split points."""
    lv = _leaves(rng, n, pos)

    def build(lo, hi):
        if hi - lo == 1:
            return lv[lo]
        k = rng.randint(lo + 1, hi - 1)
        return Tree(rng.choice(labels), (build(lo, k), build(k, hi)))

    return build(0, n)


def right_branching(n: int, labels: Sequence[str] = ("S",), pos: Sequence[str] = ("X",)):
    lv = [Leaf(pos[i % len(pos)], f"w{i}") for i in range(n)]
    node = lv[-1]
    for i in range(n - 2, -1, -1):
        node = Tree(labels[i % len(labels)], (lv[i], node))
    return node


def left_branching(n: int, labels: Sequence[str] = ("S",), pos: Sequence[str] = ("X",)):
    lv = [Leaf(pos[i % len(pos)], f"w{i}") for i in range(n)]
    node = lv[0]
    for i in range(1, n):
        node = Tree(labels[i % len(labels)], (node, lv[i]))
    return node


def random_branching_tree(rng: random.Random, n: int, right_bias: float,
                          labels: Sequence[str] = LABELS, pos: Sequence[str] = POS):
    """Binary tree whose splits lean right (``right_bias`` near 1) or left.

    With probability ``right_bias`` a node takes a single word as its left
    child, otherwise a single word as its right child.
    """
    lv = _leaves(rng, n, pos)

    def build(lo, hi):
        if hi - lo == 1:
            return lv[lo]
        k = lo + 1 if rng.random() < right_bias else hi - 1
        return Tree(rng.choice(labels), (build(lo, k), build(k, hi)))

    return build(0, n)


def random_tree(rng: random.Random, max_depth: int = 12, max_fanout: int = 5,
                labels: Sequence[str] = LABELS, pos: Sequence[str] = POS,
                vocab: Sequence[str] = ("a", "b", "c(d)", "e")):
    """Arbitrary-arity tree with unary chains, as found in raw treebanks."""

    def build(depth):
        if depth >= max_depth or rng.random() < 0.25 + 0.07 * depth:
            return Leaf(rng.choice(pos), rng.choice(vocab))
        k = rng.randint(1, max_fanout)
        return Tree(rng.choice(labels), tuple(build(depth + 1) for _ in range(k)))

    node = build(1)
    if isinstance(node, Leaf):
        node = Tree(rng.choice(labels), (node,))
    return node


def all_binary_trees(leaf_seq: Sequence[Leaf], labels: Sequence[str]):
    """Every binary tree over ``leaf_seq`` with every internal labeling."""
    leaf_seq = tuple(leaf_seq)

    def build(lo, hi):
        if hi - lo == 1:
            yield leaf_seq[lo]
            return
        for k in range(lo + 1, hi):
            for left, right in itertools.product(list(build(lo, k)), list(build(k, hi))):
                for label in labels:
                    yield Tree(label, (left, right))

    yield from build(0, len(leaf_seq))
