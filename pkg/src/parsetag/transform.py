"""Right-corner and left-corner transforms of binary trees.

Transformed trees use slash categories ``A/B`` (an ``A`` still missing a
``B``) as node labels and :data:`~parsetag.treebank.EPSILON` as the empty
child that starts each rewritten spine.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .treebank import EPS_TOKEN, EPSILON, Epsilon, Leaf, Tree

SLASH = "/"


@dataclass(frozen=True)
class SlashLabel:
    numerator: str | None = None
    denominator: str | None = None
    is_epsilon: bool = False

    def __post_init__(self):
        if self.is_epsilon and (self.numerator is not None or self.denominator is not None):
            raise ValueError("epsilon label carries no categories")
        if not self.is_epsilon and self.numerator is None:
            raise ValueError("slash label needs a numerator")

    @property
    def slashed(self) -> bool:
        return self.denominator is not None

    @classmethod
    def parse(cls, text: str) -> "SlashLabel":
        if text == EPS_TOKEN:
            return cls(is_epsilon=True)
        num, sep, den = text.partition(SLASH)
        return cls(num, den if sep else None)

    @classmethod
    def of(cls, node) -> "SlashLabel":
        if isinstance(node, Epsilon):
            return cls(is_epsilon=True)
        return cls.parse(node.label)

    def __str__(self):
        if self.is_epsilon:
            return EPS_TOKEN
        if self.denominator is None:
            return self.numerator
        return f"{self.numerator}{SLASH}{self.denominator}"


class RuleShape(enum.Enum):
    SPINE_START = "spine-start"  # the rule with the epsilon child
    SPINE_CONT = "spine-cont"
    SPINE_TOP = "spine-top"
    PLAIN = "plain"


def classify_rule_shape(parent: SlashLabel, left: SlashLabel, right: SlashLabel,
                        direction: str = "rc") -> RuleShape:
    """Which of the three corner-transform rule patterns a local tree has.

    ``direction="rc"`` reads the spine through the left child (right-corner
    trees), ``"lc"`` through the right child.
    """
    if direction == "lc":
        left, right = right, left
    elif direction != "rc":
        raise ValueError(f"unknown direction {direction!r}")
    if left.is_epsilon and not parent.is_epsilon and parent.slashed:
        return RuleShape.SPINE_START
    if left.is_epsilon or parent.is_epsilon:
        return RuleShape.PLAIN
    if left.slashed and parent.slashed:
        return RuleShape.SPINE_CONT
    if left.slashed:
        return RuleShape.SPINE_TOP
    return RuleShape.PLAIN


def _check_binary(node):
    if len(node.children) != 2:
        raise ValueError(f"node {node.label!r} has {len(node.children)} children; "
                         "corner transforms need a binary tree")
    if SLASH in node.label:
        raise ValueError(f"label {node.label!r} contains {SLASH!r}")


def right_corner(tree):
    """Rewrite every right spine of a binary tree into a left spine.

    For a node ``A`` whose right spine is ``A=X0, X1, ..., Xk`` (``Xk`` a
    leaf) with spine left children ``l0 ... l(k-1)`` the result is
    ``A(C(k-1), Xk)`` where ``C0 = A/X1(eps, rc(l0))`` and
    ``Ci = A/X(i+1)(C(i-1), rc(li))``.
    """
    if isinstance(tree, Leaf):
        return tree
    top = tree.label
    node = tree
    acc = EPSILON
    while isinstance(node, Tree):
        _check_binary(node)
        left, right = node.children
        acc = Tree(f"{top}{SLASH}{right.label}", (acc, right_corner(left)))
        node = right
    return Tree(top, (acc, node))


def left_corner(tree):
    """Mirror image of :func:`right_corner`, rewriting left spines."""
    if isinstance(tree, Leaf):
        return tree
    top = tree.label
    node = tree
    acc = EPSILON
    while isinstance(node, Tree):
        _check_binary(node)
        left, right = node.children
        acc = Tree(f"{top}{SLASH}{left.label}", (left_corner(right), acc))
        node = left
    return Tree(top, (node, acc))
