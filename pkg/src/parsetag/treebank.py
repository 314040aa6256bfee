"""Bracketed constituency trees: reading, writing and normalization.

Trees are immutable. A tree is either a :class:`Leaf` (preterminal over a
word) or a :class:`Tree` (labeled node over an ordered tuple of children).
The right/left-corner transforms additionally use :data:`EPSILON` as an
empty placeholder child.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

UNARY_SEP = "+"
BIN_MARK = "|<"
BIN_CLOSE = ">"
BIN_JOIN = "-"
EPS_TOKEN = "<eps>"

_ESCAPES = (("(", "-LRB-"), (")", "-RRB-"))


@dataclass(frozen=True)
class Leaf:
    pos: str
    word: str

    @property
    def label(self) -> str:
        return self.pos


@dataclass(frozen=True)
class Epsilon:
    """Empty child introduced by the corner transforms; has no yield."""

    @property
    def label(self) -> str:
        return EPS_TOKEN


EPSILON = Epsilon()


@dataclass(frozen=True)
class Tree:
    label: str
    children: tuple

    def __post_init__(self):
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError(f"node {self.label!r} has no children")


ParseTree = Union[Tree, Leaf]


class TreeSyntaxError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(message + where)


# ---------------------------------------------------------------- traversal

def leaves(tree) -> list[Leaf]:
    """Leaves left to right, skipping epsilon placeholders."""
    out = []
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            out.append(node)
        elif isinstance(node, Tree):
            stack.extend(reversed(node.children))
    return out


def words(tree) -> list[str]:
    return [leaf.word for leaf in leaves(tree)]


def is_binary(tree) -> bool:
    if isinstance(tree, Tree):
        return len(tree.children) == 2 and all(is_binary(c) for c in tree.children)
    return True


def mirror(tree):
    """Swap the children of every node."""
    if isinstance(tree, Tree):
        return Tree(tree.label, tuple(mirror(c) for c in reversed(tree.children)))
    return tree


def production(node: Tree) -> tuple[str, tuple[str, ...]]:
    """The rule used at ``node``: its label and its children's labels."""
    return node.label, tuple(child.label for child in node.children)


def internal_nodes(tree) -> Iterator[Tree]:
    if isinstance(tree, Tree):
        yield tree
        for child in tree.children:
            yield from internal_nodes(child)


# ------------------------------------------------------------- reading text

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _unescape(word: str) -> str:
    for raw, esc in _ESCAPES:
        word = word.replace(esc, raw)
    return word


def _escape(word: str) -> str:
    for raw, esc in _ESCAPES:
        word = word.replace(raw, esc)
    return word


def _tokenize(text: str):
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def locate(offset):
        lo, hi = 0, len(line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if line_starts[mid] <= offset:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1, offset - line_starts[lo] + 1

    return [(m.group(), locate(m.start())) for m in _TOKEN.finditer(text)], locate(len(text))


def parse_bracketed(text: str) -> list[ParseTree]:
    """Read every top-level S-expression in ``text`` as a tree.

    The PTB convention of an unlabeled outer wrapper ``( (S ...) )`` is
    accepted and unwrapped. ``-LRB-``/``-RRB-`` in words become parentheses.
    """
    tokens, end_pos = _tokenize(text)
    pos = 0

    def node():
        nonlocal pos
        tok, (line, col) = tokens[pos]
        assert tok == "("
        pos += 1
        if pos >= len(tokens):
            raise TreeSyntaxError("unbalanced parentheses: missing ')'", line, col)
        label_tok = tokens[pos][0]
        if label_tok == ")":
            raise TreeSyntaxError("empty tree", line, col)
        label = None
        if label_tok != "(":
            label = label_tok
            pos += 1
        children = []
        while True:
            if pos >= len(tokens):
                raise TreeSyntaxError("unbalanced parentheses: missing ')'", line, col)
            tok, (tline, tcol) = tokens[pos]
            if tok == ")":
                pos += 1
                break
            if tok == "(":
                children.append(node())
                continue
            pos += 1
            if tok == EPS_TOKEN and (children or tokens[pos][0] != ")"):
                children.append(EPSILON)
            elif not children and pos < len(tokens) and tokens[pos][0] == ")" and label is not None:
                pos += 1
                return Leaf(label, _unescape(tok))
            else:
                raise TreeSyntaxError(f"leaf {tok!r} without preterminal", tline, tcol)
        if label is None:
            if len(children) == 1 and not isinstance(children[0], Epsilon):
                return children[0]
            raise TreeSyntaxError("node without label", line, col)
        if not children:
            raise TreeSyntaxError("empty tree", line, col)
        return Tree(label, tuple(children))

    trees = []
    while pos < len(tokens):
        tok, (line, col) = tokens[pos]
        if tok == ")":
            raise TreeSyntaxError("unbalanced parentheses: unexpected ')'", line, col)
        if tok != "(":
            raise TreeSyntaxError(f"leaf {tok!r} without preterminal", line, col)
        try:
            trees.append(node())
        except IndexError:
            raise TreeSyntaxError("unbalanced parentheses: missing ')'", *end_pos) from None
    return trees


def format_bracketed(tree) -> str:
    if isinstance(tree, Leaf):
        return f"({tree.pos} {_escape(tree.word)})"
    if isinstance(tree, Epsilon):
        return EPS_TOKEN
    return "({} {})".format(tree.label, " ".join(format_bracketed(c) for c in tree.children))


def read_corpus(path) -> list[ParseTree]:
    with open(path, encoding="utf-8") as f:
        return parse_bracketed(f.read())


def write_corpus(trees: Iterable, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for tree in trees:
            f.write(format_bracketed(tree) + "\n")


# ---------------------------------------------------------- normalization

def _check_labels(tree, forbidden: str):
    for node in [tree, *internal_nodes(tree)]:
        if isinstance(node, Tree):
            labels = [node.label] + [c.pos for c in node.children if isinstance(c, Leaf)]
        elif isinstance(node, Leaf):
            labels = [node.pos]
        else:
            labels = []
        for label in labels:
            if forbidden in label:
                raise ValueError(f"label {label!r} already contains separator {forbidden!r}")


def collapse_unaries(tree, separator: str = UNARY_SEP):
    """Merge unary chains into single nodes with joined labels.

    A chain that bottoms out in a preterminal is folded into the leaf, so
    ``(A (B (C c)))`` becomes the leaf ``(A+B+C c)``.
    """
    _check_labels(tree, separator)

    def collapse(node):
        if isinstance(node, Leaf):
            return node
        labels = [node.label]
        while len(node.children) == 1 and isinstance(node.children[0], Tree):
            node = node.children[0]
            labels.append(node.label)
        if len(node.children) == 1:
            leaf = node.children[0]
            return Leaf(separator.join(labels + [leaf.pos]), leaf.word)
        return Tree(separator.join(labels), tuple(collapse(c) for c in node.children))

    return collapse(tree)


def expand_unaries(tree, separator: str = UNARY_SEP):
    """Inverse of :func:`collapse_unaries`."""
    if isinstance(tree, Leaf):
        parts = tree.pos.split(separator)
        node = Leaf(parts[-1], tree.word)
        for label in reversed(parts[:-1]):
            node = Tree(label, (node,))
        return node
    if isinstance(tree, Epsilon):
        return tree
    parts = tree.label.split(separator)
    node = Tree(parts[-1], tuple(expand_unaries(c, separator) for c in tree.children))
    for label in reversed(parts[:-1]):
        node = Tree(label, (node,))
    return node


def _is_marker(label: str, mark: str) -> bool:
    return mark in label


def binarize(tree, mark: str = BIN_MARK, close: str = BIN_CLOSE, join: str = BIN_JOIN):
    """Right-factored binarization with nltk-style ``P|<B-C>`` labels."""
    if not isinstance(tree, Tree):
        return tree
    kids = [binarize(c, mark, close, join) for c in tree.children]
    labels = [c.label for c in tree.children]
    node = kids[-1]
    for i in range(len(kids) - 2, 0, -1):
        node = Tree(f"{tree.label}{mark}{join.join(labels[i:])}{close}", (kids[i], node))
    if len(kids) == 1:
        return Tree(tree.label, (node,))
    return Tree(tree.label, (kids[0], node))


def debinarize(tree, mark: str = BIN_MARK):
    """Splice out every node whose label carries the binarization marker."""
    if isinstance(tree, Tree) and _is_marker(tree.label, mark):
        raise ValueError(f"binarization marker at root: {tree.label!r}")

    def splice(node) -> list:
        if not isinstance(node, Tree):
            return [node]
        kids = []
        for child in node.children:
            if isinstance(child, Tree) and _is_marker(child.label, mark):
                kids.extend(splice(child))
            else:
                kids.append(rebuild(child))
        return kids

    def rebuild(node):
        if not isinstance(node, Tree):
            return node
        return Tree(node.label, tuple(splice(node)))

    return rebuild(tree)


def normalize(tree):
    """Preprocessing used before linearization: collapse unaries, binarize."""
    return binarize(collapse_unaries(tree))


def denormalize(tree):
    """Undo :func:`normalize`; apply before bracket scoring."""
    return expand_unaries(debinarize(tree))


# ------------------------------------------------------------- leaf files

def read_leaves(path) -> list[list[Leaf]]:
    """``pos<TAB>word`` rows; a blank line ends each sentence."""
    sentences, current = [], []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip():
                if current:
                    sentences.append(current)
                    current = []
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not all(parts):
                raise TreeSyntaxError("expected 'pos<TAB>word'", lineno, 1)
            current.append(Leaf(*parts))
    if current:
        sentences.append(current)
    return sentences


def write_leaves(sentences: Iterable, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for leaf_seq in sentences:
            for leaf in leaf_seq:
                f.write(f"{leaf.pos}\t{leaf.word}\n")
            f.write("\n")
