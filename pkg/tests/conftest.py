import random

import pytest
from hypothesis import strategies as st

from parsetag.sampling import LABELS, POS, random_tree
from parsetag.treebank import Leaf, Tree, parse_bracketed

SHE = "(S (PRP She) (VP (V enjoys) (VP (V reading) (N papers))))"


@pytest.fixture
def she():
    return parse_bracketed(SHE)[0]


@st.composite
def binary_trees(draw, max_words=12, labels=LABELS[:3], pos=POS[:3]):
    n = draw(st.integers(1, max_words))
    k = iter(range(n))

    def build(size):
        if size == 1:
            return Leaf(draw(st.sampled_from(pos)), f"w{next(k)}")
        split = draw(st.integers(1, size - 1))
        left = build(split)
        return Tree(draw(st.sampled_from(labels)), (left, build(size - split)))

    return build(n)


# raw treebank-like trees: any arity, unary chains, depth <= 12, fanout <= 5
raw_trees = st.integers(0, 2**32 - 1).map(lambda s: random_tree(random.Random(s)))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
