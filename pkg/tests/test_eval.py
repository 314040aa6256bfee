import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from conftest import binary_trees
from parsetag.evaluation import (EvalConfig, bracket_prf, brackets, corpus_prf,
                                 coverage_curve, fmt_pct, pearson, required_stack_depth,
                                 write_report)
from parsetag.linearize import Scheme, linearize, tags_to_tree
from parsetag.sampling import all_binary_trees, left_branching, random_binary_tree, \
    right_branching
from parsetag.treebank import Leaf, leaves, parse_bracketed

SWAPPED = "(S (PRP She) (VP (VP (V enjoys) (V reading)) (N papers)))"


def test_she_brackets(she):
    assert brackets(she) == {("S", 1, 4): 1, ("VP", 2, 4): 1, ("VP", 3, 4): 1}
    assert brackets(she, EvalConfig(include_root=False)) == {("VP", 2, 4): 1, ("VP", 3, 4): 1}
    assert ("PRP", 1, 1) in brackets(she, EvalConfig(include_preterminals=True))


def test_self_comparison(she):
    assert bracket_prf(she, she) == (100.0, 100.0, 100.0)


def test_two_of_three(she):
    p, r, f = bracket_prf(she, parse_bracketed(SWAPPED)[0])
    assert [fmt_pct(x) for x in (p, r, f)] == ["66.67"] * 3


def test_flat_prediction(she):
    flat = parse_bracketed("(S (PRP She) (V enjoys) (V reading) (N papers))")[0]
    p, r, f = bracket_prf(she, flat)
    assert (p, r) == (100.0, pytest.approx(100 / 3))


def test_yield_mismatch(she):
    with pytest.raises(ValueError):
        bracket_prf(she, parse_bracketed("(S (A a) (B b))")[0])


def test_corpus_micro_average(she):
    g = parse_bracketed("(S (A a) (B b))")[0]
    p = parse_bracketed("(T (A a) (B b))")[0]
    assert corpus_prf([g, g], [g, p])[2] == 50.0
    assert corpus_prf([she], [parse_bracketed(SWAPPED)[0]]) == \
        bracket_prf(she, parse_bracketed(SWAPPED)[0])
    with pytest.raises(ValueError):
        corpus_prf([g], [g, g])


def test_label_equivalence_and_punctuation():
    g = parse_bracketed("(S (NP (D the) (N dog)) (. .))")[0]
    p = parse_bracketed("(S (PRT (D the) (N dog)) (. .))")[0]
    assert bracket_prf(g, p)[2] == 50.0
    assert bracket_prf(g, p, EvalConfig(label_equiv={"PRT": "NP"}))[2] == 100.0
    assert brackets(g, EvalConfig(delete_punct=True)) == {("S", 1, 2): 1, ("NP", 1, 2): 1}


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10**6))
def test_prf_properties(n, seed):
    rng = random.Random(seed)
    lv = [Leaf("X", f"w{i}") for i in range(n)]
    trees = list(all_binary_trees(lv, ("A", "B")))
    g, p = rng.choice(trees), rng.choice(trees)
    pg, rg, fg = bracket_prf(g, p)
    pp, rp, fp = bracket_prf(p, g)
    assert (pg, rg, fg) == (rp, pp, fp)
    assert 0.0 <= fg <= 100.0
    assert (fg == 100.0) == (brackets(g) == brackets(p))


def test_half_up_formatting():
    assert fmt_pct(200 / 3) == "66.67"
    assert fmt_pct(0.125) == "0.13"
    assert fmt_pct(100.0) == "100.00"


def test_report(tmp_path, she):
    pred = parse_bracketed(SWAPPED)[0]
    summary = write_report(["a", "b"], [she, she], [she, pred], tmp_path / "r.tsv")
    lines = (tmp_path / "r.tsv").read_text().splitlines()
    assert lines[0] == "sentence_id\tprecision\trecall\tf1"
    assert lines[1] == "a\t100.00\t100.00\t100.00"
    assert lines[2] == "b\t66.67\t66.67\t66.67"
    assert lines[3] == "ALL\t83.33\t83.33\t83.33"
    assert fmt_pct(summary[2]) == "83.33"


def test_stack_depth_she(she):
    assert [required_stack_depth(she, s) for s in ("in", "pre", "post")] == [2, 2, 4]
    assert required_stack_depth(right_branching(10), Scheme.POST) == 10
    assert required_stack_depth(Leaf("X", "x"), Scheme.PRE) == 1


@pytest.mark.parametrize("n", [1, 2, 7, 30, 50])
def test_chain_depths(n):
    right, left = right_branching(n), left_branching(n)
    assert required_stack_depth(right, Scheme.IN) <= 2
    assert required_stack_depth(right, Scheme.PRE) <= 2
    assert required_stack_depth(right, Scheme.POST) == n
    assert required_stack_depth(left, Scheme.IN) <= 2
    assert required_stack_depth(left, Scheme.POST) <= 2
    assert required_stack_depth(left, Scheme.PRE) == n


def test_coverage_curves():
    rng = random.Random(0)
    trees = [random_binary_tree(rng, rng.randint(1, 30)) for _ in range(200)]
    for scheme in Scheme:
        curve = coverage_curve(trees, scheme)
        fractions = [f for _, f in curve]
        assert [k for k, _ in curve] == list(range(1, len(curve) + 1))
        assert fractions == sorted(fractions) and fractions[-1] == 1.0
    assert coverage_curve([Leaf("X", "x")] * 3, Scheme.IN) == [(1, 1.0)]
    with pytest.raises(ValueError):
        coverage_curve([], Scheme.IN)


def test_in_order_dominates_on_skewed_corpora():
    rng = random.Random(1)
    from parsetag.sampling import random_branching_tree
    for bias in (0.1, 0.9):
        trees = [random_branching_tree(rng, rng.randint(2, 30), bias) for _ in range(300)]
        top = max(required_stack_depth(t, s) for t in trees for s in Scheme)
        tetra = dict(coverage_curve(trees, Scheme.IN, top))
        for other in (Scheme.PRE, Scheme.POST):
            curve = dict(coverage_curve(trees, other, top))
            assert all(tetra[k] >= curve[k] for k in curve)


def test_pearson_perfect():
    xs = [1.0, 2.5, 3.0, 7.0, 9.5]
    assert pearson(xs, [2 * x for x in xs]).r == pytest.approx(1.0, abs=1e-12)
    assert pearson(xs, [-x for x in xs]).r == pytest.approx(-1.0, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 40), st.integers(0, 10**6))
def test_pearson_matches_scipy(n, seed):
    rng = np.random.default_rng(seed)
    xs, ys = rng.standard_normal(n), rng.standard_normal(n)
    ours = pearson(xs, ys)
    ref = stats.pearsonr(xs, ys)
    assert ours.r == pytest.approx(ref[0], abs=1e-10)
    assert ours.p_value == pytest.approx(ref[1], rel=1e-6, abs=1e-12)


def test_pearson_errors():
    with pytest.raises(ValueError):
        pearson([1, 2], [1, 2])
    with pytest.raises(ValueError):
        pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        pearson([1, 2, 3], [1, 2])


@settings(max_examples=100, deadline=None)
@given(binary_trees(max_words=20), st.sampled_from(list(Scheme)))
def test_decoded_gold_scores_perfectly(tree, scheme):
    back = tags_to_tree(linearize(tree, scheme), leaves(tree), scheme)
    assert bracket_prf(tree, back)[2] == 100.0
