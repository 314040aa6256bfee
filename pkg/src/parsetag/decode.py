"""Decoding score tables into valid tag sequences.

All decoders search the same DAG: a node is ``(i, j, prev)`` with ``i`` tags
emitted and stack measure ``j``; edges are the tags :func:`advance` allows.
Exact decoders run a backward max-plus pass over the chart and then walk
forward choosing, among optimal continuations, the smallest tag index. So
ties resolve to the lexicographically smallest tag-index sequence, the same
rule beam search and brute force use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linearize import (GOAL_MEASURE, L, R, REDUCE, SHIFT, START_MEASURE, Scheme, Tag,
                        accepts, advance)
from .score import Dependency, ScoreTable, sequence_log_prob

CATEGORIES = ((SHIFT, L), (SHIFT, R), (REDUCE, L), (REDUCE, R))
_REP = tuple(Tag(k, d, None if k == SHIFT else "*") for k, d in CATEGORIES)

LEGAL_PAIRS = {Dependency.LEFT: Scheme.PRE, Dependency.RIGHT: Scheme.POST}


class NoValidPath(ValueError):
    pass


class IllegalPairing(ValueError):
    pass


@dataclass(frozen=True)
class DecoderConfig:
    scheme: Scheme
    dependency: Dependency = Dependency.INDEPENDENT
    max_stack: int | None = None  # None: no bound beyond the sentence length
    beam_size: int = 10
    tie_break: str = "lexicographic"

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "dependency", Dependency(self.dependency))
        if self.max_stack is not None and self.max_stack < 1:
            raise ValueError("max_stack must be at least 1")
        if self.beam_size < 1:
            raise ValueError("beam_size must be at least 1")
        if self.tie_break != "lexicographic":
            raise ValueError(f"unknown tie-break rule {self.tie_break!r}")

    def depth_for(self, n: int) -> int:
        # no scheme's measure exceeds the number of words
        return max(n, 1) if self.max_stack is None else self.max_stack


@dataclass(frozen=True)
class DecoderState:
    i: int
    j: int
    prev: Tag | None = None


@dataclass(frozen=True)
class DecodeResult:
    tags: tuple[Tag, ...]
    score: float


def transitions(state: DecoderState, tag: Tag, scheme: Scheme | str,
                max_stack: int | None = None) -> DecoderState | None:
    """Successor of ``state`` after emitting ``tag``, or ``None`` if invalid."""
    j = advance(Scheme(scheme), state.i + 1, state.j, state.prev, tag)
    if j is None or (max_stack is not None and j > max_stack):
        return None
    return DecoderState(state.i + 1, j, tag)


def start_state(scheme: Scheme | str) -> DecoderState:
    return DecoderState(0, START_MEASURE[Scheme(scheme)])


def is_goal(state: DecoderState, scheme: Scheme | str, n: int) -> bool:
    return state.i == 2 * n - 1 and accepts(Scheme(scheme), state.j, state.prev)


def _state_key(scheme: Scheme, tag: Tag | None):
    """The part of the previous tag that constrains what may follow."""
    if tag is None or scheme is Scheme.IN:
        return None
    return tag.kind if scheme is Scheme.PRE else tag.direction


def _key_rep(scheme: Scheme, key) -> Tag | None:
    if key is None:
        return None
    if scheme is Scheme.PRE:
        return Tag(key, L, None if key == SHIFT else "*")
    return Tag(SHIFT, key)


def _category_index(tag: Tag) -> int:
    return CATEGORIES.index(tag.category)


def _score_of(idx: Sequence[int], table: ScoreTable, dependent: bool) -> float:
    tags = [table.vocab[k] for k in idx]
    if dependent:
        return sequence_log_prob(tags, table)
    total = 0.0
    for i, k in enumerate(idx):
        total += table.log_scores[i, k]
    return float(total)


def _category_best(table: ScoreTable):
    """Per slot and category: best score and the smallest index attaining it."""
    m, t = table.log_scores.shape
    best = np.full((m, 4), -np.inf)
    arg = np.full((m, 4), -1, dtype=int)
    cats = np.array([_category_index(tag) for tag in table.vocab])
    for c in range(4):
        cols = np.flatnonzero(cats == c)
        if cols.size:
            sub = table.log_scores[:, cols]
            best[:, c] = sub.max(axis=1)
            arg[:, c] = cols[sub.argmax(axis=1)]
    return best, arg


def _check_table(table: ScoreTable, config: DecoderConfig):
    if table.scheme is not None and table.scheme is not config.scheme:
        raise ValueError(f"table was built for {table.scheme}, decoder runs {config.scheme}")


# ------------------------------------------------------------- exact DPs

class _IndependentChart:
    """State graph for the independent model: states are ``(j, key)``.

    ``key`` is what the previous tag contributes to the next step's rule
    (nothing for in-order, its kind for pre-order, its direction for
    post-order). Key-less states are the start state, and every state of
    the in-order graph.
    """

    def __init__(self, scheme: Scheme, d: int):
        keys = [None] if scheme is Scheme.IN else [None, SHIFT, REDUCE] \
            if scheme is Scheme.PRE else [None, L, R]
        self.states = [(j, k) for k in keys for j in range(d + 1)]
        self.index = {s: i for i, s in enumerate(self.states)}
        # dst[position parity][state, category] -> successor state or -1
        self.dst = {}
        for pos in (1, 2):
            table = np.full((len(self.states), 4), -1, dtype=int)
            for s, (j, key) in enumerate(self.states):
                for c, rep in enumerate(_REP):
                    j2 = advance(scheme, pos, j, _key_rep(scheme, key), rep)
                    if j2 is not None and j2 <= d:
                        table[s, c] = self.index[(j2, _state_key(scheme, rep))]
            self.dst[pos % 2] = table
        self.goal = np.array([
            (j == GOAL_MEASURE[scheme]) if scheme is Scheme.IN
            else key is not None and accepts(scheme, j, _key_rep(scheme, key))
            for j, key in self.states])


def dp_decode(table: ScoreTable, config: DecoderConfig) -> DecodeResult:
    """Exact argmax over valid sequences under per-slot (independent) scores.

    Transition scores in ``table`` are ignored. Raises :class:`NoValidPath`
    when no finite-scoring sequence fits within ``config.max_stack``.
    """
    _check_table(table, config)
    scheme = config.scheme
    m = table.length
    d = config.depth_for(table.n)
    if START_MEASURE[scheme] > d:
        raise NoValidPath(f"max_stack {d} is below the starting measure")
    chart = _IndependentChart(scheme, d)
    best, arg = _category_best(table)
    n_states = len(chart.states)
    value = np.full((m + 1, n_states), -np.inf)
    choice = np.full((m, n_states), -1, dtype=int)
    value[m, chart.goal] = 0.0
    big = np.iinfo(int).max
    for pos in range(m, 0, -1):
        i = pos - 1
        dst = chart.dst[pos % 2]
        cand = np.where(dst >= 0, best[i][None, :] + value[pos][np.maximum(dst, 0)], -np.inf)
        top = cand.max(axis=1)
        tie = (cand == top[:, None]) & np.isfinite(cand)
        order = np.where(tie, arg[i][None, :], big)
        choice[i] = np.where(np.isfinite(top), order.argmin(axis=1), -1)
        value[pos - 1] = top
    s = chart.index[(START_MEASURE[scheme], None)]
    if not np.isfinite(value[0, s]):
        raise NoValidPath(f"no valid {scheme} sequence within stack measure {d}")
    idx = []
    for pos in range(1, m + 1):
        c = choice[pos - 1, s]
        idx.append(int(arg[pos - 1, c]))
        s = chart.dst[pos % 2][s, c]
    tags = tuple(table.vocab[k] for k in idx)
    return DecodeResult(tags, _score_of(idx, table, dependent=False))


def _check_pairing(table: ScoreTable, config: DecoderConfig):
    dep = config.dependency
    if dep is Dependency.INDEPENDENT:
        raise IllegalPairing("dependent decoding needs a left or right dependency mode")
    if LEGAL_PAIRS[dep] is not config.scheme:
        raise IllegalPairing(f"{dep}-dependent scores only pair with "
                             f"{LEGAL_PAIRS[dep]}-order tags, not {config.scheme}")
    if table.transition is None:
        raise ValueError("dependent decoding needs a transition matrix")


def dp_decode_dependent(table: ScoreTable, config: DecoderConfig) -> DecodeResult:
    """Exact argmax when each tag's score also depends on the previous tag.

    The chart is indexed by ``(i, j, last tag)``; cost is ``O(d N |T|^2)``.
    """
    _check_table(table, config)
    _check_pairing(table, config)
    scheme = config.scheme
    m = table.length
    d = config.depth_for(table.n)
    if START_MEASURE[scheme] > d:
        raise NoValidPath(f"max_stack {d} is below the starting measure")
    vocab = table.vocab
    n_tags = len(vocab)
    trans = table.transition
    scores = table.log_scores
    keys = [_state_key(scheme, t) for t in vocab]
    groups = {}
    for t, key in enumerate(keys):
        groups.setdefault(key, []).append(t)
    groups = {k: np.array(v) for k, v in groups.items()}

    # nxt[(key, pos parity)][j, t] -> measure after tag t, or -1
    def successor_table(prev, pos):
        out = np.full((d + 1, n_tags), -1, dtype=int)
        for j in range(d + 1):
            for t, tag in enumerate(vocab):
                j2 = advance(scheme, pos, j, prev, tag)
                if j2 is not None and j2 <= d:
                    out[j, t] = j2
        return out

    nxt = {(key, par): successor_table(_key_rep(scheme, key) if key is not None else None, pos)
           for key in list(groups) + [None] for par, pos in ((1, 1), (0, 2))}
    if scheme is not Scheme.IN:
        # before the first tag there is no previous tag to constrain
        nxt[("start", 1)] = successor_table(None, 1)
    else:
        nxt[("start", 1)] = nxt[(None, 1)]

    value = np.full((m + 1, d + 1, n_tags), -np.inf)
    choice = np.full((m, d + 1, n_tags), -1, dtype=int)
    for j in range(d + 1):
        for t, tag in enumerate(vocab):
            if accepts(scheme, j, tag):
                value[m, j, t] = 0.0
    cols = np.arange(n_tags)
    for pos in range(m, 1, -1):
        i = pos - 1
        for key, rows in groups.items():
            succ = nxt[(key, pos % 2)]
            for j in range(d + 1):
                j2 = succ[j]
                ahead = np.where(j2 >= 0, scores[i] + value[pos, np.maximum(j2, 0), cols],
                                 -np.inf)
                cand = trans[rows] + ahead[None, :]
                value[pos - 1, j, rows] = cand.max(axis=1)
                choice[i, j, rows] = cand.argmax(axis=1)
    j0 = START_MEASURE[scheme]
    succ = nxt[("start", 1)][j0]
    first = np.where(succ >= 0, scores[0] + value[1, np.maximum(succ, 0), cols], -np.inf)
    if not np.isfinite(first.max()):
        raise NoValidPath(f"no valid {scheme} sequence within stack measure {d}")
    t = int(first.argmax())
    j = int(succ[t])
    idx = [t]
    for pos in range(2, m + 1):
        t_next = int(choice[pos - 1, j, t])
        key = keys[t]
        j = int(nxt[(key, pos % 2)][j, t_next])
        t = t_next
        idx.append(t)
    tags = tuple(vocab[k] for k in idx)
    return DecodeResult(tags, _score_of(idx, table, dependent=True))


# -------------------------------------------------------------- beam search

def beam_decode(table: ScoreTable, config: DecoderConfig) -> DecodeResult:
    """Keep the ``beam_size`` best partial sequences per step.

    Hypotheses reaching the same DAG node are recombined (best kept), so a
    beam at least as wide as the number of nodes per step is exact. With a
    left/right dependency mode the transition scores are included and nodes
    remember the full previous tag.
    """
    _check_table(table, config)
    dependent = config.dependency is not Dependency.INDEPENDENT
    if dependent:
        _check_pairing(table, config)
    scheme = config.scheme
    m = table.length
    d = config.depth_for(table.n)
    h = config.beam_size
    vocab = table.vocab
    scores = table.log_scores
    if dependent:
        options = [[(t,) for t in range(len(vocab))] for _ in range(m)]
    else:
        best, arg = _category_best(table)
        options = [[(int(arg[i, c]),) for c in range(4) if arg[i, c] >= 0] for i in range(m)]

    # hypothesis: (score, index sequence, measure, previous tag index)
    beam = [(0.0, (), START_MEASURE[scheme], None)]
    if START_MEASURE[scheme] > d:
        beam = []
    for pos in range(1, m + 1):
        i = pos - 1
        merged = {}
        for score, seq, j, prev in beam:
            prev_tag = vocab[prev] if prev is not None else None
            for (t,) in options[i]:
                tag = vocab[t]
                j2 = advance(scheme, pos, j, prev_tag, tag)
                if j2 is None or j2 > d:
                    continue
                s2 = score + scores[i, t]
                if dependent and prev is not None:
                    s2 += table.transition[prev, t]
                if s2 == -math.inf:
                    continue
                key = (j2, t) if dependent else (j2, _state_key(scheme, tag))
                hyp = (s2, seq + (t,), j2, t)
                old = merged.get(key)
                if old is None or (-s2, hyp[1]) < (-old[0], old[1]):
                    merged[key] = hyp
        hyps = merged.values()
        if pos == m:
            # only accepting hypotheses compete for the last step
            hyps = [hyp for hyp in hyps if accepts(scheme, hyp[2], vocab[hyp[3]])]
        beam = sorted(hyps, key=lambda hyp: (-hyp[0], hyp[1]))[:h]
        if not beam:
            break
    finals = beam
    if not finals:
        raise NoValidPath(f"beam of size {h} found no valid {scheme} sequence")
    _, seq, _, _ = min(finals, key=lambda hyp: (-hyp[0], hyp[1]))
    tags = tuple(vocab[k] for k in seq)
    return DecodeResult(tags, _score_of(seq, table, dependent))


# -------------------------------------------------------------- brute force

BRUTE_MAX_N = 5
BRUTE_MAX_TAGS = 8


def brute_force_decode(table: ScoreTable, scheme: Scheme | str, n: int | None = None,
                       max_stack: int | None = None,
                       dependency: Dependency | str | None = None) -> DecodeResult:
    """Enumerate every tag sequence in index order and keep the best valid one.

    Sequences are generated depth-first in lexicographic order; a prefix that
    is already invalid (or exceeds ``max_stack``) is not extended, which
    skips only sequences that would fail the validity check anyway.
    """
    scheme = Scheme(scheme)
    n = table.n if n is None else n
    if n != table.n:
        raise ValueError(f"table is for {table.n} words, not {n}")
    if n > BRUTE_MAX_N or len(table.vocab) > BRUTE_MAX_TAGS:
        raise ValueError(f"brute force is limited to N <= {BRUTE_MAX_N} and "
                         f"|T| <= {BRUTE_MAX_TAGS}")
    dependency = table.dependency if dependency is None else Dependency(dependency)
    dependent = dependency is not Dependency.INDEPENDENT
    if dependent and table.transition is None:
        raise ValueError("dependent scoring needs a transition matrix")
    m = 2 * n - 1
    vocab = table.vocab
    best_score, best_seq = -math.inf, None

    scored = table.with_transition(table.transition, dependency) if dependent else table

    def score(seq):
        return _score_of(seq, scored, dependent)

    def extend(seq, state):
        nonlocal best_score, best_seq
        if state.i == m:
            if is_goal(state, scheme, n):
                s = score(seq)
                if s > best_score:
                    best_score, best_seq = s, tuple(seq)
            return
        for t, tag in enumerate(vocab):
            nxt = transitions(state, tag, scheme, max_stack)
            if nxt is not None:
                seq.append(t)
                extend(seq, nxt)
                seq.pop()

    extend([], start_state(scheme))
    if best_seq is None:
        raise NoValidPath(f"no valid {scheme} sequence with finite score")
    return DecodeResult(tuple(vocab[k] for k in best_seq), best_score)


def decode(table: ScoreTable, config: DecoderConfig, mode: str = "dp") -> DecodeResult:
    """Dispatch on ``mode``: ``dp``, ``dp-dep`` or ``beam``."""
    if mode == "dp":
        return dp_decode(table, config)
    if mode == "dp-dep":
        return dp_decode_dependent(table, config)
    if mode == "beam":
        return beam_decode(table, config)
    raise ValueError(f"unknown decoding mode {mode!r}")
