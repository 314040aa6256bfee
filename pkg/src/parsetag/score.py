"""Tag vocabularies, per-slot score tables and sequence/tree scores.

A :class:`ScoreTable` stands in for a trained tagger: one row of log-scores
over the tag vocabulary per tag slot, plus an optional tag-to-tag transition
matrix for left/right-dependent models. Tables travel as JSON lines.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import logsumexp

from .linearize import REDUCE, SL, SR, Scheme, Tag, linearize
from .treebank import internal_nodes, production

NEG_INF_SENTINEL = -1e30


class Dependency(str, enum.Enum):
    INDEPENDENT = "independent"
    LEFT = "left"
    RIGHT = "right"

    def __str__(self):
        return self.value


class TagVocab:
    """Ordered, duplicate-free tag inventory."""

    def __init__(self, tags: Iterable[Tag]):
        self.tags = tuple(tags)
        self._index = {t: i for i, t in enumerate(self.tags)}
        if len(self._index) != len(self.tags):
            raise ValueError("duplicate tags in vocabulary")

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "TagVocab":
        tags = [SL, SR]
        for label in sorted(set(labels)):
            tags += [Tag(REDUCE, "L", label), Tag(REDUCE, "R", label)]
        return cls(tags)

    def index(self, tag: Tag) -> int:
        try:
            return self._index[tag]
        except KeyError:
            raise KeyError(f"tag {tag} not in vocabulary") from None

    def __contains__(self, tag) -> bool:
        return tag in self._index

    def __len__(self):
        return len(self.tags)

    def __iter__(self):
        return iter(self.tags)

    def __getitem__(self, i) -> Tag:
        return self.tags[i]

    def __eq__(self, other):
        return isinstance(other, TagVocab) and self.tags == other.tags

    def __hash__(self):
        return hash(self.tags)

    def __repr__(self):
        return f"TagVocab({' '.join(map(str, self.tags))})"


def build_tag_vocab(trees: Iterable, scheme: Scheme | str) -> TagVocab:
    """Shift tags first, then both reduce directions for every label seen."""
    labels = set()
    seen = False
    for tree in trees:
        seen = True
        labels.update(t.label for t in linearize(tree, scheme) if not t.is_shift)
    if not seen:
        raise ValueError("empty corpus")
    return TagVocab.from_labels(labels)


@dataclass(frozen=True, eq=False)
class ScoreTable:
    n: int
    vocab: TagVocab
    log_scores: np.ndarray  # (2n-1, |vocab|)
    transition: np.ndarray | None = None  # (|vocab|, |vocab|), prev -> next
    dependency: Dependency = Dependency.INDEPENDENT
    scheme: Scheme | None = None
    id: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        scores = np.array(self.log_scores, dtype=float)
        if scores.shape != (2 * self.n - 1, len(self.vocab)):
            raise ValueError(f"score matrix has shape {scores.shape}, expected "
                             f"({2 * self.n - 1}, {len(self.vocab)})")
        if np.isnan(scores).any() or np.isposinf(scores).any():
            raise ValueError("scores must be finite or -inf")
        scores.flags.writeable = False
        object.__setattr__(self, "log_scores", scores)
        object.__setattr__(self, "dependency", Dependency(self.dependency))
        if self.scheme is not None:
            object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.transition is not None:
            trans = np.array(self.transition, dtype=float)
            if trans.shape != (len(self.vocab), len(self.vocab)):
                raise ValueError(f"transition matrix has shape {trans.shape}")
            if np.isnan(trans).any() or np.isposinf(trans).any():
                raise ValueError("transition scores must be finite or -inf")
            trans.flags.writeable = False
            object.__setattr__(self, "transition", trans)
        elif self.dependency is not Dependency.INDEPENDENT:
            raise ValueError(f"{self.dependency} dependency needs a transition matrix")

    @property
    def length(self) -> int:
        return 2 * self.n - 1

    def normalized(self) -> "ScoreTable":
        """Copy whose rows are log-probabilities."""
        rows = self.log_scores - logsumexp(self.log_scores, axis=1, keepdims=True)
        return ScoreTable(self.n, self.vocab, rows, self.transition, self.dependency,
                          self.scheme, self.id, dict(self.meta))

    def with_transition(self, transition, dependency) -> "ScoreTable":
        return ScoreTable(self.n, self.vocab, self.log_scores, transition, dependency,
                          self.scheme, self.id, dict(self.meta))


# ------------------------------------------------------------ table makers

def oracle_scores(tree, scheme: Scheme | str, vocab: TagVocab, id: str = "") -> ScoreTable:
    """One-hot log table: 0 on the gold tag of each slot, -inf elsewhere."""
    gold = linearize(tree, scheme)
    scores = np.full((len(gold), len(vocab)), -np.inf)
    for i, tag in enumerate(gold):
        scores[i, vocab.index(tag)] = 0.0
    return ScoreTable((len(gold) + 1) // 2, vocab, scores, scheme=scheme, id=id)


def perturbed_scores(tree, scheme: Scheme | str, vocab: TagVocab, sigma: float, seed: int,
                     floor: float = -50.0, id: str = "") -> ScoreTable:
    """Oracle table with ``-inf`` raised to ``floor`` plus Gaussian noise."""
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    base = oracle_scores(tree, scheme, vocab, id)
    scores = np.where(np.isneginf(base.log_scores), floor, base.log_scores)
    rng = np.random.default_rng(seed)
    scores = scores + sigma * rng.standard_normal(scores.shape)
    return ScoreTable(base.n, vocab, scores, scheme=scheme, id=id)


def random_scores(rng: np.random.Generator, n: int, vocab: TagVocab,
                  dependency: Dependency | str = Dependency.INDEPENDENT,
                  scheme: Scheme | str | None = None) -> ScoreTable:
    """Standard-normal slot scores (and transitions if dependent)."""
    dependency = Dependency(dependency)
    scores = rng.standard_normal((2 * n - 1, len(vocab)))
    trans = None
    if dependency is not Dependency.INDEPENDENT:
        trans = rng.standard_normal((len(vocab), len(vocab)))
    return ScoreTable(n, vocab, scores, trans, dependency, scheme)


# ------------------------------------------------------------------ scores

def sequence_log_prob(tags: Sequence[Tag], table: ScoreTable) -> float:
    """Sum of slot log-scores, plus transitions between neighbours if dependent."""
    if len(tags) != table.length:
        raise ValueError(f"{len(tags)} tags for a table of {table.length} slots")
    idx = [table.vocab.index(t) for t in tags]
    total = 0.0
    dependent = table.dependency is not Dependency.INDEPENDENT
    for i, k in enumerate(idx):
        total += table.log_scores[i, k]
        if dependent and i > 0:
            total += table.transition[idx[i - 1], k]
    return float(total)


def tree_log_score(tree, rule_weights: Mapping) -> float:
    """Log of the product of rule weights over the tree's internal nodes.

    Keys are productions as returned by :func:`parsetag.treebank.production`.
    Preterminal (lexical) rules are taken as given and not scored.
    """
    total = 0.0
    for node in internal_nodes(tree):
        rule = production(node)
        try:
            weight = rule_weights[rule]
        except KeyError:
            raise KeyError(f"no weight for production {rule[0]} -> {' '.join(rule[1])}") from None
        if weight <= 0:
            raise ValueError(f"production {rule} has non-positive weight {weight}")
        total += math.log(weight)
    return total


# -------------------------------------------------------------- score files

class ScoreFileError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def _encode(matrix: np.ndarray) -> list:
    return np.where(np.isneginf(matrix), NEG_INF_SENTINEL, matrix).tolist()


def _decode(rows) -> np.ndarray:
    arr = np.array(rows, dtype=float)
    arr[arr <= NEG_INF_SENTINEL] = -np.inf
    return arr


def table_to_json(table: ScoreTable) -> str:
    record = {
        "id": table.id,
        "n": table.n,
        "scheme": str(table.scheme) if table.scheme is not None else None,
        "vocab": [str(t) for t in table.vocab],
        "log_scores": _encode(table.log_scores),
        "dependency": str(table.dependency),
    }
    if table.transition is not None:
        record["transition"] = _encode(table.transition)
    return json.dumps(record)


def write_scores(tables: Iterable[ScoreTable], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for table in tables:
            f.write(table_to_json(table) + "\n")


def _matrix(record, key, shape, lineno):
    rows = record[key]
    if not isinstance(rows, list) or len(rows) != shape[0]:
        raise ScoreFileError(lineno, f"{key!r} needs {shape[0]} rows")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise ScoreFileError(lineno, f"{key!r} row {i} needs {shape[1]} values")
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in row):
            raise ScoreFileError(lineno, f"{key!r} row {i} has non-numeric values")
    return _decode(rows)


def table_from_json(text: str, lineno: int = 1, vocab: TagVocab | None = None) -> ScoreTable:
    try:
        record = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScoreFileError(lineno, f"malformed JSON: {e.msg}") from None
    if not isinstance(record, dict):
        raise ScoreFileError(lineno, "record must be a JSON object")
    for key in ("n", "vocab", "log_scores"):
        if key not in record:
            raise ScoreFileError(lineno, f"missing field {key!r}")
    n = record["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ScoreFileError(lineno, f"'n' must be a positive integer, got {n!r}")
    try:
        file_vocab = TagVocab(Tag.parse(s) for s in record["vocab"])
    except (ValueError, TypeError, AttributeError) as e:
        raise ScoreFileError(lineno, f"bad vocabulary: {e}") from None
    if vocab is not None and file_vocab != vocab:
        raise ScoreFileError(lineno, "vocabulary differs from the declared tag list")
    rows = record["log_scores"]
    if isinstance(rows, list) and len(rows) % 2 == 0:
        raise ScoreFileError(lineno, f"{len(rows)} score rows; the slot count must be odd (2n-1)")
    scores = _matrix(record, "log_scores", (2 * n - 1, len(file_vocab)), lineno)
    trans = None
    if record.get("transition") is not None:
        trans = _matrix(record, "transition", (len(file_vocab), len(file_vocab)), lineno)
    try:
        dependency = Dependency(record.get("dependency", "independent"))
        scheme = record.get("scheme")
        scheme = Scheme(scheme) if scheme is not None else None
        return ScoreTable(n, file_vocab, scores, trans, dependency, scheme,
                          str(record.get("id", "")))
    except ValueError as e:
        raise ScoreFileError(lineno, str(e)) from None


def read_scores(path, vocab: TagVocab | None = None) -> list[ScoreTable]:
    tables = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if line.strip():
                tables.append(table_from_json(line, lineno, vocab))
    return tables
