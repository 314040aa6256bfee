"""Tree linearization into shift/reduce tags and back.

Three traversal orders are supported: pre-order (top-down shift-reduce),
post-order (bottom-up shift-reduce) and in-order (tetratagging). Every
scheme emits ``2N - 1`` tags for a binary tree over ``N`` words.

Tags render as ``sl``, ``sr``, ``rl:LABEL`` and ``rr:LABEL``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .transform import RuleShape, SlashLabel, classify_rule_shape
from .treebank import Epsilon, Leaf, Tree

SHIFT = "shift"
REDUCE = "reduce"
L = "L"
R = "R"


class Scheme(str, enum.Enum):
    PRE = "pre"
    POST = "post"
    IN = "in"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Tag:
    kind: str
    direction: str
    label: str | None = None

    def __post_init__(self):
        if self.kind not in (SHIFT, REDUCE) or self.direction not in (L, R):
            raise ValueError(f"bad tag ({self.kind}, {self.direction})")
        if self.kind == REDUCE and not self.label:
            raise ValueError("reduce tags need a label")

    @property
    def is_shift(self) -> bool:
        return self.kind == SHIFT

    @property
    def category(self) -> tuple[str, str]:
        return self.kind, self.direction

    def __str__(self):
        head = ("s" if self.is_shift else "r") + self.direction.lower()
        return head if self.label is None else f"{head}:{self.label}"

    def __repr__(self):
        return f"Tag({self})"

    @classmethod
    def parse(cls, text: str) -> "Tag":
        head, sep, label = text.partition(":")
        if len(head) != 2 or head[0] not in "sr" or head[1] not in "lr":
            raise ValueError(f"unrecognized tag {text!r}")
        if sep and not label:
            raise ValueError(f"empty label in tag {text!r}")
        return cls(SHIFT if head[0] == "s" else REDUCE, head[1].upper(), label or None)


SL = Tag(SHIFT, L)
SR = Tag(SHIFT, R)


def rl(label: str) -> Tag:
    return Tag(REDUCE, L, label)


def rr(label: str) -> Tag:
    return Tag(REDUCE, R, label)


class InvalidTagSequence(ValueError):
    def __init__(self, position: int, reason: str):
        self.position = position
        self.reason = reason
        super().__init__(f"invalid tag sequence at position {position}: {reason}")


# ----------------------------------------------------------------- actions

@dataclass(frozen=True)
class Action:
    """A shift or reduce step carrying the full production it uses."""

    kind: str
    direction: str
    label: str  # preterminal for shifts, parent label for reduces
    children: tuple[str, ...] = ()  # child labels of a reduce; "<eps>" for epsilon
    word: str | None = None

    def tag(self, with_pos: bool = False) -> Tag:
        if self.kind == SHIFT:
            return Tag(SHIFT, self.direction, self.label if with_pos else None)
        return Tag(REDUCE, self.direction, self.label)


def sr_actions(tree, order: Scheme | str) -> list[Action]:
    """Shift/reduce actions for a binary tree in the given traversal order.

    Epsilon children (from the corner transforms) produce no action. The
    root counts as a left child.
    """
    order = Scheme(order)
    out: list[Action] = []

    def visit(node, direction):
        if isinstance(node, Epsilon):
            return
        if isinstance(node, Leaf):
            out.append(Action(SHIFT, direction, node.pos, word=node.word))
            return
        if len(node.children) != 2:
            raise ValueError(f"node {node.label!r} has {len(node.children)} children; "
                             "linearization needs a binary tree")
        left, right = node.children
        act = Action(REDUCE, direction, node.label, (left.label, right.label))
        if order is Scheme.PRE:
            out.append(act)
        visit(left, L)
        if order is Scheme.IN:
            out.append(act)
        visit(right, R)
        if order is Scheme.POST:
            out.append(act)

    visit(tree, L)
    return out


def linearize(tree, scheme: Scheme | str, with_pos: bool = False) -> list[Tag]:
    """Tag sequence of a binary tree; ``with_pos`` keeps preterminals on shifts."""
    return [a.tag(with_pos) for a in sr_actions(tree, scheme)]


# -------------------------------------------------------- validity machine

START_MEASURE = {Scheme.IN: 0, Scheme.POST: 0, Scheme.PRE: 1}
GOAL_MEASURE = {Scheme.IN: 1, Scheme.POST: 1, Scheme.PRE: 0}


def advance(scheme: Scheme, position: int, measure: int, prev: Tag | None, tag: Tag):
    """Stack measure after emitting ``tag`` at 1-based ``position``.

    Returns ``None`` when the tag is not allowed there. In-order and
    post-order track the stack size; pre-order tracks open child slots.
    ``prev`` is the previously emitted tag (``None`` at the start).
    """
    if scheme is Scheme.IN:
        if tag.is_shift != (position % 2 == 1):
            return None
        if tag.is_shift:
            if tag.direction == L:
                return measure + 1
            return measure if measure >= 1 else None
        if tag.direction == L:
            return measure if measure >= 1 else None
        return measure - 1 if measure >= 2 else None
    if scheme is Scheme.PRE:
        want = R if prev is not None and prev.is_shift else L
        if tag.direction != want or measure < 1:
            return None
        return measure - 1 if tag.is_shift else measure + 1
    # post-order: the previous tag was a right child iff this one is a reduce
    if prev is not None and (prev.direction == R) != (not tag.is_shift):
        return None
    if tag.is_shift:
        return measure + 1
    return measure - 1 if measure >= 2 else None


def accepts(scheme: Scheme, measure: int, last: Tag | None) -> bool:
    if last is None or measure != GOAL_MEASURE[scheme]:
        return False
    return scheme is not Scheme.POST or last.direction == L


@dataclass(frozen=True)
class Validity:
    valid: bool
    profile: tuple[int, ...]  # stack measure after each tag, up to the failure
    position: int | None = None  # first failing position (1-based)
    reason: str = ""

    def __bool__(self):
        return self.valid

    @property
    def max_depth(self) -> int:
        return max(self.profile, default=0)


def check_validity(tags: Sequence[Tag], scheme: Scheme | str) -> Validity:
    scheme = Scheme(scheme)
    measure = START_MEASURE[scheme]
    prev = None
    profile = []
    for pos, tag in enumerate(tags, 1):
        nxt = advance(scheme, pos, measure, prev, tag)
        if nxt is None:
            return Validity(False, tuple(profile), pos, f"{tag} not allowed at measure {measure}")
        measure, prev = nxt, tag
        profile.append(measure)
    if len(tags) % 2 == 0:
        return Validity(False, tuple(profile), len(tags), "even number of tags")
    if not accepts(scheme, measure, prev):
        return Validity(False, tuple(profile), len(tags),
                        f"ends at measure {measure}, expected {GOAL_MEASURE[scheme]}")
    return Validity(True, tuple(profile))


def required_measure(tags: Sequence[Tag], scheme: Scheme | str) -> int:
    """Largest stack measure reached, counting the starting measure."""
    scheme = Scheme(scheme)
    v = check_validity(tags, scheme)
    return max(START_MEASURE[scheme], v.max_depth)


# ------------------------------------------------------------ tag -> tree

class _Node:
    __slots__ = ("label", "kids")

    def __init__(self, label):
        self.label = label
        self.kids = []

    def freeze(self):
        return Tree(self.label, tuple(k.freeze() if isinstance(k, _Node) else k for k in self.kids))


def _freeze(node):
    return node.freeze() if isinstance(node, _Node) else node


def tags_to_tree(tags: Sequence[Tag], leaf_seq: Sequence, scheme: Scheme | str):
    """Rebuild the binary tree encoded by ``tags`` over ``leaf_seq``.

    ``leaf_seq`` holds :class:`Leaf` objects or ``(preterminal, word)``
    pairs. A shift tag that carries a label overrides the preterminal.
    Raises :class:`InvalidTagSequence` on any malformed input.
    """
    scheme = Scheme(scheme)
    lv = [x if isinstance(x, Leaf) else Leaf(*x) for x in leaf_seq]
    if len(tags) != 2 * len(lv) - 1:
        raise InvalidTagSequence(len(tags), f"{len(tags)} tags for {len(lv)} words")
    word_iter = iter(lv)

    def next_leaf(tag, pos):
        leaf = next(word_iter, None)
        if leaf is None:
            raise InvalidTagSequence(pos, "more shifts than words")
        return Leaf(tag.label, leaf.word) if tag.label is not None else leaf

    build = {Scheme.IN: _build_in, Scheme.PRE: _build_pre, Scheme.POST: _build_post}[scheme]
    return build(tags, next_leaf)


def _build_in(tags, next_leaf):
    # stack of (root, hole) where hole is the node still missing its right child
    stack = []
    for pos, tag in enumerate(tags, 1):
        if tag.is_shift != (pos % 2 == 1):
            raise InvalidTagSequence(pos, "shifts belong at odd positions, reduces at even")
        if tag.is_shift:
            leaf = next_leaf(tag, pos)
            if tag.direction == L:
                stack.append((leaf, None))
                continue
            if not stack or stack[-1][1] is None:
                raise InvalidTagSequence(pos, "right leaf with no open slot")
            root, hole = stack.pop()
            hole.kids.append(leaf)
            stack.append((root, None))
            continue
        if not stack or stack[-1][1] is not None:
            raise InvalidTagSequence(pos, "reduce needs a complete subtree on the stack")
        done, _ = stack.pop()
        node = _Node(tag.label)
        node.kids.append(done)
        if tag.direction == L:
            stack.append((node, node))
            continue
        if not stack or stack[-1][1] is None:
            raise InvalidTagSequence(pos, "stack underflow: right reduce needs an open parent")
        root, hole = stack.pop()
        hole.kids.append(node)
        stack.append((root, node))
    if len(stack) != 1 or stack[0][1] is not None:
        raise InvalidTagSequence(len(tags), f"leftover stack of size {len(stack)}")
    return _freeze(stack[0][0])


def _build_pre(tags, next_leaf):
    holder = _Node(None)
    slots = [(holder, L)]  # open child slots, leftmost on top
    for pos, tag in enumerate(tags, 1):
        if not slots:
            raise InvalidTagSequence(pos, "no open slot left")
        parent, want = slots.pop()
        if tag.direction != want:
            raise InvalidTagSequence(pos, f"direction {tag.direction}, expected {want}")
        if tag.is_shift:
            parent.kids.append(next_leaf(tag, pos))
            continue
        node = _Node(tag.label)
        parent.kids.append(node)
        slots.append((node, R))
        slots.append((node, L))
    if slots:
        raise InvalidTagSequence(len(tags), f"{len(slots)} slots left open")
    return _freeze(holder.kids[0])


def _build_post(tags, next_leaf):
    stack = []
    for pos, tag in enumerate(tags, 1):
        if pos > 1:
            prev = tags[pos - 2]
            if (prev.direction == R) != (not tag.is_shift):
                raise InvalidTagSequence(pos - 1, "direction disagrees with the next action")
        if tag.is_shift:
            stack.append(next_leaf(tag, pos))
            continue
        if len(stack) < 2:
            raise InvalidTagSequence(pos, "stack underflow: reduce needs two subtrees")
        node = _Node(tag.label)
        right = stack.pop()
        node.kids = [stack.pop(), right]
        stack.append(node)
    if tags and tags[-1].direction != L:
        raise InvalidTagSequence(len(tags), "the root must be a left child")
    if len(stack) != 1:
        raise InvalidTagSequence(len(tags), f"leftover stack of size {len(stack)}")
    return _freeze(stack[0])


# ----------------------------------------------- corner-transform bridges

def _reduce_shape(action: Action, direction: str):
    if len(action.children) != 2:
        raise ValueError(f"reduce {action.label!r} is not binary")
    parent = SlashLabel.parse(action.label)
    left, right = (SlashLabel.parse(c) for c in action.children)
    return parent, left, right, classify_rule_shape(parent, left, right, direction)


def _merge(tags: list[Tag], into: Tag) -> list[Tag]:
    out = []
    i = 0
    while i < len(tags):
        if i + 1 < len(tags) and tags[i] == SL and tags[i + 1] == SR:
            out.append(into)
            i += 2
        else:
            out.append(tags[i])
            i += 1
    return out


def map_rc(actions: Sequence[Action]) -> list[Tag]:
    out = []
    for act in actions:
        if act.kind == SHIFT:
            out.append(SL)
            continue
        parent, left, _, shape = _reduce_shape(act, "rc")
        if shape is RuleShape.SPINE_TOP:
            out.append(SR)
        elif shape is RuleShape.SPINE_CONT:
            out.append(rr(left.denominator))
        elif shape is RuleShape.SPINE_START:
            out.append(rl(parent.numerator))
        else:
            raise ValueError(f"reduce {act.label} -> {' '.join(act.children)} "
                             "is not a right-corner rule")
    return out


def map_merge_rc(actions: Sequence[Action]) -> list[Tag]:
    """Tetratags from post-order actions over a right-corner tree."""
    return _merge(map_rc(actions), SR)


def map_lc(actions: Sequence[Action]) -> list[Tag]:
    out = []
    for act in actions:
        if act.kind == SHIFT:
            out.append(SR)
            continue
        parent, _, right, shape = _reduce_shape(act, "lc")
        if shape is RuleShape.SPINE_TOP:
            out.append(SL)
        elif shape is RuleShape.SPINE_CONT:
            out.append(rl(right.denominator))
        elif shape is RuleShape.SPINE_START:
            out.append(rr(parent.numerator))
        else:
            raise ValueError(f"reduce {act.label} -> {' '.join(act.children)} "
                             "is not a left-corner rule")
    return out


def normalize_root(tags: Sequence[Tag]) -> list[Tag]:
    """Turn the root's right-child reduce into a left-child one.

    The root is the unique ``rr`` emitted while the in-order stack holds a
    single subtree. A lone right shift (one-word sentence) becomes ``sl``.
    """
    tags = list(tags)
    if len(tags) == 1:
        return [SL] if tags[0].is_shift else tags
    hits = []
    depth = 0
    for i, tag in enumerate(tags):
        if tag.is_shift:
            depth += tag.direction == L
        elif tag.direction == R:
            if depth == 1:
                hits.append(i)  # read as rl from here on: no pop
            else:
                depth -= 1
    if len(hits) != 1:
        raise ValueError(f"expected exactly one root reduce at depth 1, found {len(hits)}")
    i = hits[0]
    tags[i] = rl(tags[i].label)
    return tags


def map_merge_lc(actions: Sequence[Action]) -> list[Tag]:
    """Tetratags from pre-order actions over a left-corner tree."""
    return normalize_root(_merge(map_lc(actions), SL))


# --------------------------------------------------------------- tag files

def format_tags(tags: Sequence[Tag]) -> str:
    return " ".join(str(t) for t in tags)


def parse_tags(line: str) -> list[Tag]:
    return [Tag.parse(tok) for tok in line.split()]


def read_tag_file(path) -> list[list[Tag]]:
    with open(path, encoding="utf-8") as f:
        return [parse_tags(line) for line in f if line.strip()]


def write_tag_file(sequences, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for tags in sequences:
            f.write(format_tags(tags) + "\n")

