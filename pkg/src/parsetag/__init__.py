"""Constituency trees as tag sequences: linearize, decode, evaluate."""

from .decode import DecoderConfig, NoValidPath, beam_decode, decode, dp_decode, \
    dp_decode_dependent
from .evaluation import bracket_prf, corpus_prf, required_stack_depth
from .linearize import Scheme, Tag, check_validity, linearize, tags_to_tree
from .score import Dependency, ScoreTable, TagVocab, build_tag_vocab, oracle_scores
from .treebank import Leaf, Tree, denormalize, normalize, parse_bracketed

__version__ = "0.1.0"
