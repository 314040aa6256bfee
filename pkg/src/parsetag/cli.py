"""Command-line entry point: ``parsetag <subcommand> ...``.

Exit status is 0 on success, 1 when the input is well-formed on the command
line but wrong in content (bad trees, no valid decode, ...), and 2 on usage
errors, including missing input files.
"""
from __future__ import annotations

import argparse
import csv
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial

from .align import deviation_histogram
from .decode import DecoderConfig, NoValidPath, decode
from .evaluation import EvalConfig, corpus_prf, coverage_curve, fmt_pct, write_report
from .linearize import Scheme, linearize, map_merge_lc, map_merge_rc, sr_actions, \
    tags_to_tree, write_tag_file
from .sampling import random_binary_tree, random_tree
from .score import Dependency, build_tag_vocab, oracle_scores, perturbed_scores, \
    read_scores, write_scores
from .transform import left_corner, right_corner
from .treebank import denormalize, leaves, normalize, read_corpus, read_leaves, \
    write_corpus, write_leaves

SCHEMES = [s.value for s in Scheme]
PROPERTIES = ("roundtrip", "rc-equiv", "lc-equiv", "dp-oracle")


class UsageError(Exception):
    pass


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _nonneg_float(text):
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _need_files(*paths):
    for path in paths:
        if path is not None and not os.path.isfile(path):
            raise UsageError(f"no such file: {path}")


def _map(fn, items, jobs):
    """``map`` that keeps input order, optionally across worker processes."""
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _load_normalized(path):
    return [normalize(t) for t in read_corpus(path)]


# ---------------------------------------------------------------- commands

def cmd_linearize(args):
    _need_files(args.input)
    trees = _load_normalized(args.input)
    write_tag_file((linearize(t, args.scheme, with_pos=args.with_pos) for t in trees),
                   args.output)


def cmd_oracle_scores(args):
    _need_files(args.input)
    trees = _load_normalized(args.input)
    vocab = build_tag_vocab(trees, args.scheme)
    tables = []
    for k, tree in enumerate(trees):
        if args.noise > 0:
            tables.append(perturbed_scores(tree, args.scheme, vocab, args.noise,
                                           args.seed + k, id=str(k)))
        else:
            tables.append(oracle_scores(tree, args.scheme, vocab, id=str(k)))
    write_scores(tables, args.output)
    if args.leaves_out:
        write_leaves((leaves(t) for t in trees), args.leaves_out)


def _decode_one(job, config, mode):
    table, leaf_seq = job
    result = decode(table, config, mode)
    return denormalize(tags_to_tree(result.tags, leaf_seq, config.scheme))


def cmd_decode(args):
    _need_files(args.scores, args.leaves, args.trees)
    tables = read_scores(args.scores)
    if args.leaves:
        leaf_seqs = read_leaves(args.leaves)
    else:
        leaf_seqs = [leaves(t) for t in _load_normalized(args.trees)]
    if len(leaf_seqs) != len(tables):
        raise ValueError(f"{len(tables)} score tables but {len(leaf_seqs)} sentences of leaves")
    for k, (table, leaf_seq) in enumerate(zip(tables, leaf_seqs)):
        if table.n != len(leaf_seq):
            raise ValueError(f"sentence {k}: table has {table.n} words, leaves have "
                             f"{len(leaf_seq)}")
    dependency = args.dependency
    if dependency is None:
        dependency = tables[0].dependency if tables else Dependency.INDEPENDENT
        if args.mode == "dp":
            dependency = Dependency.INDEPENDENT
    config = DecoderConfig(args.scheme, dependency, args.max_stack, args.beam_size)
    trees = _map(partial(_decode_one, config=config, mode=args.mode),
                 list(zip(tables, leaf_seqs)), args.jobs)
    write_corpus(trees, args.output)


def cmd_deviation(args):
    _need_files(args.input)
    trees = _load_normalized(args.input)
    hist = deviation_histogram(trees, args.scheme, bins=args.bins)
    print(f"words {hist.total_words}\tmean {hist.mean:.4f}\tmax {hist.max}")
    if args.histogram:
        hist.to_csv(args.histogram)


def cmd_stack_stats(args):
    _need_files(args.input)
    trees = _load_normalized(args.input)
    curve = coverage_curve(trees, args.scheme)
    with open(args.output, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["depth", "coverage"])
        writer.writerows((k, f"{c:.6f}") for k, c in curve)
    full = next(k for k, c in curve if c >= 1.0)
    print(f"trees {len(trees)}\tfull coverage at depth {full}")


def cmd_eval(args):
    _need_files(args.gold, args.pred)
    gold, pred = read_corpus(args.gold), read_corpus(args.pred)
    config = EvalConfig(delete_punct=args.delete_punct, include_root=not args.no_root,
                        include_preterminals=args.preterminals)
    if len(gold) != len(pred):
        raise ValueError(f"{len(gold)} gold trees vs {len(pred)} predicted")
    if args.report:
        p, r, f = write_report([str(k) for k in range(len(gold))], gold, pred,
                               args.report, config)
    else:
        p, r, f = corpus_prf(gold, pred, config)
    print(f"P {fmt_pct(p)}\tR {fmt_pct(r)}\tF1 {fmt_pct(f)}")


def cmd_transform(args):
    _need_files(args.input)
    fn = right_corner if args.direction == "rc" else left_corner
    write_corpus((fn(t) for t in _load_normalized(args.input)), args.output)


# ------------------------------------------------------------ verification

def _check_roundtrip(rng):
    raw = random_tree(rng)
    tree = normalize(raw)
    if denormalize(tree) != raw:
        return False
    return all(tags_to_tree(linearize(tree, s), leaves(tree), s) == tree for s in Scheme)


def _check_rc(rng):
    tree = random_binary_tree(rng, rng.randint(1, 40))
    return map_merge_rc(sr_actions(right_corner(tree), Scheme.POST)) == \
        linearize(tree, Scheme.IN)


def _check_lc(rng):
    tree = random_binary_tree(rng, rng.randint(1, 40))
    try:
        tags = map_merge_lc(sr_actions(left_corner(tree), Scheme.PRE))
    except ValueError:
        return False
    return tags == linearize(tree, Scheme.IN)


def _check_dp_oracle(rng):
    tree = random_binary_tree(rng, rng.randint(1, 30))
    for scheme in Scheme:
        vocab = build_tag_vocab([tree], scheme)
        result = decode(oracle_scores(tree, scheme, vocab), DecoderConfig(scheme))
        if list(result.tags) != linearize(tree, scheme):
            return False
    return True


CHECKS = {"roundtrip": _check_roundtrip, "rc-equiv": _check_rc,
          "lc-equiv": _check_lc, "dp-oracle": _check_dp_oracle}


def cmd_verify(args):
    rng = random.Random(args.seed)
    check = CHECKS[args.property]
    passed = sum(bool(check(rng)) for _ in range(args.trials))
    print(f"{passed}/{args.trials} pass")
    return 0 if passed == args.trials else 1


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parsetag",
                                     description="Tag-sequence constituency parsing tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    def scheme_arg(p):
        p.add_argument("--scheme", choices=SCHEMES, required=True)

    p = sub.add_parser("linearize", help="trees to tag sequences")
    scheme_arg(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--with-pos", action="store_true", help="put preterminals on shift tags")
    p.set_defaults(func=cmd_linearize)

    p = sub.add_parser("decode", help="score tables to trees")
    scheme_arg(p)
    p.add_argument("--mode", choices=("dp", "dp-dep", "beam"), default="dp")
    p.add_argument("--beam-size", type=_positive, default=10)
    p.add_argument("--max-stack", type=_positive, default=None)
    p.add_argument("--dependency", choices=[d.value for d in Dependency], default=None,
                   help="default: independent for dp, the score file's mode otherwise")
    p.add_argument("--scores", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--leaves", help="TSV of pos<TAB>word rows, blank line between sentences")
    src.add_argument("--trees", help="take leaves from these trees instead")
    p.add_argument("--output", required=True)
    p.add_argument("--jobs", type=_positive, default=1)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("deviation", help="shift-tag deviation statistics")
    scheme_arg(p)
    p.add_argument("--input", required=True)
    p.add_argument("--histogram")
    p.add_argument("--bins", type=_positive, default=None)
    p.set_defaults(func=cmd_deviation)

    p = sub.add_parser("stack-stats", help="stack-depth coverage curve")
    scheme_arg(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_stack_stats)

    p = sub.add_parser("eval", help="labeled bracket precision/recall/F1")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--report")
    p.add_argument("--delete-punct", action="store_true")
    p.add_argument("--no-root", action="store_true", help="do not score the root bracket")
    p.add_argument("--preterminals", action="store_true", help="also score preterminals")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("transform", help="right- or left-corner transform")
    p.add_argument("--direction", choices=("rc", "lc"), required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("oracle-scores", help="one-hot (or noisy) score tables from trees")
    scheme_arg(p)
    p.add_argument("--input", required=True)
    p.add_argument("--noise", type=_nonneg_float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.add_argument("--leaves-out", help="also write the leaves TSV for decode")
    p.set_defaults(func=cmd_oracle_scores)

    p = sub.add_parser("verify", help="run a randomized property check")
    p.add_argument("--property", choices=PROPERTIES, required=True)
    p.add_argument("--trials", type=_positive, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args) or 0
    except UsageError as e:
        print(f"parsetag {args.command}: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, NoValidPath, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"parsetag {args.command}: error: {msg}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
