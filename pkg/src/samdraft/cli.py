"""Command-line entry point: build, decode, bench, stats, match.

Exit code 0 on success, 1 on runtime errors (message on stderr), 2 on bad
flags.  The SAMSPEC_LOG environment variable sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import automaton, bench, corpus
from .automaton import MatchCursor, SamError
from .corpus import Vocabulary, VocabularyError, tokenize
from .decoding import DecodeConfig, DecodeSession, NgramOracle, Oracle, ReplayOracle

log = logging.getLogger("samdraft")


def _read_tokens(path: str, mode: str) -> list[int]:
    return tokenize(Path(path).read_text(encoding="utf-8"), Vocabulary.create(mode))


def _check_vocab(sam: automaton.SuffixAutomaton, tokens: list[int], what: str) -> None:
    if sam.vocab_size is not None and tokens and max(tokens) >= sam.vocab_size:
        raise VocabularyError(
            f"{what} contains token {max(tokens)} outside the automaton's "
            f"vocabulary ({sam.vocab_size}); check --mode"
        )


def _build_oracle(spec: str, mode: str, prompt_len: int) -> tuple[Oracle, list[int]]:
    """Parse replay:<file> or ngram:<order>:<corpus>; returns (oracle, its tokens)."""
    kind, _, rest = spec.partition(":")
    if kind == "replay" and rest:
        target = _read_tokens(rest, mode)
        return ReplayOracle(target, prompt_len), target
    if kind == "ngram":
        order_str, _, corpus_path = rest.partition(":")
        if order_str.isdigit() and corpus_path:
            vocab = Vocabulary.create(mode)
            docs = corpus.read_documents([corpus_path], vocab, per_line=True)
            return NgramOracle(int(order_str), docs), [t for d in docs for t in d]
    raise ValueError(
        f"invalid oracle spec {spec!r}; expected replay:<file> or ngram:<order>:<corpus>"
    )


def _cmd_build(args: argparse.Namespace) -> int:
    result = corpus.ingest(
        args.input, mode=args.mode, sep_id=args.sep_id, k=args.topk, per_line=args.per_line
    )
    data = result.sam.save()
    Path(args.out).write_bytes(data)
    manifest_path = Path(args.out + ".manifest.json")
    manifest_path.write_text(json.dumps(result.manifest, indent=2) + "\n")
    print(json.dumps(result.manifest, indent=2))
    return 0


def _cmd_decode(args: argparse.Namespace) -> int:
    prompt = _read_tokens(args.prompt_file, args.mode)
    static_sam = None
    if args.sam != "none":
        static_sam = automaton.load(Path(args.sam).read_bytes())
        _check_vocab(static_sam, prompt, "prompt")
    oracle, oracle_tokens = _build_oracle(args.oracle, args.mode, len(prompt))
    if static_sam is not None:
        _check_vocab(static_sam, oracle_tokens, "oracle stream")
    config = DecodeConfig(
        draft_len=args.draft_len,
        profile=args.profile,
        l_bias=args.l_bias,
        l_threshold=args.l_threshold,
        max_new_tokens=args.max_new,
        use_dynamic=args.dynamic,
        use_static=static_sam is not None,
        use_aux=args.aux == "recycle",
    )
    output, metrics = DecodeSession(config, static_sam=static_sam).decode(prompt, oracle)
    print(" ".join(str(t) for t in output))
    if args.metrics_out:
        Path(args.metrics_out).write_text(json.dumps(metrics.to_dict(), indent=2) + "\n")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    if args.suite == "transfer":
        report = bench.run_transfer_bench(
            sizes=args.sizes, stream_len=args.stream_len, seed=args.seed
        )
        text = bench.format_transfer_report(report)
    else:
        report = bench.run_decode_suite(tasks=args.tasks, seed=args.seed)
        text = bench.format_decode_report(report)
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2) + "\n")
    print(text)
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    sam = automaton.load(Path(args.sam).read_bytes())
    degrees = sorted(
        ((len(n.next), i) for i, n in enumerate(sam.nodes)), reverse=True
    )[:5]
    print(f"nodes        {sam.node_count}")
    print(f"edges        {sam.transition_count}")
    print(f"clones       {sam.count_clones()}")
    print(f"max_length   {sam.max_length}")
    print(f"vocab_size   {sam.vocab_size}")
    print(f"separator    {sam.separator}")
    print("top-degree states:")
    for degree, state in degrees:
        print(f"  state {state:>8}  degree {degree:>6}  length {sam.nodes[state].length}")
    return 0


def _cmd_match(args: argparse.Namespace) -> int:
    sam = automaton.load(Path(args.sam).read_bytes())
    stream = _read_tokens(args.stream, args.mode)
    cursor = MatchCursor()
    for token in stream:
        cursor = sam.transfer(cursor, token)
        print(f"{cursor.match_len} {sam.nodes[cursor.state].min_endpos}")
    return 0


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _str_list(text: str) -> list[str]:
    return [part for part in text.split(",") if part]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="samdraft",
        description="Suffix-automaton speculative drafting toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="ingest a corpus into a .samd automaton")
    p.add_argument("--input", nargs="+", required=True, help="input text/id files")
    p.add_argument("--mode", choices=[corpus.BYTE, corpus.WORD, corpus.IDS], default=corpus.BYTE)
    p.add_argument("--sep-id", type=int, default=None, help="document separator token id")
    p.add_argument("--topk", type=int, default=8, help="successors kept per state")
    p.add_argument("--per-line", action="store_true", help="one document per line")
    p.add_argument("--out", required=True, help="output .samd path")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("decode", help="speculative decode against an oracle")
    p.add_argument("--prompt-file", required=True)
    p.add_argument("--oracle", required=True, help="replay:<file> or ngram:<order>:<corpus>")
    p.add_argument("--sam", default="none", help=".samd path or 'none'")
    p.add_argument("--aux", choices=["recycle", "none"], default="recycle")
    p.add_argument("--mode", choices=[corpus.BYTE, corpus.WORD, corpus.IDS], default=corpus.IDS)
    p.add_argument("--draft-len", type=int, default=None, help="default 40 (16 for code profile)")
    p.add_argument("--profile", choices=["default", "code"], default="default")
    p.add_argument("--l-bias", type=int, default=None, help="default 5, or 0 when --aux none")
    p.add_argument("--l-threshold", type=int, default=5)
    p.add_argument("--max-new", type=int, default=512)
    p.add_argument("--dynamic", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--metrics-out", default=None, help="write metrics JSON here")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("bench", help="run the instrumented benchmark suites")
    p.add_argument("--suite", choices=["transfer", "decode"], required=True)
    p.add_argument("--sizes", type=_int_list, default=list(bench.DEFAULT_SIZES))
    p.add_argument("--stream-len", type=int, default=256)
    p.add_argument("--tasks", type=_str_list, default=list(bench.DEFAULT_TASKS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", default=None, help="also write the report as JSON")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("stats", help="print automaton statistics")
    p.add_argument("--sam", required=True)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("match", help="print per-token match length over a stream")
    p.add_argument("--sam", required=True)
    p.add_argument("--stream", required=True, help="token stream file")
    p.add_argument("--mode", choices=[corpus.BYTE, corpus.WORD, corpus.IDS], default=corpus.IDS)
    p.set_defaults(func=_cmd_match)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("SAMSPEC_LOG", "WARNING").upper())
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, SamError, VocabularyError, ValueError) as exc:
        print(f"samdraft: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
