"""Instrumented experiments: amortized-cost checks and decode-task metrics.

Work counters, not wall time, are the asserted quantities: the automaton
reports suffix-link hops + edge moves per transfer (bounded by 2 per token
amortized), the brute-force matcher reports candidate scan positions, and the
suffix-array matcher reports binary-search probes.  Wall times are included
in reports but never gated.
"""

from __future__ import annotations

import random
import time
from typing import Sequence

from .automaton import MatchCursor, TransferCounter, build, build_corpus
from .baselines import ScanCounter, SuffixArrayIndex, ngram_match_brute
from .decoding import DecodeConfig, DecodeSession, NgramOracle, ReplayOracle

DEFAULT_SIZES = (1_000, 10_000, 100_000)
DEFAULT_MATCHERS = ("sam", "ngram_brute", "suffix_array")
DEFAULT_TASKS = ("copy", "lookup", "novel", "mixed", "disabled")

_BENCH_ALPHABET = 16
_MOTIF_LEN = 64
_NOVEL_EVERY = 8


def synthetic_stream(
    size: int, stream_len: int, seed: int = 0
) -> tuple[list[int], list[int]]:
    """Repetitive reference text plus a mostly-replaying stream.

    The text repeats a random motif; the stream continues the repetition but
    every eighth token is novel (outside the text's alphabet), which forces
    full-text scans out of position-based matchers.
    """
    rng = random.Random(f"bench:{seed}")
    motif = [rng.randrange(_BENCH_ALPHABET) for _ in range(_MOTIF_LEN)]
    reps = size // _MOTIF_LEN + 2
    text = (motif * reps)[:size]
    stream = []
    for i in range(stream_len):
        if i % _NOVEL_EVERY == _NOVEL_EVERY - 1:
            stream.append(_BENCH_ALPHABET + i)  # never occurs in the text
        else:
            stream.append(motif[(size + i) % _MOTIF_LEN])
    return text, stream


def run_transfer_bench(
    sizes: Sequence[int] = DEFAULT_SIZES,
    stream_len: int = 256,
    matchers: Sequence[str] = DEFAULT_MATCHERS,
    seed: int = 0,
    max_n: int = 8,
    draft_len: int = 8,
) -> dict:
    """Per-matcher work-per-token across reference sizes.

    Rows carry ``work_per_token`` (the matcher's own counter), the 2L bound
    verdict for the automaton, and non-gated wall time.
    """
    rows: list[dict] = []
    for size in sizes:
        text, stream = synthetic_stream(size, stream_len, seed)
        if not stream:
            continue
        for matcher in matchers:
            t0 = time.perf_counter()
            if matcher == "sam":
                sam = build(text)
                counter = TransferCounter()
                cursor = MatchCursor()
                for token in stream:
                    cursor = sam.transfer(cursor, token, counter)
                work = counter.basic_steps
                bound = 2 * len(stream)
                bound_ok = work <= bound
            elif matcher == "ngram_brute":
                scan = ScanCounter()
                context = list(text)
                for token in stream:
                    context.append(token)
                    ngram_match_brute(context, max_n, draft_len, scan)
                work = scan.positions
                bound = None
                bound_ok = None
            elif matcher == "suffix_array":
                index = SuffixArrayIndex(text)
                scan = ScanCounter()
                context = list(text)
                for token in stream:
                    context.append(token)
                    index.match(context, max_n, scan)
                work = scan.positions
                bound = None
                bound_ok = None
            else:
                raise ValueError(f"unknown matcher {matcher!r}")
            rows.append(
                {
                    "matcher": matcher,
                    "size": size,
                    "stream": len(stream),
                    "total_work": work,
                    "work_per_token": work / len(stream),
                    "bound": bound,
                    "bound_ok": bound_ok,
                    "wall_time_s": time.perf_counter() - t0,
                }
            )
    return {"suite": "transfer", "seed": seed, "stream_len": stream_len, "rows": rows}


# -- decode tasks ------------------------------------------------------------


def _phrase_corpus(rng: random.Random, vocab: int = 40) -> list[list[int]]:
    phrases = [
        [rng.randrange(1, vocab) for _ in range(rng.randint(5, 9))] for _ in range(12)
    ]
    return [
        [t for _ in range(6) for t in rng.choice(phrases)] for _ in range(20)
    ]


def _copy_task(rng: random.Random, config: DecodeConfig):
    vocab = 512
    preamble = [rng.randrange(vocab) for _ in range(24)]
    passage = [rng.randrange(vocab) for _ in range(400)]
    prompt = preamble + passage
    oracle = ReplayOracle(passage, len(prompt))
    return DecodeSession(config).decode(prompt, oracle)


def _novel_task(rng: random.Random, config: DecodeConfig):
    vocab = 64
    prompt = [rng.randrange(vocab) for _ in range(100)]
    target = [rng.randrange(vocab) for _ in range(400)]
    oracle = ReplayOracle(target, len(prompt))
    return DecodeSession(config).decode(prompt, oracle)


def _lookup_task(rng: random.Random, config: DecodeConfig):
    docs = _phrase_corpus(rng)
    static = build_corpus(docs, sep=0, trailing_sep=True)
    static.init_topk(8)
    oracle = NgramOracle(2, docs)
    prompt = docs[0][:8]
    return DecodeSession(config, static_sam=static).decode(prompt, oracle)


def _mixed_task(rng: random.Random, config: DecodeConfig):
    # Alternates copyable prompt slices with novel runs, forcing the
    # selector to switch sources mid-generation.
    vocab = 256
    passage = [rng.randrange(vocab) for _ in range(240)]
    prompt = [rng.randrange(vocab) for _ in range(20)] + passage
    target: list[int] = []
    cut = 0
    while len(target) < 360 and cut < len(passage):
        take = rng.randint(30, 60)
        target.extend(passage[cut : cut + take])
        cut += take
        target.extend(rng.randrange(vocab) for _ in range(rng.randint(5, 15)))
    oracle = ReplayOracle(target, len(prompt))
    return DecodeSession(config).decode(prompt, oracle)


def run_decode_suite(
    tasks: Sequence[str] = DEFAULT_TASKS,
    config: DecodeConfig | None = None,
    seed: int = 0,
) -> dict:
    """Decode-task metrics: MAT, steps, and per-source usage breakdown."""
    results: dict[str, dict] = {}
    for task in tasks:
        rng = random.Random(f"{seed}:{task}")
        cfg = config or DecodeConfig()
        if task == "copy":
            cfg = config or DecodeConfig(use_static=False)
            output, metrics = _copy_task(rng, cfg)
        elif task == "novel":
            cfg = config or DecodeConfig(use_static=False)
            output, metrics = _novel_task(rng, cfg)
        elif task == "lookup":
            output, metrics = _lookup_task(rng, cfg)
        elif task == "mixed":
            cfg = config or DecodeConfig(use_static=False)
            output, metrics = _mixed_task(rng, cfg)
        elif task == "disabled":
            cfg = DecodeConfig(use_dynamic=False, use_static=False, use_aux=False)
            target = [rng.randrange(100) for _ in range(60)]
            prompt = [rng.randrange(100) for _ in range(10)]
            output, metrics = DecodeSession(cfg).decode(
                prompt, ReplayOracle(target, len(prompt))
            )
        else:
            raise ValueError(f"unknown task {task!r}")
        entry = metrics.to_dict()
        entry["output_tokens"] = len(output)
        results[task] = entry
    return {"suite": "decode", "seed": seed, "tasks": results}


# -- report formatting -------------------------------------------------------


def format_transfer_report(report: dict) -> str:
    header = f"{'matcher':<14}{'size':>9}{'stream':>8}{'work/token':>12}{'2L bound':>10}{'wall s':>10}"
    lines = [header, "-" * len(header)]
    for row in report["rows"]:
        verdict = "-" if row["bound_ok"] is None else ("pass" if row["bound_ok"] else "FAIL")
        lines.append(
            f"{row['matcher']:<14}{row['size']:>9}{row['stream']:>8}"
            f"{row['work_per_token']:>12.3f}{verdict:>10}{row['wall_time_s']:>10.4f}"
        )
    return "\n".join(lines)


def format_decode_report(report: dict) -> str:
    header = f"{'task':<10}{'steps':>7}{'tokens':>8}{'MAT':>8}  source share / per-source MAT"
    lines = [header, "-" * len(header)]
    for task, entry in report["tasks"].items():
        share = entry["source_share"]
        mats = entry["per_source_mat"]
        detail = "  ".join(
            f"{src}={share[src]:.0%}/{mats.get(src, 0.0):.2f}" for src in sorted(share)
        )
        lines.append(
            f"{task:<10}{entry['steps']:>7}{entry['total_tokens']:>8}"
            f"{entry['mat']:>8.2f}  {detail}"
        )
    return "\n".join(lines)
