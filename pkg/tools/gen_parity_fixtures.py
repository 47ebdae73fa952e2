#!/usr/bin/env python3
"""Generate parity fixtures for the frontend embedding.

Emits frontend/tests/fixtures/parity.json with 100 seeded cases covering
transfer streams (static and dynamic), linear/tree drafts, and full decode
runs, plus one serialized .samd automaton for load() checks.  The frontend
test suite replays every case and requires bit-identical results.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from samdraft import (
    DecodeConfig,
    DecodeSession,
    MatchCursor,
    NgramOracle,
    ReplayOracle,
    SuffixAutomaton,
    build,
    draft_linear,
    draft_tree,
)

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"
NUM_SEEDS = 100


def joined_corpus(rng: random.Random, vocab: int, sep: int) -> list[int]:
    tokens: list[int] = []
    for _ in range(3):
        tokens.extend(rng.randrange(vocab) for _ in range(rng.randint(20, 50)))
        tokens.append(sep)
    return tokens


def static_case(rng, vocab, sep, k, corpus_tokens):
    sam = build(corpus_tokens, flavor="static", separator=sep, vocab_size=vocab + 1)
    sam.init_topk(k)

    stream = []
    while len(stream) < 40:
        if rng.random() < 0.5:
            i = rng.randrange(len(corpus_tokens))
            stream.extend(corpus_tokens[i : i + rng.randint(1, 8)])
        else:
            stream.append(rng.randrange(vocab))
    stream = stream[:40]
    cursor = MatchCursor()
    transfer = []
    for t in stream:
        cursor = sam.transfer(cursor, t)
        transfer.append([cursor.match_len, sam.nodes[cursor.state].min_endpos])

    query_start = rng.randrange(len(corpus_tokens) - 6)
    query = [t for t in corpus_tokens[query_start : query_start + 5] if t != sep][:3]
    tree = None
    if query:
        cursor = MatchCursor()
        for t in query:
            cursor = sam.transfer(cursor, t)
        max_size = rng.randint(3, 12)
        d = draft_tree(sam, cursor, anchor=query[-1], max_size=max_size)
        tree = {
            "query": query,
            "max_size": max_size,
            "tokens": d.tokens if d else None,
            "parents": d.parents if d else None,
        }
    return {"stream": stream, "transfer": transfer, "tree": tree}


def dynamic_case(rng, vocab):
    reference = [rng.randrange(vocab) for _ in range(rng.randint(20, 80))]
    sam = SuffixAutomaton()
    cursor = MatchCursor()
    per_token = []
    for t in reference:
        cursor = sam.transfer(cursor, t)
        sam.expand(t)
        cursor = sam.recanonicalize(cursor)
        per_token.append([cursor.match_len, sam.nodes[cursor.state].min_endpos])
    n = rng.randint(2, 16)
    d = draft_linear(sam, cursor, n) if cursor.match_len >= 1 else None
    return {
        "reference": reference,
        "per_token": per_token,
        "draft_n": n,
        "draft": d.tokens if d else None,
    }


def decode_case(rng, vocab, sep, k, corpus_tokens):
    prompt = [rng.randrange(vocab) for _ in range(rng.randint(10, 40))]
    if rng.random() < 0.5:
        target = prompt[: rng.randint(1, len(prompt))] + [
            rng.randrange(vocab) for _ in range(rng.randint(0, 60))
        ]
        oracle_spec = {"type": "replay", "target": target}
        oracle = ReplayOracle(target, len(prompt))
    else:
        docs = [[rng.randrange(vocab) for _ in range(40)] for _ in range(3)]
        order = rng.choice([1, 2])
        oracle_spec = {"type": "ngram", "order": order, "docs": docs + [prompt]}
        oracle = NgramOracle(order, docs + [prompt])
    use_static = rng.random() < 0.5
    static_sam = None
    if use_static:
        static_sam = build(corpus_tokens, flavor="static", separator=sep, vocab_size=vocab + 1)
        static_sam.init_topk(k)
    config = dict(
        draft_len=rng.choice([None, 4, 16, 40]),
        l_bias=rng.choice([None, 0, 3, 5, 8]),
        l_threshold=rng.choice([0, 3, 5, 8]),
        max_new_tokens=80,
        use_dynamic=rng.random() < 0.8,
        use_static=use_static,
        use_aux=rng.random() < 0.8,
    )
    output, metrics = DecodeSession(DecodeConfig(**config), static_sam=static_sam).decode(
        prompt, oracle
    )
    return {
        "prompt": prompt,
        "oracle": oracle_spec,
        "config": config,
        "use_static_corpus": use_static,
        "output": output,
        "metrics": metrics.to_dict(),
    }


def main():
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    cases = []
    for seed in range(NUM_SEEDS):
        rng = random.Random(f"parity:{seed}")
        vocab = rng.choice([8, 64, 300])
        sep = vocab
        k = rng.randint(2, 6)
        corpus_tokens = joined_corpus(rng, vocab, sep)
        cases.append(
            {
                "seed": seed,
                "vocab": vocab,
                "sep": sep,
                "k": k,
                "corpus_tokens": corpus_tokens,
                "static": static_case(rng, vocab, sep, k, corpus_tokens),
                "dynamic": dynamic_case(rng, vocab),
                "decode": decode_case(rng, vocab, sep, k, corpus_tokens),
            }
        )
    (FIXTURE_DIR / "parity.json").write_text(json.dumps({"cases": cases}))

    # One saved automaton for StaticSam.load parity.
    case0 = cases[0]
    sam = build(
        case0["corpus_tokens"],
        flavor="static",
        separator=case0["sep"],
        vocab_size=case0["vocab"] + 1,
    )
    sam.init_topk(case0["k"])
    (FIXTURE_DIR / "static_seed0.samd").write_bytes(sam.save())
    print(f"wrote {NUM_SEEDS} cases to {FIXTURE_DIR}")


if __name__ == "__main__":
    main()
