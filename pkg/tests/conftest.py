"""Shared test helpers: token conversion and brute-force string oracles.

Every oracle here works directly on sequences or Python strings and never
touches the automaton code paths it is used to check.
"""

from __future__ import annotations

import random

import pytest


def toks(text: str) -> list[int]:
    return [ord(c) for c in text]


def chars(tokens: list[int]) -> str:
    return "".join(chr(t) for t in tokens)


def all_substrings(tokens: list[int]) -> set[tuple[int, ...]]:
    """Every distinct non-empty substring, by direct enumeration."""
    out: set[tuple[int, ...]] = set()
    for i in range(len(tokens)):
        for j in range(i + 1, len(tokens) + 1):
            out.add(tuple(tokens[i:j]))
    return out


def automaton_substrings(sam) -> set[tuple[int, ...]]:
    """Every string accepted by walking next edges from the root."""
    out: set[tuple[int, ...]] = set()
    stack: list[tuple[int, tuple[int, ...]]] = [(sam.root, ())]
    while stack:
        state, path = stack.pop()
        if path:
            out.add(path)
        for token, target in sam.nodes[state].next.items():
            stack.append((target, path + (token,)))
    return out


def count_occurrences(text: str, sub: str) -> int:
    """Overlapping occurrence count via str.find."""
    count = 0
    i = text.find(sub)
    while i >= 0:
        count += 1
        i = text.find(sub, i + 1)
    return count


def stream_matches_str(reference: str, stream: str) -> list[tuple[int, int]]:
    """Per-step (longest suffix match length, earliest 1-indexed end position).

    Independent oracle: uses only str.find plus the fact that the match
    length can grow by at most one per consumed token.
    """
    results: list[tuple[int, int]] = []
    prev = 0
    for i in range(1, len(stream) + 1):
        consumed = stream[:i]
        for n in range(min(prev + 1, i, len(reference)), -1, -1):
            if n == 0:
                results.append((0, 0))
                prev = 0
                break
            hit = reference.find(consumed[i - n :])
            if hit >= 0:
                results.append((n, hit + n))
                prev = n
                break
    return results


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)


def random_tokens(rng: random.Random, length: int, alphabet: int) -> list[int]:
    return [rng.randrange(alphabet) for _ in range(length)]
