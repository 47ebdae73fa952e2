"""Linear and tree draft extraction tests."""

from __future__ import annotations

import random

import pytest

from samdraft import (
    MatchCursor,
    SamError,
    build,
    draft_linear,
    draft_tree,
)

from conftest import chars, count_occurrences, random_tokens, toks

SEP = ord("$")


def match(sam, text: str) -> MatchCursor:
    cursor = MatchCursor()
    for t in toks(text):
        cursor = sam.transfer(cursor, t)
    return cursor


def assert_valid_tree(draft) -> None:
    assert draft.tokens
    assert len(draft.parents) == len(draft.tokens)
    for i, parent in enumerate(draft.parents):
        assert -1 <= parent < i


class TestLinear:
    def test_copies_after_earliest_end(self):
        sam = build(toks("ABCBC"))
        cursor = match(sam, "AB")
        draft = draft_linear(sam, cursor, 3)
        assert draft.tokens == toks("CBC")
        assert draft.parents == [-1, 0, 1]
        assert draft.is_chain()
        assert draft.score == 2
        assert draft.source == "dynamic_sam"

    def test_none_at_reference_end(self):
        sam = build(toks("ABCBC"))
        cursor = match(sam, "ABCBC")
        assert cursor.match_len == 5
        for n in (1, 3, 40):
            assert draft_linear(sam, cursor, n) is None

    def test_none_when_separator_immediately_follows(self):
        sam = build(toks("AB$CD"), separator=SEP)
        cursor = match(sam, "B")
        assert cursor.match_len == 1
        assert draft_linear(sam, cursor, 3) is None

    def test_truncates_at_separator(self):
        sam = build(toks("AB$CD"), separator=SEP)
        cursor = match(sam, "A")
        draft = draft_linear(sam, cursor, 4)
        assert draft.tokens == toks("B")

    def test_truncates_at_reference_end(self):
        sam = build(toks("ABCD"))
        cursor = match(sam, "AB")
        draft = draft_linear(sam, cursor, 10)
        assert draft.tokens == toks("CD")

    def test_output_is_contiguous_reference_slice(self):
        rng = random.Random(5)
        for _ in range(50):
            tokens = random_tokens(rng, rng.randrange(2, 50), 3)
            sam = build(tokens)
            query = random_tokens(rng, rng.randrange(1, 10), 3)
            cursor = MatchCursor()
            for t in query:
                cursor = sam.transfer(cursor, t)
            if cursor.match_len < 1:
                continue
            n = rng.randrange(1, 8)
            draft = draft_linear(sam, cursor, n)
            if draft is None:
                continue
            start = sam.nodes[cursor.state].min_endpos
            assert draft.tokens == tokens[start : start + len(draft.tokens)]
            assert len(draft.tokens) <= n

    def test_zero_match_gives_none(self):
        sam = build(toks("AB"))
        assert draft_linear(sam, MatchCursor(), 4) is None


class TestTree:
    def build_static(self, text: str, k: int, separator: int | None = None):
        sam = build(toks(text), flavor="static", separator=separator)
        sam.init_topk(k)
        return sam

    def test_chain_over_run(self):
        sam = self.build_static("AAAA", k=1)
        cursor = match(sam, "A")
        trace = []
        draft = draft_tree(sam, cursor, anchor=ord("A"), max_size=4, trace=trace)
        assert draft.tokens == toks("AAA")
        assert draft.parents == [-1, 0, 1]
        probs = [item.path_prob for item in trace]
        assert probs == [1.0, 0.75, 0.5, 0.25]

    def test_respects_max_size_including_anchor(self):
        sam = self.build_static("AAAA", k=1)
        cursor = match(sam, "A")
        draft = draft_tree(sam, cursor, anchor=ord("A"), max_size=3)
        assert len(draft.tokens) == 2

    def test_none_without_successors(self):
        sam = self.build_static("AB", k=2)
        cursor = match(sam, "AB")  # the full-string state has no next edge
        assert draft_tree(sam, cursor, anchor=ord("B"), max_size=8) is None

    def test_branching_by_frequency(self):
        # From the state of "A": successor B has freq 3 of 4 occurrences of A,
        # successor C has freq 1 (brute-force counts); B expands first.
        sam = self.build_static("ABAB$ABAC", k=2, separator=SEP)
        text = "ABAB$ABAC"
        assert count_occurrences(text, "A") == 4
        assert count_occurrences(text, "AB") == 3
        assert count_occurrences(text, "AC") == 1
        cursor = match(sam, "A")
        trace = []
        draft = draft_tree(sam, cursor, anchor=ord("A"), max_size=5, trace=trace)
        roots = [draft.tokens[i] for i, p in enumerate(draft.parents) if p == -1]
        assert roots == toks("BC")
        a_state = sam.nodes[sam.root].next[ord("A")]
        assert sam.nodes[a_state].topk_prob == [3 / 4, 1 / 4]
        assert draft.tokens[0] == ord("B")  # B branch expanded first

    def test_branching_two_thirds_one_third(self):
        # Occurrence counts 3/2/1 for A/AB/AC give root children B at 2/3
        # and C at 1/3.
        sam = self.build_static("BAB$ABAC", k=2, separator=SEP)
        cursor = match(sam, "A")
        draft = draft_tree(sam, cursor, anchor=ord("A"), max_size=5)
        a_state = sam.nodes[sam.root].next[ord("A")]
        assert sam.nodes[a_state].topk_prob == [2 / 3, 1 / 3]
        assert draft.tokens[0] == ord("B")

    def test_separator_successors_pruned(self):
        sam = self.build_static("AB$AB$AC", k=3, separator=SEP)
        cursor = match(sam, "B")
        draft = draft_tree(sam, cursor, anchor=ord("B"), max_size=6)
        # "B" is always followed by the separator: nothing to draft.
        assert draft is None

    def test_pop_order_non_increasing(self):
        rng = random.Random(11)
        for _ in range(30):
            tokens = random_tokens(rng, rng.randrange(5, 60), 3)
            sam = build(tokens, flavor="static")
            sam.init_topk(2)
            cursor = sam.transfer(MatchCursor(), tokens[0])
            trace = []
            draft = draft_tree(
                sam, cursor, anchor=tokens[0], max_size=12, trace=trace
            )
            probs = [item.path_prob for item in trace]
            assert all(a >= b for a, b in zip(probs, probs[1:]))
            if draft is not None:
                assert_valid_tree(draft)

    def test_paths_spell_continuations_of_match(self):
        rng = random.Random(13)
        for _ in range(30):
            tokens = random_tokens(rng, rng.randrange(5, 50), 2)
            sam = build(tokens, flavor="static")
            sam.init_topk(2)
            cursor = MatchCursor()
            matched: list[int] = []
            for t in random_tokens(rng, rng.randrange(1, 8), 2):
                cursor = sam.transfer(cursor, t)
                matched = (matched + [t])[-cursor.match_len :] if cursor.match_len else []
            if cursor.match_len < 1:
                continue
            draft = draft_tree(sam, cursor, anchor=matched[-1], max_size=10)
            if draft is None:
                continue
            text = chars(tokens)
            for i in range(len(draft.tokens)):
                path = []
                j = i
                while j != -1:
                    path.append(draft.tokens[j])
                    j = draft.parents[j]
                spelled = chars(matched + path[::-1])
                assert spelled in text

    def test_requires_frozen_automaton(self):
        sam = build(toks("ABAB"))
        cursor = match(sam, "A")
        with pytest.raises(SamError, match="frozen"):
            draft_tree(sam, cursor, anchor=ord("A"), max_size=4)
