"""Draft selection, greedy verification, and decode-loop tests."""

from __future__ import annotations

import random

import pytest

from samdraft import (
    AUXILIARY,
    DYNAMIC_SAM,
    FALLBACK,
    STATIC_SAM,
    DecodeConfig,
    DecodeSession,
    Draft,
    MatchCursor,
    NgramOracle,
    ReplayOracle,
    SamError,
    SuffixAutomaton,
    build,
    build_corpus,
    decode,
    plain_decode,
    select_draft,
    verify_linear,
    verify_tree,
)

from conftest import random_tokens, toks

ALL = (DYNAMIC_SAM, STATIC_SAM, AUXILIARY)


class TestSelectDraft:
    def test_static_wins_past_bias_margin(self):
        # 10 > 4 + 5, and the resulting tie with the auxiliary's virtual
        # length breaks toward the static automaton.
        choice = select_draft(10, 4, ALL, l_bias=5, l_threshold=5)
        assert choice == STATIC_SAM

    def test_dynamic_prioritized(self):
        assert select_draft(0, 8, ALL, l_bias=5, l_threshold=5) == DYNAMIC_SAM

    def test_auxiliary_when_matches_short(self):
        assert select_draft(2, 1, ALL, l_bias=5, l_threshold=5) == AUXILIARY

    def test_tie_prefers_dynamic(self):
        assert select_draft(0, 5, ALL, l_bias=0, l_threshold=5) == DYNAMIC_SAM
        assert select_draft(5, 5, ALL, l_bias=0, l_threshold=0) == DYNAMIC_SAM

    def test_unavailable_sources_skipped(self):
        assert select_draft(10, 0, (AUXILIARY,), l_bias=5, l_threshold=5) == AUXILIARY
        assert select_draft(10, 9, (STATIC_SAM,), l_bias=5, l_threshold=5) == STATIC_SAM

    def test_none_when_nothing_available(self):
        assert select_draft(9, 9, (), l_bias=5, l_threshold=5) is None


class TestVerifyLinear:
    def test_full_acceptance_plus_bonus(self):
        target = toks("HELLOX")
        oracle = ReplayOracle(target, prompt_len=2)
        emitted, accepted, done = verify_linear(oracle, toks("AB"), toks("HELLO"))
        assert emitted == toks("HELLOX")
        assert accepted == 5
        assert not done

    def test_first_token_wrong(self):
        oracle = ReplayOracle(toks("XYZ"), prompt_len=0)
        emitted, accepted, done = verify_linear(oracle, [], toks("AB"))
        assert emitted == toks("X")
        assert accepted == 0
        assert not done

    def test_oracle_ends_mid_draft(self):
        oracle = ReplayOracle(toks("AB"), prompt_len=0)
        emitted, accepted, done = verify_linear(oracle, [], toks("ABCD"))
        assert emitted == toks("AB")
        assert accepted == 2
        assert done

    def test_bonus_suppressed_at_end(self):
        oracle = ReplayOracle(toks("AB"), prompt_len=0)
        emitted, accepted, done = verify_linear(oracle, [], toks("AB"))
        assert emitted == toks("AB")
        assert accepted == 2
        assert done


class TestVerifyTree:
    def test_chain_tree_fully_accepted(self):
        draft = Draft(tokens=toks("ABC"), parents=[-1, 0, 1], source=STATIC_SAM)
        oracle = ReplayOracle(toks("ABCD"), prompt_len=0)
        emitted, accepted, done = verify_tree(oracle, [], draft)
        assert emitted == toks("ABCD")
        assert accepted == 3

    def test_oracle_picks_branch_regardless_of_probability_order(self):
        # Root children B (slot 0) and C (slot 1); the oracle wants C.
        draft = Draft(tokens=toks("BCX"), parents=[-1, -1, 1], source=STATIC_SAM)
        oracle = ReplayOracle(toks("CXQ"), prompt_len=0)
        emitted, accepted, done = verify_tree(oracle, [], draft)
        assert emitted == toks("CXQ")
        assert accepted == 2

    def test_no_root_child_matches(self):
        draft = Draft(tokens=toks("BC"), parents=[-1, -1], source=STATIC_SAM)
        oracle = ReplayOracle(toks("Z"), prompt_len=0)
        emitted, accepted, done = verify_tree(oracle, [], draft)
        assert emitted == toks("Z")
        assert accepted == 0

    def test_agrees_with_linear_on_chains(self):
        rng = random.Random(23)
        for _ in range(50):
            target = random_tokens(rng, rng.randrange(1, 12), 3)
            tokens = random_tokens(rng, rng.randrange(1, 12), 3)
            draft = Draft(tokens=tokens, parents=list(range(-1, len(tokens) - 1)), source=DYNAMIC_SAM)
            a = verify_linear(ReplayOracle(target, 0), [], tokens)
            b = verify_tree(ReplayOracle(target, 0), [], draft)
            assert a == b


class TestOracles:
    def test_replay_positions_by_context_length(self):
        oracle = ReplayOracle(toks("AB"), prompt_len=3)
        assert oracle.next([1, 2, 3]) == ord("A")
        assert oracle.next([1, 2, 3, ord("A")]) == ord("B")
        assert oracle.next([1, 2, 3, 9, 9]) is None

    def test_ngram_argmax_with_smallest_token_ties(self):
        docs = [[1, 2, 3], [1, 2, 4], [1, 2, 3], [1, 2, 5], [1, 2, 5]]
        oracle = NgramOracle(2, docs)
        # (1, 2) -> 3 twice, 5 twice, 4 once: tie broken to 3.
        assert oracle.next([9, 1, 2]) == 3

    def test_ngram_unseen_context_ends(self):
        oracle = NgramOracle(2, [[1, 2, 3]])
        assert oracle.next([7, 8]) is None
        assert oracle.next([1]) is None  # shorter than the order


def copy_setup(rng, vocab=512, passage_len=400, preamble_len=24):
    passage = random_tokens(rng, passage_len, vocab)
    prompt = random_tokens(rng, preamble_len, vocab) + passage
    return prompt, ReplayOracle(passage, len(prompt)), passage


class TestDecode:
    def test_copy_task_high_acceptance(self):
        rng = random.Random(1)
        prompt, oracle, passage = copy_setup(rng)
        config = DecodeConfig(use_static=False, use_aux=False, draft_len=40)
        output, metrics = decode(prompt, oracle, config)
        assert output == passage
        assert metrics.mat >= 20

    def test_all_sources_disabled_is_plain_decoding(self):
        rng = random.Random(2)
        prompt, oracle, passage = copy_setup(rng, passage_len=60)
        config = DecodeConfig(use_dynamic=False, use_static=False, use_aux=False)
        output, metrics = decode(prompt, oracle, config)
        assert output == passage
        assert metrics.mat == 1.0
        assert metrics.source_steps == {FALLBACK: len(passage)}

    def test_dynamic_automaton_equals_batch_build_of_all_text(self):
        rng = random.Random(3)
        prompt, oracle, _ = copy_setup(rng, vocab=32, passage_len=80)
        session = DecodeSession(DecodeConfig(use_static=False))
        output, _ = session.decode(prompt, oracle)
        assert session.dynamic == build(prompt + output)

    def test_losslessness_across_random_configs(self):
        rng = random.Random(4)
        for trial in range(40):
            vocab = rng.choice([8, 64, 512])
            prompt = random_tokens(rng, rng.randrange(4, 40), vocab)
            if rng.random() < 0.5:
                target = random_tokens(rng, rng.randrange(0, 120), vocab)
                if rng.random() < 0.5 and prompt:
                    target = prompt[: rng.randrange(1, len(prompt) + 1)] + target
                oracle = ReplayOracle(target, len(prompt))
            else:
                docs = [random_tokens(rng, 40, vocab) for _ in range(4)]
                oracle = NgramOracle(rng.choice([1, 2, 3]), docs + [prompt])
            static_sam = None
            if rng.random() < 0.5:
                docs = [random_tokens(rng, 30, vocab) for _ in range(3)]
                static_sam = build_corpus(docs, sep=vocab, trailing_sep=True)
                static_sam.init_topk(4)
            config = DecodeConfig(
                draft_len=rng.choice([4, 16, 40]),
                l_bias=rng.choice([None, 0, 3, 5, 8]),
                l_threshold=rng.choice([0, 3, 5, 8]),
                max_new_tokens=rng.choice([10, 100]),
                use_dynamic=rng.random() < 0.8,
                use_static=rng.random() < 0.8,
                use_aux=rng.random() < 0.8,
            )
            output, metrics = decode(prompt, oracle, config, static_sam=static_sam)
            expected = plain_decode(prompt, oracle, config.max_new_tokens)
            assert output == expected, f"config {trial} diverged"
            if output:
                assert metrics.mat >= 1.0

    def test_transfer_before_expand_ordering(self):
        # Feeding a novel token must reset the match: the token is not
        # allowed to match its own just-expanded occurrence.
        session = DecodeSession(DecodeConfig(use_static=False, use_aux=False))
        session.feed(toks("ABC"))
        session.feed(toks("Z"))
        assert session.dynamic_cursor.match_len == 0
        # The reversed order would find the token in itself: demonstrate on a
        # bare automaton that expand-then-transfer reports a bogus match.
        wrong = build(toks("ABC"))
        cursor = MatchCursor(wrong.last, 3)
        wrong.expand(ord("Z"))
        bogus = wrong.transfer(cursor, ord("Z"))
        assert bogus.match_len == 4  # what the wrong ordering would believe

    def test_static_cursor_advances_over_emitted_tokens(self):
        corpus_docs = [toks("HELLO WORLD"), toks("HELLO THERE")]
        static_sam = build_corpus(corpus_docs, sep=1, trailing_sep=True)
        static_sam.init_topk(4)
        target = toks("HELLO WORLD")
        prompt = toks("XY")
        config = DecodeConfig(use_dynamic=False, use_aux=False, l_bias=0)
        session = DecodeSession(config, static_sam=static_sam)
        output, metrics = session.decode(prompt, ReplayOracle(target, len(prompt)))
        assert output == target
        assert session.static_cursor.match_len >= len("WORLD")
        assert metrics.source_steps.get(STATIC_SAM, 0) >= 1
        assert metrics.mat > 1.0

    def test_max_new_tokens_truncates(self):
        rng = random.Random(6)
        prompt, oracle, passage = copy_setup(rng, passage_len=100)
        config = DecodeConfig(use_static=False, max_new_tokens=17)
        output, _ = decode(prompt, oracle, config)
        assert output == passage[:17]

    def test_empty_generation_counts_no_steps(self):
        oracle = ReplayOracle([], prompt_len=2)
        output, metrics = decode([5, 6], oracle, DecodeConfig())
        assert output == []
        assert metrics.steps == 0
        assert metrics.mat == 0.0

    def test_session_rejects_unfrozen_static(self):
        with pytest.raises(SamError, match="frozen"):
            DecodeSession(DecodeConfig(), static_sam=build(toks("AB"), flavor="static"))


class TestConfig:
    def test_draft_len_profiles(self):
        assert DecodeConfig().resolved_draft_len() == 40
        assert DecodeConfig(profile="code").resolved_draft_len() == 16
        assert DecodeConfig(profile="code", draft_len=7).resolved_draft_len() == 7

    def test_l_bias_defaults(self):
        assert DecodeConfig().resolved_l_bias(aux_active=True) == 5
        assert DecodeConfig().resolved_l_bias(aux_active=False) == 0
        assert DecodeConfig(l_bias=3).resolved_l_bias(aux_active=False) == 3

    def test_tree_max_size_follows_draft_len(self):
        assert DecodeConfig(draft_len=12).resolved_tree_max_size() == 12
        assert DecodeConfig(draft_len=12, tree_max_size=5).resolved_tree_max_size() == 5
