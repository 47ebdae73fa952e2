"""Suffix-automaton speculative drafting engine.

Exact longest-suffix retrieval over a static corpus automaton and a dynamic
automaton of the live text, linear and tree draft extraction, a recycling
fallback drafter, adaptive source selection, and lossless greedy verification
against pluggable deterministic oracles.
"""

from .automaton import (
    DYNAMIC,
    NO_LINK,
    STATIC,
    MatchCursor,
    SamError,
    SamNode,
    SerializationError,
    SuffixAutomaton,
    TransferCounter,
    build,
    build_corpus,
    load,
)
from .baselines import (
    ScanCounter,
    SuffixArrayIndex,
    ngram_match_brute,
    suffix_array_match,
    suffix_longest_match_brute,
    suffix_match_stream,
)
from .corpus import Vocabulary, VocabularyError, detokenize, ingest, tokenize
from .decoding import (
    AUXILIARY,
    DYNAMIC_SAM,
    FALLBACK,
    STATIC_SAM,
    DecodeConfig,
    DecodeMetrics,
    DecodeSession,
    NgramOracle,
    Oracle,
    ReplayOracle,
    StepOutcome,
    decode,
    plain_decode,
    select_draft,
    verify_linear,
    verify_tree,
)
from .drafting import Draft, PrimItem, draft_linear, draft_tree
from .recycling import DEFAULT_TREE_SHAPE, RecycleTable

__version__ = "0.1.0"

__all__ = [
    "AUXILIARY",
    "DEFAULT_TREE_SHAPE",
    "DYNAMIC",
    "DYNAMIC_SAM",
    "Draft",
    "DecodeConfig",
    "DecodeMetrics",
    "DecodeSession",
    "FALLBACK",
    "MatchCursor",
    "NO_LINK",
    "NgramOracle",
    "Oracle",
    "PrimItem",
    "RecycleTable",
    "ReplayOracle",
    "STATIC",
    "STATIC_SAM",
    "SamError",
    "SamNode",
    "ScanCounter",
    "SerializationError",
    "StepOutcome",
    "SuffixArrayIndex",
    "SuffixAutomaton",
    "TransferCounter",
    "Vocabulary",
    "VocabularyError",
    "build",
    "build_corpus",
    "decode",
    "detokenize",
    "draft_linear",
    "draft_tree",
    "ingest",
    "load",
    "ngram_match_brute",
    "plain_decode",
    "select_draft",
    "suffix_array_match",
    "suffix_longest_match_brute",
    "suffix_match_stream",
    "tokenize",
    "verify_linear",
    "verify_tree",
]
