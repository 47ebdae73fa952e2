"""Adaptive draft selection and greedy verification against a token oracle.

One decode session owns a dynamic automaton over prompt + generated text, an
optional shared frozen static automaton, and a recycling table.  Each step
proposes drafts from every source, picks one by effective match length, and
verifies it greedily: the accepted prefix plus the oracle's one correction
token are emitted, then all emitted tokens are fed back into the automatons
(transfer before expand, so a token can never match itself).

Verification is greedy-only and therefore lossless: the emitted stream is
always bit-identical to plain token-by-token oracle decoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence

from .automaton import MatchCursor, SamError, SuffixAutomaton
from .drafting import (
    AUXILIARY,
    DYNAMIC_SAM,
    STATIC_SAM,
    Draft,
    draft_linear,
    draft_tree,
)
from .recycling import DEFAULT_TREE_SHAPE, RecycleTable

FALLBACK = "fallback"

DRAFT_LEN_DEFAULT = 40
DRAFT_LEN_CODE = 16


class Oracle(Protocol):
    """Deterministic next-token source; None signals end of sequence."""

    def next(self, context: Sequence[int]) -> int | None: ...


class ReplayOracle:
    """Replays a fixed target stream positioned after a known prompt length."""

    def __init__(self, target: Sequence[int], prompt_len: int):
        self.target = list(target)
        self.prompt_len = prompt_len

    def next(self, context: Sequence[int]) -> int | None:
        i = len(context) - self.prompt_len
        if i < 0:
            raise ValueError("context shorter than the declared prompt")
        return self.target[i] if i < len(self.target) else None


class NgramOracle:
    """Order-k lookup model: argmax over (k-gram -> next) counts of a corpus.

    Ties go to the smallest token; unseen contexts (including contexts
    shorter than the order) end the sequence.
    """

    def __init__(self, order: int, docs: Sequence[Sequence[int]]):
        if order < 1:
            raise ValueError("order must be >= 1")
        self.order = order
        counts: dict[tuple[int, ...], dict[int, int]] = {}
        for doc in docs:
            for i in range(len(doc) - order):
                key = tuple(doc[i : i + order])
                nxt = doc[i + order]
                bucket = counts.setdefault(key, {})
                bucket[nxt] = bucket.get(nxt, 0) + 1
        self.best = {
            key: min(bucket, key=lambda t: (-bucket[t], t))
            for key, bucket in counts.items()
        }

    def next(self, context: Sequence[int]) -> int | None:
        if len(context) < self.order:
            return None
        return self.best.get(tuple(context[len(context) - self.order :]))


@dataclass
class StepOutcome:
    """What one generation step produced."""

    source: str
    draft_size: int
    accepted: int
    tokens_emitted: int
    done: bool


@dataclass
class DecodeMetrics:
    """Acceptance statistics over a decode run."""

    steps: int = 0
    total_tokens: int = 0
    source_steps: dict[str, int] = field(default_factory=dict)
    source_tokens: dict[str, int] = field(default_factory=dict)

    def record(self, outcome: StepOutcome) -> None:
        self.steps += 1
        self.total_tokens += outcome.tokens_emitted
        self.source_steps[outcome.source] = self.source_steps.get(outcome.source, 0) + 1
        self.source_tokens[outcome.source] = (
            self.source_tokens.get(outcome.source, 0) + outcome.tokens_emitted
        )

    @property
    def mat(self) -> float:
        """Mean accepted tokens per step, correction token included."""
        return self.total_tokens / self.steps if self.steps else 0.0

    def source_share(self) -> dict[str, float]:
        if not self.steps:
            return {}
        return {s: n / self.steps for s, n in self.source_steps.items()}

    def per_source_mat(self) -> dict[str, float]:
        return {
            s: self.source_tokens[s] / n for s, n in self.source_steps.items() if n
        }

    def to_dict(self) -> dict:
        return {
            "steps": self.steps,
            "total_tokens": self.total_tokens,
            "mat": self.mat,
            "source_steps": dict(self.source_steps),
            "source_tokens": dict(self.source_tokens),
            "source_share": self.source_share(),
            "per_source_mat": self.per_source_mat(),
        }


@dataclass
class DecodeConfig:
    """Knobs of the decode loop.

    draft_len defaults to 40, or 16 under the "code" profile.  l_bias
    defaults to 5 with an auxiliary drafter configured and 0 without one;
    l_threshold is the auxiliary source's virtual match length.
    """

    draft_len: int | None = None
    profile: str = "default"
    tree_max_size: int | None = None
    l_bias: int | None = None
    l_threshold: int = 5
    max_new_tokens: int = 512
    use_dynamic: bool = True
    use_static: bool = True
    use_aux: bool = True
    recycle_k: int = 8
    tree_shape: tuple[int, ...] = DEFAULT_TREE_SHAPE

    def resolved_draft_len(self) -> int:
        if self.draft_len is not None:
            return self.draft_len
        return DRAFT_LEN_CODE if self.profile == "code" else DRAFT_LEN_DEFAULT

    def resolved_tree_max_size(self) -> int:
        return self.tree_max_size if self.tree_max_size is not None else self.resolved_draft_len()

    def resolved_l_bias(self, aux_active: bool) -> int:
        if self.l_bias is not None:
            return self.l_bias
        return 5 if aux_active else 0


def select_draft(
    l_static: int,
    l_dynamic: int,
    available: Sequence[str],
    l_bias: int,
    l_threshold: int,
) -> str | None:
    """Pick the draft source with the highest effective score.

    Scores: dynamic = its match length, static = match length - l_bias,
    auxiliary = the fixed virtual length l_threshold.  Ties break
    dynamic > static > auxiliary.  None when no source has a draft.
    """
    ranked = []
    if DYNAMIC_SAM in available:
        ranked.append((l_dynamic, 2, DYNAMIC_SAM))
    if STATIC_SAM in available:
        ranked.append((l_static - l_bias, 1, STATIC_SAM))
    if AUXILIARY in available:
        ranked.append((l_threshold, 0, AUXILIARY))
    if not ranked:
        return None
    return max(ranked)[2]


def verify_linear(
    oracle: Oracle, context: Sequence[int], tokens: Sequence[int]
) -> tuple[list[int], int, bool]:
    """Greedy-verify a token chain.

    Returns (emitted tokens, accepted draft prefix length, done).  Emission
    is the accepted prefix plus the oracle's next token (the correction after
    a mismatch, or the bonus after full acceptance) unless the oracle ends.
    """
    emitted: list[int] = []
    accepted = 0
    work = list(context)
    for t in tokens:
        expected = oracle.next(work)
        if expected is None:
            return emitted, accepted, True
        emitted.append(expected)
        if expected != t:
            return emitted, accepted, False
        accepted += 1
        work.append(expected)
    bonus = oracle.next(work)
    if bonus is None:
        return emitted, accepted, True
    emitted.append(bonus)
    return emitted, accepted, False


def verify_tree(
    oracle: Oracle, context: Sequence[int], draft: Draft
) -> tuple[list[int], int, bool]:
    """Greedy-verify a token tree by walking the one oracle-approved path."""
    children: dict[int, list[int]] = {}
    for i, parent in enumerate(draft.parents):
        children.setdefault(parent, []).append(i)
    emitted: list[int] = []
    accepted = 0
    work = list(context)
    slot = -1
    while True:
        expected = oracle.next(work)
        if expected is None:
            return emitted, accepted, True
        emitted.append(expected)
        step = next(
            (c for c in children.get(slot, ()) if draft.tokens[c] == expected), None
        )
        if step is None:
            return emitted, accepted, False
        accepted += 1
        work.append(expected)
        slot = step


def plain_decode(
    prompt: Sequence[int], oracle: Oracle, max_new_tokens: int
) -> list[int]:
    """Token-by-token oracle decoding; the losslessness reference."""
    out: list[int] = []
    context = list(prompt)
    while len(out) < max_new_tokens:
        token = oracle.next(context)
        if token is None:
            break
        out.append(token)
        context.append(token)
    return out


class DecodeSession:
    """One generation run: owns the dynamic automaton, cursors, and table.

    A frozen static automaton may be shared between concurrent sessions; all
    other state is per-session.
    """

    def __init__(
        self,
        config: DecodeConfig | None = None,
        static_sam: SuffixAutomaton | None = None,
    ):
        self.config = config or DecodeConfig()
        if static_sam is not None and not static_sam.frozen:
            raise SamError("static automaton must be frozen (init_topk) before decoding")
        self.static_sam = static_sam if self.config.use_static else None
        self.dynamic = SuffixAutomaton() if self.config.use_dynamic else None
        self.table = RecycleTable(self.config.recycle_k) if self.config.use_aux else None
        self.static_cursor = MatchCursor()
        self.dynamic_cursor = MatchCursor()
        self.context: list[int] = []

    def feed(self, tokens: Sequence[int]) -> None:
        """Advance all state over emitted tokens (prompt or verified output).

        The dynamic automaton transfers before expanding each token: the
        match must be found in the text so far, not in the token itself.
        """
        for t in tokens:
            if self.static_sam is not None:
                self.static_cursor = self.static_sam.transfer(self.static_cursor, t)
            if self.dynamic is not None:
                self.dynamic_cursor = self.dynamic.transfer(self.dynamic_cursor, t)
                self.dynamic.expand(t)
                self.dynamic_cursor = self.dynamic.recanonicalize(self.dynamic_cursor)
        if self.table is not None and len(tokens):
            boundary = self.context[-1:] if self.context else []
            self.table.observe(list(boundary) + list(tokens))
        self.context.extend(tokens)

    def propose(self) -> dict[str, Draft]:
        """Candidate drafts from every source able to produce one."""
        cfg = self.config
        drafts: dict[str, Draft] = {}
        if self.dynamic is not None and self.dynamic_cursor.match_len >= 1:
            d = draft_linear(self.dynamic, self.dynamic_cursor, cfg.resolved_draft_len())
            if d is not None:
                drafts[DYNAMIC_SAM] = d
        if (
            self.static_sam is not None
            and self.static_cursor.match_len >= 1
            and self.context
        ):
            d = draft_tree(
                self.static_sam,
                self.static_cursor,
                anchor=self.context[-1],
                max_size=cfg.resolved_tree_max_size(),
            )
            if d is not None:
                drafts[STATIC_SAM] = d
        if self.table is not None and self.context:
            d = self.table.draft_bfs(
                self.context[-1], cfg.tree_shape, score=cfg.l_threshold
            )
            if d is not None:
                drafts[AUXILIARY] = d
        return drafts

    def decode(
        self, prompt: Sequence[int], oracle: Oracle
    ) -> tuple[list[int], DecodeMetrics]:
        """Generate until the oracle ends or max_new_tokens are emitted."""
        self.feed(prompt)
        cfg = self.config
        l_bias = cfg.resolved_l_bias(self.table is not None)
        metrics = DecodeMetrics()
        output: list[int] = []
        while len(output) < cfg.max_new_tokens:
            drafts = self.propose()
            source = select_draft(
                l_static=self.static_cursor.match_len,
                l_dynamic=self.dynamic_cursor.match_len,
                available=tuple(drafts),
                l_bias=l_bias,
                l_threshold=cfg.l_threshold,
            )
            if source is None:
                token = oracle.next(self.context)
                if token is None:
                    break
                emitted, accepted, done = [token], 0, False
                outcome_source, draft_size = FALLBACK, 0
            else:
                draft = drafts[source]
                if source == DYNAMIC_SAM:
                    emitted, accepted, done = verify_linear(
                        oracle, self.context, draft.tokens
                    )
                else:
                    emitted, accepted, done = verify_tree(oracle, self.context, draft)
                outcome_source, draft_size = source, len(draft.tokens)
            room = cfg.max_new_tokens - len(output)
            if len(emitted) > room:
                emitted = emitted[:room]
                accepted = min(accepted, room)
            if emitted:
                self.feed(emitted)
                output.extend(emitted)
                metrics.record(
                    StepOutcome(outcome_source, draft_size, accepted, len(emitted), done)
                )
            if done:
                break
        return output, metrics


def decode(
    prompt: Sequence[int],
    oracle: Oracle,
    config: DecodeConfig | None = None,
    static_sam: SuffixAutomaton | None = None,
) -> tuple[list[int], DecodeMetrics]:
    """Run one fresh decode session over the prompt."""
    return DecodeSession(config, static_sam).decode(prompt, oracle)
