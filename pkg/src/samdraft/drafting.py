"""Draft extraction from a matched automaton state.

Linear drafts copy the reference right after the earliest end position of the
matched suffix.  Tree drafts greedily expand the highest-probability
successor paths of a frozen static automaton, priority-queue style, so the
most likely continuations are enqueued first.

Draft ``parents`` convention: parents[i] < i is the in-draft parent of token
i, and -1 means the parent is the last already-emitted context token (the
tree anchor).  Linear drafts are chains: parents == [-1, 0, 1, ...].
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .automaton import MatchCursor, SamError, SuffixAutomaton

DYNAMIC_SAM = "dynamic_sam"
STATIC_SAM = "static_sam"
AUXILIARY = "auxiliary"


@dataclass
class Draft:
    """A candidate continuation: a token chain or tree plus its provenance."""

    tokens: list[int]
    parents: list[int]
    source: str
    score: int = 0

    def is_chain(self) -> bool:
        return all(p == i - 1 for i, p in enumerate(self.parents))


@dataclass(order=True)
class PrimItem:
    """One frontier entry of the tree expansion, ordered by pop priority."""

    sort_key: tuple[float, int, int] = field(repr=False, compare=True)
    path_prob: float = field(compare=False)
    state: int = field(compare=False)
    token: int = field(compare=False)
    parent_slot: int = field(compare=False)


def draft_linear(
    sam: SuffixAutomaton, cursor: MatchCursor, n: int, source: str = DYNAMIC_SAM
) -> Draft | None:
    """Copy up to n reference tokens following the matched suffix.

    Starts right after min_endpos of the cursor state (the earliest place the
    matched suffix ends), truncates at the reference end and before the first
    document separator.  None when nothing is extractable.
    """
    if n < 1:
        raise ValueError("draft length must be positive")
    if cursor.match_len < 1:
        return None
    start = sam.nodes[cursor.state].min_endpos  # 1-indexed end == 0-indexed next
    tokens = sam.reference[start : start + n]
    if sam.separator is not None and sam.separator in tokens:
        tokens = tokens[: tokens.index(sam.separator)]
    if not tokens:
        return None
    return Draft(
        tokens=list(tokens),
        parents=list(range(-1, len(tokens) - 1)),
        source=source,
        score=cursor.match_len,
    )


def draft_tree(
    sam: SuffixAutomaton,
    cursor: MatchCursor,
    anchor: int,
    max_size: int,
    source: str = STATIC_SAM,
    trace: list[PrimItem] | None = None,
) -> Draft | None:
    """Expand a token tree of up to max_size - 1 drafted tokens.

    A max-queue is seeded with (prob 1.0, cursor state, anchor) where the
    anchor is the already-emitted last token; each pop adds a tree node and
    enqueues the state's top-k successors with multiplied path probabilities,
    until max_size nodes (anchor included) were popped.  The anchor itself is
    excluded from the returned draft.  Ties pop the smaller token first, then
    insertion order.  Separator successors are never enqueued.  None when the
    anchor state has no usable successor.
    """
    if not sam.frozen:
        raise SamError("draft_tree requires a frozen static automaton")
    if max_size < 1:
        raise ValueError("max_size must be positive")
    if cursor.match_len < 1:
        return None
    counter = 0
    heap: list[PrimItem] = [
        PrimItem((-1.0, anchor, counter), 1.0, cursor.state, anchor, -1)
    ]
    popped: list[tuple[int, int]] = []  # (token, parent slot in popped)
    while heap and len(popped) < max_size:
        item = heapq.heappop(heap)
        if trace is not None:
            trace.append(item)
        slot = len(popped)
        popped.append((item.token, item.parent_slot))
        node = sam.nodes[item.state]
        for (token, target), prob in zip(node.topk_succ, node.topk_prob):
            if token == sam.separator:
                continue
            counter += 1
            path_prob = item.path_prob * prob
            heapq.heappush(
                heap, PrimItem((-path_prob, token, counter), path_prob, target, token, slot)
            )
    if len(popped) <= 1:
        return None
    return Draft(
        tokens=[t for t, _ in popped[1:]],
        parents=[p - 1 for _, p in popped[1:]],
        source=source,
        score=cursor.match_len,
    )
