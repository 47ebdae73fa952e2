"""Token-recycling style auxiliary drafter.

Keeps a per-token adjacency row of the k most recently observed successor
tokens (most recent first, deduplicated) and drafts a fixed-shape tree by
breadth-first expansion of those rows.  Model-free and cheap, it is the
fallback source when neither automaton has a usable match.
"""

from __future__ import annotations

from typing import Sequence

from .drafting import AUXILIARY, Draft

DEFAULT_TREE_SHAPE = (4, 2, 2, 1, 1)


class RecycleTable:
    """Recency-ordered successor rows, at most k entries per token."""

    def __init__(self, k: int = 8):
        if k < 1:
            raise ValueError("k must be positive")
        self.k = k
        self.rows: dict[int, list[int]] = {}

    def observe(self, context: Sequence[int]) -> None:
        """Promote each adjacent pair (a, b) of the context: b to row[a] front."""
        rows = self.rows
        for a, b in zip(context, context[1:]):
            row = rows.get(a)
            if row is None:
                rows[a] = [b]
                continue
            if row and row[0] == b:
                continue
            try:
                row.remove(b)
            except ValueError:
                pass
            row.insert(0, b)
            del row[self.k :]

    def draft_bfs(
        self, last_token: int, shape: Sequence[int] = DEFAULT_TREE_SHAPE, score: int = 0
    ) -> Draft | None:
        """Level-order tree draft rooted at the last emitted token.

        Level i nodes each take the first shape[i] entries of their parent's
        adjacency row.  None when the root row is empty.
        """
        if not self.rows.get(last_token):
            return None
        tokens: list[int] = []
        parents: list[int] = []
        frontier: list[tuple[int, int]] = [(last_token, -1)]
        for width in shape:
            nxt: list[tuple[int, int]] = []
            for token, slot in frontier:
                for child in self.rows.get(token, ())[:width]:
                    tokens.append(child)
                    parents.append(slot)
                    nxt.append((child, len(tokens) - 1))
            frontier = nxt
            if not frontier:
                break
        return Draft(tokens=tokens, parents=parents, source=AUXILIARY, score=score)
