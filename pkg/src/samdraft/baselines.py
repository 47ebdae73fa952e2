"""Reference matchers: brute-force and suffix-array longest-suffix retrieval.

These are the independent oracles the automaton is checked against, and the
comparison points for the scaling benchmark.  All positions are 1-indexed end
positions, and ties are broken toward the earliest occurrence, matching the
automaton's ``min_endpos`` semantics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass
class ScanCounter:
    """Work done by a brute-force scan: candidate start positions inspected.

    A hit at start index i means a left-to-right scanner inspected i + 1
    positions; a miss means it inspected every valid start.
    """

    positions: int = 0
    calls: int = 0


def _find(text: Sequence[int], pattern: Sequence[int], start: int, end: int) -> int:
    """First start index of ``pattern`` in ``text[start:end]``, or -1."""
    first = pattern[0]
    n = len(pattern)
    i = start
    limit = end - n
    while i <= limit:
        try:
            i = text.index(first, i, limit + 1)  # type: ignore[attr-defined]
        except ValueError:
            return -1
        if list(text[i : i + n]) == list(pattern):
            return i
        i += 1
    return -1


def ngram_match_brute(
    text: Sequence[int],
    max_n: int,
    draft_len: int,
    counter: ScanCounter | None = None,
) -> list[int] | None:
    """Prompt-lookup style matcher: O(n^2 L) scan of the text's own suffix.

    For n from max_n down to 1, finds the earliest occurrence of the last n
    tokens that ends strictly before the text end, and returns the following
    draft_len tokens.  None when no suffix repeats.
    """
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    length = len(text)
    for n in range(min(max_n, length - 1), 0, -1):
        suffix = text[length - n :]
        hit = _find(text, suffix, 0, length - 1)
        if counter is not None:
            counter.positions += hit + 1 if hit >= 0 else length - n
            counter.calls += 1
        if hit >= 0:
            start = hit + n
            return list(text[start : start + draft_len])
    return None


def suffix_longest_match_brute(
    reference: Sequence[int], query: Sequence[int]
) -> tuple[int, int]:
    """Longest suffix of ``query`` occurring in ``reference``, O(|T|*|q|^2).

    Returns (length, earliest 1-indexed end position); (0, 0) when no suffix
    of the query (including empty queries) occurs.
    """
    for n in range(len(query), 0, -1):
        suffix = query[len(query) - n :]
        hit = _find(reference, suffix, 0, len(reference))
        if hit >= 0:
            return n, hit + n
    return 0, 0


def suffix_match_stream(
    reference: Sequence[int], stream: Sequence[int]
) -> list[tuple[int, int]]:
    """Per-step longest-suffix matches of a stream, by incremental brute force.

    After consuming stream[:i+1], entry i is (length, earliest end position)
    of the longest suffix of the consumed stream occurring in the reference.
    Uses only the fact that the match length grows by at most 1 per step;
    every candidate is re-checked by a direct scan, independently of any
    automaton.
    """
    results: list[tuple[int, int]] = []
    prev = 0
    ref = list(reference)
    for i in range(len(stream)):
        for n in range(min(prev + 1, i + 1, len(ref)), -1, -1):
            if n == 0:
                results.append((0, 0))
                prev = 0
                break
            suffix = list(stream[i + 1 - n : i + 1])
            hit = _find(ref, suffix, 0, len(ref))
            if hit >= 0:
                results.append((n, hit + n))
                prev = n
                break
    return results


class SuffixArrayIndex:
    """Suffix array over a reference, built by prefix doubling in O(L log^2 L)."""

    def __init__(self, reference: Sequence[int]):
        self.reference = list(reference)
        self.sa = self._build(self.reference)

    @staticmethod
    def _build(text: list[int]) -> list[int]:
        n = len(text)
        if n == 0:
            return []
        rank = list(text)
        sa = sorted(range(n), key=rank.__getitem__)
        tmp = [0] * n
        k = 1
        while True:
            def key(i: int) -> tuple[int, int]:
                return (rank[i], rank[i + k] if i + k < n else -1)

            sa.sort(key=key)
            tmp[sa[0]] = 0
            for j in range(1, n):
                tmp[sa[j]] = tmp[sa[j - 1]] + (key(sa[j]) != key(sa[j - 1]))
            rank = tmp[:]
            if rank[sa[-1]] == n - 1:
                break
            k *= 2
        return sa

    def _compare(self, start: int, pattern: list[int]) -> int:
        """Lexicographic order of reference[start:] vs pattern (-1/0/+1 on prefix)."""
        chunk = self.reference[start : start + len(pattern)]
        if chunk == pattern:
            return 0
        return -1 if chunk < pattern else 1

    def _range(self, pattern: list[int], counter: ScanCounter | None) -> tuple[int, int]:
        lo, hi = 0, len(self.sa)
        while lo < hi:
            mid = (lo + hi) // 2
            if counter is not None:
                counter.positions += 1
            if self._compare(self.sa[mid], pattern) < 0:
                lo = mid + 1
            else:
                hi = mid
        first = lo
        hi = len(self.sa)
        while lo < hi:
            mid = (lo + hi) // 2
            if counter is not None:
                counter.positions += 1
            if self._compare(self.sa[mid], pattern) <= 0:
                lo = mid + 1
            else:
                hi = mid
        return first, lo

    def match(
        self,
        query: Sequence[int],
        max_n: int,
        counter: ScanCounter | None = None,
    ) -> tuple[int, int] | None:
        """Longest suffix of ``query`` (capped at max_n) found in the reference.

        Returns (length, earliest 1-indexed end position) or None.  Length
        equals min(brute-force longest suffix match, max_n).
        """
        if counter is not None:
            counter.calls += 1
        for n in range(min(max_n, len(query)), 0, -1):
            pattern = list(query[len(query) - n :])
            first, last = self._range(pattern, counter)
            if first < last:
                earliest = min(self.sa[first:last])
                return n, earliest + n
        return None


def suffix_array_match(
    reference: Sequence[int], query: Sequence[int], max_n: int
) -> tuple[int, int] | None:
    """One-shot convenience wrapper over :class:`SuffixArrayIndex`."""
    if not len(reference):
        return None
    return SuffixArrayIndex(reference).match(query, max_n)
