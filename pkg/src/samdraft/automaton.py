"""Suffix automaton over token sequences, with earliest-end-position tracking.

The automaton indexes every substring of a reference token sequence.  Each
state stores the earliest end position (``min_endpos``, 1-indexed) of its
substrings, which lets a matched suffix be located in the reference in O(1).
Static automatons are built offline over a corpus, annotated with occurrence
frequencies and top-k successors, then frozen; dynamic automatons grow one
token at a time as text is generated.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

NO_LINK = -1

STATIC = "static"
DYNAMIC = "dynamic"

_MAGIC = b"SAMD"
_FORMAT_VERSION = 1
_U32_NONE = 0xFFFFFFFF


class SamError(Exception):
    """Invalid operation on a suffix automaton."""


class SerializationError(SamError):
    """Malformed or incompatible serialized automaton."""


@dataclass
class SamNode:
    """One automaton state.

    ``link`` points at the state of the longest proper suffix with a larger
    end-position set (NO_LINK for the root only).  ``length`` is the longest
    substring in the state; the state covers lengths
    ``(nodes[link].length, length]``.  ``freq`` and the top-k successor lists
    are populated only on static automatons by ``init_topk``.
    """

    link: int = NO_LINK
    length: int = 0
    min_endpos: int = 0
    freq: int = 0
    next: dict[int, int] = field(default_factory=dict)
    topk_succ: list[tuple[int, int]] = field(default_factory=list)
    topk_prob: list[float] = field(default_factory=list)


class MatchCursor(NamedTuple):
    """Current match state: automaton state plus exact matched-suffix length.

    ``match_len`` may be shorter than ``nodes[state].length`` but always
    exceeds the suffix link's length (except at the root, where it is 0).
    """

    state: int = 0
    match_len: int = 0


@dataclass
class TransferCounter:
    """Counts the basic steps spent inside ``transfer`` calls.

    Over any stream of L transfers starting from (root, 0), the total of
    suffix-link hops plus next-edge moves is bounded by 2L.
    """

    link_hops: int = 0
    edge_moves: int = 0
    calls: int = 0

    @property
    def basic_steps(self) -> int:
        return self.link_hops + self.edge_moves


class SuffixAutomaton:
    """Online suffix automaton over a growing token sequence.

    Token values are arbitrary non-negative ints.  ``separator`` marks the
    document boundary token in corpus automatons; drafting never crosses it.

    Once frozen, an automaton is immutable and safe for any number of
    concurrent readers.  Unfrozen automatons are single-writer with no
    readers during ``expand``; there is no internal locking.
    """

    def __init__(
        self,
        flavor: str = DYNAMIC,
        separator: int | None = None,
        vocab_size: int | None = None,
    ):
        if flavor not in (STATIC, DYNAMIC):
            raise SamError(f"unknown flavor {flavor!r}")
        self.nodes: list[SamNode] = [SamNode()]
        self.root = 0
        self.last = 0
        self.max_length = 0
        self.flavor = flavor
        self.frozen = False
        self.separator = separator
        self.vocab_size = vocab_size
        self.reference: list[int] = []
        self.clone_count = 0
        self.topk = 0

    # -- construction ------------------------------------------------------

    def expand(self, token: int) -> None:
        """Append one token to the reference and extend the automaton.

        New primary states get ``min_endpos`` = the new reference length and
        ``freq`` seed 1; clone states copy ``min_endpos`` from the state they
        split and get ``freq`` seed 0.
        """
        if self.frozen:
            raise SamError("cannot expand a frozen automaton")
        nodes = self.nodes
        self.max_length += 1
        pos = self.max_length
        self.reference.append(token)
        cur = len(nodes)
        nodes.append(SamNode(length=pos, min_endpos=pos, freq=1))
        p = self.last
        while p != NO_LINK and token not in nodes[p].next:
            nodes[p].next[token] = cur
            p = nodes[p].link
        if p == NO_LINK:
            nodes[cur].link = self.root
        else:
            q = nodes[p].next[token]
            if nodes[p].length + 1 == nodes[q].length:
                nodes[cur].link = q
            else:
                clone = len(nodes)
                nodes.append(
                    SamNode(
                        link=nodes[q].link,
                        length=nodes[p].length + 1,
                        min_endpos=nodes[q].min_endpos,
                        freq=0,
                        next=dict(nodes[q].next),
                    )
                )
                self.clone_count += 1
                while p != NO_LINK and nodes[p].next.get(token) == q:
                    nodes[p].next[token] = clone
                    p = nodes[p].link
                nodes[q].link = clone
                nodes[cur].link = clone
        self.last = cur

    def init_topk(self, k: int = 8) -> None:
        """Finalize a static automaton: exact frequencies, top-k successors.

        Occurrence counts are accumulated over the suffix-link tree in
        decreasing order of ``length`` (clone-aware), giving each state the
        exact cardinality of its end-position set.  Successors are ranked by
        frequency, ties to the smaller token.  Freezes the automaton.
        """
        if self.flavor != STATIC:
            raise SamError("init_topk requires a static automaton")
        if self.frozen:
            raise SamError("init_topk already ran")
        if k < 1:
            raise SamError("k must be positive")
        nodes = self.nodes
        for i in sorted(range(1, len(nodes)), key=lambda i: -nodes[i].length):
            nodes[nodes[i].link].freq += nodes[i].freq
        for node in nodes:
            if not node.next:
                continue
            ranked = sorted(node.next.items(), key=lambda e: (-nodes[e[1]].freq, e[0]))
            node.topk_succ = ranked[:k]
            node.topk_prob = [nodes[v].freq / node.freq for _, v in node.topk_succ]
        self.topk = k
        self.frozen = True

    # -- matching ----------------------------------------------------------

    def transfer(
        self, cursor: MatchCursor, token: int, counter: TransferCounter | None = None
    ) -> MatchCursor:
        """Advance the cursor by one token, keeping the longest matched suffix.

        Follows suffix links while the token has no outgoing edge, then takes
        the edge; if even the root has no edge the match resets to length 0.
        Amortized O(1) per call over a stream.
        """
        nodes = self.nodes
        state, match_len = cursor
        hops = 0
        while state != self.root and token not in nodes[state].next:
            state = nodes[state].link
            match_len = nodes[state].length
            hops += 1
        if token in nodes[state].next:
            state = nodes[state].next[token]
            match_len += 1
            if counter is not None:
                counter.edge_moves += 1
        else:
            match_len = 0
        if counter is not None:
            counter.link_hops += hops
            counter.calls += 1
        return MatchCursor(state, match_len)

    def recanonicalize(self, cursor: MatchCursor) -> MatchCursor:
        """Re-home a cursor whose state was split by a clone during expand.

        After transfer-then-expand on the same token, a clone event re-links
        the matched state; the matched length then belongs to the clone.
        """
        nodes = self.nodes
        state, match_len = cursor
        while state != self.root and match_len <= nodes[nodes[state].link].length:
            state = nodes[state].link
        return MatchCursor(state, match_len)

    def accepts(self, tokens: Sequence[int]) -> bool:
        """True iff ``tokens`` is a substring of the reference."""
        state = self.root
        for t in tokens:
            nxt = self.nodes[state].next.get(t)
            if nxt is None:
                return False
            state = nxt
        return True

    def state_longest(self, state: int) -> list[int]:
        """The longest substring stored in ``state`` (read off min_endpos)."""
        node = self.nodes[state]
        return self.reference[node.min_endpos - node.length : node.min_endpos]

    # -- stats -------------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def transition_count(self) -> int:
        return sum(len(n.next) for n in self.nodes)

    def count_clones(self) -> int:
        # Primary states satisfy min_endpos == length forever; clones never do.
        return sum(1 for n in self.nodes[1:] if n.min_endpos != n.length)

    # -- equality (structural; used by tests and parity checks) -------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuffixAutomaton):
            return NotImplemented
        return (
            self.flavor == other.flavor
            and self.max_length == other.max_length
            and self.separator == other.separator
            and self.vocab_size == other.vocab_size
            and self.reference == other.reference
            and self.nodes == other.nodes
        )

    __hash__ = None  # type: ignore[assignment]

    # -- serialization -----------------------------------------------------

    def save(self) -> bytes:
        """Serialize to the versioned little-endian container (magic SAMD)."""
        if self.flavor != STATIC or not self.frozen:
            raise SamError("save requires a frozen static automaton")
        out = bytearray()
        out += _MAGIC
        out += struct.pack(
            "<IBIIII",
            _FORMAT_VERSION,
            0,  # flavor byte: 0 = static
            self.vocab_size if self.vocab_size is not None else 0,
            self.separator if self.separator is not None else _U32_NONE,
            self.max_length,
            len(self.nodes),
        )
        for node in self.nodes:
            link = node.link if node.link != NO_LINK else _U32_NONE
            out += struct.pack("<IIIQ", link, node.length, node.min_endpos, node.freq)
            out += struct.pack("<I", len(node.next))
            for token in sorted(node.next):
                out += struct.pack("<II", token, node.next[token])
            out += struct.pack("<I", len(node.topk_succ))
            for (token, target), prob in zip(node.topk_succ, node.topk_prob):
                out += struct.pack("<IId", token, target, prob)
        out += struct.pack(f"<{self.max_length}I", *self.reference)
        return bytes(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.offset + size > len(self.data):
            raise SerializationError("truncated input")
        values = struct.unpack_from(fmt, self.data, self.offset)
        self.offset += size
        return values


def load(data: bytes) -> SuffixAutomaton:
    """Deserialize an automaton saved by :meth:`SuffixAutomaton.save`.

    Rejects bad magic, unknown versions, truncated input, and node indices
    pointing outside the node pool.
    """
    reader = _Reader(data)
    (magic,) = reader.take("<4s")
    if magic != _MAGIC:
        raise SerializationError(f"bad magic {magic!r}")
    version, flavor_byte, vocab_size, separator, max_length, node_count = reader.take(
        "<IBIIII"
    )
    if version != _FORMAT_VERSION:
        raise SerializationError(f"unsupported format version {version}")
    if flavor_byte != 0:
        raise SerializationError(f"unsupported flavor byte {flavor_byte}")
    sam = SuffixAutomaton(
        flavor=STATIC,
        separator=None if separator == _U32_NONE else separator,
        vocab_size=vocab_size or None,
    )
    sam.max_length = max_length
    sam.nodes = []

    def check_index(value: int) -> int:
        if value >= node_count:
            raise SerializationError(f"dangling node index {value}")
        return value

    for i in range(node_count):
        link, length, min_endpos, freq = reader.take("<IIIQ")
        node = SamNode(
            link=NO_LINK if link == _U32_NONE else check_index(link),
            length=length,
            min_endpos=min_endpos,
            freq=freq,
        )
        if i == 0 and node.link != NO_LINK:
            raise SerializationError("root must have no suffix link")
        (n_next,) = reader.take("<I")
        for _ in range(n_next):
            token, target = reader.take("<II")
            node.next[token] = check_index(target)
        (n_topk,) = reader.take("<I")
        for _ in range(n_topk):
            token, target, prob = reader.take("<IId")
            node.topk_succ.append((token, check_index(target)))
            node.topk_prob.append(prob)
        sam.nodes.append(node)
    if not sam.nodes:
        raise SerializationError("empty node pool")
    sam.reference = list(reader.take(f"<{max_length}I"))
    if reader.offset != len(data):
        raise SerializationError("trailing bytes after reference")
    sam.last = sam.root
    sam.frozen = True
    sam.clone_count = sam.count_clones()
    sam.topk = max((len(n.topk_succ) for n in sam.nodes), default=0)
    return sam


def build(
    tokens: Iterable[int],
    flavor: str = DYNAMIC,
    separator: int | None = None,
    vocab_size: int | None = None,
) -> SuffixAutomaton:
    """Build an automaton over ``tokens`` by repeated expansion."""
    sam = SuffixAutomaton(flavor=flavor, separator=separator, vocab_size=vocab_size)
    for t in tokens:
        sam.expand(t)
    return sam


def build_corpus(
    docs: Sequence[Sequence[int]],
    sep: int,
    trailing_sep: bool = False,
    vocab_size: int | None = None,
) -> SuffixAutomaton:
    """Build a static (not yet frozen) automaton over separator-joined docs.

    ``trailing_sep`` appends a separator after every document (including the
    last), the convention corpus ingestion uses so drafts never run past a
    document end.
    """
    joined: list[int] = []
    for i, doc in enumerate(docs):
        if sep in doc:
            raise SamError(f"separator token {sep} occurs inside document {i}")
        joined.extend(doc)
        if trailing_sep or i < len(docs) - 1:
            joined.append(sep)
    return build(joined, flavor=STATIC, separator=sep, vocab_size=vocab_size)
