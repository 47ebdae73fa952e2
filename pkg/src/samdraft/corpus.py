"""Tokenization and corpus ingestion for building static automatons.

Three vocabulary modes: byte (UTF-8 bytes, exact round trip), whitespace word
(ids assigned in first-seen order), and external ids (files of ASCII decimal
token ids).  One token id is reserved as the document separator and must
never occur inside a document.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .automaton import SuffixAutomaton, build_corpus

log = logging.getLogger("samdraft")

BYTE = "byte"
WORD = "word"
IDS = "ids"

BYTE_SEP = 256  # first id past the byte range


class VocabularyError(Exception):
    """Unknown surface form or unusable vocabulary configuration."""


@dataclass
class Vocabulary:
    """Token <-> surface mapping with a reserved separator id.

    In word mode with no explicit separator, words take ids 0, 1, ... in
    first-seen order and the separator id is assigned one past them when the
    vocabulary is sealed for ingestion.
    """

    mode: str
    sep_id: int | None
    words: dict[str, int] = field(default_factory=dict)
    frozen: bool = False
    oov_id: int | None = None

    @classmethod
    def create(cls, mode: str, sep_id: int | None = None) -> Vocabulary:
        if mode == BYTE:
            return cls(mode=BYTE, sep_id=BYTE_SEP if sep_id is None else sep_id)
        if mode == WORD:
            return cls(mode=WORD, sep_id=sep_id)
        if mode == IDS:
            return cls(mode=IDS, sep_id=0 if sep_id is None else sep_id)
        raise VocabularyError(f"unknown vocabulary mode {mode!r}")

    @property
    def size(self) -> int | None:
        """Declared vocabulary size; None when ids are externally defined."""
        if self.mode == BYTE:
            return max(257, (self.sep_id or 0) + 1)
        if self.mode == WORD:
            top = max(self.words.values(), default=0)
            return max(top, self.sep_id or 0) + 1
        return None

    def word_id(self, word: str) -> int:
        known = self.words.get(word)
        if known is not None:
            return known
        if self.frozen:
            if self.oov_id is not None:
                return self.oov_id
            raise VocabularyError(f"unknown word {word!r} in frozen vocabulary")
        # First-seen assignment, skipping a pre-reserved separator id.
        next_id = len(self.words)
        if self.sep_id is not None and self.sep_id <= next_id:
            next_id += 1
        self.words[word] = next_id
        return next_id

    def seal_separator(self) -> int:
        """Fix the separator id (one past the words when not preset)."""
        if self.sep_id is None:
            self.sep_id = max(self.words.values(), default=-1) + 1
        return self.sep_id

    def hash(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.mode}:{self.sep_id}".encode())
        for word, idx in sorted(self.words.items()):
            h.update(f":{word}={idx}".encode())
        return h.hexdigest()[:16]


def tokenize(text: str, vocab: Vocabulary) -> list[int]:
    """Deterministic segmentation of text under the vocabulary's mode."""
    if vocab.mode == BYTE:
        return list(text.encode("utf-8"))
    if vocab.mode == WORD:
        return [vocab.word_id(w) for w in text.split()]
    if vocab.mode == IDS:
        try:
            return [int(part) for part in text.split()]
        except ValueError as exc:
            raise VocabularyError(f"bad token id in ids-mode input: {exc}") from exc
    raise VocabularyError(f"unknown vocabulary mode {vocab.mode!r}")


def detokenize(tokens: Sequence[int], vocab: Vocabulary) -> str:
    """Inverse of tokenize; exact in byte mode, whitespace-joined otherwise."""
    if vocab.mode == BYTE:
        return bytes(tokens).decode("utf-8")
    if vocab.mode == WORD:
        surfaces = {idx: w for w, idx in vocab.words.items()}
        return " ".join(surfaces.get(t, f"<{t}>") for t in tokens)
    if vocab.mode == IDS:
        return "\n".join(str(t) for t in tokens)
    raise VocabularyError(f"unknown vocabulary mode {vocab.mode!r}")


@dataclass
class IngestResult:
    sam: SuffixAutomaton
    vocab: Vocabulary
    manifest: dict


def read_documents(
    paths: Sequence[str | Path], vocab: Vocabulary, per_line: bool = False
) -> list[list[int]]:
    """Tokenize input files, one document per file or per non-empty line."""
    docs: list[list[int]] = []
    for path in paths:
        text = Path(path).read_text(encoding="utf-8")
        if per_line:
            docs.extend(tokenize(line, vocab) for line in text.splitlines() if line.strip())
        else:
            docs.append(tokenize(text, vocab))
    return docs


def ingest(
    paths: Sequence[str | Path],
    mode: str = BYTE,
    sep_id: int | None = None,
    k: int = 8,
    per_line: bool = False,
) -> IngestResult:
    """Build a frozen, top-k-annotated static automaton from text files.

    Documents are joined with the separator, one trailing separator after
    every document.  Deterministic: identical inputs serialize identically.
    """
    vocab = Vocabulary.create(mode, sep_id)
    docs = read_documents(paths, vocab, per_line=per_line)
    if not docs:
        log.warning("ingest: no documents; building a root-only automaton")
    sep = vocab.seal_separator()
    vocab.frozen = True
    vocab_size = vocab.size
    if vocab_size is None and docs:  # ids mode: derive from the data
        vocab_size = max(max((max(d) for d in docs if d), default=0), sep) + 1
    sam = build_corpus(docs, sep=sep, trailing_sep=True, vocab_size=vocab_size)
    sam.init_topk(k)
    manifest = {
        "docs": len(docs),
        "tokens": sam.max_length,
        "vocab_mode": vocab.mode,
        "vocab_hash": vocab.hash(),
        "sep_id": vocab.sep_id,
        "k": k,
        "format_version": 1,
    }
    return IngestResult(sam=sam, vocab=vocab, manifest=manifest)
