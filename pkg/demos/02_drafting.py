#!/usr/bin/env python3
"""Extract linear and tree drafts from matched automaton states.

A linear draft copies the reference right after the earliest end of the
matched suffix.  A tree draft expands the most probable successor paths of a
frozen corpus automaton: successor probabilities are exact occurrence-count
ratios, and the expansion pops paths in non-increasing probability order.
"""

from samdraft import MatchCursor, build, build_corpus, draft_linear, draft_tree

SEP = 0


def follow(sam, text: str) -> MatchCursor:
    cursor = MatchCursor()
    for ch in text:
        cursor = sam.transfer(cursor, ord(ch))
    return cursor


def main():
    # Linear drafting against the text's own earlier content.
    text = "to be or not to be, that is the question"
    sam = build([ord(c) for c in text])
    cursor = follow(sam, "not to be")
    draft = draft_linear(sam, cursor, n=12)
    print(f"text:    {text!r}")
    print(f"matched: {'not to be'!r} (len {cursor.match_len})")
    print(f"draft:   {''.join(chr(t) for t in draft.tokens)!r}\n")

    # Tree drafting from a tiny two-document corpus.
    docs = ["the cat sat", "the cat ran", "the dog ran"]
    corpus = build_corpus([[ord(c) for c in d] for d in docs], sep=SEP, trailing_sep=True)
    corpus.init_topk(4)
    cursor = follow(corpus, "the c")
    tree = draft_tree(corpus, cursor, anchor=ord("c"), max_size=8)
    print(f"corpus docs: {docs}")
    print("tree draft after matching 'the c' (parent -1 = the anchor token):")
    for i, (token, parent) in enumerate(zip(tree.tokens, tree.parents)):
        print(f"  node {i}: {chr(token)!r} <- parent {parent}")


if __name__ == "__main__":
    main()
