#!/usr/bin/env python3
"""Build a suffix automaton and follow a match through it, step by step.

The automaton indexes every substring of its reference.  Feeding a token
stream through `transfer` keeps, at every step, the longest suffix of the
stream that occurs somewhere in the reference, along with the earliest
position where that suffix ends (min_endpos).  The work counter shows the
amortized O(1) bound in action: total basic steps never exceed 2 per token.
"""

from samdraft import MatchCursor, TransferCounter, build

TEXT = "the cat sat on the mat and the cat napped"
STREAM = "a rat sat on the cat"


def main():
    reference = [ord(c) for c in TEXT]
    sam = build(reference)
    print(f"reference ({len(reference)} tokens): {TEXT!r}")
    print(f"automaton: {sam.node_count} states, {sam.transition_count} edges, "
          f"{sam.clone_count} clones (bound: {2 * len(reference) - 1} states)\n")

    counter = TransferCounter()
    cursor = MatchCursor()
    print(f"{'consumed':>24}  {'match':>5}  matched suffix")
    for i, ch in enumerate(STREAM):
        cursor = sam.transfer(cursor, ord(ch), counter)
        node = sam.nodes[cursor.state]
        matched = TEXT[node.min_endpos - cursor.match_len : node.min_endpos]
        print(f"{STREAM[: i + 1]!r:>24}  {cursor.match_len:>5}  {matched!r}")

    steps = counter.basic_steps
    print(f"\ntotal basic steps: {steps} over {counter.calls} transfers "
          f"({steps / counter.calls:.2f}/token, bound 2.0)")


if __name__ == "__main__":
    main()
