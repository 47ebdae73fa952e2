#!/usr/bin/env python3
"""Compare matcher work growth as the reference gets longer.

On repetitive text with occasional novel tokens, the brute-force n-gram
scanner pays full-length scans whenever a suffix fails to repeat, so its
work per token grows with the reference size.  The automaton's transfer
stays under 2 basic steps per token at every size, and the suffix-array
matcher sits in between with logarithmic probe counts.

Wall times are reported for color; the asserted quantity in the test suite
is always the work counter.
"""

from samdraft.bench import format_transfer_report, run_transfer_bench


def main():
    report = run_transfer_bench(
        sizes=(1_000, 10_000, 50_000),
        stream_len=192,
        matchers=("sam", "ngram_brute", "suffix_array"),
    )
    print(format_transfer_report(report))
    sam_rows = [r for r in report["rows"] if r["matcher"] == "sam"]
    print(f"\nautomaton bound holds everywhere: "
          f"{all(r['bound_ok'] for r in sam_rows)}")


if __name__ == "__main__":
    main()
