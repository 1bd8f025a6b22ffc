#!/usr/bin/env python3
"""Print the compact and fully expanded decompositions for small traces.

Usage: python scripts/print_tables.py [max_n]
"""

import sys

from colortrace import Word, canonicalize, decompose_closed, decompose_eform, reduce_two_index_d
from colortrace.render import eform_text, expr_text


def main() -> int:
    max_n = int(sys.argv[1]) if len(sys.argv) > 1 else 6
    for n in range(2, max_n + 1):
        q = Word(range(1, n + 1))
        print(f"Tr(T^1..T^{n}) compact form:")
        print("  " + eform_text(decompose_eform(q)))
        if n <= 5:
            expanded = canonicalize(reduce_two_index_d(decompose_closed(q)))
            print("fully expanded:")
            print("  " + expr_text(expanded))
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
