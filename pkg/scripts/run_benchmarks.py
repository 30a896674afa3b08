"""Time the built-in case studies and cross-check small instances densely.

    python scripts/run_benchmarks.py [--dense N] [--json] [case ...]
"""

import sys

from paramqv.cli import main

if __name__ == "__main__":
    argv = sys.argv[1:]
    flags = [a for a in argv if a == "--json"]
    rest = [a for a in argv if a != "--json"]
    if "--dense" not in rest:
        rest += ["--dense", "2"]
    sys.exit(main(flags + ["bench"] + rest))
