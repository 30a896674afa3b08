"""Regenerate the task directories under benchmarks/ from the case builders."""

import sys
from pathlib import Path

from paramqv.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else str(ROOT / "benchmarks")
    sys.exit(main(["bundle", out] + sys.argv[2:]))
