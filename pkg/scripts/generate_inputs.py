#!/usr/bin/env python3
"""Write the synthetic demo corpus (students + curriculum CSVs) into data/.

The corpus is deterministic for a given seed, so rerunning this script must
produce byte-identical files; CI or a reviewer can diff against the committed
copies to spot accidental drift.
"""

import argparse
import sys
from pathlib import Path

from studyflow.synth import CORPUS_SEED, write_corpus


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parent.parent / "data"),
        help="output directory (default: <repo>/data)",
    )
    parser.add_argument("--seed", type=int, default=CORPUS_SEED)
    args = parser.parse_args()

    for path in write_corpus(args.out, seed=args.seed):
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
