#!/usr/bin/env python3
"""Run the delta-multiplication impossibility demonstration.

Prints the sup-norm table of u_n = sin * D_n with its 1/pi limit and
the desk verdicts for the products that cannot survive the embedding.

Usage:
    python scripts/schwartz_demo.py [--nmax 64] [--out report.json]
"""

import sys

from periodic_gfa.cli import main

if __name__ == "__main__":
    sys.exit(main(["demo", *sys.argv[1:]]))
