#!/usr/bin/env python3
"""Regenerate the bundled table of Riemann zeta zero ordinates.

Computes the first 1000 positive ordinates of the nontrivial zeros of the
Riemann zeta function with mpmath.zetazero at elevated working precision and
writes them, rounded to 12 decimal places, to the package data file.

Usage:
    python scripts/generate_zero_table.py [count] [outfile]
"""

import sys
from decimal import Decimal
from pathlib import Path

import mpmath as mp

DEFAULT_COUNT = 1000
DEFAULT_OUT = (
    Path(__file__).resolve().parent.parent
    / "src"
    / "liouville_sums"
    / "data"
    / "zeta_zeros_1000.txt"
)


def main() -> None:
    count = int(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT_COUNT
    out = Path(sys.argv[2]) if len(sys.argv) > 2 else DEFAULT_OUT
    mp.mp.dps = 25
    header = [
        "# Positive ordinates of the first {} nontrivial zeros of the".format(count),
        "# Riemann zeta function on the critical line (imaginary parts of",
        "# zeros 1/2 + i*gamma_n, in increasing order).",
        "# Generated by scripts/generate_zero_table.py using mpmath.zetazero",
        "# (mpmath {}), working precision 25 significant digits,".format(mp.__version__),
        "# rounded to 12 decimal places.",
    ]
    rows = []
    quantum = Decimal("1.000000000000")
    for n in range(1, count + 1):
        gamma = mp.zetazero(n).imag
        rows.append(str(Decimal(mp.nstr(gamma, 20)).quantize(quantum)))
        if n % 100 == 0:
            print("computed {} zeros".format(n), flush=True)
    out.write_text("\n".join(header + rows) + "\n", encoding="utf-8")
    print("wrote {} ({} zeros)".format(out, count))


if __name__ == "__main__":
    main()
