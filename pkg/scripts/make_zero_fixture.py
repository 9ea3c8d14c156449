#!/usr/bin/env python3
"""Regenerate the bundled 100-ordinate fixture from mpmath.

mpmath.mp.zetazero computes each zero to working precision by dedicated
root refinement, entirely independent of this package's finder, so the
fixture doubles as an oracle for it.  Output is one ordinate per line at
9 decimals, ascending, with a declared-precision header.

Usage: python3 scripts/make_zero_fixture.py [count] [outfile]
"""

import sys
from pathlib import Path

import mpmath


def main() -> int:
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 100
    default_out = (
        Path(__file__).resolve().parent.parent
        / "src"
        / "goldbach_short"
        / "data"
        / "zeros_100.txt"
    )
    out = Path(sys.argv[2]) if len(sys.argv) > 2 else default_out
    mpmath.mp.dps = 30
    lines = [
        "# ordinates of the first nontrivial zeta zeros, rho = 1/2 + i*gamma",
        "# one ordinate per line, ascending; regenerate with scripts/make_zero_fixture.py",
        "# precision: 5e-9",
    ]
    for k in range(1, count + 1):
        gamma = mpmath.mp.zetazero(k).imag
        lines.append(mpmath.nstr(gamma, 20, strip_zeros=False))
    out.parent.mkdir(parents=True, exist_ok=True)
    # render at exactly 9 decimals from the 20-digit strings
    body = [f"{float(v):.9f}" for v in lines[3:]]
    out.write_text("\n".join(lines[:3] + body) + "\n", encoding="utf-8")
    print(f"wrote {count} ordinates to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
