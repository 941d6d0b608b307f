#!/usr/bin/env python3
"""Tabulate the canonical series element three ways and show their spread.

Columns: ladder construction (transport + extrapolation), power-series
matching at 1/2, and the zeta-combination coefficients evaluated numerically.
"""

import argparse

from selzeta.mzv import MZVIndex, mzv_eval
from selzeta.ncalg import all_words, grouplike_defect
from selzeta.transport import associator_numeric, associator_series, associator_symbolic


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degree", type=int, default=4)
    args = ap.parse_args()

    ladder = associator_numeric(args.degree).value
    matched = associator_series(args.degree)
    symbolic = associator_symbolic(args.degree)
    numeric_sym = symbolic.to_ncseries(1e-12)

    print(f"{'word':<8}{'ladder':>18}{'series-match':>18}{'zeta-combination':>22}   symbols")
    for w in all_words(args.degree):
        combo = symbolic[w]
        print(
            f"{w or '1':<8}{ladder[w]:>18.12f}{matched[w]:>18.12f}{numeric_sym[w]:>22.12f}   {combo}"
        )
    spread = max(abs(ladder[w] - matched[w]) for w in all_words(args.degree))
    print(f"\nladder vs series-match spread: {spread:.3e}")
    print(f"group-likeness defect (ladder): {grouplike_defect(ladder):.3e}")
    z2 = mzv_eval(MZVIndex((2,)))
    print(f"weight-2 coefficient + zeta(2): {ladder['XY'] + z2:+.3e}")


if __name__ == "__main__":
    main()
