"""Tabulate tree words with their slopes, intervals and majorisation points.

    python3 scripts/tree_fixed_points.py --depth 5 --a 0.2 --b 1
"""
import argparse
import csv
import sys
from fractions import Fraction

from whittle_kf.io import fmt
from whittle_kf.moebius import ArmParams, phi_word
from whittle_kf.threshold import word_interval
from whittle_kf.words import enumerate_tree


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=5)
    ap.add_argument("--a", type=float, default=0.2)
    ap.add_argument("--b", type=float, default=1.0)
    args = ap.parse_args()
    p = ArmParams(args.a, args.b)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["word", "slope", "y01w", "y10w", "phi_w0"])
    for word in enumerate_tree(args.depth)[1:-1]:
        lo, hi = word_interval(word, p)
        slope = Fraction(word.count("1"), word.count("0"))
        w.writerow([word, f"{slope.numerator}/{slope.denominator}", fmt(lo), fmt(hi),
                    fmt(phi_word(word[1:-1], 0.0, p))])


if __name__ == "__main__":
    main()
