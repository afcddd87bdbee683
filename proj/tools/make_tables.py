#!/usr/bin/env python3
"""Regenerate the bundled knot tables from the KnotInfo database.

    pip install database_knotinfo
    python3 tools/make_tables.py

KnotInfo PD tuples start at the incoming under-strand and go around the
crossing in the same rotational sense as ours, so they are copied as is.
The signature column uses the sign convention in which an alternating knot
has s equal to its signature (the negative of KnotInfo's column).
"""
import argparse
import ast
import csv
import os
import sys


def load(source):
    if source:
        with open(source, newline="") as fh:
            rows = list(csv.DictReader(fh, delimiter="|"))
        return rows[1:]
    import database_knotinfo
    return database_knotinfo.link_list()[1:]


def pd_string(text):
    return ";".join("X(%s)" % ",".join(str(a) for a in t) for t in ast.literal_eval(text))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--source", help="knotinfo_data_complete.csv (default: installed package)")
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    ap.add_argument("--tests", default=os.path.join(os.path.dirname(__file__), "..", "tests", "data"))
    ap.add_argument("--max-crossings", type=int, default=12)
    ap.add_argument("--oracle-crossings", type=int, default=8)
    args = ap.parse_args()

    rows = load(args.source)
    by_n = {}
    oracle = []
    for r in rows:
        n = int(r["crossing_number"])
        if n < 3 or n > args.max_crossings:
            continue
        pd = pd_string(r["pd_notation"])
        sig = -int(r["signature"])
        alt = "Y" if r["alternating"].strip() == "Y" else "N"
        by_n.setdefault(n, []).append((r["name"], pd, sig, alt))
        if n <= args.oracle_crossings:
            oracle.append((r["name"], pd, r["jones_polynomial_vector"],
                           r["khovanov_unreduced_integral_vector"],
                           r["khovanov_odd_integral_vector"], r["rasmussen_invariant"]))

    os.makedirs(args.out, exist_ok=True)
    for n, knots in sorted(by_n.items()):
        path = os.path.join(args.out, "knots_%02d.tsv" % n)
        with open(path, "w") as fh:
            fh.write("# name\tpd\tsignature\talternating\n")
            for k in knots:
                fh.write("%s\t%s\t%d\t%s\n" % k)
        print("wrote %s (%d knots)" % (path, len(knots)), file=sys.stderr)

    os.makedirs(args.tests, exist_ok=True)
    path = os.path.join(args.tests, "knotinfo_oracle.tsv")
    with open(path, "w") as fh:
        fh.write("# name\tpd\tjones\tkh_integral\tkh_odd_integral\trasmussen\n")
        for k in oracle:
            fh.write("\t".join(k) + "\n")
    print("wrote %s (%d knots)" % (path, len(oracle)), file=sys.stderr)


if __name__ == "__main__":
    main()
