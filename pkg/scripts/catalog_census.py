"""Tabulate every catalog case: order, p-regular count, span ranks and verdict."""

import argparse

from modadequacy.adequacy import adequacy_report, q2_screen_group
from modadequacy.catalog import all_cases
from modadequacy.groups import count_p_regular


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--csv", action="store_true", help="comma-separated output")
    args = ap.parse_args()
    sep = "," if args.csv else "\t"
    cols = ["case", "p", "order", "p_regular", "dim", "q2_flag", "span", "target", "verdict"]
    print(sep.join(cols))
    for case in all_cases():
        r = adequacy_report(case.rep, case.p)
        row = [
            case.name,
            case.p,
            case.group.order,
            count_p_regular(case.group, case.p),
            case.dim,
            q2_screen_group(case.group, case.p, case.dim),
            r.span_rank,
            case.dim**2,
            r.verdict,
        ]
        print(sep.join(str(x) for x in row))


if __name__ == "__main__":
    main()
