"""Scan PSL2(q) for coset witnesses and write the result as JSON.

    python3 scripts/taylor_scan.py --p 3 --q-max 200
    python3 scripts/taylor_scan.py --p 2 --threads 8 --out taylor_p2.json
"""

import argparse
import json
import os
import time

from modadequacy.constructions import build_taylor_example


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, required=True)
    ap.add_argument("--q-max", type=int, default=200)
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--out")
    args = ap.parse_args()
    t0 = time.perf_counter()
    res = build_taylor_example(args.p, args.q_max, threads=args.threads)
    text = json.dumps(res, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(f"# {time.perf_counter() - t0:.1f} s with {args.threads} worker(s)", flush=True)


if __name__ == "__main__":
    main()
