"""Time the L2(137) coset scan at several worker counts and check the witness never changes."""

import argparse
import time

from modadequacy.constructions import a4_subgroup_psl2, psl2, scan_coset_witness


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=137)
    ap.add_argument("--threads", type=int, nargs="+", default=[1, 2, 4, 8])
    args = ap.parse_args()
    T = psl2(args.q)
    A4 = a4_subgroup_psl2(T)
    seen = set()
    for n in args.threads:
        t0 = time.perf_counter()
        x = scan_coset_witness(T, A4, 2, threads=n)
        dt = time.perf_counter() - t0
        seen.add(x)
        print(f"threads={n:<3} witness={x} time={dt:.2f} s")
    print("witness identical across runs:", len(seen) == 1)


if __name__ == "__main__":
    main()
