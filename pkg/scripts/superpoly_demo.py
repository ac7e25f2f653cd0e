"""Period growth of the prime-indexed cycle networks against n^2.

    python3 scripts/superpoly_demo.py --m-max 17
"""

import argparse
import time

from signet.constructions import build_cycle, build_superpolynomial


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-max", type=int, default=17,
                    help="period is the product of primes, so simulation cost grows fast")
    ap.add_argument("--layout", choices=("disjoint", "concatenated"), default="disjoint")
    args = ap.parse_args()

    print("cycles: n period")
    for n in range(8, 24, 2):
        spec = build_cycle(n)
        print(f"  {n:3d} {spec.measured_period}")

    print("prime networks: m n primes period n^2 ratio seconds")
    for m in range(5, args.m_max + 1):
        t0 = time.perf_counter()
        spec = build_superpolynomial(m, layout=args.layout)
        dt = time.perf_counter() - t0
        n = spec.n
        print(f"  {m:3d} {n:4d} {','.join(map(str, spec.prime_list)):>20} "
              f"{spec.measured_period:>12} {n * n:>7} {spec.measured_period / n**2:8.3f} {dt:6.2f}")
        if spec.finding:
            print("  finding:", spec.finding)


if __name__ == "__main__":
    main()
