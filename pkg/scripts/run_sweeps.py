"""Run the exhaustive verification sweeps and print one line per suite.

    python3 scripts/run_sweeps.py --n-max 4 --modes 1000
"""

import argparse
import logging

from signet import sweeps


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=4)
    ap.add_argument("--modes", type=int, default=1000)
    ap.add_argument("--quick", action="store_true", help="smaller zero-threshold scan")
    ap.add_argument("--orbits", type=int, default=0, help="also run the random parallel-period suite")
    ap.add_argument("--psd", type=int, default=0, help="also run both PSD suites with this many samples")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    results = sweeps.run_all(args.n_max, modes=args.modes, quick=args.quick)
    if args.orbits:
        results.append(sweeps.parallel_period_sweep(orbits=args.orbits))
    if args.psd:
        for definition in ("cube", "matrix"):
            results.append(sweeps.psd_sweep(args.psd, definition=definition))
    for r in results:
        print(r.line())
        for v in r.violations[:3]:
            print("   ", v)
    raise SystemExit(0 if all(r.ok for r in results) else 1)


if __name__ == "__main__":
    main()
