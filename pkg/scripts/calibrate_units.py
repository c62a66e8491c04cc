"""Evaluate every unit convention at the default source and print the selection.

Usage: python3 scripts/calibrate_units.py [--n 1000] [--output calibration.json]
"""

import argparse

from twinbeam.calibration import calibrate, write_calibration


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--output", help="write the result JSON here")
    args = parser.parse_args()

    result = calibrate(args.n)
    print(f"{'convention':<28} {'r_tot':>8} {'leading20':>10}  passes")
    for c in result["candidates"]:
        print(f"{c['convention']:<28} {c['r_tot']:8.4f} {c['leading20_fraction']:10.4f}  {c['passes']}")
    print(f"selected: {result['selected']}")
    if args.output:
        write_calibration(result, args.output)


if __name__ == "__main__":
    main()
