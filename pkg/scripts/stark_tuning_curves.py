#!/usr/bin/env python3
"""Electric-field tuning curves of all 24 orientations for fields along
[110] and [001], with the degenerate subgroup report for each axis."""
import argparse
import csv

import numpy as np

from txham import ModelParams, degeneracy_grouping, stark_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--e-max-110", type=float, default=125e3)
    ap.add_argument("--e-max-001", type=float, default=60e3)
    ap.add_argument("--steps", type=int, default=51)
    ap.add_argument("--misalign-theta-deg", type=float, default=0.0)
    ap.add_argument("--output", default="stark_curves.csv")
    args = ap.parse_args()

    params = ModelParams()
    runs = (
        ("110", np.array([1.0, 1.0, 0.0]), args.e_max_110),
        ("001", np.array([0.0, 0.0, 1.0]), args.e_max_001),
    )
    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["axis", "e_v_per_m", "orientation", "shift_ghz"])
        for name, direction, e_max in runs:
            sweep = stark_sweep(
                direction,
                e_max,
                args.steps,
                params,
                misalignment=(np.deg2rad(args.misalign_theta_deg), 0.0),
            )
            for step in sweep:
                for label, shift in step.shifts:
                    writer.writerow(
                        [name, f"{step.e_magnitude:.6f}", label, f"{shift / 1e9:.9f}"]
                    )
            report = degeneracy_grouping(list(sweep[-1].shifts), tolerance=1e6)
            print(f"E || [{name}] at {e_max / 1e3:.0f} kV/m: {report.n_groups} groups")
            for group in report.groups:
                print(
                    f"  {group.representative / 1e9:+8.4f} GHz  "
                    f"{', '.join(group.members)}"
                )
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
