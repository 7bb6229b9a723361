#!/usr/bin/env python3
"""Angle-resolved Zeeman map: rotate B from [001] towards [-110] and track
the four optical lines of every orientation, the subset grouping, and the
per-subset hole g-factors."""
import argparse
import csv

import numpy as np

from txham import (
    ModelParams,
    degeneracy_grouping,
    field_rotation_sweep,
    hole_g_factor,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--b-mt", type=float, default=109.9)
    ap.add_argument("--steps", type=int, default=91)
    ap.add_argument("--output", default="zeeman_map.csv")
    ap.add_argument("--plot", action="store_true", help="also write zeeman_map.png")
    args = ap.parse_args()

    params = ModelParams()
    b_mag = 1e-3 * args.b_mt
    steps = field_rotation_sweep([0, 0, 1], [-1, 1, 0], args.steps, b_mag, params)

    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["angle_deg", "orientation", "line", "offset_ghz"])
        for step in steps:
            for ts in step.transitions:
                for line in ts.lines:
                    writer.writerow(
                        [
                            f"{np.degrees(step.angle_rad):.6f}",
                            ts.orientation,
                            line.name,
                            f"{line.offset_hz / 1e9:.9f}",
                        ]
                    )
    print(f"wrote {args.output}")

    mid = steps[len(steps) // 2]
    report = degeneracy_grouping(
        [(ts.orientation, ts.hole_splitting_ev * params.hz_per_ev) for ts in mid.transitions],
        tolerance=1e8,
    )
    print(f"subsets at {np.degrees(mid.angle_rad):.1f} deg:")
    for group in report.groups:
        ts = next(t for t in mid.transitions if t.orientation == group.members[0])
        g_h = hole_g_factor(ts, b_mag, params)
        print(f"  g_H = {g_h:5.3f}  {', '.join(group.members)}")

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(7, 5))
        angles = [np.degrees(s.angle_rad) for s in steps]
        for idx in range(24):
            for line_idx in range(4):
                ax.plot(
                    angles,
                    [s.transitions[idx].lines[line_idx].offset_hz / 1e9 for s in steps],
                    lw=0.6,
                    color="C0",
                    alpha=0.5,
                )
        ax.set_xlabel("field angle from [001] (deg)")
        ax.set_ylabel("detuning (GHz)")
        ax.set_title(f"optical lines A-D, |B| = {args.b_mt} mT")
        fig.tight_layout()
        fig.savefig("zeeman_map.png", dpi=160)
        print("wrote zeeman_map.png")


if __name__ == "__main__":
    main()
