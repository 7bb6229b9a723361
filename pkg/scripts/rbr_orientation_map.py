#!/usr/bin/env python3
"""Radiative branching ratio of the lowest TX0 state over magnetic-field
directions, plus the cyclicity slices through the map maximum."""
import argparse
import csv

import numpy as np

from txham import (
    FieldConfig,
    ModelParams,
    enumerate_orientations,
    radiative_branching_ratio,
)
from txham.spectra import direction_from_polar


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--b-mt", type=float, default=250.0)
    ap.add_argument("--grid", type=int, default=61)
    ap.add_argument("--orientation", default="z0")
    ap.add_argument("--output", default="rbr_map.csv")
    args = ap.parse_args()

    params = ModelParams()
    frame = enumerate_orientations().by_label(args.orientation)
    b_mag = 1e-3 * args.b_mt
    thetas = np.linspace(0.0, 180.0, args.grid)
    phis = np.linspace(0.0, 360.0, args.grid)

    best = (0.0, 0.0, 0.0)
    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["theta_deg", "phi_deg", "rbr", "cyclicity"])
        for theta in thetas:
            for phi in phis:
                fields = FieldConfig(
                    b_field=b_mag * direction_from_polar(np.deg2rad(theta), np.deg2rad(phi))
                )
                br = radiative_branching_ratio(frame, fields, params, "lower")
                writer.writerow(
                    [f"{theta:.4f}", f"{phi:.4f}", f"{br.rbr:.12g}", f"{br.cyclicity:.12g}"]
                )
                if br.rbr > best[0]:
                    best = (br.rbr, theta, phi)
    print(f"wrote {args.output}")
    print(
        f"max RBR {best[0]:.6f} at theta={best[1]:.1f} deg, phi={best[2]:.1f} deg "
        f"for orientation {args.orientation} at {args.b_mt} mT"
    )

    theta0, phi0 = best[1], best[2]
    print("cyclicity slice across phi (theta fixed at the maximum):")
    for phi in np.linspace(phi0 - 40.0, phi0 + 40.0, 9):
        fields = FieldConfig(
            b_field=b_mag * direction_from_polar(np.deg2rad(theta0), np.deg2rad(phi))
        )
        br = radiative_branching_ratio(frame, fields, params, "lower")
        print(f"  phi={phi:7.2f} deg  cyclicity={br.cyclicity:12.1f}")


if __name__ == "__main__":
    main()
