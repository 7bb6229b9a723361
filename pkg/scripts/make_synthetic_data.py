#!/usr/bin/env python3
"""Regenerate the bundled synthetic datasets and fit configs in data/.

The Zeeman dataset mimics the angle-resolved PLE measurement: B and D line
energies for one representative orientation per subset, 109.9 mT, rotating
from [001] towards [-110], with 60 MHz Gaussian noise.  The Stark dataset
samples the [110] tuning curves of eight orientations with 5% noise.
"""
import json
from pathlib import Path

import numpy as np

from txham import ModelParams
from txham.fitting import dataset_to_csv, synthesize_dataset

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


def main():
    DATA.mkdir(exist_ok=True)
    params = ModelParams()
    rng = np.random.default_rng(20240817)

    zeeman = synthesize_dataset(
        "zeeman_rotation",
        params,
        np.linspace(0.0, np.pi / 2.0, 13),
        sigma=60e6 / params.hz_per_ev,
        labels=("z0", "z1", "y0", "y1"),
        lines=("B", "D"),
        rng=rng,
        b_magnitude=0.1099,
        from_axis=(0.0, 0.0, 1.0),
        to_axis=(-1.0, 1.0, 0.0),
    )
    dataset_to_csv(zeeman, DATA / "synthetic_zeeman.csv")
    fit_zeeman = {
        "fit": {
            "free": [
                {"name": "g1", "start": 1.15, "lower": 0.5, "upper": 2.0},
                {"name": "g2", "start": 0.01, "lower": -0.2, "upper": 0.2},
            ],
            "datasets": [
                {
                    "kind": "zeeman_rotation",
                    "data": "data/synthetic_zeeman.csv",
                    "b_magnitude_t": 0.1099,
                    "from_axis": [0, 0, 1],
                    "to_axis": [-1, 1, 0],
                }
            ],
        }
    }
    (DATA / "fit_zeeman.json").write_text(json.dumps(fit_zeeman, indent=2) + "\n")

    stark = synthesize_dataset(
        "stark_sweep",
        params,
        np.linspace(0.0, 125e3, 9)[1:],
        sigma=1.0,
        labels=("z0", "z2", "z1", "y0", "y3", "x0", "x2", "y1"),
        direction=(1.0, 1.0, 0.0),
    )
    for pt in stark.points:
        pt.sigma = max(abs(pt.value) * 0.05, 1e6)
        pt.value += rng.normal(0.0, pt.sigma)
    dataset_to_csv(stark, DATA / "synthetic_stark.csv")
    fit_stark = {
        "fit": {
            "free": [
                {"name": "a_x", "start": 3300.0, "lower": 0.0, "upper": 8000.0},
                {"name": "a_y", "start": 7000.0, "lower": 0.0, "upper": 16000.0},
                {"name": "alpha_xx", "start": 0.10, "lower": 0.0, "upper": 1.0},
                {"name": "alpha_xy", "start": 0.001, "lower": -0.5, "upper": 0.5},
                {"name": "alpha_yy", "start": 0.09, "lower": 0.0, "upper": 1.0},
                {"name": "alpha_zz", "start": 0.01, "lower": -0.5, "upper": 0.5},
            ],
            "datasets": [
                {
                    "kind": "stark_sweep",
                    "data": "data/synthetic_stark.csv",
                    "direction": [1, 1, 0],
                }
            ],
        }
    }
    (DATA / "fit_stark.json").write_text(json.dumps(fit_stark, indent=2) + "\n")

    stack_110 = {
        "layers": [
            {"name": "lHe", "epsilon_r": 1.057, "thickness_m": 0.1e-3},
            {"name": "kapton", "epsilon_r": 3.4, "thickness_m": 0.17e-3},
            {"name": "si", "epsilon_r": 11.7, "thickness_m": 1.9e-3},
        ],
        "sample_index": 2,
    }
    (DATA / "stack_110.json").write_text(json.dumps(stack_110, indent=2) + "\n")

    stack_001 = {
        "layers": [
            {"name": "lHe", "epsilon_r": 1.057, "thickness_m": 0.1e-3},
            {"name": "kapton", "epsilon_r": 3.4, "thickness_m": 0.54e-3},
            {"name": "si", "epsilon_r": 11.7, "thickness_m": 4.3e-3},
        ],
        "sample_index": 2,
    }
    (DATA / "stack_001.json").write_text(json.dumps(stack_001, indent=2) + "\n")
    print(f"wrote synthetic datasets and configs under {DATA}")


if __name__ == "__main__":
    main()
