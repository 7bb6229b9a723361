"""Batch command-line front end.

Subcommands: orientations, zeeman, stark, strain, rbr, fit.  Command
parameters may come from a JSON config file (--config); explicit flags
override config values and unknown config keys are rejected.  Sweep tables
are emitted as CSV at full precision (17 significant digits) or, with
--format json, as a single JSON document that also embeds the degeneracy
grouping report.  Errors leave a machine-readable JSON object on stderr
and a nonzero exit status.

CSV schemas
    zeeman:  angle_deg, orientation, line, energy_ev, offset_ghz
    stark:   e_v_per_m, orientation, shift_hz
    strain:  stress_pa, orientation, line, energy_ev, offset_ghz
    rbr:     theta_deg, phi_deg, orientation, rbr, cyclicity

Fit dataset CSVs carry a header row with kind-specific columns
(zeeman_rotation: angle_rad, energy_ev, sigma_ev; stark_sweep: e_v_per_m,
shift_hz, sigma_hz; stress_sweep: stress_pa, energy_ev, sigma_ev) plus
optional orientation and line tag columns.

The environment variable TXH_THREADS caps sweep parallelism (default 1).
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .errors import TxModelError
from .fitting import (
    FitProblem,
    FreeParameter,
    SpectralDataset,
    dataset_from_csv,
    fit,
)
from .hamiltonian import FieldConfig, ModelParams
from .orientations import enumerate_orientations
from .spectra import (
    DielectricLayer,
    DielectricStack,
    GroupingReport,
    degeneracy_grouping,
    direction_from_polar,
    effective_field,
    field_rotation_sweep,
    radiative_branching_ratio,
    stark_sweep,
    tx_doublet_lines,
    map_ordered,
)
from .elasticity import stress_for_direction


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_vector(value) -> np.ndarray:
    try:
        if isinstance(value, (list, tuple, np.ndarray)):
            parts = [float(x) for x in value]
        else:
            parts = [
                float(x)
                for x in str(value).replace("[", "").replace("]", "").split(",")
            ]
    except ValueError as exc:
        raise ValueError(f"cannot parse vector {value!r}: {exc}") from None
    if len(parts) != 3:
        raise ValueError(f"vector {value!r} must have three components")
    return np.array(parts)


def _open_output(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _write_csv(path, header, rows):
    stream, close = _open_output(path)
    try:
        writer = csv.writer(stream)
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if close:
            stream.close()


def _write_json(path, payload):
    stream, close = _open_output(path)
    try:
        json.dump(payload, stream, indent=2)
        stream.write("\n")
    finally:
        if close:
            stream.close()


def _grouping_dict(report: GroupingReport) -> dict:
    return {
        "field_spec": report.field_spec,
        "tolerance": report.tolerance,
        "n_groups": report.n_groups,
        "groups": [
            {"members": list(g.members), "representative": g.representative}
            for g in report.groups
        ],
    }


def _emit(config, header, rows, grouping: GroupingReport | None):
    if config["format"] == "json":
        payload = {"columns": list(header), "rows": [list(r) for r in rows]}
        if grouping is not None:
            payload["grouping"] = _grouping_dict(grouping)
        _write_json(config.get("output"), payload)
    else:
        _write_csv(config.get("output"), header, rows)
        if grouping is not None and config.get("grouping_output"):
            _write_json(config["grouping_output"], _grouping_dict(grouping))


# ----------------------------------------------------------------------
# command implementations

def cmd_orientations(config) -> None:
    frames = enumerate_orientations()
    records = [f.as_dict() for f in frames if not (config["unprimed"] and f.inverted)]
    _write_json(config.get("output"), records)


def cmd_zeeman(config) -> None:
    params = ModelParams()
    steps = field_rotation_sweep(
        _parse_vector(config["from_axis"]),
        _parse_vector(config["to_axis"]),
        int(config["steps"]),
        1e-3 * float(config["b_mt"]),
        params,
    )
    rows = []
    for step in steps:
        angle_deg = np.degrees(step.angle_rad)
        for ts in step.transitions:
            for line in ts.lines:
                rows.append(
                    (
                        _fmt(angle_deg),
                        ts.orientation,
                        line.name,
                        _fmt(line.energy_ev),
                        _fmt(line.offset_hz / 1e9),
                    )
                )
    mid = steps[len(steps) // 2]
    grouping = degeneracy_grouping(
        [(ts.orientation, ts.hole_splitting_ev * params.hz_per_ev) for ts in mid.transitions],
        tolerance=float(config["tolerance_hz"]),
        field_spec=(
            f"hole splitting at {np.degrees(mid.angle_rad):.3f} deg along "
            f"{config['from_axis']} -> {config['to_axis']}, |B| = {config['b_mt']} mT"
        ),
    )
    _emit(config, ("angle_deg", "orientation", "line", "energy_ev", "offset_ghz"), rows, grouping)


def _load_stack(path) -> DielectricStack:
    with open(path) as fh:
        payload = json.load(fh)
    layers = tuple(
        DielectricLayer(
            name=str(layer.get("name", f"layer{i}")),
            epsilon_r=float(layer["epsilon_r"]),
            thickness_m=float(layer["thickness_m"]),
        )
        for i, layer in enumerate(payload["layers"])
    )
    return DielectricStack(layers=layers, sample_index=int(payload["sample_index"]))


def cmd_stark(config) -> None:
    params = ModelParams()
    e_max = float(config["e_max"])
    scale = 1.0
    if config.get("stack"):
        stack = _load_stack(config["stack"])
        total = sum(l.thickness_m for l in stack.layers)
        eff = effective_field(stack, 1.0)  # per unit total voltage
        # nominal field = V_tot / total thickness -> field inside the sample
        scale = eff.e_sample * total
    steps = stark_sweep(
        _parse_vector(config["direction"]),
        scale * e_max,
        int(config["steps"]),
        params,
        misalignment=(
            np.deg2rad(float(config["misalign_theta"])),
            np.deg2rad(float(config["misalign_phi"])),
        ),
    )
    rows = [
        (_fmt(step.e_magnitude), label, _fmt(shift))
        for step in steps
        for label, shift in step.shifts
    ]
    grouping = degeneracy_grouping(
        list(steps[-1].shifts),
        tolerance=float(config["tolerance_hz"]),
        field_spec=f"total Stark shift at {steps[-1].e_magnitude:.6g} V/m along {config['direction']}",
    )
    _emit(config, ("e_v_per_m", "orientation", "shift_hz"), rows, grouping)


def cmd_strain(config) -> None:
    params = ModelParams()
    frames = enumerate_orientations()
    theta = np.deg2rad(float(config["direction_theta"]))
    magnitudes = np.linspace(0.0, float(config["t_max"]), int(config["steps"]))

    def evaluate(t_mag):
        fields = FieldConfig(ext_stress=stress_for_direction(theta, float(t_mag)))
        return [(f.label, tx_doublet_lines(f, fields, params)) for f in frames]

    results = map_ordered(evaluate, magnitudes)
    rows = []
    for t_mag, per_frame in zip(magnitudes, results):
        for label, (tx0, tx1) in per_frame:
            for line, energy in (("TX0", tx0), ("TX1", tx1)):
                rows.append(
                    (
                        _fmt(t_mag),
                        label,
                        line,
                        _fmt(energy),
                        _fmt((energy - params.e_x) * params.hz_per_ev / 1e9),
                    )
                )
    grouping = degeneracy_grouping(
        [(label, (tx0 - params.e_x) * params.hz_per_ev) for label, (tx0, _) in results[-1]],
        tolerance=float(config["tolerance_hz"]),
        field_spec=f"TX0 line at T = {magnitudes[-1]:.6g} Pa, theta = {config['direction_theta']} deg",
    )
    _emit(config, ("stress_pa", "orientation", "line", "energy_ev", "offset_ghz"), rows, grouping)


def cmd_rbr(config) -> None:
    params = ModelParams()
    frames = enumerate_orientations()
    if config.get("orientation"):
        frames_iter = (frames.by_label(config["orientation"]),)
    else:
        frames_iter = tuple(frames)
    n = int(config["grid"])
    b_mag = 1e-3 * float(config["b_mt"])
    thetas = np.linspace(0.0, 180.0, n)
    phis = np.linspace(0.0, 360.0, n)

    def evaluate(theta_deg):
        out = []
        for phi_deg in phis:
            direction = direction_from_polar(np.deg2rad(theta_deg), np.deg2rad(phi_deg))
            fields = FieldConfig(b_field=b_mag * direction)
            for frame in frames_iter:
                br = radiative_branching_ratio(frame, fields, params, config["tx_state"])
                out.append(
                    (
                        _fmt(theta_deg),
                        _fmt(phi_deg),
                        frame.label,
                        _fmt(br.rbr),
                        _fmt(br.cyclicity),
                    )
                )
        return out

    rows = [row for chunk in map_ordered(evaluate, thetas) for row in chunk]
    _emit(config, ("theta_deg", "phi_deg", "orientation", "rbr", "cyclicity"), rows, None)


_DATASET_KEYS = {
    "zeeman_rotation": {"kind", "data", "b_magnitude_t", "from_axis", "to_axis", "weight", "name"},
    "stark_sweep": {"kind", "data", "direction", "weight", "name"},
    "stress_sweep": {"kind", "data", "theta_rad", "weight", "name"},
}


def _dataset_from_config(entry: dict, override_path) -> SpectralDataset:
    kind = entry.get("kind")
    if kind not in _DATASET_KEYS:
        raise ValueError(f"unknown dataset kind {kind!r}")
    unknown = set(entry) - _DATASET_KEYS[kind]
    if unknown:
        raise ValueError(f"unknown dataset keys {sorted(unknown)} for kind {kind}")
    path = override_path or entry.get("data")
    if not path:
        raise ValueError("dataset entry is missing a 'data' CSV path")
    geometry = {"weight": float(entry.get("weight", 1.0)), "name": str(entry.get("name", ""))}
    if kind == "zeeman_rotation":
        geometry["b_magnitude"] = float(entry["b_magnitude_t"])
        geometry["from_axis"] = tuple(entry.get("from_axis", (0.0, 0.0, 1.0)))
        geometry["to_axis"] = tuple(entry.get("to_axis", (-1.0, 1.0, 0.0)))
    elif kind == "stark_sweep":
        geometry["direction"] = tuple(entry["direction"])
    else:
        geometry["theta"] = float(entry.get("theta_rad", 0.0))
    return dataset_from_csv(kind, path, **geometry)


def cmd_fit(config) -> None:
    fit_conf = config.get("fit")
    if not isinstance(fit_conf, dict):
        raise ValueError("fit requires a --config JSON with a 'fit' object")
    unknown = set(fit_conf) - {"free", "datasets", "seeds", "params"}
    if unknown:
        raise ValueError(f"unknown fit config keys {sorted(unknown)}")
    base = ModelParams().with_values(**fit_conf.get("params", {}))
    free = [
        FreeParameter(
            name=str(entry["name"]),
            start=float(entry["start"]),
            lower=float(entry.get("lower", -np.inf)),
            upper=float(entry.get("upper", np.inf)),
        )
        for entry in fit_conf.get("free", ())
    ]
    overrides = list(config.get("data") or ())
    datasets = []
    for i, entry in enumerate(fit_conf.get("datasets", ())):
        datasets.append(
            _dataset_from_config(entry, overrides[i] if i < len(overrides) else None)
        )
    problem = FitProblem(datasets=datasets, free=free, base=base)
    result = fit(problem, seeds=fit_conf.get("seeds"))
    _write_json(config.get("output"), result.as_dict())


# ----------------------------------------------------------------------
# argument plumbing

_COMMANDS = {
    "orientations": cmd_orientations,
    "zeeman": cmd_zeeman,
    "stark": cmd_stark,
    "strain": cmd_strain,
    "rbr": cmd_rbr,
    "fit": cmd_fit,
}

_DEFAULTS = {
    "orientations": {"unprimed": False},
    "zeeman": {
        "b_mt": 109.9,
        "from_axis": "0,0,1",
        "to_axis": "-1,1,0",
        "steps": 91,
        "tolerance_hz": 1e8,
    },
    "stark": {
        "direction": "1,1,0",
        "e_max": 125e3,
        "steps": 26,
        "misalign_theta": 0.0,
        "misalign_phi": 0.0,
        "stack": None,
        "tolerance_hz": 1e6,
    },
    "strain": {
        "direction_theta": 0.0,
        "t_max": -200e6,
        "steps": 21,
        "tolerance_hz": 1e6,
    },
    "rbr": {"b_mt": 250.0, "grid": 25, "tx_state": "lower", "orientation": None},
    "fit": {"fit": None, "data": None},
}

_COMMON_KEYS = {"output", "format", "grouping_output"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="txham",
        description="TX-state spectra, sweeps and fits for the silicon T centre",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with command parameters")
        p.add_argument("--output", "-o", help="output path ('-' = stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--grouping-output", dest="grouping_output",
                       help="write the grouping report JSON here (csv mode)")

    p = sub.add_parser("orientations", help="dump the 24 orientation frames as JSON")
    common(p)
    p.add_argument("--unprimed", action="store_true", default=None,
                   help="only the 12 proper rotations")

    p = sub.add_parser("zeeman", help="magnetic-field rotation sweep")
    common(p)
    p.add_argument("--b-mt", dest="b_mt", type=float, help="field magnitude in mT")
    p.add_argument("--from-axis", dest="from_axis", help="sweep start axis, e.g. 0,0,1")
    p.add_argument("--to-axis", dest="to_axis", help="sweep end axis, e.g. -1,1,0")
    p.add_argument("--steps", type=int)
    p.add_argument("--tolerance-hz", dest="tolerance_hz", type=float,
                   help="grouping tolerance (default 1e8 Hz, the PLE resolution scale)")

    p = sub.add_parser("stark", help="electric-field magnitude sweep")
    common(p)
    p.add_argument("--direction", help="nominal field direction, e.g. 1,1,0")
    p.add_argument("--e-max", dest="e_max", type=float, help="maximum field in V/m")
    p.add_argument("--steps", type=int)
    p.add_argument("--misalign-theta", dest="misalign_theta", type=float,
                   help="polar misalignment in degrees")
    p.add_argument("--misalign-phi", dest="misalign_phi", type=float,
                   help="azimuthal misalignment in degrees")
    p.add_argument("--stack", help="dielectric stack JSON; corrects the applied field")
    p.add_argument("--tolerance-hz", dest="tolerance_hz", type=float)

    p = sub.add_parser("strain", help="uniaxial stress sweep")
    common(p)
    p.add_argument("--direction-theta", dest="direction_theta", type=float,
                   help="load polar angle from [001] in degrees (0=[001], 90=[110])")
    p.add_argument("--t-max", dest="t_max", type=float,
                   help="maximum stress in Pa (negative = compression)")
    p.add_argument("--steps", type=int)
    p.add_argument("--tolerance-hz", dest="tolerance_hz", type=float)

    p = sub.add_parser("rbr", help="radiative branching ratio over field directions")
    common(p)
    p.add_argument("--b-mt", dest="b_mt", type=float)
    p.add_argument("--grid", type=int, help="grid points per angle")
    p.add_argument("--tx-state", dest="tx_state", choices=("lower", "upper"))
    p.add_argument("--orientation", help="restrict to one orientation label")

    p = sub.add_parser("fit", help="fit model parameters to spectral data")
    common(p)
    p.add_argument("--data", nargs="*", help="override dataset CSV paths in order")

    return parser


def _merge_config(args: argparse.Namespace) -> dict:
    command = args.command
    merged = dict(_DEFAULTS[command])
    merged.update({"output": None, "format": "csv", "grouping_output": None})
    if command == "orientations":
        merged["format"] = "json"

    if args.config:
        with open(args.config) as fh:
            file_conf = json.load(fh)
        if not isinstance(file_conf, dict):
            raise ValueError("config file must contain a JSON object")
        allowed = set(_DEFAULTS[command]) | _COMMON_KEYS
        unknown = set(file_conf) - allowed
        if unknown:
            raise ValueError(
                f"unknown config keys {sorted(unknown)} for command {command!r}"
            )
        merged.update(file_conf)

    for key in list(merged):
        flag_val = getattr(args, key, None)
        if flag_val is not None:
            merged[key] = flag_val
    return merged


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _merge_config(args)
        _COMMANDS[args.command](config)
    except (TxModelError, ValueError, KeyError, OSError) as exc:
        json.dump(
            {"error": type(exc).__name__, "message": str(exc)},
            sys.stderr,
        )
        sys.stderr.write("\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
