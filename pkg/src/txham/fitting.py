"""Weighted nonlinear least-squares recovery of Hamiltonian parameters.

Datasets are spectral line positions versus a single control variable
(magnetic-field angle, electric field, or uniaxial stress).  Points may
carry orientation/line tags; untagged observations are matched to the
nearest predicted line, greedily and independently per point, recomputed
at every objective evaluation.

The minimizer is scipy's bounded trust-region least squares; any local
minimizer honouring the same convergence thresholds would do.  Reported
uncertainties come from the finite-difference Jacobian at the solution via
the linearized covariance (J^T J)^-1 scaled by the reduced chi-square.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .errors import UnsupportedKindError
from .hamiltonian import FieldConfig, ModelParams
from .orientations import enumerate_orientations
from .spectra import (
    direction_from_polar,
    great_circle_basis,
    polar_of_direction,
    total_stark_shift,
    transition_set,
    tx_doublet_lines,
)
from .elasticity import stress_for_direction

DATASET_KINDS = ("zeeman_rotation", "stark_sweep", "stress_sweep")

_MODEL_PARAM_NAMES = (
    "b", "d", "eps_yy_p", "eps_zz_p", "theta_p",
    "g1", "g2", "g_e",
    "a_x", "a_y", "alpha_xx", "alpha_xy", "alpha_yy", "alpha_zz",
    "e_x", "a1", "a2", "a3", "a4", "s11", "s12", "s44",
)

# finite-difference step for the covariance Jacobian
_FD_REL = 1e-6
_FD_ABS = 1e-12


@dataclass
class DataPoint:
    control: float
    value: float
    sigma: float
    orientation: str | None = None
    line: str | None = None


@dataclass
class SpectralDataset:
    """One spectral dataset plus the sweep geometry it was taken under."""

    kind: str
    points: list
    b_magnitude: float = 0.0
    from_axis: tuple = (0.0, 0.0, 1.0)
    to_axis: tuple = (-1.0, 1.0, 0.0)
    direction: tuple = (1.0, 1.0, 0.0)
    theta: float = 0.0
    weight: float = 1.0
    name: str = ""

    def __post_init__(self):
        if self.kind not in DATASET_KINDS:
            raise UnsupportedKindError(f"unknown dataset kind {self.kind!r}")
        if not self.points:
            raise ValueError("dataset has no points")
        for i, pt in enumerate(self.points):
            if pt.sigma <= 0.0:
                raise ValueError(f"point {i}: sigma must be positive")


@dataclass
class FreeParameter:
    name: str
    start: float
    lower: float = -math.inf
    upper: float = math.inf


@dataclass
class FitProblem:
    datasets: list
    free: list
    base: ModelParams = field(default_factory=ModelParams)

    def __post_init__(self):
        names = [f.name for f in self.free]
        if len(set(names)) != len(names):
            raise ValueError("free parameter names must be distinct")
        allowed = set(_MODEL_PARAM_NAMES)
        for i in range(len(self.datasets)):
            allowed.add(f"dtheta_{i}")
            allowed.add(f"dphi_{i}")
        for f in self.free:
            if f.name not in allowed:
                raise ValueError(f"unknown free parameter {f.name!r}")
            if not (f.lower <= f.start <= f.upper):
                raise ValueError(f"start of {f.name!r} outside its bounds")


@dataclass
class FitResult:
    names: tuple
    best: dict
    sigma: dict | None
    residual_rms: float
    n_evaluations: int
    converged: bool
    assignments: list

    def as_dict(self) -> dict:
        return {
            "parameters": {k: self.best[k] for k in self.names},
            "sigma": None if self.sigma is None else {k: self.sigma[k] for k in self.names},
            "residual_rms": self.residual_rms,
            "n_evaluations": self.n_evaluations,
            "converged": self.converged,
            "assignments": self.assignments,
        }


def _apply_free(base: ModelParams, names, values):
    """Split free-parameter values into a ModelParams and per-dataset
    misalignment angles."""
    model_kwargs = {}
    misalign: dict[int, list] = {}
    for name, value in zip(names, values):
        if name.startswith("dtheta_") or name.startswith("dphi_"):
            key, idx = name.rsplit("_", 1)
            entry = misalign.setdefault(int(idx), [0.0, 0.0])
            entry[0 if key == "dtheta" else 1] = float(value)
        else:
            model_kwargs[name] = float(value)
    return base.with_values(**model_kwargs), misalign


def predict_dataset(dataset: SpectralDataset, params: ModelParams,
                    misalignment=(0.0, 0.0), orientations=None):
    """Model values for every point of a dataset.

    Returns (predictions, assignments) where assignments records the
    (orientation, line) each observation was matched to.
    """
    frames = orientations or enumerate_orientations()
    tagged_labels = {pt.orientation for pt in dataset.points}
    if None not in tagged_labels:
        # fully tagged data only needs the frames it names
        frames = [f for f in frames if f.label in tagged_labels]
        missing = tagged_labels - {f.label for f in frames}
        if missing:
            raise KeyError(f"unknown orientation tags {sorted(missing)}")
    if dataset.kind == "zeeman_rotation":
        tables = _zeeman_tables(dataset, params, frames)
    elif dataset.kind == "stark_sweep":
        tables = _stark_tables(dataset, params, misalignment, frames)
    elif dataset.kind == "stress_sweep":
        tables = _stress_tables(dataset, params, frames)
    else:  # unreachable; __post_init__ validates
        raise UnsupportedKindError(dataset.kind)

    predictions = np.empty(len(dataset.points))
    assignments = []
    for i, pt in enumerate(dataset.points):
        table = tables[pt.control]
        if pt.orientation is not None and pt.line is not None:
            key = (pt.orientation, pt.line)
            if key not in table:
                raise KeyError(f"no predicted line for tag {key}")
        else:
            # nearest predicted line, optionally restricted to the tagged
            # orientation; recomputed greedily at every evaluation
            candidates = [
                k for k in table if pt.orientation in (None, k[0])
            ]
            if not candidates:
                raise KeyError(f"unknown orientation tag {pt.orientation!r}")
            key = min(candidates, key=lambda k: abs(table[k] - pt.value))
        predictions[i] = table[key]
        assignments.append(key)
    return predictions, assignments


def _zeeman_tables(dataset, params, frames):
    angles = sorted({pt.control for pt in dataset.points})
    u_dir, w_dir = great_circle_basis(dataset.from_axis, dataset.to_axis)
    tables = {}
    for angle in angles:
        direction = np.cos(angle) * u_dir + np.sin(angle) * w_dir
        fields = FieldConfig(b_field=dataset.b_magnitude * direction)
        table = {}
        for frame in frames:
            ts = transition_set(frame, fields, params)
            for line in ts.lines:
                table[(frame.label, line.name)] = line.energy_ev
        tables[angle] = table
    return tables


def _stark_tables(dataset, params, misalignment, frames):
    theta, phi = polar_of_direction(np.asarray(dataset.direction, dtype=float))
    actual = direction_from_polar(theta + misalignment[0], phi + misalignment[1])
    tables = {}
    for e_mag in sorted({pt.control for pt in dataset.points}):
        tables[e_mag] = {
            (frame.label, None): total_stark_shift(frame, e_mag * actual, params)
            for frame in frames
        }
    return tables


def _stress_tables(dataset, params, frames):
    tables = {}
    for t_mag in sorted({pt.control for pt in dataset.points}):
        sigma = stress_for_direction(dataset.theta, t_mag)
        fields = FieldConfig(ext_stress=sigma)
        table = {}
        for frame in frames:
            tx0, tx1 = tx_doublet_lines(frame, fields, params)
            table[(frame.label, "TX0")] = tx0
            table[(frame.label, "TX1")] = tx1
        tables[t_mag] = table
    return tables


def residuals(problem: FitProblem, values, orientations=None) -> np.ndarray:
    """Weighted residual vector (pred - obs)/sigma over all datasets."""
    names = [f.name for f in problem.free]
    params, misalign = _apply_free(problem.base, names, values)
    frames = orientations or enumerate_orientations()
    chunks = []
    for idx, ds in enumerate(problem.datasets):
        pred, _ = predict_dataset(ds, params, tuple(misalign.get(idx, (0.0, 0.0))), frames)
        obs = np.array([pt.value for pt in ds.points])
        sig = np.array([pt.sigma for pt in ds.points])
        chunks.append(np.sqrt(ds.weight) * (pred - obs) / sig)
    return np.concatenate(chunks)


def objective(problem: FitProblem, values) -> float:
    """Weighted sum of squared residuals."""
    r = residuals(problem, values)
    return float(r @ r)


def _fd_jacobian(problem, values, frames):
    base_r = residuals(problem, values, frames)
    jac = np.empty((base_r.size, len(values)))
    for k, v in enumerate(values):
        step = max(_FD_REL * abs(v), _FD_ABS)
        shifted = np.array(values, dtype=float)
        shifted[k] = v + step
        jac[:, k] = (residuals(problem, shifted, frames) - base_r) / step
    return jac, base_r


def fit(problem: FitProblem, seeds=None, max_nfev: int | None = None) -> FitResult:
    """Bounded local least-squares fit with optional multi-start.

    Convergence follows ftol = 1e-10 on the relative cost decrease and
    xtol = 1e-12 on the step norm.  When seeds are given, each seed
    perturbs the start vector and the lowest-cost solution is kept.
    """
    frames = enumerate_orientations()
    names = tuple(f.name for f in problem.free)
    x0 = np.array([f.start for f in problem.free], dtype=float)
    lower = np.array([f.lower for f in problem.free])
    upper = np.array([f.upper for f in problem.free])
    scales = np.array([_parameter_scale(f) for f in problem.free])

    def run(x_start):
        return least_squares(
            lambda x: residuals(problem, x, frames),
            np.clip(x_start, lower, upper),
            bounds=(lower, upper),
            method="trf",
            ftol=1e-10,
            xtol=1e-12,
            gtol=1e-14,
            diff_step=_FD_REL,
            x_scale=scales,
            max_nfev=max_nfev,
        )

    starts = [x0]
    for seed in seeds or ():
        rng = np.random.default_rng(seed)
        starts.append(x0 + 0.05 * scales * rng.standard_normal(len(x0)))

    best_sol = None
    n_evaluations = 0
    for x_start in starts:
        sol = run(x_start)
        n_evaluations += sol.nfev
        if best_sol is None or sol.cost < best_sol.cost:
            best_sol = sol

    converged = bool(best_sol.status > 0)
    jac, final_r = _fd_jacobian(problem, best_sol.x, frames)
    n_points = final_r.size
    n_free = len(names)
    dof = max(n_points - n_free, 1)
    chi2_red = float(final_r @ final_r) / dof
    sigma = None
    try:
        cov = np.linalg.inv(jac.T @ jac) * chi2_red
        diag = np.diag(cov)
        if np.all(np.isfinite(diag)) and np.all(diag >= 0.0):
            sigma = {name: float(np.sqrt(dv)) for name, dv in zip(names, diag)}
    except np.linalg.LinAlgError:
        sigma = None

    params, misalign = _apply_free(problem.base, names, best_sol.x)
    assignments = []
    for idx, ds in enumerate(problem.datasets):
        _, assign = predict_dataset(ds, params, tuple(misalign.get(idx, (0.0, 0.0))), frames)
        assignments.append([list(a) for a in assign])

    return FitResult(
        names=names,
        best={name: float(v) for name, v in zip(names, best_sol.x)},
        sigma=sigma,
        residual_rms=float(np.sqrt(np.mean(final_r**2))),
        n_evaluations=n_evaluations,
        converged=converged,
        assignments=assignments,
    )


def _parameter_scale(f: FreeParameter) -> float:
    scale = abs(f.start)
    if scale == 0.0 and math.isfinite(f.lower) and math.isfinite(f.upper):
        scale = 0.01 * max(abs(f.lower), abs(f.upper))
    return max(scale, 1e-12)


# ----------------------------------------------------------------------
# synthetic data and CSV interchange

_CSV_COLUMNS = {
    "zeeman_rotation": ("angle_rad", "energy_ev", "sigma_ev"),
    "stark_sweep": ("e_v_per_m", "shift_hz", "sigma_hz"),
    "stress_sweep": ("stress_pa", "energy_ev", "sigma_ev"),
}


def synthesize_dataset(
    kind: str,
    params: ModelParams,
    controls,
    sigma: float,
    labels=("z0", "z1", "y0", "x0"),
    lines=("B", "D"),
    rng: np.random.Generator | None = None,
    tagged: bool = True,
    **geometry,
) -> SpectralDataset:
    """Generate a model-exact dataset, optionally with Gaussian noise.

    geometry carries the kind-specific sweep metadata (b_magnitude and
    axes, direction, or theta)."""
    if kind == "zeeman_rotation":
        line_names = list(lines)
    elif kind == "stress_sweep":
        line_names = [ln for ln in lines if ln in ("TX0", "TX1")] or ["TX0", "TX1"]
    else:
        line_names = [None]
    probe = SpectralDataset(
        kind=kind,
        points=[
            DataPoint(float(c), 0.0, sigma, orientation=lab, line=ln)
            for c in controls
            for lab in labels
            for ln in line_names
        ],
        **geometry,
    )
    pred, _ = predict_dataset(probe, params)
    for pt, value in zip(probe.points, pred):
        noise = float(rng.normal(0.0, sigma)) if rng is not None else 0.0
        pt.value = value + noise
        if not tagged:
            pt.orientation = None
            pt.line = None
    return probe


def dataset_to_csv(dataset: SpectralDataset, path) -> None:
    cols = _CSV_COLUMNS[dataset.kind]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(cols) + ["orientation", "line"])
        for pt in dataset.points:
            writer.writerow(
                [
                    f"{pt.control:.17g}",
                    f"{pt.value:.17g}",
                    f"{pt.sigma:.17g}",
                    pt.orientation or "",
                    pt.line or "",
                ]
            )


def dataset_from_csv(kind: str, path, **geometry) -> SpectralDataset:
    """Read points for a dataset of the given kind; raises ValueError
    naming the offending row and column on malformed input."""
    if kind not in _CSV_COLUMNS:
        raise UnsupportedKindError(f"unknown dataset kind {kind!r}")
    cols = _CSV_COLUMNS[kind]
    points = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: missing header row")
        for col in cols:
            if col not in reader.fieldnames:
                raise ValueError(f"{path}: missing column {col!r}")
        for row_no, row in enumerate(reader, start=2):
            values = []
            for col in cols:
                try:
                    values.append(float(row[col]))
                except (TypeError, ValueError):
                    raise ValueError(
                        f"{path}: row {row_no}, column {col!r}: "
                        f"cannot parse {row.get(col)!r}"
                    ) from None
            orientation = (row.get("orientation") or "").strip() or None
            line = (row.get("line") or "").strip() or None
            points.append(DataPoint(values[0], values[1], values[2], orientation, line))
    return SpectralDataset(kind=kind, points=points, **geometry)
