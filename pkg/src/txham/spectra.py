"""Optical observables of the TX0 <-> ground transition.

Transition energies are referenced so that the zero-field, zero-stress
TX0 doublet sits exactly at the fitted transition energy e_x; magnetic
fields split the four lines A-D, electric fields add the scalar Stark
shifts, applied stress moves the TX0/TX1 doublets and adds the
piezospectroscopic shift.

Line naming convention: A and B terminate on the upper TX0 Zeeman level,
C and D on the lower one; A and C start from the lower electron ground
level, B and D from the upper.  Hence B - D = A - C is the hole splitting
(positive) and A - B = C - D = g_e mu_B |B| is the electron splitting.
The physical observables (splittings, groupings) are label-independent.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import (
    DegenerateAxesError,
    InvalidStackError,
    ManifoldOverlapError,
    ZeroFieldError,
    ZeroTotalRateError,
)
from .hamiltonian import (
    FieldConfig,
    ModelParams,
    assemble_tx_hamiltonian,
    ground_zeeman_splitting,
    h_strain,
    internal_strain_tensor,
    stark_shift_linear,
    stark_shift_quadratic,
)
from .linalg import eig_hermitian_4
from .orientations import OrientationFrame, OrientationSet, enumerate_orientations, field_transform

EPSILON_0 = 8.8541878128e-12  # F/m

LINE_NAMES = ("A", "B", "C", "D")


class TransitionLine(NamedTuple):
    name: str
    energy_ev: float
    offset_hz: float  # relative to the zero-field transition energy e_x


@dataclass(frozen=True)
class TransitionSet:
    """The four optical lines of one orientation under given fields."""

    orientation: str
    lines: tuple

    def energy(self, name: str) -> float:
        for line in self.lines:
            if line.name == name:
                return line.energy_ev
        raise KeyError(name)

    def offset(self, name: str) -> float:
        for line in self.lines:
            if line.name == name:
                return line.offset_hz
        raise KeyError(name)

    @property
    def hole_splitting_ev(self) -> float:
        return self.energy("B") - self.energy("D")

    @property
    def electron_splitting_ev(self) -> float:
        return self.energy("A") - self.energy("B")


class RotationStep(NamedTuple):
    angle_rad: float
    transitions: tuple  # one TransitionSet per orientation


class StarkStep(NamedTuple):
    e_magnitude: float
    shifts: tuple  # (label, total shift in Hz) per orientation


@dataclass(frozen=True)
class Group:
    members: tuple
    representative: float


@dataclass(frozen=True)
class GroupingReport:
    field_spec: str
    groups: tuple
    tolerance: float

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    def members_of(self, index: int) -> tuple:
        return self.groups[index].members


@dataclass(frozen=True)
class DielectricLayer:
    name: str
    epsilon_r: float
    thickness_m: float


@dataclass(frozen=True)
class DielectricStack:
    """Series stack of dielectric layers between the electrodes."""

    layers: tuple
    sample_index: int


class EffectiveField(NamedTuple):
    v_sample: float
    e_sample: float


def map_ordered(fn, items):
    """Map preserving order; TXH_THREADS > 1 enables thread parallelism."""
    items = list(items)
    try:
        workers = int(os.environ.get("TXH_THREADS", "1"))
    except ValueError:
        workers = 1
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


@lru_cache(maxsize=256)
def zero_field_tx0_energy(p: ModelParams) -> float:
    """TX0 doublet energy of the bare defect potential; the reference that
    places the unperturbed transition at e_x.  Cached per parameter record
    (frame independent: congruence preserves the spectrum)."""
    h = h_strain(internal_strain_tensor(p), p)
    return float(eig_hermitian_4(h).values[0])


def tx_manifold_levels(frame: OrientationFrame, fields: FieldConfig, p: ModelParams):
    """Eigenvalues of the TX Hamiltonian split into (TX0 pair, TX1 pair).

    Raises ManifoldOverlapError when the inter-manifold gap is smaller
    than either intra-doublet splitting.
    """
    values = eig_hermitian_4(assemble_tx_hamiltonian(frame, fields, p)).values
    gap = values[2] - values[1]
    if gap < values[1] - values[0] or gap < values[3] - values[2]:
        raise ManifoldOverlapError(
            f"TX0/TX1 windows interleave for {frame.label}: eigenvalues {values}"
        )
    return values[:2], values[2:]


def transition_set(frame: OrientationFrame, fields: FieldConfig, p: ModelParams) -> TransitionSet:
    """Compute the four optical lines A-D of one orientation."""
    tx0, _ = tx_manifold_levels(frame, fields, p)
    reference = zero_field_tx0_energy(p)
    delta_e = ground_zeeman_splitting(fields.b_field, p)
    e_defect = field_transform(frame, fields.e_field)
    stark_ev = (
        stark_shift_linear(e_defect, p) + stark_shift_quadratic(e_defect, p)
    ) / p.hz_per_ev
    lower, upper = tx0[0] - reference, tx0[1] - reference
    energies = {
        "A": p.e_x + upper + 0.5 * delta_e + stark_ev,
        "B": p.e_x + upper - 0.5 * delta_e + stark_ev,
        "C": p.e_x + lower + 0.5 * delta_e + stark_ev,
        "D": p.e_x + lower - 0.5 * delta_e + stark_ev,
    }
    lines = tuple(
        TransitionLine(name, energies[name], (energies[name] - p.e_x) * p.hz_per_ev)
        for name in LINE_NAMES
    )
    return TransitionSet(orientation=frame.label, lines=lines)


def tx_doublet_lines(frame: OrientationFrame, fields: FieldConfig, p: ModelParams):
    """Zero-Zeeman line positions (eV) of the TX0 and TX1 doublets,
    including any stress response; useful for stress sweeps where B = 0."""
    tx0, tx1 = tx_manifold_levels(frame, fields, p)
    reference = zero_field_tx0_energy(p)
    return p.e_x + tx0[0] - reference, p.e_x + tx1[0] - reference


def hole_g_factor(ts: TransitionSet, b_magnitude: float, p: ModelParams) -> float:
    """Effective TX0 g-factor |B - D| / (mu_B |B|) from the line energies."""
    if b_magnitude <= 0.0:
        raise ZeroFieldError("hole g-factor requires |B| > 0")
    return abs(ts.hole_splitting_ev) / (p.mu_b * b_magnitude)


def _unit(v: np.ndarray, what: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise DegenerateAxesError(f"{what} must be nonzero")
    return v / norm


def great_circle_basis(axis_from, axis_to):
    """Orthonormal basis (u, w) of the sweep plane: u along axis_from and
    w the in-plane normal towards axis_to, so a sweep angle a maps to the
    direction cos(a) u + sin(a) w."""
    u = _unit(axis_from, "axis_from")
    t = _unit(axis_to, "axis_to")
    perp = t - (t @ u) * u
    if np.linalg.norm(perp) < 1e-12:
        raise DegenerateAxesError("sweep axes are parallel")
    return u, perp / np.linalg.norm(perp)


def great_circle_directions(axis_from, axis_to, n_steps: int):
    """Unit vectors interpolating the great circle from axis_from towards
    axis_to, with the (angle, direction) list inclusive of both ends."""
    u, w = great_circle_basis(axis_from, axis_to)
    t = _unit(axis_to, "axis_to")
    total = float(np.arccos(np.clip(u @ t, -1.0, 1.0)))
    angles = np.linspace(0.0, total, n_steps)
    return [(float(a), np.cos(a) * u + np.sin(a) * w) for a in angles]


def field_rotation_sweep(
    axis_from,
    axis_to,
    n_steps: int,
    b_magnitude: float,
    p: ModelParams,
    orientations: OrientationSet | None = None,
) -> list:
    """Transition sets of every orientation while B rotates on the great
    circle from axis_from towards axis_to."""
    frames = orientations or enumerate_orientations()
    steps = great_circle_directions(axis_from, axis_to, n_steps)

    def evaluate(step):
        angle, direction = step
        fields = FieldConfig(b_field=b_magnitude * direction)
        return RotationStep(
            angle_rad=angle,
            transitions=tuple(transition_set(f, fields, p) for f in frames),
        )

    return map_ordered(evaluate, steps)


def direction_from_polar(theta: float, phi: float) -> np.ndarray:
    """Unit vector at polar angle theta from +z and azimuth phi from +x."""
    return np.array(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
    )


def polar_of_direction(v) -> tuple[float, float]:
    u = _unit(v, "direction")
    theta = float(np.arccos(np.clip(u[2], -1.0, 1.0)))
    phi = float(np.arctan2(u[1], u[0])) if abs(u[2]) < 1.0 else 0.0
    return theta, phi


def total_stark_shift(frame: OrientationFrame, e_field, p: ModelParams) -> float:
    """Linear plus quadratic Stark shift (Hz) for a crystal-frame E field."""
    e_defect = field_transform(frame, np.asarray(e_field, dtype=float))
    return stark_shift_linear(e_defect, p) + stark_shift_quadratic(e_defect, p)


def stark_sweep(
    direction,
    e_max: float,
    n_steps: int,
    p: ModelParams,
    misalignment: tuple[float, float] = (0.0, 0.0),
    orientations: OrientationSet | None = None,
) -> list:
    """Per-orientation total Stark shift versus field magnitude.

    The nominal direction is tilted by the misalignment angles
    (delta polar, delta azimuth) in spherical coordinates about the
    crystal z axis before sweeping |E| from 0 to e_max.
    """
    frames = orientations or enumerate_orientations()
    theta, phi = polar_of_direction(direction)
    actual = direction_from_polar(theta + misalignment[0], phi + misalignment[1])
    magnitudes = np.linspace(0.0, e_max, n_steps)

    def evaluate(e_mag):
        shifts = tuple(
            (f.label, total_stark_shift(f, e_mag * actual, p)) for f in frames
        )
        return StarkStep(e_magnitude=float(e_mag), shifts=shifts)

    return map_ordered(evaluate, magnitudes)


def degeneracy_grouping(values, tolerance: float, field_spec: str = "") -> GroupingReport:
    """Single-linkage clustering of labelled scalar values.

    Labels whose sorted values are separated by gaps <= tolerance join one
    group; groups come out ordered by representative (mean) value and
    members are sorted alphabetically, so the report is invariant under
    input permutation.
    """
    if tolerance <= 0.0:
        raise ValueError("tolerance must be positive")
    items = sorted(values, key=lambda kv: (kv[1], kv[0]))
    if not items:
        return GroupingReport(field_spec=field_spec, groups=(), tolerance=tolerance)
    clusters = [[items[0]]]
    for label, value in items[1:]:
        if value - clusters[-1][-1][1] <= tolerance:
            clusters[-1].append((label, value))
        else:
            clusters.append([(label, value)])
    groups = tuple(
        Group(
            members=tuple(sorted(lab for lab, _ in cluster)),
            representative=float(np.mean([v for _, v in cluster])),
        )
        for cluster in clusters
    )
    return GroupingReport(field_spec=field_spec, groups=groups, tolerance=tolerance)


class BranchingRatio(NamedTuple):
    rbr: float
    cyclicity: float


def _tx0_vectors(frame: OrientationFrame, fields: FieldConfig, p: ModelParams):
    system = eig_hermitian_4(assemble_tx_hamiltonian(frame, fields, p))
    values = system.values
    gap = values[2] - values[1]
    if gap < values[1] - values[0] or gap < values[3] - values[2]:
        raise ManifoldOverlapError("TX0/TX1 windows interleave")
    return system.vectors[:, 0], system.vectors[:, 1]


def radiative_branching_ratio(
    frame: OrientationFrame,
    fields: FieldConfig,
    p: ModelParams,
    tx_state: str = "lower",
) -> BranchingRatio:
    """Branching of radiative decay from one TX0 Zeeman state.

    The electron ground spin states embed as the m_j = +-1/2 basis columns
    (up = +1/2) and the dipole operator is the identity in this basis, so
    the relative rates are the squared +-1/2 amplitudes of the chosen TX0
    eigenvector.  rbr is the fraction decaying through the transition that
    terminates on the upper (+1/2) ground level; 1/(1 - rbr) is the
    cyclicity of that transition.
    """
    if not np.any(np.asarray(fields.b_field) != 0.0):
        raise ZeroFieldError("branching ratio requires |B| > 0 to split the spin states")
    lower, upper = _tx0_vectors(frame, fields, p)
    vec = {"lower": lower, "upper": upper}[tx_state]
    t_b = float(abs(vec[1]) ** 2)  # +1/2 component
    t_a = float(abs(vec[2]) ** 2)  # -1/2 component
    total = t_a + t_b
    if total == 0.0:
        raise ZeroTotalRateError("both spin-1/2 projections vanish")
    rbr = t_b / total
    cyclicity = float("inf") if rbr >= 1.0 else 1.0 / (1.0 - rbr)
    return BranchingRatio(rbr=rbr, cyclicity=cyclicity)


class SpinComposition(NamedTuple):
    w_half: float
    w_three_half: float


def eigenvector_composition(
    frame: OrientationFrame, fields: FieldConfig, p: ModelParams
) -> tuple[SpinComposition, SpinComposition]:
    """Summed |m_j| = 1/2 and 3/2 weights of the two TX0 eigenvectors."""
    out = []
    for vec in _tx0_vectors(frame, fields, p):
        w_half = float(abs(vec[1]) ** 2 + abs(vec[2]) ** 2)
        w_three = float(abs(vec[0]) ** 2 + abs(vec[3]) ** 2)
        out.append(SpinComposition(w_half=w_half, w_three_half=w_three))
    return tuple(out)


def effective_field(stack: DielectricStack, v_total: float) -> EffectiveField:
    """Voltage and field reaching the sample layer of a series dielectric
    stack driven with v_total across the electrodes."""
    if not stack.layers:
        raise InvalidStackError("stack has no layers")
    if not 0 <= stack.sample_index < len(stack.layers):
        raise InvalidStackError(f"sample_index {stack.sample_index} out of range")
    for layer in stack.layers:
        if layer.thickness_m <= 0.0:
            raise InvalidStackError(f"layer {layer.name!r} has nonpositive thickness")
        if layer.epsilon_r < 1.0:
            raise InvalidStackError(f"layer {layer.name!r} has permittivity < 1")
    caps = [EPSILON_0 * l.epsilon_r / l.thickness_m for l in stack.layers]
    c_total = 1.0 / sum(1.0 / c for c in caps)
    c_sample = caps[stack.sample_index]
    v_sample = v_total * c_total / c_sample
    return EffectiveField(
        v_sample=v_sample,
        e_sample=v_sample / stack.layers[stack.sample_index].thickness_m,
    )
