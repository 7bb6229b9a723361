"""Terms and assembly of the TX bound-exciton Hamiltonian.

The TX hole is treated as a shallow acceptor (J = 3/2, Luttinger-Kohn
basis).  The defect potential enters as an effective internal strain with
deformation potentials b (tetragonal) and d (trigonal):

    H_s(eps) = b * sum_i (J_i^2 - 1) eps_ii
             + (d/sqrt(3)) * sum_{i != j} {J_i, J_j}/2 * eps_ij

External stress adds the same operator for the induced strain plus a
hydrostatic trace term and a scalar piezospectroscopic shift.  A magnetic
field couples as mu_B (g1 B.J + g2 sum_i B_i J_i^3).  Electric fields act
as scalar shifts of the transition energy (linear dipole + polarizability
in the defect dipole frame) and are applied at the spectra level, not
inside the 4x4 matrix; an operator-valued quadratic Stark variant for the
loosely-bound hole is provided separately for model comparison.

Assembly evaluates every orientation in its own defect coordinates:
applied fields and stresses are rotated into the frame with the inverse
orientation rotation while the internal strain tensor keeps its identity
representation.  This is spectrally identical to rotating the defect
tensor out to the crystal frame and keeping fields fixed (the tests
exercise both routes against each other).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .angular import build_j_operators, j_cubed, sym_product
from .elasticity import (
    ComplianceConstants,
    PiezoTensorParams,
    piezo_shift,
    stress_to_strain,
)
from .errors import NonSymmetricStrainError
from .linalg import symmetry_defect
from .orientations import OrientationFrame, applied_tensor_to_defect, field_transform

# fixed physical constants (CODATA)
MU_B_EV_PER_T = 5.78838180e-5
HZ_PER_EV = 2.41798924e14

_J = build_j_operators()
_I4 = np.eye(4, dtype=complex)
_JSQ = tuple(j @ j for j in _J)
_JCUBE = tuple(j_cubed(ax, _J) for ax in "xyz")
_JSYM = {(i, k): sym_product(_J.axis("xyz"[i]), _J.axis("xyz"[k]))
         for i in range(3) for k in range(3) if i != k}


@dataclass(frozen=True)
class ModelParams:
    """Fitted parameter record of the TX Hamiltonian plus fixed constants.

    Deformation potentials are stored signed (negative for this defect);
    g-factors are stored with the fitted magnitudes and positive sign, the
    observables used downstream are sign-insensitive splittings.
    """

    b: float = -1.68                  # eV, tetragonal deformation potential
    d: float = -2.52                  # eV, trigonal deformation potential
    eps_yy_p: float = -4.2e-4         # in-plane principal defect strain
    eps_zz_p: float = -6.5e-4         # in-plane principal defect strain
    theta_p: float = np.deg2rad(-7.5)  # rad, principal-axes tilt about x'
    g1: float = 1.23                  # linear hole g-factor
    g2: float = 0.004                 # cubic hole g-factor
    g_e: float = 2.005                # isotropic electron g-factor
    a_x: float = 3596.0               # Hz m/V, in-plane linear Stark dipole
    a_y: float = 7519.0               # Hz m/V, out-of-axis linear Stark dipole
    alpha_xx: float = 0.123           # Hz m^2/V^2, polarizability components
    alpha_xy: float = 0.000
    alpha_yy: float = 0.106
    alpha_zz: float = 0.002
    piezo: PiezoTensorParams = field(default_factory=PiezoTensorParams)
    compliance: ComplianceConstants = field(default_factory=ComplianceConstants)
    e_x: float = 0.93557              # eV, zero-field T0 -> TX0 energy
    mu_b: float = MU_B_EV_PER_T       # eV/T
    hz_per_ev: float = HZ_PER_EV      # Hz/eV

    @property
    def a_hydro(self) -> float:
        """Hydrostatic deformation parameter, fixed to -b/4."""
        return -self.b / 4.0

    def with_values(self, **kwargs) -> "ModelParams":
        """Copy with named fields replaced (piezo components addressable
        as a1..a4, compliance as s11/s12/s44)."""
        piezo_keys = {k: kwargs.pop(k) for k in ("a1", "a2", "a3", "a4") if k in kwargs}
        comp_keys = {k: kwargs.pop(k) for k in ("s11", "s12", "s44") if k in kwargs}
        out = replace(self, **kwargs) if kwargs else self
        if piezo_keys:
            out = replace(out, piezo=replace(out.piezo, **piezo_keys))
        if comp_keys:
            out = replace(out, compliance=replace(out.compliance, **comp_keys))
        return out

    def lookup(self, name: str) -> float:
        """Read a scalar parameter by name, including piezo/compliance parts."""
        if name in ("a1", "a2", "a3", "a4"):
            return getattr(self.piezo, name)
        if name in ("s11", "s12", "s44"):
            return getattr(self.compliance, name)
        return getattr(self, name)


@dataclass(frozen=True)
class FieldConfig:
    """External fields in the crystal frame: B in tesla, E in V/m, stress in Pa."""

    b_field: np.ndarray = field(default_factory=lambda: np.zeros(3))
    e_field: np.ndarray = field(default_factory=lambda: np.zeros(3))
    ext_stress: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "b_field", np.asarray(self.b_field, dtype=float))
        object.__setattr__(self, "e_field", np.asarray(self.e_field, dtype=float))
        if self.ext_stress is not None:
            object.__setattr__(self, "ext_stress", np.asarray(self.ext_stress, dtype=float))


@dataclass(frozen=True)
class CubicStarkParams:
    """Cubic coupling parameters of the operator-valued quadratic Stark
    model for the loosely-bound hole (eV m^2/V^2); no fitted defaults."""

    alpha_c: float = 0.0
    beta_c: float = 0.0
    gamma_c: float = 0.0


def internal_strain_tensor(p: ModelParams) -> np.ndarray:
    """Defect-potential strain tensor of the identity orientation in
    crystal coordinates.

    The principal frame has x' = [1,-1,0]/sqrt(2) normal to the defect
    plane and carries no strain; the in-plane principal axes start at
    y' = [110]/sqrt(2) and z' = [001] and are tilted by theta_p about x'
    (negative theta_p tilts z' towards the hydrogen atom).
    """
    yp = np.array([1.0, 1.0, 0.0]) / np.sqrt(2.0)
    zp = np.array([0.0, 0.0, 1.0])
    c, s = np.cos(p.theta_p), np.sin(p.theta_p)
    ypp = c * yp + s * zp
    zpp = -s * yp + c * zp
    return p.eps_yy_p * np.outer(ypp, ypp) + p.eps_zz_p * np.outer(zpp, zpp)


def h_strain(eps: np.ndarray, p: ModelParams, include_hydro: bool = False) -> np.ndarray:
    """Acceptor strain coupling for a crystal-frame strain tensor.

    With ``include_hydro`` the hydrostatic term -a * tr(eps) * 1 with
    a = -b/4 is added on top, as used for externally applied strain.
    """
    eps = np.asarray(eps, dtype=float)
    scale = max(float(np.max(np.abs(eps))), np.finfo(float).tiny)
    if symmetry_defect(eps) > 1e-9 * scale:
        raise NonSymmetricStrainError("strain tensor is not symmetric")
    h = np.zeros((4, 4), dtype=complex)
    for i in range(3):
        h += p.b * eps[i, i] * (_JSQ[i] - _I4)
    pref = p.d / np.sqrt(3.0)
    for (i, k), op in _JSYM.items():
        h += pref * eps[i, k] * op
    if include_hydro:
        h += -p.a_hydro * np.trace(eps) * _I4
    return h


def h_zeeman(b_field_defect_frame: np.ndarray, p: ModelParams) -> np.ndarray:
    """Hole Zeeman coupling mu_B (g1 B.J + g2 sum_i B_i J_i^3); traceless."""
    b = np.asarray(b_field_defect_frame, dtype=float)
    h = np.zeros((4, 4), dtype=complex)
    for i in range(3):
        if b[i] != 0.0:
            h += p.mu_b * b[i] * (p.g1 * _J.axis("xyz"[i]) + p.g2 * _JCUBE[i])
    return h


def dipole_frame_components(e_field_defect_frame: np.ndarray) -> tuple[float, float, float]:
    """Electric-field components in the defect dipole frame (X, Y, Z).

    X and Y span the defect plane, Z is normal to it:
    E_X = (e_x + e_y)/sqrt(2), E_Y = e_z, E_Z = (e_x - e_y)/sqrt(2).
    """
    e = np.asarray(e_field_defect_frame, dtype=float)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    return ((e[0] + e[1]) * inv_sqrt2, e[2], (e[0] - e[1]) * inv_sqrt2)


def stark_shift_linear(e_field_defect_frame: np.ndarray, p: ModelParams) -> float:
    """Linear Stark shift (Hz) of the transition for a defect-frame field."""
    ex, ey, _ = dipole_frame_components(e_field_defect_frame)
    return p.a_x * ex + p.a_y * ey


def stark_shift_quadratic(e_field_defect_frame: np.ndarray, p: ModelParams) -> float:
    """Quadratic (polarizability) Stark shift (Hz) for a defect-frame field."""
    ex, ey, ez = dipole_frame_components(e_field_defect_frame)
    return -0.5 * (
        p.alpha_xx * ex * ex
        + 2.0 * p.alpha_xy * ex * ey
        + p.alpha_yy * ey * ey
        + p.alpha_zz * ez * ez
    )


def h_stark_acceptor_quadratic(
    e_field_defect_frame: np.ndarray, c: CubicStarkParams
) -> np.ndarray:
    """Operator-valued quadratic Stark term of the loosely-bound hole.

    alpha_c E^2 * 1 + beta_c sum_i (J_i^2 - 5/4) E_i^2
    + (gamma_c/sqrt(3)) sum_{i != j} {J_i, J_j}/2 * E_i E_j
    """
    e = np.asarray(e_field_defect_frame, dtype=float)
    h = c.alpha_c * float(e @ e) * _I4.copy()
    for i in range(3):
        h += c.beta_c * e[i] * e[i] * (_JSQ[i] - 1.25 * _I4)
    pref = c.gamma_c / np.sqrt(3.0)
    for (i, k), op in _JSYM.items():
        h += pref * e[i] * e[k] * op
    return h


def assemble_tx_hamiltonian(
    frame: OrientationFrame, fields: FieldConfig, p: ModelParams
) -> np.ndarray:
    """TX Hamiltonian of one orientation, evaluated in its defect frame.

    Sums the internal defect potential, the external-strain coupling with
    its hydrostatic term, the scalar piezospectroscopic shift and the hole
    Zeeman term.  Electric fields do not appear here; their scalar
    transition shifts are applied at the spectra level.
    """
    h = h_strain(internal_strain_tensor(p), p)
    if fields.ext_stress is not None:
        sigma_d = applied_tensor_to_defect(frame, fields.ext_stress)
        h += h_strain(stress_to_strain(sigma_d, p.compliance), p, include_hydro=True)
        h += piezo_shift(sigma_d, p.piezo) * _I4
    if np.any(fields.b_field != 0.0):
        h += h_zeeman(field_transform(frame, fields.b_field), p)
    return h


def ground_zeeman_splitting(b_field: np.ndarray, p: ModelParams) -> float:
    """Isotropic electron Zeeman splitting g_e mu_B |B| of the ground state (eV)."""
    return p.g_e * p.mu_b * float(np.linalg.norm(b_field))
