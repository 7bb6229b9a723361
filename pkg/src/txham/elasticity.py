"""Cubic-crystal elasticity and the piezospectroscopic line shift.

Compliance follows the Voigt convention with engineering shear, i.e.
eps_yz = s44 * sigma_yz componentwise; the tensors handed to the strain
Hamiltonian keep exactly these component values.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonSymmetricStrainError
from .linalg import symmetry_defect

SYMMETRY_TOL = 1e-9


@dataclass(frozen=True)
class ComplianceConstants:
    """Compliance constants of silicon at 4.2 K, in 1/Pa."""

    s11: float = 7.61736e-12
    s12: float = -2.12733e-12
    s44: float = 12.4626e-12


@dataclass(frozen=True)
class PiezoTensorParams:
    """Piezospectroscopic tensor components of a monoclinic defect, eV/Pa."""

    a1: float = -13.7e-12
    a2: float = 16.1e-12
    a3: float = -1.6e-12
    a4: float = 2.2e-12


def _require_symmetric(t: np.ndarray, what: str) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if t.shape != (3, 3):
        raise ValueError(f"{what} must be 3x3, got shape {t.shape}")
    scale = max(float(np.max(np.abs(t))), 1.0)
    if symmetry_defect(t) > SYMMETRY_TOL * scale:
        raise NonSymmetricStrainError(f"{what} is not symmetric")
    return t


def stress_to_strain(sigma: np.ndarray, c: ComplianceConstants) -> np.ndarray:
    """Map a stress tensor (Pa) to the strain tensor of cubic silicon."""
    sigma = _require_symmetric(sigma, "stress tensor")
    voigt = np.array(
        [
            sigma[0, 0],
            sigma[1, 1],
            sigma[2, 2],
            sigma[1, 2],
            sigma[0, 2],
            sigma[0, 1],
        ]
    )
    smat = np.array(
        [
            [c.s11, c.s12, c.s12, 0.0, 0.0, 0.0],
            [c.s12, c.s11, c.s12, 0.0, 0.0, 0.0],
            [c.s12, c.s12, c.s11, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, c.s44, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, c.s44, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, c.s44],
        ]
    )
    e = smat @ voigt
    return np.array(
        [
            [e[0], e[5], e[4]],
            [e[5], e[1], e[3]],
            [e[4], e[3], e[2]],
        ]
    )


def stress_for_direction(theta: float, magnitude_t: float) -> np.ndarray:
    """Uniaxial stress tensor interpolating [001] -> [111] -> [110] loads.

    theta is the polar angle of the load axis from [001]; theta = 0 gives
    sigma_zz = T, theta = pi/2 gives sigma_xx = sigma_yy = sigma_xy = T/2,
    and theta = arccos(1/sqrt(3)) makes every component T/3.  Compression
    corresponds to T < 0.
    """
    st, ct = np.sin(theta), np.cos(theta)
    sd = 0.5 * magnitude_t * st * st  # xx, yy and xy components
    szz = magnitude_t * ct * ct
    syz = magnitude_t * st * ct / np.sqrt(2.0)  # also zx
    return np.array(
        [
            [sd, sd, syz],
            [sd, sd, syz],
            [syz, syz, szz],
        ]
    )


def piezo_shift(sigma_in_defect_frame: np.ndarray, p: PiezoTensorParams) -> float:
    """Scalar transition-energy shift (eV) of a monoclinic defect under
    stress expressed in its own defect coordinates."""
    s = _require_symmetric(sigma_in_defect_frame, "stress tensor")
    return float(
        p.a1 * s[2, 2]
        + p.a2 * (s[0, 0] + s[1, 1])
        + 2.0 * p.a3 * s[0, 1]
        + 2.0 * p.a4 * (s[1, 2] - s[0, 2])
    )
