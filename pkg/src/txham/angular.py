"""J = 3/2 angular momentum algebra in the Luttinger-Kohn m_j basis.

Basis order is (+3/2, +1/2, -1/2, -3/2) everywhere in this package.
Ladder matrix elements follow the Condon-Shortley phase convention; any
consistent convention gives identical spectra downstream.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BASIS_ORDER = ("+3/2", "+1/2", "-1/2", "-3/2")
M_J = np.array([1.5, 0.5, -0.5, -1.5])

# index pairs of the m_j = +-1/2 and +-3/2 components in BASIS_ORDER
HALF_INDICES = (1, 2)
THREE_HALF_INDICES = (0, 3)


@dataclass(frozen=True)
class JOperators:
    """The three spin-3/2 generators as read-only 4x4 complex matrices."""

    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    basis_order: tuple = BASIS_ORDER

    def axis(self, name: str) -> np.ndarray:
        return {"x": self.jx, "y": self.jy, "z": self.jz}[name]

    def __iter__(self):
        return iter((self.jx, self.jy, self.jz))


def build_j_operators() -> JOperators:
    """Construct (Jx, Jy, Jz) for J = 3/2; Jz = diag(3/2, 1/2, -1/2, -3/2)."""
    jplus = np.zeros((4, 4), dtype=complex)
    for col, m in enumerate(M_J[1:], start=1):
        jplus[col - 1, col] = np.sqrt(3.75 - m * (m + 1.0))
    jminus = jplus.conj().T
    jx = 0.5 * (jplus + jminus)
    jy = -0.5j * (jplus - jminus)
    jz = np.diag(M_J).astype(complex)
    for op in (jx, jy, jz):
        op.flags.writeable = False
    return JOperators(jx=jx, jy=jy, jz=jz)


def sym_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Symmetrized operator product (ab + ba)/2."""
    return 0.5 * (a @ b + b @ a)


def j_cubed(axis: str, ops: JOperators) -> np.ndarray:
    """J_axis^3, the operator entering the cubic Zeeman correction."""
    j = ops.axis(axis)
    return j @ j @ j
