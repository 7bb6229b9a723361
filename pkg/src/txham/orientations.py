"""The 24 lattice orientations of the defect under T_h symmetry.

The twelve proper rotations of point group T are signed coordinate
permutations; the remaining twelve frames are their coordinate inversions
(primed labels).  Labels group orientations by the image of the
carbon-carbon axis: z* frames carry it along [001], y* along [010],
x* along [100]; the digit indexes the hydrogen position about that axis.

Rotation matrices act actively: ``frame.rotation @ v`` is the crystal-frame
image of a defect-frame vector v.  Applied fields are brought into a
frame's defect coordinates with the inverse (transpose) rotation, while
defect-fixed tensors are pushed out to the crystal frame with the direct
rotation.  Strain and stress tensors are parity-even, so inversion partners
share their tensor transforms; polar vectors (electric fields) flip sign.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import congruence_transform

_AXES = {"x": 0, "y": 1, "z": 2}

# (label, symmetry operation, rotation axis, active coordinate map)
_T_OPERATIONS = (
    ("z0", "E", None, "x,y,z"),
    ("z1", "C2", (1, 0, 0), "x,-y,-z"),
    ("z2", "C2", (0, 0, 1), "-x,-y,z"),
    ("z3", "C2", (0, 1, 0), "-x,y,-z"),
    ("y0", "C3", (-1, -1, -1), "y,z,x"),
    ("y1", "C3", (1, -1, 1), "-y,-z,x"),
    ("y2", "C3", (-1, 1, 1), "-y,z,-x"),
    ("y3", "C3", (1, 1, -1), "y,-z,-x"),
    ("x0", "C3", (1, 1, 1), "z,x,y"),
    ("x1", "C3", (-1, -1, 1), "-z,x,-y"),
    ("x2", "C3", (-1, 1, -1), "z,-x,-y"),
    ("x3", "C3", (1, -1, -1), "-z,-x,y"),
)


def _signed_permutation(mapping: str) -> np.ndarray:
    mat = np.zeros((3, 3))
    for row, token in enumerate(mapping.split(",")):
        token = token.strip()
        sign = -1.0 if token.startswith("-") else 1.0
        mat[row, _AXES[token.lstrip("-")]] = sign
    return mat


@dataclass(frozen=True)
class OrientationFrame:
    """One of the 24 defect orientations.

    ``rotation`` is the signed permutation carrying the identity frame onto
    this one (already negated for inverted frames); ``inverted`` flags the
    coordinate-inversion partners.
    """

    label: str
    rotation: np.ndarray
    inverted: bool
    operation: str

    @property
    def partner_label(self) -> str:
        return self.label[:-1] if self.inverted else self.label + "'"

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "rotation": self.rotation.tolist(),
            "inverted": self.inverted,
            "operation": self.operation,
        }


@dataclass(frozen=True)
class OrientationSet:
    """All 24 frames: the 12 proper rotations followed by their inversions."""

    frames: tuple

    def __iter__(self):
        return iter(self.frames)

    def __len__(self) -> int:
        return len(self.frames)

    def by_label(self, label: str) -> OrientationFrame:
        for frame in self.frames:
            if frame.label == label:
                return frame
        raise KeyError(f"unknown orientation label {label!r}")

    @property
    def unprimed(self) -> tuple:
        return tuple(f for f in self.frames if not f.inverted)

    @property
    def labels(self) -> tuple:
        return tuple(f.label for f in self.frames)


def enumerate_orientations() -> OrientationSet:
    """Build the full 24-frame orientation set."""
    frames = []
    for label, op, axis, mapping in _T_OPERATIONS:
        rot = _signed_permutation(mapping)
        rot.flags.writeable = False
        opname = op if axis is None else f"{op}{list(axis)}"
        frames.append(OrientationFrame(label, rot, False, opname))
    for label, op, axis, mapping in _T_OPERATIONS:
        rot = -_signed_permutation(mapping)
        rot.flags.writeable = False
        opname = "i" if axis is None else f"i*{op}{list(axis)}"
        frames.append(OrientationFrame(label + "'", rot, True, opname))
    return OrientationSet(frames=tuple(frames))


def field_transform(frame: OrientationFrame, v: np.ndarray) -> np.ndarray:
    """Express an applied (crystal-frame) field vector in defect coordinates.

    This is the inverse of the frame's rotation; for inverted frames the
    vector additionally flips sign, which matters for electric fields but
    leaves strain/Zeeman spectra untouched.
    """
    return frame.rotation.T @ np.asarray(v, dtype=float)


def defect_tensor_to_crystal(frame: OrientationFrame, t: np.ndarray) -> np.ndarray:
    """Push a defect-fixed tensor (identity-frame representation) out to
    the crystal frame of this orientation: R t R^T with the direct rotation."""
    return congruence_transform(t, frame.rotation)


def applied_tensor_to_defect(frame: OrientationFrame, t: np.ndarray) -> np.ndarray:
    """Express an applied (crystal-frame) tensor in defect coordinates:
    R^T t R, the congruence by the inverse rotation."""
    return congruence_transform(t, frame.rotation.T)


def frames_from_json(records: list) -> OrientationSet:
    """Rebuild an OrientationSet from ``OrientationFrame.as_dict`` records."""
    frames = []
    for rec in records:
        rot = np.array(rec["rotation"], dtype=float)
        rot.flags.writeable = False
        frames.append(
            OrientationFrame(
                label=rec["label"],
                rotation=rot,
                inverted=bool(rec["inverted"]),
                operation=rec.get("operation", ""),
            )
        )
    return OrientationSet(frames=tuple(frames))
