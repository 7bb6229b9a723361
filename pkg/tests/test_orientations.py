import json

import numpy as np
import pytest

from txham import (
    applied_tensor_to_defect,
    defect_tensor_to_crystal,
    enumerate_orientations,
    field_transform,
)
from txham.linalg import is_rotation
from txham.orientations import frames_from_json

FRAMES = enumerate_orientations()


def test_count_and_split():
    assert len(FRAMES) == 24
    assert len(FRAMES.unprimed) == 12
    assert sum(f.inverted for f in FRAMES) == 12


def test_labels():
    expected_unprimed = {f"{axis}{i}" for axis in "xyz" for i in range(4)}
    assert {f.label for f in FRAMES.unprimed} == expected_unprimed
    assert {f.label for f in FRAMES if f.inverted} == {
        lab + "'" for lab in expected_unprimed
    }


def test_identity_frame():
    z0 = FRAMES.by_label("z0")
    np.testing.assert_array_equal(z0.rotation, np.eye(3))
    assert not z0.inverted


def test_c2_x_frame():
    z1 = FRAMES.by_label("z1")
    np.testing.assert_array_equal(z1.rotation, np.diag([1.0, -1.0, -1.0]))


def test_inversion_partner_of_identity():
    z0p = FRAMES.by_label("z0'")
    np.testing.assert_array_equal(z0p.rotation, -np.eye(3))
    assert z0p.inverted


def test_frames_pairwise_distinct():
    mats = [f.rotation for f in FRAMES]
    for i in range(len(mats)):
        for k in range(i + 1, len(mats)):
            assert np.max(np.abs(mats[i] - mats[k])) > 0.5


def test_rotations_are_signed_permutations():
    for frame in FRAMES:
        rot = frame.rotation
        assert is_rotation(rot)
        assert np.array_equal(np.abs(rot) @ np.ones(3), np.ones(3))
        expected_det = -1.0 if frame.inverted else 1.0
        assert np.linalg.det(rot) == pytest.approx(expected_det)


def test_group_closure_of_t():
    unprimed = [f.rotation for f in FRAMES.unprimed]
    for a in unprimed:
        for b in unprimed:
            product = a @ b
            assert any(np.array_equal(product, c) for c in unprimed)


def test_carbon_axis_matches_label():
    cc = np.array([0.0, 0.0, 1.0])
    axis_index = {"x": 0, "y": 1, "z": 2}
    for frame in FRAMES.unprimed:
        image = frame.rotation @ cc
        idx = int(np.flatnonzero(np.abs(image) > 0.5)[0])
        assert idx == axis_index[frame.label[0]]


def test_field_transform_identity():
    v = np.array([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(field_transform(FRAMES.by_label("z0"), v), v)


def test_field_transform_c3():
    # threefold axis [-1,-1,-1]: applied field (a, b, c) -> (c, a, b)
    y0 = FRAMES.by_label("y0")
    out = field_transform(y0, np.array([1.0, 2.0, 3.0]))
    np.testing.assert_array_equal(out, [3.0, 1.0, 2.0])


def test_field_transform_inverts_rotation():
    v = np.array([0.3, -1.2, 2.1])
    for frame in FRAMES:
        round_trip = field_transform(frame, frame.rotation @ v)
        np.testing.assert_allclose(round_trip, v, atol=1e-14)


def test_defect_tensor_identity():
    t = np.array([[1.0, 0.5, 0.0], [0.5, 2.0, -0.25], [0.0, -0.25, 3.0]])
    np.testing.assert_array_equal(
        defect_tensor_to_crystal(FRAMES.by_label("z0"), t), t
    )


def test_defect_tensor_permutes_diagonal():
    t = np.diag([1.0, 2.0, 3.0])
    for frame in FRAMES.unprimed:
        out = defect_tensor_to_crystal(frame, t)
        # 3x3 congruence oracle
        np.testing.assert_allclose(out, frame.rotation @ t @ frame.rotation.T)
        np.testing.assert_allclose(np.sort(np.diag(out)), [1.0, 2.0, 3.0])
        assert np.max(np.abs(out - np.diag(np.diag(out)))) == 0.0


def test_inversion_partner_same_tensor():
    t = np.array([[1.0, 0.5, 0.2], [0.5, 2.0, -0.25], [0.2, -0.25, 3.0]])
    for frame in FRAMES.unprimed:
        partner = FRAMES.by_label(frame.partner_label)
        np.testing.assert_array_equal(
            defect_tensor_to_crystal(frame, t), defect_tensor_to_crystal(partner, t)
        )
        np.testing.assert_array_equal(
            applied_tensor_to_defect(frame, t), applied_tensor_to_defect(partner, t)
        )


def test_applied_tensor_is_inverse_congruence():
    t = np.array([[1.0, 0.5, 0.2], [0.5, 2.0, -0.25], [0.2, -0.25, 3.0]])
    for frame in FRAMES:
        out = applied_tensor_to_defect(frame, defect_tensor_to_crystal(frame, t))
        np.testing.assert_allclose(out, t, atol=1e-14)


def test_json_round_trip():
    records = [f.as_dict() for f in FRAMES]
    restored = frames_from_json(json.loads(json.dumps(records)))
    assert restored.labels == FRAMES.labels
    for a, b in zip(restored, FRAMES):
        np.testing.assert_array_equal(a.rotation, b.rotation)
        assert a.inverted == b.inverted
