import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from txham import (
    DegenerateAxesError,
    DielectricLayer,
    DielectricStack,
    FieldConfig,
    InvalidStackError,
    ManifoldOverlapError,
    ModelParams,
    ZeroFieldError,
    ZeroTotalRateError,
    degeneracy_grouping,
    effective_field,
    eigenvector_composition,
    enumerate_orientations,
    field_rotation_sweep,
    hole_g_factor,
    radiative_branching_ratio,
    stark_sweep,
    total_stark_shift,
    transition_set,
    tx_doublet_lines,
)
from txham.elasticity import stress_for_direction
from txham.spectra import direction_from_polar

P = ModelParams()
FRAMES = enumerate_orientations()
Z0 = FRAMES.by_label("z0")

B_SWEEP_FROM = np.array([0.0, 0.0, 1.0])
B_SWEEP_TO = np.array([-1.0, 1.0, 0.0]) / np.sqrt(2.0)

# orientation subsets that group along the [001] -> [-110] rotation
ZEEMAN_SUBSETS = (
    {"z0", "z2", "z0'", "z2'"},
    {"z1", "z3", "z1'", "z3'"},
    {"y0", "y2", "x3", "x1", "y0'", "y2'", "x3'", "x1'"},
    {"y1", "y3", "x0", "x2", "y1'", "y3'", "x0'", "x2'"},
)


# ------------------------------------------------------------ transitions

def test_unperturbed_lines_at_transition_energy():
    ts = transition_set(Z0, FieldConfig(), P)
    for line in ts.lines:
        assert line.energy_ev == pytest.approx(0.93557, abs=1e-12)
        assert line.offset_hz == pytest.approx(0.0, abs=1e-3)


def test_line_splitting_relations():
    fields = FieldConfig(b_field=0.1099 * np.array([0.0, 1.0, 1.0]) / np.sqrt(2.0))
    ts = transition_set(Z0, fields, P)
    delta_e = P.g_e * P.mu_b * 0.1099
    assert ts.energy("A") - ts.energy("B") == pytest.approx(delta_e, rel=1e-12)
    assert ts.energy("C") - ts.energy("D") == pytest.approx(delta_e, rel=1e-12)
    assert ts.hole_splitting_ev > 0
    assert ts.energy("A") - ts.energy("C") == pytest.approx(
        ts.hole_splitting_ev, rel=1e-9
    )


def test_inversion_partners_same_zeeman_lines():
    fields = FieldConfig(b_field=np.array([0.03, -0.07, 0.05]))
    for frame in FRAMES.unprimed:
        partner = FRAMES.by_label(frame.partner_label)
        ts = transition_set(frame, fields, P)
        ts_p = transition_set(partner, fields, P)
        for line, line_p in zip(ts.lines, ts_p.lines):
            assert line.energy_ev == pytest.approx(line_p.energy_ev, abs=1e-15)


def test_manifold_overlap_detected():
    # a field strong enough to push the Zeeman splitting past the TX gap
    fields = FieldConfig(b_field=np.array([0.0, 0.0, 40.0]))
    with pytest.raises(ManifoldOverlapError):
        transition_set(Z0, fields, P)


def test_stress_free_doublet_lines():
    tx0, tx1 = tx_doublet_lines(Z0, FieldConfig(), P)
    assert tx0 == pytest.approx(P.e_x, abs=1e-15)
    assert 1.5e-3 <= tx1 - tx0 <= 2.2e-3


def test_hydrostatic_stress_closed_form():
    # every orientation shifts identically: the piezospectroscopic part is
    # A1 + 2 A2 per Pa and the strain part reduces to the b-trace terms
    pressure = 1e6
    fields = FieldConfig(ext_stress=pressure * np.eye(3))
    eps0 = pressure * (P.compliance.s11 + 2.0 * P.compliance.s12)
    expected = (
        P.e_x
        + pressure * (P.piezo.a1 + 2.0 * P.piezo.a2)
        + 0.75 * P.b * eps0        # isotropic J-coupling shift
        + 0.25 * P.b * 3.0 * eps0  # hydrostatic trace term
    )
    lines = [tx_doublet_lines(f, fields, P)[0] for f in FRAMES]
    np.testing.assert_allclose(lines, lines[0], atol=1e-18)
    assert lines[0] == pytest.approx(expected, rel=1e-9)


# ------------------------------------------------------------ hole g factor

def test_hole_g_bands_and_memberships():
    fields = FieldConfig(b_field=0.1099 * np.array([1.0, 1.0, 0.0]) / np.sqrt(2.0))
    g_by_label = {
        f.label: hole_g_factor(transition_set(f, fields, P), 0.1099, P)
        for f in FRAMES.unprimed
    }
    low = {lab for lab, g in g_by_label.items() if g == min(g_by_label.values())}
    for lab in ("z0", "z2"):
        assert g_by_label[lab] == pytest.approx(min(g_by_label.values()), rel=1e-9)
    for lab in ("z1", "z3"):
        assert g_by_label[lab] == pytest.approx(max(g_by_label.values()), rel=1e-9)
    assert min(g_by_label.values()) == pytest.approx(1.1, abs=0.2)
    assert max(g_by_label.values()) == pytest.approx(3.5, abs=0.3)
    assert low <= {"z0", "z2"}


def test_hole_g_diagonal_limit():
    # pure eps_zz defect potential and axial B: the TX0 doublet is the pure
    # m_j = +-1/2 pair and the splitting is exactly mu_B B (g1 + g2/4)
    p = P.with_values(theta_p=0.0, eps_yy_p=0.0)
    fields = FieldConfig(b_field=np.array([0.0, 0.0, 0.1]))
    ts = transition_set(FRAMES.by_label("z0"), fields, p)
    assert hole_g_factor(ts, 0.1, p) == pytest.approx(p.g1 + p.g2 / 4.0, rel=1e-9)
    p0 = p.with_values(g2=0.0)
    ts0 = transition_set(FRAMES.by_label("z0"), fields, p0)
    assert hole_g_factor(ts0, 0.1, p0) == pytest.approx(p0.g1, rel=1e-9)


def test_hole_g_rejects_zero_field():
    ts = transition_set(Z0, FieldConfig(), P)
    with pytest.raises(ZeroFieldError):
        hole_g_factor(ts, 0.0, P)


# ------------------------------------------------------------ zeeman sweep

def test_zeeman_sweep_four_subsets_at_generic_angle():
    steps = field_rotation_sweep(B_SWEEP_FROM, B_SWEEP_TO, 3, 0.1099, P)
    mid = steps[1]
    assert mid.angle_rad == pytest.approx(np.pi / 4.0)
    values = [
        (ts.orientation, ts.hole_splitting_ev * P.hz_per_ev)
        for ts in mid.transitions
    ]
    report = degeneracy_grouping(values, tolerance=1e8)
    assert report.n_groups == 4
    member_sets = {frozenset(g.members) for g in report.groups}
    assert member_sets == {frozenset(s) for s in ZEEMAN_SUBSETS}


def test_zeeman_sweep_single_step():
    steps = field_rotation_sweep(B_SWEEP_FROM, B_SWEEP_TO, 1, 0.1099, P)
    assert len(steps) == 1
    assert steps[0].angle_rad == 0.0
    assert len(steps[0].transitions) == 24


def test_zeeman_sweep_rejects_parallel_axes():
    with pytest.raises(DegenerateAxesError):
        field_rotation_sweep([0, 0, 1], [0, 0, 2], 5, 0.1, P)
    with pytest.raises(DegenerateAxesError):
        field_rotation_sweep([0, 0, 0], [0, 1, 0], 5, 0.1, P)


# ------------------------------------------------------------ stark sweeps

def test_stark_110_seven_linear_groups():
    e110 = np.array([1.0, 1.0, 0.0]) / np.sqrt(2.0)
    from txham import stark_shift_linear
    from txham.orientations import field_transform

    coeffs = [
        (f.label, stark_shift_linear(field_transform(f, e110), P)) for f in FRAMES
    ]
    report = degeneracy_grouping(coeffs, tolerance=1e-6)
    assert report.n_groups == 7
    zero_group = [g for g in report.groups if abs(g.representative) < 1e-9]
    assert len(zero_group) == 1
    assert set(zero_group[0].members) == {"z1", "z3", "z1'", "z3'"}


def test_stark_001_four_total_groups():
    sweep = stark_sweep([0.0, 0.0, 1.0], 60e3, 2, P)
    report = degeneracy_grouping(list(sweep[-1].shifts), tolerance=1e6)
    assert report.n_groups == 4


def test_stark_110_magnitude_band():
    sweep = stark_sweep([1.0, 1.0, 0.0], 125e3, 2, P)
    peak = max(abs(shift) for _, shift in sweep[-1].shifts)
    assert 1.2e9 <= peak <= 1.8e9


def test_stark_misalignment_adds_groups():
    sweep = stark_sweep(
        [0.0, 0.0, 1.0], 60e3, 2, P, misalignment=(np.deg2rad(-13.0), 0.0)
    )
    report = degeneracy_grouping(list(sweep[-1].shifts), tolerance=1e6)
    assert report.n_groups > 4


def test_stark_shift_parity():
    e110 = 1e5 * np.array([1.0, 1.0, 0.0]) / np.sqrt(2.0)
    # z1 has zero linear shift along [110]: total shift must be even in E
    z1 = FRAMES.by_label("z1")
    assert total_stark_shift(z1, e110, P) == pytest.approx(
        total_stark_shift(z1, -e110, P), rel=1e-12
    )
    # z0 has a linear part: swapping to the partner flips only that part
    z0p = FRAMES.by_label("z0'")
    plus, minus = total_stark_shift(Z0, e110, P), total_stark_shift(z0p, e110, P)
    quad = 0.5 * (plus + minus)
    lin = 0.5 * (plus - minus)
    assert abs(lin) > 1e7
    assert total_stark_shift(Z0, -e110, P) == pytest.approx(quad - lin, rel=1e-12)


# ------------------------------------------------------------ grouping

def test_grouping_all_equal():
    values = [(f.label, 5.0) for f in FRAMES]
    report = degeneracy_grouping(values, tolerance=1.0)
    assert report.n_groups == 1
    assert len(report.groups[0].members) == 24


def test_grouping_orders_by_representative():
    values = [("a", 3.0), ("b", 0.0), ("c", 3.5), ("d", 10.0)]
    report = degeneracy_grouping(values, tolerance=1.0)
    reps = [g.representative for g in report.groups]
    assert reps == sorted(reps)
    assert report.groups[0].members == ("b",)
    assert report.groups[1].members == ("a", "c")


def test_grouping_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        degeneracy_grouping([("a", 1.0)], tolerance=0.0)


@given(st.permutations(list(range(8))))
@settings(max_examples=30, deadline=None)
def test_grouping_permutation_invariant(order):
    base = [("a", 1.0), ("b", 1.05), ("c", 3.0), ("d", 3.02),
            ("e", 7.0), ("f", 7.01), ("g", 12.0), ("h", 12.09)]
    shuffled = [base[i] for i in order]
    r1 = degeneracy_grouping(base, tolerance=0.1)
    r2 = degeneracy_grouping(shuffled, tolerance=0.1)
    assert r1.groups == r2.groups
    # groups partition the labels
    all_members = [m for g in r1.groups for m in g.members]
    assert sorted(all_members) == sorted(lab for lab, _ in base)


# ------------------------------------------------------------ branching

def test_rbr_complement_sums_to_one():
    fields = FieldConfig(b_field=0.25 * direction_from_polar(1.0, 0.7))
    br = radiative_branching_ratio(Z0, fields, P, "lower")
    assert 0.0 <= br.rbr <= 1.0
    # the complementary channel carries the remaining decay probability
    from txham.spectra import _tx0_vectors

    lower, _ = _tx0_vectors(Z0, fields, P)
    t_b = abs(lower[1]) ** 2
    t_a = abs(lower[2]) ** 2
    assert br.rbr + t_a / (t_a + t_b) == pytest.approx(1.0, abs=1e-12)


def test_rbr_states_agree_at_low_field():
    fields = FieldConfig(b_field=1e-4 * direction_from_polar(0.8, 2.1))
    low = radiative_branching_ratio(Z0, fields, P, "lower")
    high = radiative_branching_ratio(Z0, fields, P, "upper")
    assert low.rbr + high.rbr == pytest.approx(1.0, abs=1e-4)


def test_rbr_surface_has_strong_maxima():
    best = 0.0
    for theta in np.linspace(0.05, np.pi - 0.05, 13):
        for phi in np.linspace(0.0, 2.0 * np.pi, 25):
            fields = FieldConfig(b_field=0.25 * direction_from_polar(theta, phi))
            br = radiative_branching_ratio(Z0, fields, P, "lower")
            assert 0.0 <= br.rbr <= 1.0
            if np.isfinite(br.cyclicity):
                best = max(best, br.cyclicity)
    assert best > 100.0


def test_rbr_gauge_invariance():
    fields = FieldConfig(b_field=np.array([0.1, 0.05, 0.2]))
    from txham.spectra import _tx0_vectors

    lower, _ = _tx0_vectors(Z0, fields, P)
    rephased = lower * np.exp(1j * 0.7)
    t_b, t_a = abs(rephased[1]) ** 2, abs(rephased[2]) ** 2
    br = radiative_branching_ratio(Z0, fields, P, "lower")
    assert t_b / (t_a + t_b) == pytest.approx(br.rbr, rel=1e-12)


def test_rbr_rejects_zero_field():
    with pytest.raises(ZeroFieldError):
        radiative_branching_ratio(Z0, FieldConfig(), P, "lower")


def test_rbr_zero_total_rate():
    # inverted-sign axial defect potential makes TX0 the pure +-3/2 pair
    p = P.with_values(theta_p=0.0, eps_yy_p=0.0, eps_zz_p=6.5e-4)
    fields = FieldConfig(b_field=np.array([0.0, 0.0, 0.01]))
    with pytest.raises(ZeroTotalRateError):
        radiative_branching_ratio(FRAMES.by_label("z0"), fields, p, "lower")


# ------------------------------------------------------------ composition

def test_composition_band_and_stability():
    for direction in (
        np.array([0.0, 0.0, 1.0]),
        np.array([1.0, 1.0, 0.0]) / np.sqrt(2.0),
        direction_from_polar(1.1, 0.6),
    ):
        per_state = ([], [])
        for b_mag in np.linspace(0.0, 0.25, 11):
            fields = FieldConfig(b_field=b_mag * direction)
            comps = eigenvector_composition(Z0, fields, P)
            for series, comp in zip(per_state, comps):
                assert comp.w_half + comp.w_three_half == pytest.approx(1.0, abs=1e-12)
                series.append(comp.w_half)
        for series in per_state:
            w = np.array(series)
            assert np.all((0.85 <= w) & (w <= 0.95))
            # each state's weight drifts by less than 1% over the field range
            assert w.max() - w.min() < 0.01


def test_composition_diagonal_case():
    # no internal strain; an axial external stress leaves a diagonal matrix
    p = P.with_values(theta_p=0.0, eps_yy_p=0.0, eps_zz_p=0.0)
    fields = FieldConfig(ext_stress=stress_for_direction(0.0, -2e8))
    comps = eigenvector_composition(Z0, fields, p)
    for comp in comps:
        assert comp.w_half in (0.0, 1.0)
        assert comp.w_half + comp.w_three_half == 1.0


# ------------------------------------------------------------ dielectrics

def _stack_110():
    return DielectricStack(
        layers=(
            DielectricLayer("lHe", 1.057, 0.1e-3),
            DielectricLayer("kapton", 3.4, 0.17e-3),
            DielectricLayer("si", 11.7, 1.9e-3),
        ),
        sample_index=2,
    )


def _stack_001():
    return DielectricStack(
        layers=(
            DielectricLayer("lHe", 1.057, 0.1e-3),
            DielectricLayer("kapton", 3.4, 0.54e-3),
            DielectricLayer("si", 11.7, 4.3e-3),
        ),
        sample_index=2,
    )


def test_effective_field_110_ratio():
    out = effective_field(_stack_110(), 450.0)
    assert out.v_sample / 450.0 == pytest.approx(0.53, abs=0.01)
    assert out.e_sample == pytest.approx(out.v_sample / 1.9e-3, rel=1e-12)


def test_effective_field_001_ratio():
    out = effective_field(_stack_001(), 450.0)
    assert out.v_sample / 450.0 == pytest.approx(0.59, abs=0.01)


def test_effective_field_single_layer():
    stack = DielectricStack(layers=(DielectricLayer("si", 11.7, 2e-3),), sample_index=0)
    out = effective_field(stack, 100.0)
    assert out.v_sample == pytest.approx(100.0, rel=1e-12)


def test_effective_field_thickness_scale_invariance():
    base = effective_field(_stack_110(), 1.0)
    scaled_stack = DielectricStack(
        layers=tuple(
            DielectricLayer(l.name, l.epsilon_r, 3.7 * l.thickness_m)
            for l in _stack_110().layers
        ),
        sample_index=2,
    )
    scaled = effective_field(scaled_stack, 1.0)
    assert scaled.v_sample == pytest.approx(base.v_sample, rel=1e-12)


def test_effective_field_invalid_stacks():
    with pytest.raises(InvalidStackError):
        effective_field(DielectricStack(layers=(), sample_index=0), 1.0)
    with pytest.raises(InvalidStackError):
        effective_field(
            DielectricStack(layers=(DielectricLayer("a", 2.0, 1e-3),), sample_index=5),
            1.0,
        )
    with pytest.raises(InvalidStackError):
        effective_field(
            DielectricStack(layers=(DielectricLayer("a", 2.0, 0.0),), sample_index=0),
            1.0,
        )
    with pytest.raises(InvalidStackError):
        effective_field(
            DielectricStack(layers=(DielectricLayer("a", 0.5, 1e-3),), sample_index=0),
            1.0,
        )
