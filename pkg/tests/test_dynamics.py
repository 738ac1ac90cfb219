import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from suslov import (
    ExtraIntegral,
    IntegrationBlowupError,
    InvalidInputError,
    LevelValues,
    Params,
    State,
    conserved_quantities,
    detect_rational_ratio,
    extra_integral_value,
    find_critical_points,
    integrate,
    random_states,
    vector_field,
)

unit_floats = st.floats(allow_nan=False, allow_infinity=False, min_value=-2.0, max_value=2.0)


def random_state(vals):
    m1, m2, g1, g2, g3 = vals
    n = math.sqrt(g1 * g1 + g2 * g2 + g3 * g3)
    if n < 1e-3:
        g1, g2, g3, n = 1.0, 0.0, 0.0, 1.0
    return State(m1, m2, g1 / n, g2 / n, g3 / n)


class TestVectorField:
    def test_hand_computed_value(self):
        s = State(0.5, -0.25, 0.3, -0.2, 0.8)
        x = vector_field(s, Params(4.0, 1.0))
        assert np.allclose(x, [-0.96, -0.16, 0.4, 0.2, -0.1], rtol=0, atol=1e-15)

    @given(st.lists(unit_floats, min_size=5, max_size=5))
    def test_integrals_annihilated(self, vals):
        # <grad f, X> vanishes identically for f1, f2 and |gamma|^2
        s = random_state(vals)
        b = Params(4.0, 1.0)
        x = vector_field(s, b)
        grad_f1 = np.array([2 * s.m1, 0, 2 * b.b1 * s.gamma1, 0, 0])
        grad_f2 = np.array([0, 2 * s.m2, 0, 2 * b.b2 * s.gamma2, 0])
        grad_n = np.array([0, 0, 2 * s.gamma1, 2 * s.gamma2, 2 * s.gamma3])
        scale = max(1.0, float(np.max(np.abs(x))))
        for g in (grad_f1, grad_f2, grad_n):
            assert abs(float(g @ x)) <= 1e-13 * scale


class TestConservedQuantities:
    def test_definitions(self):
        s = State(0.5, -0.25, 0.3, -0.2, 0.8)
        f1, f2, norm = conserved_quantities(s, Params(4.0, 1.0))
        assert f1 == pytest.approx(0.25 + 4.0 * 0.09, abs=1e-15)
        assert f2 == pytest.approx(0.0625 + 0.04, abs=1e-15)
        assert norm == pytest.approx(0.77, abs=1e-15)


class TestRationalRatio:
    def test_known_ratios(self):
        assert detect_rational_ratio(Params(4.0, 1.0)) == ExtraIntegral(2, 1)
        assert detect_rational_ratio(Params(1.0, 1.0)) == ExtraIntegral(1, 1)
        assert detect_rational_ratio(Params(9.0, 4.0)) == ExtraIntegral(3, 2)

    def test_irrational_ratio_rejected(self):
        assert detect_rational_ratio(Params(2.0, 1.0)) is None
        assert detect_rational_ratio(Params(2.0, 1.0), max_den=10**6) is None
        assert detect_rational_ratio(Params(3.0, 1.0)) is None

    def test_max_den_cutoff(self):
        assert detect_rational_ratio(Params(49.0, 9.0), max_den=2) is None
        assert detect_rational_ratio(Params(49.0, 9.0), max_den=3) == ExtraIntegral(7, 3)

    def test_bad_max_den(self):
        with pytest.raises(InvalidInputError):
            detect_rational_ratio(Params(4.0, 1.0), max_den=0)

    @given(
        st.integers(min_value=1, max_value=12),
        st.integers(min_value=1, max_value=12),
        st.floats(min_value=0.1, max_value=10.0, allow_nan=False),
    )
    @settings(max_examples=60)
    def test_detects_constructed_rationals(self, p, q, r):
        got = detect_rational_ratio(Params(p * p * r, q * q * r))
        g = math.gcd(p, q)
        assert got == ExtraIntegral(p // g, q // g)

    def test_extra_integral_validation(self):
        with pytest.raises(InvalidInputError):
            ExtraIntegral(2, 4)
        with pytest.raises(InvalidInputError):
            ExtraIntegral(0, 1)

    def test_equal_b_value_matches_classic_form(self):
        # for b1 = b2 = b the imaginary part is b g1 g2 - m1 m2
        b = Params(1.5, 1.5)
        e = detect_rational_ratio(b)
        assert e == ExtraIntegral(1, 1)
        s = State(0.3, -0.4, 0.5, 0.5, math.sqrt(0.5))
        _, im = extra_integral_value(s, b, e)
        assert im == pytest.approx(1.5 * 0.25 - (-0.12), rel=1e-14)


class TestIntegrate:
    def test_drift_stays_small(self, b41):
        k = LevelValues(2.0, 0.75)
        s0 = random_states(b41, k, 1, seed=0)[0]
        traj = integrate(s0, b41, step=1e-3, t_end=20.0, record_every=100)
        d = traj.drift_report
        assert max(d.f1, d.f2, d.norm) <= 1e-10
        # recorded rows respect the conserved values too
        for row in traj.states_array[:: len(traj.states_array) // 7]:
            f1, f2, norm = conserved_quantities(State.from_array(row), b41)
            assert abs(f1 - k.k1) <= 1e-10
            assert abs(f2 - k.k2) <= 1e-10
            assert abs(norm - 1.0) <= 1e-10

    def test_recording_layout(self, b41):
        s0 = random_states(b41, LevelValues(1.0, 0.5), 1, seed=1)[0]
        traj = integrate(s0, b41, step=1e-3, t_end=1.0, record_every=250)
        assert len(traj) == len(traj.times) == len(traj.states_array)
        assert traj.times[0] == 0.0
        assert np.allclose(np.diff(traj.times), 0.25)
        assert traj.times[-1] == pytest.approx(1.0)
        assert np.array_equal(traj.states_array[0], s0.as_array())

    def test_extra_integral_drift(self, b41):
        e = detect_rational_ratio(b41)
        s0 = random_states(b41, LevelValues(1.0, 0.5), 1, seed=2)[0]
        traj = integrate(s0, b41, step=1e-3, t_end=20.0, record_every=100)
        re0, im0 = extra_integral_value(s0, b41, e)
        for row in traj.states_array:
            re, im = extra_integral_value(State.from_array(row), b41, e)
            assert abs(re - re0) <= 1e-9
            assert abs(im - im0) <= 1e-9

    def test_equilibrium_is_fixed(self, b41):
        k = LevelValues(2.0, 0.75)
        cp = find_critical_points(b41, k)[0]
        traj = integrate(cp.state, b41, step=1e-3, t_end=1.0, record_every=100)
        gap = np.max(np.abs(traj.states_array - cp.state.as_array()))
        assert gap <= 1e-12

    def test_rejects_off_sphere_start(self, b41):
        with pytest.raises(InvalidInputError):
            integrate(State(0.0, 0.0, 1.0, 1.0, 0.0), b41)

    def test_blowup_guard(self, b41):
        # the exact flow is bounded by its integrals; a huge step makes the
        # discretization unstable enough to leave the guard box
        s0 = State(1e7, 0.0, 0.0, 0.0, 1.0)
        with pytest.raises(IntegrationBlowupError) as err:
            integrate(s0, b41, step=1.0, t_end=100.0)
        assert err.value.last_valid_time >= 0.0

    def test_bad_step_rejected(self, b41):
        s0 = State(1.0, 0.0, 0.0, 0.0, 1.0)
        with pytest.raises(InvalidInputError):
            integrate(s0, b41, step=0.0)
        with pytest.raises(InvalidInputError):
            integrate(s0, b41, t_end=0.0)
        with pytest.raises(InvalidInputError):
            integrate(s0, b41, record_every=0)


class TestRandomStates:
    def test_states_live_on_level_set(self, b41):
        k = LevelValues(2.0, 0.75)
        for s in random_states(b41, k, 25, seed=9):
            f1, f2, norm = conserved_quantities(s, b41)
            assert abs(f1 - k.k1) <= 1e-12
            assert abs(f2 - k.k2) <= 1e-12
            assert abs(norm - 1.0) <= 1e-12

    def test_seed_reproducible(self, b41):
        k = LevelValues(1.0, 0.5)
        a = random_states(b41, k, 5, seed=4)
        c = random_states(b41, k, 5, seed=4)
        assert a == c
        assert a != random_states(b41, k, 5, seed=5)

    def test_degenerate_level_rejected(self, b41):
        # k = 0 collapses an ellipse, so no torus chart exists to draw from
        with pytest.raises(InvalidInputError):
            random_states(b41, LevelValues(0.0, 0.0), 1, seed=0)

    def test_rejection_cap(self, b11):
        # enormous k/b squeezes U_k into four caps too small to hit
        with pytest.raises(InvalidInputError, match="rejection"):
            random_states(b11, LevelValues(1e8 + 0.5, 1e8), 1, seed=0)
