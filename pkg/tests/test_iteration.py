import math

import numpy as np
import pytest
from django.test import override_settings
from hypothesis import (
    assume,
    given,
    settings,
)
from hypothesis import strategies as st

from outpost.django.grover.exceptions import (
    Degenerate,
    InvalidArgument,
)
from outpost.django.grover.iteration import (
    amplitude_phase_form,
    closed_form_power,
    eigenphase,
    envelope_curve,
    grover_amplitude,
    grover_probability,
    min_lambda_estimate,
    operator_power,
    optimal_iterations,
    p_min_envelope,
    u_k_closed,
    unity_roots_single_phase,
)
from outpost.django.grover.operators import (
    PhasePair,
    PhaseSchedule,
    build_operator,
    stage_amplitudes,
    success_probability,
)

alphas = st.floats(min_value=0.3, max_value=math.pi)
fractions = st.floats(min_value=0.01, max_value=0.99)


class TestEigenphase:
    @pytest.mark.parametrize(
        "alpha,frac,phi",
        [
            (math.pi, 0.5, math.pi / 2),
            (math.pi, 0.0, 0.0),
            (math.pi, 1.0, math.pi),
            (math.pi / 2, 0.5, math.acos(0.5)),
        ],
    )
    def test_examples(self, alpha, frac, phi):
        assert eigenphase(alpha, frac).phi == pytest.approx(phi, abs=1e-12)

    def test_monotonic(self):
        phis = [eigenphase(math.pi, frac).phi for frac in np.linspace(0, 1, 100)]
        assert np.all(np.diff(phis) > 0)


class TestClosedFormPower:
    def test_first_power(self):
        expected = build_operator(PhasePair(1.1, -1.1), 0.3)
        np.testing.assert_allclose(closed_form_power(1.1, 0.3, 1), expected, atol=1e-12)

    @pytest.mark.parametrize("alpha,frac,k", [(math.pi, 0.3, 2), (math.pi / 2, 0.2, 7)])
    def test_examples(self, alpha, frac, k):
        step = build_operator(PhasePair(alpha, -alpha), frac)
        np.testing.assert_allclose(
            closed_form_power(alpha, frac, k),
            np.linalg.matrix_power(step, k),
            atol=1e-11,
        )

    @settings(max_examples=1000)
    @given(alpha=alphas, frac=fractions, k=st.integers(min_value=1, max_value=20))
    def test_matches_matrix_power(self, alpha, frac, k):
        step = build_operator(PhasePair(alpha, -alpha), frac)
        np.testing.assert_allclose(
            closed_form_power(alpha, frac, k),
            np.linalg.matrix_power(step, k),
            atol=1e-11,
        )

    def test_degenerate(self):
        with pytest.raises(Degenerate):
            closed_form_power(math.pi, 1.0, 3)
        with pytest.raises(Degenerate):
            closed_form_power(math.pi, 0.0, 3)

    def test_fallback(self):
        step = build_operator(PhasePair(math.pi, -math.pi), 1.0)
        np.testing.assert_allclose(
            operator_power(math.pi, 1.0, 3), np.linalg.matrix_power(step, 3)
        )

    @given(alpha=alphas, frac=fractions)
    def test_cayley_hamilton(self, alpha, frac):
        step = build_operator(PhasePair(alpha, -alpha), frac)
        phi = eigenphase(alpha, frac).phi
        residual = step @ step - 2 * math.cos(phi) * step + np.eye(2)
        assert np.max(np.abs(residual)) <= 1e-12


class TestUnmarkedAmplitude:
    @given(alpha=alphas, frac=fractions, k=st.integers(min_value=1, max_value=12))
    def test_matches_schedule(self, alpha, frac, k):
        u, _ = stage_amplitudes(PhaseSchedule.repeated(alpha, k), [frac])
        assert u_k_closed(alpha, frac, k) == pytest.approx(u[-1, 0].real, abs=1e-11)

    @given(alpha=alphas, frac=fractions, k=st.integers(min_value=1, max_value=12))
    def test_phase_form(self, alpha, frac, k):
        amplitude, offset = amplitude_phase_form(alpha, frac)
        phi = eigenphase(alpha, frac).phi
        assert u_k_closed(alpha, frac, k) == pytest.approx(
            amplitude * math.cos(k * phi + offset), abs=1e-12
        )

    def test_examples(self):
        assert u_k_closed(math.pi, 0.25, 1) == pytest.approx(0, abs=1e-12)
        assert u_k_closed(math.pi, 0.1, 2) == pytest.approx(
            math.cos(5 * math.asin(math.sqrt(0.1))), abs=1e-12
        )

    @given(frac=fractions, k=st.integers(min_value=1, max_value=30))
    def test_grover_reduction(self, frac, k):
        assert u_k_closed(math.pi, frac, k) == pytest.approx(
            grover_amplitude(frac, k), abs=1e-12
        )


class TestGrover:
    def test_examples(self):
        assert grover_probability(0.25, 1) == pytest.approx(1)
        assert grover_probability(0.0, 5) == 0
        schedule = PhaseSchedule.repeated(math.pi, 3, beta=math.pi)
        assert grover_probability(0.05, 3) == pytest.approx(
            success_probability(schedule, [0.05])[0], abs=1e-12
        )

    @settings(max_examples=1000)
    @given(
        frac=st.floats(min_value=0, max_value=1), k=st.integers(min_value=0, max_value=30)
    )
    def test_matches_schedule(self, frac, k):
        schedule = PhaseSchedule.repeated(math.pi, k, beta=math.pi)
        assert grover_probability(frac, k) == pytest.approx(
            success_probability(schedule, [frac])[0], abs=1e-12
        )

    def test_invalid_fraction(self):
        with pytest.raises(InvalidArgument):
            grover_probability(1.5, 1)

    @pytest.mark.parametrize(
        "frac,iterations,estimate", [(0.01, 7, 7), (0.25, 1, 1), (1.0, 0, 0)]
    )
    def test_optimal_iterations(self, frac, iterations, estimate):
        assert optimal_iterations(frac) == (iterations, estimate)

    @pytest.mark.parametrize("frac", [0.01, 0.003, 0.05, 0.2])
    def test_optimal_iterations_scan(self, frac):
        # First lobe only, later lobes come arbitrarily close to one as well
        lobe = int(math.pi / (2 * math.asin(math.sqrt(frac)))) + 1
        scan = [grover_probability(frac, k) for k in range(lobe)]
        assert optimal_iterations(frac).iterations == int(np.argmax(scan))

    def test_optimal_iterations_empty(self):
        with pytest.raises(InvalidArgument):
            optimal_iterations(0.0)


class TestUnityRoots:
    def test_grover_six(self):
        roots = unity_roots_single_phase(math.pi, 6)
        assert roots[0] == pytest.approx(math.sin(math.pi / 26) ** 2, abs=1e-9)
        assert roots[0] == pytest.approx(0.014, abs=1e-3)
        for frac in roots:
            assert grover_probability(frac, 6) == pytest.approx(1, abs=1e-12)

    @pytest.mark.parametrize(
        "alpha,expected", [(math.pi, [0.25]), (math.pi / 2, [0.5]), (math.pi / 3, [1.0])]
    )
    def test_single_step(self, alpha, expected):
        assert unity_roots_single_phase(alpha, 1) == pytest.approx(expected, abs=1e-10)

    def test_count_grows(self):
        counts = [len(unity_roots_single_phase(math.pi, k)) for k in range(1, 13)]
        assert counts == sorted(counts)
        assert counts[-1] == 12

    def test_no_amplification(self):
        with pytest.raises(Degenerate):
            unity_roots_single_phase(0.0, 3)

    def test_configured_tolerance(self):
        exact = math.sin(math.pi / 26) ** 2
        with override_settings(GROVER_REFINE_TOLERANCE=1e-2):
            coarse = unity_roots_single_phase(math.pi, 6)[0]
        assert 1e-9 < abs(coarse - exact) < 1e-4

    def test_estimate(self):
        assert min_lambda_estimate(math.pi, 6) == pytest.approx(0.01714, abs=1e-5)
        assert min_lambda_estimate(math.pi, 1) > unity_roots_single_phase(math.pi, 1)[0]

    def test_estimate_large_k(self):
        exact = unity_roots_single_phase(math.pi, 50)[0]
        assert min_lambda_estimate(math.pi, 50) / exact == pytest.approx(1, abs=0.025)


class TestEnvelope:
    @pytest.mark.parametrize(
        "frac,alpha,expected",
        [(0.3, 0.0, 0.3), (0.3, math.pi, 0.0), (0.5, math.pi / 2, 1 / 3)],
    )
    def test_examples(self, frac, alpha, expected):
        value, degenerate = p_min_envelope(frac, alpha)
        assert value == pytest.approx(expected, abs=1e-12)
        assert not degenerate

    def test_degenerate(self):
        assert p_min_envelope(1.0, math.pi) == (0.0, True)

    @pytest.mark.parametrize(
        "alpha",
        [math.pi / 8, math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi - 0.1],
    )
    def test_lower_bound(self, alpha):
        grid = np.linspace(0, 1, 200)
        floor = envelope_curve(grid, alpha)
        for k in range(1, 41):
            profile = success_probability(PhaseSchedule.repeated(alpha, k), grid)
            assert np.all(profile >= floor - 1e-10)

    def test_curve_matches_scalar(self):
        grid = np.linspace(0, 1, 11)
        expected = [p_min_envelope(frac, 1.3).value for frac in grid]
        np.testing.assert_allclose(envelope_curve(grid, 1.3), expected)
