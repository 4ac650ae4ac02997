import math
from fractions import Fraction

import numpy as np
import pytest

import _oracle
from entangled_emission.geometry import ChainGeometry
from entangled_emission.engine import (
    ConsistencyError,
    angular_profile,
    amplitude_route,
    appendix_constants,
    correlation,
    correlation_matrix,
    correlation_route,
    correlation_sum,
    dicke_rate,
    dipole_moment,
    enhancement,
    fringe_width,
    grating_factor,
    intensity,
    intensity_closed_w,
    intensity_coherent_drive,
    max_intensity_w,
    scan_visibility,
    visibility_closed,
    visibility_report,
)
from entangled_emission.states import (
    PureState,
    make_from_spec,
    make_separable,
    make_symmetric_w,
    w_minus_21,
    w_tilde_minus_21,
)
import entangled_emission.engine as engine

KD = 1.5 * math.pi


class TestCorrelation:
    def test_w12(self):
        assert correlation(make_symmetric_w(1, 3), 1, 2) == pytest.approx(1 / 3, abs=1e-15)

    def test_separable(self):
        assert correlation(make_separable(2, 0), 1, 2) == 0

    def test_w21_diagonal(self):
        # oracle value 0.6666666666666669
        assert correlation(make_symmetric_w(2, 3), 1, 1) == pytest.approx(2 / 3, abs=1e-15)

    def test_matrix_matches_termwise_and_oracle(self):
        s = PureState.normalized({"eeg": 1, "ege": -1j, "gee": 2, "egg": 0.5})
        mat = correlation_matrix(s)
        psi = _oracle.from_state(s)
        for i in range(1, 4):
            for j in range(1, 4):
                assert mat[i - 1, j - 1] == pytest.approx(correlation(s, i, j), abs=1e-15)
                assert mat[i - 1, j - 1] == pytest.approx(_oracle.correlation(psi, 3, i, j), abs=1e-15)

    def test_matrix_invariants(self):
        s = PureState.normalized({"eeg": 1, "ege": -1j, "gee": 2, "egg": 0.5, "ggg": 1})
        mat = correlation_matrix(s)
        assert np.allclose(mat, mat.conj().T, atol=1e-15)
        assert np.all((mat.diagonal().real >= 0) & (mat.diagonal().real <= 1))
        assert np.min(np.linalg.eigvalsh(mat)) > -1e-12


class TestIntensity:
    @pytest.mark.parametrize("n_e, n_g", [(1, 0), (2, 3), (3, 5), (0, 4)])
    def test_separable_flat(self, n_e, n_g):
        theta = np.linspace(-math.pi, math.pi, 101)
        values = intensity(make_separable(n_e, n_g), ChainGeometry(n_e + n_g, KD), theta)
        assert np.all(np.abs(values - n_e) < 1e-12)

    def test_w12_peak(self):
        assert intensity(make_symmetric_w(1, 3), ChainGeometry(3, KD), 0.0) == pytest.approx(3, abs=1e-12)

    def test_w_minus_floor(self):
        assert intensity(make_from_spec(w_minus_21()), ChainGeometry(3, KD), 0.0) == pytest.approx(1, abs=1e-12)

    @pytest.mark.parametrize(
        "spec, theta, frozen",
        [
            (w_minus_21, 0.3, 2.565694311546749),
            (w_minus_21, 1.0, 2.2775727926490754),
            (w_tilde_minus_21, 0.3, 1.822751317058388),
            (w_tilde_minus_21, 1.0, 2.679477596944361),
        ],
    )
    def test_frozen_oracle_values(self, spec, theta, frozen):
        assert intensity(make_from_spec(spec()), ChainGeometry(3, KD), theta) == pytest.approx(frozen, abs=1e-12)

    def test_w12_angular_form(self):
        g = ChainGeometry(3, KD)
        theta = np.linspace(-1.5, 1.5, 77)
        phi = g.phases(theta)
        expected = 1 + (2 / 3) * sum(
            np.cos(phi[:, i] - phi[:, j]) for i in range(3) for j in range(i + 1, 3)
        )
        assert np.allclose(intensity(make_symmetric_w(1, 3), g, theta), expected, atol=1e-12, rtol=0)

    def test_scalar_and_array(self):
        g = ChainGeometry(3, KD)
        w = make_symmetric_w(1, 3)
        assert isinstance(intensity(w, g, 0.2), float)
        assert intensity(w, g, np.array([0.2]))[0] == intensity(w, g, 0.2)

    def test_routes_agree_with_oracle(self):
        s = PureState.normalized({"eegg": 1, "egeg": 2j, "ggee": -1, "eeeg": 1, "gggg": 0.3})
        g = ChainGeometry(4, 2.3)
        psi = _oracle.from_state(s)
        for theta in np.linspace(-3, 3, 13):
            ref = _oracle.intensity(psi, 4, 2.3, theta)
            assert amplitude_route(s, g, theta) == pytest.approx(ref, abs=1e-12)
            assert correlation_route(s, g, theta) == pytest.approx(ref, abs=1e-12)

    def test_consistency_error(self, monkeypatch):
        g = ChainGeometry(3, KD)
        monkeypatch.setattr(engine, "correlation_route", lambda *a: np.asarray(99.0))
        with pytest.raises(ConsistencyError):
            intensity(make_symmetric_w(1, 3), g, 0.0)

    def test_atom_mismatch(self):
        with pytest.raises(ValueError):
            intensity(make_symmetric_w(1, 3), ChainGeometry(4, KD), 0.0)

    def test_dark_state(self):
        assert intensity(make_separable(0, 3), ChainGeometry(3, KD), 0.4) == 0


class TestDipole:
    def test_w_states_have_no_dipole(self):
        for n in range(1, 6):
            for n_e in range(1, n + 1):
                w = make_symmetric_w(n_e, n)
                assert all(dipole_moment(w, j) == 0 for j in range(1, n + 1))

    def test_superposition_of_sectors(self):
        # (|e> + |g>)/sqrt(2): <s+> = 1/2
        s = PureState.normalized({"e": 1, "g": 1})
        assert dipole_moment(s, 1) == pytest.approx(0.5)
        assert dipole_moment(s, 1) == pytest.approx(_oracle.dipole(_oracle.from_state(s), 1, 1))

    def test_coherent_drive_product_state(self):
        # each atom (|g> + |e>)/sqrt(2): populations 1/2, dipoles 1/2, uncorrelated
        n, kd, theta = 3, 2.1, 0.35
        psi = np.ones(2**n) / math.sqrt(2**n)
        terms = {format(k, f"0{n}b").replace("1", "e").replace("0", "g"): psi[k] for k in range(2**n)}
        state = PureState.normalized(terms)
        g = ChainGeometry(n, kd)
        drive = intensity_coherent_drive([0.5] * n, [0.5] * n, g, theta)
        assert drive == pytest.approx(intensity(state, g, theta), abs=1e-12)
        assert drive == pytest.approx(_oracle.intensity(psi, n, kd, theta), abs=1e-12)


class TestClosedForm:
    def test_w12_forward(self):
        assert intensity_closed_w(1, 3, ChainGeometry(3, KD), 0.0) == pytest.approx(3, abs=1e-12)

    @pytest.mark.parametrize("n", range(2, 11))
    def test_forward_peak_law(self, n):
        for n_e in range(1, n + 1):
            g = ChainGeometry(n, KD)
            closed = intensity_closed_w(n_e, n, g, 0.0)
            brute = intensity(make_symmetric_w(n_e, n), g, 0.0)
            assert closed == pytest.approx(n_e * (n - n_e + 1), abs=1e-10)
            assert brute == pytest.approx(closed, abs=1e-10)

    @pytest.mark.parametrize("n", [2, 5, 8])
    def test_single_excitation_grating(self, n):
        g = ChainGeometry(n, KD)
        theta = np.linspace(-1.4, 1.4, 50)
        phi = KD * np.sin(theta)
        expected = np.sin(n * phi / 2) ** 2 / np.sin(phi / 2) ** 2 / n
        assert np.allclose(intensity_closed_w(1, n, g, theta), expected, atol=1e-10, rtol=0)

    def test_single_atom_rejected(self):
        with pytest.raises(ValueError):
            intensity_closed_w(1, 1, ChainGeometry(1, KD), 0.0)

    def test_grating_limit(self):
        for n in (1, 2, 7):
            assert grating_factor(0.0, n) == n**2
            assert grating_factor(2 * math.pi * 3, n) == pytest.approx(n**2, rel=1e-12)
            assert grating_factor(1e-7, n) == pytest.approx(n**2, rel=1e-10)

    def test_grating_matches_dirichlet_sum_near_peaks(self):
        n = 6
        phi = 2 * math.pi * 7 + np.array([-1e-6, -1e-8, 1e-10, 3e-9, 1e-5])
        direct = np.abs(np.exp(1j * np.outer(phi, np.arange(1, n + 1))).sum(axis=1)) ** 2
        assert np.allclose(grating_factor(phi, n), direct, rtol=1e-11, atol=0)


class TestPeakLaws:
    def test_max_examples(self):
        assert max_intensity_w(2, 1) == 4
        for half in range(1, 6):
            assert max_intensity_w(half, half) == half * (half + 1)
        assert max_intensity_w(4, 0) == 4

    def test_enhancement(self):
        assert enhancement(1, 7) == 8
        assert enhancement(3, 0) == 1
        assert enhancement(2, 2) == 3

    def test_enhancement_brute_force(self):
        g = ChainGeometry(4, KD)
        ratio = intensity(make_symmetric_w(2, 4), g, 0.0) / intensity(make_separable(2, 2), g, 0.0)
        assert ratio == pytest.approx(enhancement(2, 2), abs=1e-12)

    def test_dicke(self):
        for n in range(1, 13):
            assert dicke_rate(n, Fraction(n, 2)) == n
            for n_e in range(0, n + 1):
                assert dicke_rate(n, Fraction(2 * n_e - n, 2)) == n_e * (n - n_e + 1)
        assert dicke_rate(10, 0) == 30
        assert dicke_rate(3, 0.5) == 4

    @pytest.mark.parametrize("n, m", [(3, 0), (4, 0.5), (4, 3)])
    def test_dicke_invalid(self, n, m):
        with pytest.raises(ValueError):
            dicke_rate(n, m)


class TestVisibility:
    def test_single_excitation(self):
        assert visibility_closed(1, 7) == 1.0

    def test_w21(self):
        assert visibility_closed(2, 3) == pytest.approx(0.6, abs=1e-15)
        i_max, i_min = 4, 2 * 1 / 2
        assert (i_max - i_min) / (i_max + i_min) == pytest.approx(0.6)

    def test_many_ground_atoms(self):
        values = [visibility_closed(3, 3 + n_g) for n_g in (1, 10, 100, 10_000)]
        assert values == sorted(values) and values[-1] > 0.9999

    def test_fully_excited_rejected(self):
        with pytest.raises(ValueError):
            visibility_closed(3, 3)

    def test_scan_matches_closed(self):
        rep = visibility_report(3, 6, KD)
        assert rep.grating_zero_reachable and rep.agrees
        assert rep.scan.i_min == pytest.approx(3 * 2 / 5, abs=1e-6)
        assert rep.scan.i_max == pytest.approx(12, abs=1e-9)

    def test_unreachable_zero_flagged(self):
        rep = visibility_report(2, 4, 1.0, steps=2001)
        assert not rep.grating_zero_reachable
        assert not rep.agrees

    def test_scan_generic_state(self):
        scan = scan_visibility(make_from_spec(w_minus_21()), ChainGeometry(3, KD), steps=2001)
        assert scan.i_min == pytest.approx(1, abs=1e-9)


class TestWidthAndAppendix:
    def test_fringe_width(self):
        assert fringe_width(8, KD) == pytest.approx(1 / 6, abs=1e-15)
        assert fringe_width(1, 2.0) == pytest.approx(math.pi)
        assert fringe_width(10, 3.0) == pytest.approx(fringe_width(5, 3.0) / 2)

    def test_fringe_width_locates_first_zero(self):
        # oracle scan of W_{1,7}: first minimum at theta ~ 0.1674, arcsin(1/6) = 0.167448...
        n, g = 8, ChainGeometry(8, KD)
        theta0 = math.asin(fringe_width(n, KD))
        assert intensity(make_symmetric_w(1, n), g, theta0) == pytest.approx(0, abs=1e-12)
        assert theta0 == pytest.approx(0.16744807921968932, abs=1e-12)

    def test_appendix_constants(self):
        assert appendix_constants(1, 3) == (Fraction(1, 3), Fraction(1, 3))
        assert appendix_constants(4, 4)[1] == 0
        assert appendix_constants(2, 4) == (Fraction(1, 2), Fraction(1, 3))
        w = make_symmetric_w(2, 4)
        assert correlation(w, 2, 2) == pytest.approx(0.5, abs=1e-15)
        assert correlation(w, 1, 3) == pytest.approx(1 / 3, abs=1e-15)
        with pytest.raises(ValueError):
            appendix_constants(1, 1)

    def test_correlation_sum(self):
        assert correlation_sum(make_symmetric_w(3, 7)) == pytest.approx(3 * 5, abs=1e-12)
        assert correlation_sum(make_separable(3, 4)) == pytest.approx(3, abs=1e-15)
        assert correlation_sum(make_separable(0, 4)) == 0


def test_angular_profile():
    theta = np.linspace(-1, 1, 21)
    prof = angular_profile(make_symmetric_w(1, 4), ChainGeometry(4, KD), theta)
    assert prof.value_at(0.0) == pytest.approx(4)
    assert prof.n_atoms == 4 and prof.state_label == "W:1,4"
    with pytest.raises(ValueError):
        angular_profile(make_symmetric_w(1, 4), ChainGeometry(4, KD), theta[::-1])
