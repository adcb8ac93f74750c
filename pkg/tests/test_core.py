import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from slabbeam import core
from slabbeam.core import Regime, SlabConfig
from slabbeam.errors import CriticalRegimeError, DomainError, RegimeError, SeriesDivergenceError

A45 = 1 / math.sqrt(2)
N_DIFF = math.sqrt(3) / 2
# alpha = 1/sqrt(2), n = sqrt(3)/2 gives q = 1/2 and r0 = (1/sqrt2 - 1/2)/(1/sqrt2 + 1/2) = 3 - 2 sqrt2
R0_DIFF = 3 - 2 * math.sqrt(2)


def cfg(n_ratio=N_DIFF, lam=0.0, delta=50.0, alpha0=A45):
    return SlabConfig(n_ratio, alpha0, delta, lam / delta)


def series_form(alpha, c):
    """R, T assembled literally from the interface and far-face coefficients."""
    ic = core.interface_coefficients(alpha, c.n_ratio)
    r_L, t_L = core.far_face_coefficients(alpha, c)
    d = 1 - ic.r_back * r_L
    return ic.r0 + ic.t0 * r_L * ic.t_back / d, ic.t0 * t_L / d


# -- regime and wavenumber -------------------------------------------------

def test_regimes_of_the_two_scenarios():
    assert core.classify_regime(math.cos(math.pi / 4), 0.5) is Regime.TUNNELING
    assert core.classify_regime(math.cos(math.pi / 4), N_DIFF) is Regime.DIFFUSION
    assert core.classify_regime(math.sqrt(3) / 2, 0.5) is Regime.CRITICAL


@pytest.mark.parametrize("alpha", [0.0, -0.2, 1.5])
def test_classify_rejects_alpha_outside_domain(alpha):
    with pytest.raises(DomainError):
        core.classify_regime(alpha, 0.8)


def test_axial_wavenumber_branches():
    assert core.axial_wavenumber(A45, N_DIFF) == pytest.approx(0.5, abs=1e-15)
    q = core.axial_wavenumber(A45, 0.5)
    assert q.real == 0 and q.imag == pytest.approx(0.5, abs=1e-15)
    alphas = np.linspace(0.1, 0.9, 9)
    np.testing.assert_allclose(core.axial_wavenumber(alphas, 1.0), alphas, rtol=1e-15)


# -- interface and far-face coefficients ---------------------------------------

def test_normal_incidence_interface():
    c = core.interface_coefficients(1.0, 3.0)
    assert c.r0 == pytest.approx(-0.5)
    assert c.t0 == pytest.approx(0.5)


def test_diffusion_interface_values():
    c = core.interface_coefficients(A45, N_DIFF)
    assert c.r0 == pytest.approx(R0_DIFF, abs=1e-15)
    assert c.t0 == pytest.approx(1 + R0_DIFF, abs=1e-15)
    assert c.t_back == pytest.approx(2 * math.sqrt(2) - 2, abs=1e-15)
    assert abs(c.r0 - 0.171573) < 1e-6 and abs(c.t_back - 0.828427) < 1e-6
    assert c.r0**2 + c.t0 * c.t_back == pytest.approx(1, abs=1e-15)
    for v in (c.r0, c.t0, c.r_back, c.t_back):
        assert np.imag(v) == 0


def test_tunneling_interface_has_unit_modulus_reflection():
    c = core.interface_coefficients(A45, 0.5)
    assert abs(c.r0) == pytest.approx(1, abs=1e-15)


def test_critical_interface_is_an_error():
    with pytest.raises(CriticalRegimeError):
        core.interface_coefficients(math.sqrt(3) / 2, 0.5)


def test_far_face_zero_width():
    c = core.interface_coefficients(A45, N_DIFF)
    r_L, t_L = core.far_face_coefficients(A45, cfg(lam=0))
    assert r_L == c.r_back and t_L == c.t_back


def test_far_face_full_round_trip_phase():
    r_L, _ = core.far_face_coefficients(A45, cfg(lam=2 * math.pi))
    assert r_L == pytest.approx(-R0_DIFF, abs=1e-14)


def test_far_face_tunneling_decay():
    r_L, _ = core.far_face_coefficients(A45, cfg(0.5, lam=10))
    assert abs(r_L) == pytest.approx(math.exp(-10), rel=1e-12)
    assert abs(abs(r_L) - 4.54e-5) < 1e-7


# -- slab coefficients -----------------------------------------------------------

def test_zero_width_slab_is_transparent():
    R, T = core.slab_coefficients(A45, cfg(lam=0))
    assert abs(R) < 1e-15 and T == pytest.approx(1, abs=1e-15)


def test_resonance_gives_full_transmission():
    _, T = core.slab_coefficients(A45, cfg(lam=2 * math.pi))
    assert abs(T) ** 2 == pytest.approx(1, abs=1e-12)


def test_antiresonance_value():
    # q lam = pi/2: |T|^2 = 4 a^2 q^2 / (a^2 + q^2)^2 = 8/9 for a^2 = 1/2, q^2 = 1/4
    R, T = core.slab_coefficients(A45, cfg(lam=math.pi))
    assert abs(T) ** 2 == pytest.approx(8 / 9, abs=1e-14)
    assert abs(abs(T) ** 2 - 0.888891) < 1e-5
    assert abs(abs(R) ** 2 - 0.111109) < 1e-5
    sol = core.solve_boundary_value(A45, cfg(lam=math.pi))
    assert abs(sol.R - R) < 1e-12 and abs(sol.T - T) < 1e-12


@pytest.mark.parametrize("n_ratio,lam", [(N_DIFF, 3.7), (1.4, 12.0), (0.5, 2.0), (0.5, 30.0), (0.3, 0.4)])
def test_stable_closed_form_matches_literal_assembly(n_ratio, lam):
    c = cfg(n_ratio, lam)
    for a in (0.2, 0.55, A45, 0.93):
        if core.classify_regime(a, n_ratio) is Regime.CRITICAL:
            continue
        R, T = core.slab_coefficients(a, c)
        Rp, Tp = series_form(a, c)
        assert abs(R - Rp) < 1e-13 and abs(T - Tp) < 1e-13


def test_uniform_medium():
    sol = core.solve_boundary_value(0.3, SlabConfig(1.0, 0.5, 20.0, 1.7))
    assert abs(sol.R) < 1e-15 and abs(sol.G) < 1e-15
    assert abs(sol.T) == pytest.approx(1, abs=1e-15)
    assert sol.F == pytest.approx(1, abs=1e-15)


def test_tunneling_boundary_value_conserves():
    sol = core.solve_boundary_value(A45, cfg(0.5, lam=5))
    assert abs(sol.R) ** 2 + abs(sol.T) ** 2 == pytest.approx(1, abs=1e-12)
    assert abs(sol.T) ** 2 < 0.05


def test_critical_boundary_value_is_finite_and_conserving():
    a = math.sqrt(3) / 2
    sol = core.solve_boundary_value(a, SlabConfig(0.5, 0.8, 50.0, 0.1))
    assert sol.regime is Regime.CRITICAL
    assert abs(sol.R) ** 2 + abs(sol.T) ** 2 == pytest.approx(1, abs=1e-12)
    # critical is the limit of the neighbouring regimes
    for eps in (1e-7, -1e-7):
        R, T = core.slab_coefficients(a + eps, SlabConfig(0.5, 0.8, 50.0, 0.1))
        assert abs(R - sol.R) < 1e-5 and abs(T - sol.T) < 1e-5


def test_boundary_value_field_matches_on_both_faces():
    c = cfg(N_DIFF, lam=7.3)
    s = core.solve_boundary_value(A45, c)
    lam, q = c.phase_length, 0.5
    assert 1 + s.R == pytest.approx(s.F + s.G, abs=1e-14)
    assert A45 * (1 - s.R) == pytest.approx(q * (s.F - s.G), abs=1e-14)
    inside = s.F * np.exp(1j * q * lam) + s.G * np.exp(-1j * q * lam)
    assert inside == pytest.approx(s.T * np.exp(1j * A45 * lam), abs=1e-14)


# -- series, particle limit, resonance -----------------------------------------

def test_first_terms_read_off_the_series():
    c = cfg(lam=3.3)
    ic = core.interface_coefficients(A45, N_DIFF)
    _, t_L = core.far_face_coefficients(A45, c)
    t = core.order_terms(A45, c, 3)
    assert [x.n for x in t] == [0, 1, 2, 3]
    assert t[0].Rn == pytest.approx(ic.r0) and t[0].Tn == pytest.approx(ic.t0 * t_L)


@pytest.mark.parametrize("lam", [0.0, 1.0, math.pi, 25.0, 200.0])
def test_series_converges_to_closed_form(lam):
    c = cfg(lam=lam)
    R, T = core.slab_coefficients(A45, c)
    terms = core.order_terms(A45, c, 50)
    assert abs(sum(t.Rn for t in terms) - R) < 1e-12
    assert abs(sum(t.Tn for t in terms) - T) < 1e-12


def test_series_ratio_is_r0_squared():
    terms = core.order_terms(A45, cfg(lam=4.1), 6)
    for a, b in zip(terms[1:], terms[2:]):
        assert abs(b.Rn / a.Rn) == pytest.approx(R0_DIFF**2, abs=1e-10)
        assert abs(b.Tn / a.Tn) == pytest.approx(R0_DIFF**2, abs=1e-10)


def test_series_refused_in_tunneling():
    with pytest.raises(SeriesDivergenceError, match="diverges in tunneling"):
        core.order_terms(A45, cfg(0.5, lam=3), 5)


def test_particle_sums_values():
    sr, st_ = core.particle_limit_sums(A45, cfg())
    # (1 - r0^2)^2 / (1 - r0^4) = (1 - r0^2) / (1 + r0^2)
    expected_t = (1 - R0_DIFF**2) / (1 + R0_DIFF**2)
    assert st_ == pytest.approx(expected_t, abs=1e-15)
    assert abs(sr - 0.057191) < 1e-5 and abs(st_ - 0.942809) < 1e-5
    assert sr + st_ == pytest.approx(1, abs=1e-12)


def test_particle_sums_match_squared_terms_and_ignore_width():
    for lam in (0.3, 17.0):
        terms = core.order_terms(A45, cfg(lam=lam), 60)
        sr, st_ = core.particle_limit_sums(A45, cfg(lam=lam))
        assert sum(abs(t.Rn) ** 2 for t in terms) == pytest.approx(sr, abs=1e-14)
        assert sum(abs(t.Tn) ** 2 for t in terms) == pytest.approx(st_, abs=1e-14)


def test_particle_sums_uniform_medium_and_tunneling():
    assert core.particle_limit_sums(0.4, 1.0) == pytest.approx((0.0, 1.0), abs=1e-15)
    with pytest.raises(SeriesDivergenceError):
        core.particle_limit_sums(A45, 0.5)


def test_particle_limit_differs_from_wave_limit_at_resonance():
    _, T = core.slab_coefficients(A45, cfg(lam=2 * math.pi))
    _, st_ = core.particle_limit_sums(A45, cfg())
    assert abs(T) ** 2 - st_ > 0.05


def test_resonance_lengths():
    lams = core.resonance_lengths(A45, cfg(), 3)
    np.testing.assert_allclose(lams, [2 * math.pi, 4 * math.pi, 6 * math.pi], rtol=1e-14)
    for lam in lams:
        _, T = core.slab_coefficients(A45, cfg(lam=lam))
        assert abs(T) ** 2 == pytest.approx(1, abs=1e-9)
    # doubling q halves the first length: q(alpha, n) = 1 for alpha^2 = 1/2, n^2 = 3/2
    first = core.resonance_lengths(A45, cfg(math.sqrt(1.5)), 1)[0]
    assert first == pytest.approx(lams[0] / 2, rel=1e-14)
    with pytest.raises(RegimeError):
        core.resonance_lengths(A45, cfg(0.5), 2)


def test_resonance_and_antiresonance_extremes():
    ic = core.interface_coefficients(A45, N_DIFF)
    floor = (ic.t0 * ic.t_back) ** 2 / (1 + ic.r0**2) ** 2
    lams = np.linspace(0, 6 * math.pi, 6001)
    t2 = np.array([abs(core.slab_coefficients(A45, cfg(lam=x))[1]) ** 2 for x in lams])
    assert t2.max() == pytest.approx(1, abs=1e-12)
    assert t2.min() == pytest.approx(floor, abs=1e-10)
    for n in range(1, 3):
        mid = (2 * n - 1) * math.pi
        assert abs(core.slab_coefficients(A45, cfg(lam=mid))[1]) ** 2 == pytest.approx(floor, abs=1e-14)


def test_tunneling_transmission_decreases_with_width():
    for a in (0.3, A45, 0.85):
        t2 = [abs(core.slab_coefficients(a, cfg(0.5, lam=x))[1]) ** 2 for x in np.linspace(0, 40, 200)]
        assert np.all(np.diff(t2) < 0)


def test_slab_config_validation():
    with pytest.raises(DomainError):
        SlabConfig(0.5, 1.0, 50, 1)
    with pytest.raises(DomainError):
        SlabConfig(-1, 0.5, 50, 1)
    with pytest.raises(DomainError):
        SlabConfig(0.5, 0.5, 0, 1)
    with pytest.raises(DomainError):
        SlabConfig(0.5, 0.5, 50, -1)
    c = SlabConfig.from_angle(0.5, math.pi / 4, 50, 2)
    assert c.phase_length == pytest.approx(100)
    assert c.critical_alpha == pytest.approx(math.sqrt(0.75))


# -- properties ----------------------------------------------------------------

alphas = st.floats(0.01, 0.999)
ratios = st.floats(0.2, 3.0)
lams = st.floats(0.0, 80.0)


def _away_from_critical(a, n):
    assume(abs(n * n - 1 + a * a) > 1e-6)


@settings(max_examples=300, deadline=None)
@given(alphas, ratios, lams)
def test_conservation_property(a, n, lam):
    _away_from_critical(a, n)
    R, T = core.slab_coefficients(a, cfg(n, lam))
    assert abs(abs(R) ** 2 + abs(T) ** 2 - 1) < 1e-12


@settings(max_examples=300, deadline=None)
@given(alphas, ratios)
def test_interface_identities_property(a, n):
    _away_from_critical(a, n)
    c = core.interface_coefficients(a, n)
    assert c.r_back == -c.r0
    assert abs(c.r0**2 + c.t0 * c.t_back - 1) < 1e-14


@settings(max_examples=200, deadline=None)
@given(alphas, ratios, lams)
def test_oracle_equivalence_property(a, n, lam):
    assume(abs(n * n - 1 + a * a) > 1e-4)
    c = cfg(n, lam)
    R, T = core.slab_coefficients(a, c)
    sol = core.solve_boundary_value(a, c)
    assert abs(sol.R - R) < 1e-12 and abs(sol.T - T) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(1.01, 2.5))
def test_particle_conservation_property(a, n):
    sr, st_ = core.particle_limit_sums(a, n)
    assert abs(sr + st_ - 1) < 1e-12


def test_vectorized_slab_coefficients_match_scalar():
    a = np.linspace(0.1, 0.95, 7)
    R, T = core.slab_coefficients(a, cfg(1.3, 9.0))
    for k, ak in enumerate(a):
        Rk, Tk = core.slab_coefficients(float(ak), cfg(1.3, 9.0))
        assert R[k] == Rk and T[k] == Tk
