import numpy as np
import pytest
from _suite import TEST_CURVES, VIEWPOINT

from loewnerkit import examples as ex
from loewnerkit.analysis import (
    alpha_left,
    alpha_right,
    arc_measure,
    caratheodory_sup,
    exclusive_arc_lengths,
    harmonic_param_s,
    harmonic_param_sx,
    hitting_prob_conformal,
    hitting_prob_mc,
    hitting_prob_real,
    hitting_prob_real_mc,
    sample_capacity_times,
    time_separation_diag,
)
from loewnerkit.curves import Curve, polyline
from loewnerkit.geometry import cdist
from loewnerkit.loewner import RADIAL, DrivingFunction, unzip_radial_at

SLIT = polyline([0, 1j], max_step=1e-3)


# ------------------------------------------------------------------ harmonic measure

def test_slit_closed_form():
    """g(z) = sqrt(z^2 + 1) removes [0, i] and sends 2i to i sqrt(3); the slit's two sides
    become [-1, 1], seen from i sqrt(3) with harmonic measure (2/pi) arctan(1/sqrt 3) = 1/3."""
    u = unzip_radial_at(SLIT, 2j)
    T = u[0].T
    assert hitting_prob_conformal(SLIT, 2j, 0, T, _unzipped=u) == pytest.approx(1 / 3, abs=2e-3)
    assert hitting_prob_real(SLIT, 2j, _unzipped=u) == pytest.approx(2 / 3, abs=2e-3)


def test_partition_of_unity():
    for c in TEST_CURVES.values():
        u = unzip_radial_at(c, VIEWPOINT)
        T = u[0].T
        cuts = np.linspace(0, T, 6)
        parts = [hitting_prob_conformal(c, VIEWPOINT, a, b, _unzipped=u) for a, b in zip(cuts, cuts[1:])]
        assert sum(parts) + hitting_prob_real(c, VIEWPOINT, _unzipped=u) == pytest.approx(1.0, abs=1e-3)
        assert all(p >= 0 for p in parts)


def test_slit_sides_symmetric():
    u = unzip_radial_at(SLIT, 2j)
    left, right = alpha_left(SLIT, 2j, _unzipped=u), alpha_right(SLIT, 2j, _unzipped=u)
    assert left == pytest.approx(right, abs=1e-3)
    assert left + right + hitting_prob_real(SLIT, 2j, _unzipped=u) == pytest.approx(1.0, abs=1e-3)
    # with a reference point far out on the left, the left side is half of everything
    assert alpha_left(SLIT, 2j, ref_p=-1e6, _unzipped=u) == pytest.approx(0.5, abs=1e-3)


@pytest.mark.parametrize("name", list(TEST_CURVES))
def test_sides_partition(name):
    c = TEST_CURVES[name]
    u = unzip_radial_at(c, VIEWPOINT)
    total = alpha_left(c, VIEWPOINT, _unzipped=u) + alpha_right(c, VIEWPOINT, _unzipped=u)
    assert total + hitting_prob_real(c, VIEWPOINT, _unzipped=u) == pytest.approx(1.0, abs=1e-3)


def test_alpha_along_ladder_is_cauchy():
    a = [alpha_left(ex.gen_ladder(j, per_segment=6), 2 + 2j) for j in range(2, 9)]
    d = np.abs(np.diff(a))
    assert all(y < x for x, y in zip(d, d[1:]))


def test_mc_agrees_with_conformal():
    for name, c in TEST_CURVES.items():
        u = unzip_radial_at(c, VIEWPOINT)
        T = u[0].T
        tm = sample_capacity_times(c, VIEWPOINT, _unzipped=u)
        for a, b in ((0, T / 3), (T / 3, T)):
            pc = hitting_prob_conformal(c, VIEWPOINT, a, b, _unzipped=u)
            pm = hitting_prob_mc(c, VIEWPOINT, a, b, walkers=20_000, times=tm, seed=1)
            assert abs(pc - pm) <= 0.02, name


def test_mc_slit_closed_form():
    n = 20_000
    p = hitting_prob_mc(SLIT, 2j, 0, np.inf, walkers=n, seed=3)
    assert abs(p - 1 / 3) <= 3 * np.sqrt(2 / 9 / n)


def test_mc_far_curve_hits_real_line():
    far = polyline([100, 100 + 1e-3j])
    assert hitting_prob_real_mc(far, 1j, walkers=5000) == 1.0


def test_mc_symmetric_halves():
    """A symmetric arch seen from its axis: the two halves (by curve parameter) are hit
    equally often."""
    arch = polyline([-1, -1 + 1j, 1 + 1j, 1], max_step=5e-3)
    n = 20_000
    par = arch.params
    p1 = hitting_prob_mc(arch, 0.5j, 0, 0.5, walkers=n, times=par, seed=5)
    p2 = hitting_prob_mc(arch, 0.5j, 0.5, 1.0, walkers=n, times=par, seed=5)
    p = 0.5 * (p1 + p2)
    assert abs(p1 - p2) <= 3 * np.sqrt(2 * p * (1 - p) / n) + 1e-12


def test_arc_measure():
    assert arc_measure(0j, 0, np.pi) == pytest.approx(0.5)
    assert arc_measure(0.5, -0.1, 0.1) > arc_measure(0j, -0.1, 0.1)


def test_exclusive_arcs_cover_once():
    E = exclusive_arc_lengths(np.array([[0.0, 0.5, 1.0], [0.4, 0.5, 0.6]]))
    assert np.allclose(E, [0.8, 0.2])
    # an arc of more than a full turn owns the circle exactly once
    E = exclusive_arc_lengths(np.array([[0.0, 0.5, 1.0], [-1.0, 0.0, 7.0]]))
    assert np.allclose(E, [0.0, 2 * np.pi])


# ------------------------------------------------------------------ Caratheodory

def _const(v, T=0.5, n=200):
    t = np.linspace(0, T, n + 1)
    return DrivingFunction(t, np.full_like(t, v), RADIAL)


def test_caratheodory_identity():
    W = DrivingFunction(np.linspace(0, 0.5, 201), np.sin(6 * np.linspace(0, 0.5, 201)), RADIAL)
    assert caratheodory_sup(W, W, x=1j, eps=0.05) == 0.0


def test_caratheodory_monotone_in_delta():
    vals = [caratheodory_sup(_const(0.0), _const(d), x=1j, eps=0.05) for d in (0.1, 0.05, 0.025)]
    assert vals[0] > vals[1] > vals[2] > 0


def test_caratheodory_domain_monotone():
    W1, W2 = _const(0.0), _const(0.05)
    coarse = caratheodory_sup(W1, W2, x=1j, eps=0.1, grid=30)
    fine = caratheodory_sup(W1, W2, x=1j, eps=0.05, grid=30)
    assert coarse <= fine + 1e-12


# ------------------------------------------------------------------ time separation

def test_time_separation_simple_curve():
    for c in TEST_CURVES.values():
        assert time_separation_diag(c, 0.5, 0.002) == 0.0


def test_time_separation_retrace():
    eps = 0.01
    c = polyline([0, 1j, 1 + 1j, 1j + 1e-9, 0.5 + 2j], max_step=0.01)
    # the turn at 1 + i is the midpoint of the retraced stretch
    t = c.params[np.argmin(np.abs(c.points - (1 + 1j)))]
    assert time_separation_diag(c, t, eps) >= cdist(1j, 1 + 1j) - 4 * eps


# ------------------------------------------------------------------ harmonic parametrisation

def test_harmonic_param_normalised():
    xw = [(2j, 0.5), (0.5 + 0.5j, 0.5)]
    assert harmonic_param_s(SLIT, xw, 0.0) == 0.0
    assert harmonic_param_s(SLIT, xw, 1.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        harmonic_param_s(SLIT, [(2j, 0.7)], 0.5)


def test_harmonic_param_increasing_on_slit():
    s = harmonic_param_sx(SLIT, 0.6 + 0.8j, np.linspace(0.1, 1.0, 10))
    assert np.all(np.diff(s) > 0)


def test_harmonic_param_mirror_symmetry():
    t = np.linspace(0.05, 0.95, 10)
    x = 0.6 + 0.8j
    assert np.allclose(harmonic_param_sx(SLIT, x, t), harmonic_param_sx(SLIT, -x.conjugate(), t), atol=1e-3)
