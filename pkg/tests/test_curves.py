import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from loewnerkit import examples as ex
from loewnerkit.curves import DISC, Curve, hausdorff_distance, is_simple, polyline, uniform_distance
from loewnerkit.geometry import INF, cdist


def _random_polyline(seed, n=100):
    r = np.random.default_rng(seed)
    return Curve(np.cumsum(r.normal(size=n) + 1j * np.abs(r.normal(size=n))))


def test_reverse_examples():
    c = Curve([-1, 1])
    r = c.reverse()
    assert list(r.points) == [1, -1] and list(r.params) == [0, 1]
    c = _random_polyline(0)
    rr = c.reverse().reverse()
    assert np.array_equal(rr.points, c.points) and np.allclose(rr.params, c.params, atol=1e-15)
    lad = ex.gen_ladder(2, per_segment=1)
    assert lad.reverse().points[0] == lad.points[-1] and lad.reverse().points[-1] == 0


def test_concat_examples():
    c = Curve([-1, 0]).concat(Curve([0, 1]))
    assert list(c.points) == [-1, 0, 1] and list(c.params) == [0, 0.5, 1]
    with pytest.raises(ValueError):
        Curve([-1, 0]).concat(Curve([0.1, 1]))
    eta1 = Curve([-1, 1j], domain=DISC)
    eta2 = Curve([1j, -1j], domain=DISC)
    assert eta1.concat(eta2).points[1] == 1j


def test_validation():
    with pytest.raises(ValueError):
        Curve([0, 0])
    with pytest.raises(ValueError):
        Curve([0, 1 - 1j])
    with pytest.raises(ValueError):
        Curve([0, 1, 2], params=[0, 0.7, 0.5])
    with pytest.raises(ValueError):
        Curve([0, 2], domain=DISC)
    # repeated consecutive samples are dropped
    assert len(Curve([0, 1j, 1j, 2j])) == 3


def test_resample_examples():
    c = Curve([0, 1j]).resample(3)
    assert np.allclose(c.points, [0, 0.5j, 1j])
    # integer segment lengths, so the 10x grid (spacing 0.1) lands on every corner
    p = polyline([0, 1j, 1 + 1j, 1 + 3j])
    q = p.resample(41)
    assert abs(q.arclength() - p.arclength()) < 1e-9
    c = _random_polyline(1)
    assert hausdorff_distance(c, c.resample(len(c))) <= c.segment_lengths().max()


def test_hausdorff_examples():
    c = _random_polyline(2)
    assert hausdorff_distance(c, c) == 0
    seg = polyline([-0.01, 0.01], max_step=0.001)
    pt = Curve([1j, 1j + 1e-9])
    assert abs(hausdorff_distance(seg, pt) - cdist(0, 1j)) < 0.01
    th1 = np.linspace(0.2, 2.5, 400)
    th2 = np.linspace(0.2, 2.5, 531)
    a, b = Curve(2j + np.exp(1j * th1)), Curve(2j + np.exp(1j * th2))
    gap = np.abs(np.diff(a.ground())).max()
    assert hausdorff_distance(a, b) <= gap
    # brute force
    ga, gb = a.ground(), b.ground()
    D = np.abs(ga[:, None] - gb[None, :])
    assert hausdorff_distance(a, b) == pytest.approx(max(D.min(0).max(), D.min(1).max()))


def test_uniform_distance_examples():
    c = _random_polyline(3)
    assert uniform_distance(c, c.reparametrized(lambda t: t ** 2)) == 0
    seg = Curve([-1, 0, 1])
    assert uniform_distance(seg, seg.reverse()) == pytest.approx(cdist(-1, 1))


def test_ladder_has_no_uniform_limit():
    """d(ladder_j, axis segment) stays above a fixed c0 (estimated at j=5)."""
    axis = ex.ladder_target()
    c0 = 0.9 * uniform_distance(ex.gen_ladder(5, per_segment=4), axis)
    assert c0 > 0.1
    for j in (3, 4, 6):
        assert uniform_distance(ex.gen_ladder(j, per_segment=4), axis) >= c0


def test_csv_round_trip(tmp_path):
    c = Curve([0, 1j, INF])
    text = c.to_csv()
    assert text.splitlines()[0] == "t,re,im" and text.splitlines()[-1].endswith(",inf")
    assert Curve.from_csv(text) == c
    d = Curve([-1, 0.5j, 1], domain=DISC)
    p = tmp_path / "d.csv"
    d.to_csv(p)
    assert Curve.from_csv(p) == d


def test_is_simple():
    assert is_simple(polyline([0, 1j, 1 + 1j]))
    assert not is_simple(Curve([0, 2j, 1 + 1j, -1 + 1j]))


# ---------------------------------------------------------------- properties

seeds = st.integers(0, 10 ** 6)


@given(seeds, seeds)
def test_uniform_dominates_hausdorff(s1, s2):
    a, b = _random_polyline(s1, 30), _random_polyline(s2, 25)
    assert uniform_distance(a, b) >= hausdorff_distance(a, b) - 1e-12


@given(seeds, st.floats(0.2, 5))
def test_uniform_reparametrisation_invariance(s, p):
    c = _random_polyline(s, 30)
    assert uniform_distance(c, c.reparametrized(lambda t: t ** p)) == 0


@given(seeds, seeds, seeds)
def test_uniform_triangle_inequality(s1, s2, s3):
    a, b, c = (_random_polyline(s, 20) for s in (s1, s2, s3))
    assert uniform_distance(a, c) <= uniform_distance(a, b) + uniform_distance(b, c) + 1e-9


@given(seeds, seeds)
def test_concat_reverse(s1, s2):
    a = _random_polyline(s1, 10)
    b = _random_polyline(s2, 10)
    b = Curve(b.points - b.points[0] + a.points[-1])
    left = a.concat(b).reverse()
    right = b.reverse().concat(a.reverse())
    assert np.array_equal(left.points, right.points) and np.allclose(left.params, right.params, atol=1e-15)
