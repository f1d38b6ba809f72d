"""Distances between curves through their driving functions."""
from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .curves import DISC, Curve, _frechet
from .geometry import as_complex, is_inf, psi_boundary
from .loewner import DrivingFunction, unzip_chordal, unzip_radial_at, unzip_radial_many

TAU = 0.25
N_HORIZONS = 8
# curves up to this many samples are unzipped separately at every viewpoint; the shared
# chordal pass is blind to pockets that are invisible from the curve's end
DIRECT_MAX = 2000


@dataclass
class MetricReport:
    value: float
    components: tuple
    grid_size: int

    def to_dict(self):
        return asdict(self)


def _half_plane(c: Curve) -> Curve:
    return c.to_half_plane() if c.domain == DISC else c


def driving_from(c: Curve, x) -> DrivingFunction:
    """W_{x,.} of c: radial for interior x, chordal (after sending x to infinity) for boundary x."""
    c = _half_plane(c)
    xc = as_complex(x)
    if is_inf(xc) or abs(xc.imag) <= 1e-12:
        m = psi_boundary(xc)
        return unzip_chordal(c.transformed(m), allow_touch=True)[0]
    return unzip_radial_at(c, xc)[0]


def sup_difference(W1: DrivingFunction, W2: DrivingFunction, upto: float | None = None):
    """sup_t |W1(t ^ T1) - W2(t ^ T2)| on the merged grid, optionally on [0, upto]."""
    grid = np.union1d(W1.times, W2.times)
    if upto is not None:
        grid = np.union1d(grid[grid <= upto], [upto])
    return float(np.max(np.abs(W1(grid) - W2(grid)))), len(grid)


def _align(W1: DrivingFunction, W2: DrivingFunction) -> DrivingFunction:
    if W1.kind != "radial":
        return W2
    k = np.round((W1.values[0] - W2.values[0]) / (2 * np.pi))
    return W2.shifted(2 * np.pi * k) if k else W2


def compare_drivings(W1: DrivingFunction, W2: DrivingFunction) -> MetricReport:
    W2 = _align(W1, W2)
    dT = abs(W1.T - W2.T)
    if W1.T == 0 and W2.T == 0:
        return MetricReport(0.0, (0.0, 0.0), 1)
    sup, n = sup_difference(W1, W2)
    return MetricReport(dT + sup, (dT, sup), n)


def d_cap_r(c1: Curve, c2: Curve, x) -> MetricReport:
    """|T1 - T2| + sup |W_{x, t ^ T1}(c1) - W_{x, t ^ T2}(c2)|."""
    return compare_drivings(driving_from(c1, x), driving_from(c2, x))


def drivings_from(c: Curve, xs) -> list:
    """driving_from for a whole grid of viewpoints; for long curves the interior points
    share one zipper pass."""
    c = _half_plane(c)
    xs = [as_complex(x) for x in xs]
    out = [None] * len(xs)
    inner = [i for i, x in enumerate(xs) if not (is_inf(x) or abs(x.imag) <= 1e-12)]
    if inner and len(c) > DIRECT_MAX:
        for i, W in zip(inner, unzip_radial_many(c, [xs[i] for i in inner])):
            out[i] = W
    for i, x in enumerate(xs):
        if out[i] is None:
            out[i] = driving_from(c, x)
    return out


def d_cap_grid(c1: Curve, c2: Curve, xs, target_drivings=None) -> list:
    """d_cap_r(c1, c2, x) for every x in xs (pass c2's drivings to reuse them)."""
    W2 = target_drivings if target_drivings is not None else drivings_from(c2, xs)
    return [compare_drivings(a, b) for a, b in zip(drivings_from(c1, xs), W2)]


def d_cap_l(c1: Curve, c2: Curve, x) -> MetricReport:
    """Same formula as d_cap_r; callers pass the reversed curves."""
    return d_cap_r(c1, c2, x)


def terminal_driving(c: Curve, direction: str = "forward") -> DrivingFunction:
    """Chordal driving function of a canonical-frame curve (-1 -> 1) seen from its terminal point."""
    c = _half_plane(c)
    if direction == "forward":
        return unzip_chordal(c.transformed(psi_boundary(1.0)), allow_touch=True)[0]
    if direction == "backward":
        return unzip_chordal(c.reverse().transformed(psi_boundary(-1.0)), allow_touch=True)[0]
    raise ValueError("direction must be 'forward' or 'backward'")


def locally_uniform_from(W1: DrivingFunction, W2: DrivingFunction, tau=TAU, n_max=N_HORIZONS):
    horizon = min(W1.T, W2.T)
    N = min(n_max, int(np.floor(horizon / tau + 1e-12)))
    if N < 1:
        warnings.warn("capacity horizon shorter than one unit; using sup over the shared range")
        return min(1.0, sup_difference(W1, W2, horizon)[0]), True
    total = 0.0
    for n in range(1, N + 1):
        total += 2.0 ** -n * min(1.0, sup_difference(W1, W2, n * tau)[0])
    return total, False


def d_locally_uniform(c1: Curve, c2: Curve, direction: str = "forward", tau: float = TAU,
                      n_max: int = N_HORIZONS) -> float:
    """sum_{n<=N} 2^-n min(1, sup_[0, n tau] |W1 - W2|) for the terminal-point driving functions."""
    W1 = terminal_driving(c1, direction)
    W2 = terminal_driving(c2, direction)
    return locally_uniform_from(W1, W2, tau, n_max)[0]


def d_f(c1, c2, **kw):
    return d_locally_uniform(c1, c2, "forward", **kw)


def d_b(c1, c2, **kw):
    return d_locally_uniform(c1, c2, "backward", **kw)


def _ground_resample(g: np.ndarray, n: int) -> np.ndarray:
    if len(g) <= n:
        return g
    s = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(g)))])
    t = np.linspace(0.0, s[-1], n)
    return np.interp(t, s, g.real) + 1j * np.interp(t, s, g.imag)


def d_strong(c1: Curve, c2: Curve, max_samples: int = 3000) -> float:
    """Uniform (Frechet) distance in the cdist frame.

    Curves longer than ``max_samples`` are resampled at equal cdist arclength first,
    which keeps the quadratic Frechet recursion affordable at the cost of an error of
    at most one resampled spacing.
    """
    a = _ground_resample(c1.ground(), max_samples)
    b = _ground_resample(c2.ground(), max_samples)
    return float(_frechet(a, b))
