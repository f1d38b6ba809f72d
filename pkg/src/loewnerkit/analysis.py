"""Harmonic measure, Caratheodory and time-separation diagnostics built on the zippers."""
from __future__ import annotations

import heapq

import numpy as np
from scipy.sparse.csgraph import connected_components
from scipy.spatial import ConvexHull, cKDTree
from scipy.spatial.distance import pdist

from . import _kernels as K
from .curves import DISC, HALF_PLANE, Curve
from .geometry import CAYLEY, CAYLEY_INV, ComplexPoint, as_complex, cdist, is_inf, psi_interior
from .loewner import (CHORDAL, RADIAL, DrivingFunction, chain_from_driving, solve_chordal_trace,
                      solve_radial_trace, unzip_radial_at)

TWO_PI = 2 * np.pi


def exclusive_arc_lengths(weld: np.ndarray) -> np.ndarray:
    """Length of circle each step owns: a point belongs to the latest arc covering it.

    ``weld`` rows are (lo, tip, hi) angle lifts. Arcs are folded onto one turn of
    the circle starting at the smallest lo, so overlap after a full turn is not
    double counted.
    """
    n = len(weld)
    if n == 0:
        return np.zeros(0)
    lo = weld[:, 0].copy()
    hi = weld[:, 2].copy()
    ref = lo.min()
    pieces = []
    for k in range(n):
        a, b = lo[k] - ref, min(hi[k] - ref, lo[k] - ref + TWO_PI)
        if b <= a:
            continue
        if b <= TWO_PI:
            pieces.append((a, b, k))
        else:
            if a < TWO_PI:
                pieces.append((a, TWO_PI, k))
            pieces.append((0.0, b - TWO_PI, k))
    events = []
    for a, b, k in pieces:
        events.append((a, 1, k))
        events.append((b, 0, k))
    events.sort()
    out = np.zeros(n)
    active: list[int] = []
    count: dict[int, int] = {}
    prev = None
    for pos, kind, k in events:
        while active and count.get(-active[0], 0) == 0:
            heapq.heappop(active)
        if prev is not None and active and pos > prev:
            out[-active[0]] += pos - prev
        if kind == 1:
            count[k] = count.get(k, 0) + 1
            heapq.heappush(active, -k)
        else:
            count[k] -= 1
        prev = pos
    return out


def _step_times(W: DrivingFunction) -> np.ndarray:
    return W.times[1:]


def hitting_prob_conformal(c: Curve, x, s: float, t: float, _unzipped=None) -> float:
    """Harmonic measure from x of the part of c with capacity-time (seen from x) in [s, t].

    The real line gets 1 minus the total; use ``hitting_prob_real``.
    """
    W, ch = _unzipped or unzip_radial_at(c, x)
    E = exclusive_arc_lengths(ch.weld)
    tk = _step_times(W)
    sel = (tk > s) & (tk <= t) if s > 0 else (tk <= t)
    return float(E[sel].sum() / TWO_PI)


def hitting_prob_real(c: Curve, x, _unzipped=None) -> float:
    W, ch = _unzipped or unzip_radial_at(c, x)
    return float(1.0 - exclusive_arc_lengths(ch.weld).sum() / TWO_PI)


def sample_capacity_times(c: Curve, x, _unzipped=None) -> np.ndarray:
    """Capacity time (seen from x) attached to every sample of c; frozen after swallowing."""
    W, ch = _unzipped or unzip_radial_at(c, x)
    idx = np.concatenate([[0], ch.sample_index])
    tt = W.times
    k = np.arange(len(c))
    return np.interp(k, idx, tt)


def hitting_prob_mc(c: Curve, z, s: float, t: float, walkers: int = 100_000, step: float = 1.0,
                    eps_abs: float = 1e-4, seed: int = 0, times=None, max_steps: int = 100_000) -> float:
    """Walk-on-spheres estimate of the probability that Brownian motion from z
    first hits c within capacity-times [s, t] (capacity seen from z).

    The walk runs in the disc picture given by cayley o psi_z, where the domain is
    bounded; conformal invariance of Brownian paths makes the exit law the same.
    Jumps have radius min(step, distance to the barrier); walkers within eps_abs
    of the barrier are absorbed and credited with the capacity time of the
    nearest point of the curve.
    """
    zc = as_complex(z)
    if c.domain == DISC:
        c = c.to_half_plane()
    pre = CAYLEY.compose(psi_interior(zc))
    pts = np.ascontiguousarray(pre(c.points), dtype=complex)
    if times is None:
        times = sample_capacity_times(c, zc)
    hits = K.walk_on_spheres(pts, np.ascontiguousarray(times, dtype=float), 0j, int(walkers),
                             float(step), float(eps_abs), int(seed), 64, int(max_steps))
    on_curve = hits >= 0
    if s <= 0:
        inside = on_curve & (hits <= t)
    else:
        inside = on_curve & (hits > s) & (hits <= t)
    return float(inside.mean())


def hitting_prob_real_mc(c: Curve, z, walkers=100_000, step=1.0, eps_abs=1e-4, seed=0) -> float:
    zc = as_complex(z)
    if c.domain == DISC:
        c = c.to_half_plane()
    pre = CAYLEY.compose(psi_interior(zc))
    pts = np.ascontiguousarray(pre(c.points), dtype=complex)
    hits = K.walk_on_spheres(pts, np.zeros(len(pts)), 0j, int(walkers), float(step), float(eps_abs),
                             int(seed), 64, 100_000)
    return float((hits == -1.0).mean())


def _theta_from(zeta, theta):
    # angle after the disc automorphism sending zeta to 0, as a continuous function of theta
    return theta - 2.0 * np.angle(1.0 - np.conj(zeta) * np.exp(1j * theta))


def arc_measure(zeta, a, b) -> float:
    """Harmonic measure from zeta (in the unit disc) of the counterclockwise arc [a, b]."""
    return float((_theta_from(zeta, b) - _theta_from(zeta, a)) / TWO_PI)


def alpha_left(c: Curve, x, z=None, ref_p=None, _unzipped=None) -> float:
    """Probability that Brownian motion from z (default x), in the component of x,
    first exits on the left side of c, i.e. on the arc running counterclockwise
    from the image of ref_p (default: left end of the consumed arc) to the tip."""
    W, ch = _unzipped or unzip_radial_at(c, x)
    if len(ch) == 0:
        return 0.0
    zc = as_complex(x if z is None else z)
    zeta = complex(ch.pre(zc))
    img, sw = K.radial_apply(np.array([zeta]), ch.w, ch.dcap, len(ch.w))
    if sw[0] >= 0:
        raise ValueError("z is not in the component of x")
    tip = float(ch.w[-1])
    if ref_p is None:
        start = float(ch.weld[:, 0].min())
    else:
        p = ch.pre(as_complex(ref_p))
        th = np.angle(p)
        W0 = W.values[0]
        while th > W0:
            th -= TWO_PI
        while th <= W0 - TWO_PI:
            th += TWO_PI
        start = float(K.radial_push_angles(np.array([th]), ch.w, ch.dcap)[0])
    return arc_measure(img[0], start, tip)


def alpha_right(c: Curve, x, z=None, _unzipped=None) -> float:
    W, ch = _unzipped or unzip_radial_at(c, x)
    if len(ch) == 0:
        return 0.0
    zc = as_complex(x if z is None else z)
    img, _ = K.radial_apply(np.array([complex(ch.pre(zc))]), ch.w, ch.dcap, len(ch.w))
    return arc_measure(img[0], float(ch.w[-1]), float(ch.weld[:, 2].max()))


def _common_grid(W: DrivingFunction, t, n):
    g = np.linspace(0.0, t, n + 1)
    return DrivingFunction(g, W(g), W.kind)


def caratheodory_sup(W1: DrivingFunction, W2: DrivingFunction, x=None, t: float | None = None,
                     eps: float = 0.05, grid: int = 40, n: int = 400, return_grid=False):
    """sup over s in [0, t] and grid points z at cdist >= eps from the hull of W2 of cdist(g1_s(z), g2_s(z)).

    The hull is approximated by the eps/2-neighbourhood of W2's trace; grid points
    come from a grid x grid lattice of the Cayley disc.
    """
    if W1.kind != W2.kind:
        raise ValueError("driving functions of different kinds")
    t = min(W1.T, W2.T) if t is None else t
    if t > min(W1.T, W2.T) + 1e-12:
        raise ValueError("t exceeds a horizon")
    A, B = _common_grid(W1, t, n), _common_grid(W2, t, n)
    xx = 1j if x is None else as_complex(x)
    ch1, ch2 = chain_from_driving(A, xx), chain_from_driving(B, xx)
    if W2.kind == CHORDAL:
        trace = solve_chordal_trace(B).points
    else:
        trace = ch2.post(solve_radial_trace(B).points)
    u = np.linspace(-1, 1, grid)
    lat = (u[:, None] + 1j * u[None, :]).ravel()
    lat = lat[np.abs(lat) < 1 - 1e-9]
    z = CAYLEY_INV(lat)
    tg = np.asarray(CAYLEY(trace))
    dist = cKDTree(np.column_stack([tg.real, tg.imag])).query(np.column_stack([lat.real, lat.imag]))[0]
    keep = dist >= 1.5 * eps
    z = z[keep]
    if len(z) == 0:
        raise ValueError("no grid points at distance eps from the hull")
    p1 = np.asarray(ch1.pre(z), dtype=complex)
    p2 = np.asarray(ch2.pre(z), dtype=complex)
    best = 0.0
    for k in range(len(A.times) - 1):
        if ch1.kind == CHORDAL:
            p1, _ = K.chordal_apply(p1, ch1.w[k:k + 1], ch1.dcap[k:k + 1], 1)
            p2, _ = K.chordal_apply(p2, ch2.w[k:k + 1], ch2.dcap[k:k + 1], 1)
            d = np.abs(np.asarray(CAYLEY(p1)) - np.asarray(CAYLEY(p2)))
        else:
            p1, _ = K.radial_apply(p1, ch1.w[k:k + 1], ch1.dcap[k:k + 1], 1)
            p2, _ = K.radial_apply(p2, ch2.w[k:k + 1], ch2.dcap[k:k + 1], 1)
            d = np.abs(np.asarray(CAYLEY(ch1.post(p1))) - np.asarray(CAYLEY(ch2.post(p2))))
        best = max(best, float(np.nanmax(d)))
    return (best, z) if return_grid else best


def _refine_ground(c: Curve, h: float):
    g = c.ground()
    seg = np.abs(np.diff(g))
    m = np.maximum(1, np.ceil(seg / h).astype(int))
    pts = [g[:1]]
    par = [c.params[:1]]
    for k in range(len(seg)):
        f = np.arange(1, m[k] + 1) / m[k]
        pts.append(g[k] + f * (g[k + 1] - g[k]))
        par.append(c.params[k] + f * (c.params[k + 1] - c.params[k]))
    return np.concatenate(pts), np.concatenate(par)


def _diameter(p: np.ndarray) -> float:
    if len(p) < 2:
        return 0.0
    xy = np.column_stack([p.real, p.imag])
    if len(p) > 2000:
        try:
            xy = xy[ConvexHull(xy).vertices]
        except Exception:
            pass
    return float(pdist(xy).max())


def time_separation_diag(c: Curve, t: float, eps: float) -> float:
    """Largest diameter (cdist) of an eps-cluster of near-contacts between c[0,t] and c[t,1].

    ``t`` is a curve parameter in (0, 1). Samples are refined to spacing eps/2; the
    2 eps window around gamma(t), where the arcs trivially meet, is ignored.
    """
    if not 0 < t < 1:
        raise ValueError("t must lie strictly inside the parameter range")
    g, par = _refine_ground(c, eps / 2)
    A = par <= t
    B = ~A
    # the two arcs always meet at gamma(t) itself; that contact is not a separation failure
    split = complex(np.interp(t, par, g.real), np.interp(t, par, g.imag))
    far = np.abs(g - split) > 2 * eps
    A &= far
    B &= far
    if not A.any() or not B.any():
        return 0.0
    ga, gb = g[A], g[B]
    ta = cKDTree(np.column_stack([ga.real, ga.imag]))
    tb = cKDTree(np.column_stack([gb.real, gb.imag]))
    da = tb.query(np.column_stack([ga.real, ga.imag]))[0]
    db = ta.query(np.column_stack([gb.real, gb.imag]))[0]
    S = np.concatenate([ga[da <= eps], gb[db <= eps]])
    if len(S) == 0:
        return 0.0
    tree = cKDTree(np.column_stack([S.real, S.imag]))
    pairs = tree.query_pairs(2 * eps, output_type="ndarray")
    from scipy.sparse import coo_matrix
    adj = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(S), len(S))) \
        if len(pairs) else coo_matrix((len(S), len(S)))
    ncomp, lab = connected_components(adj, directed=False)
    return max(_diameter(S[lab == k]) for k in range(ncomp))


def harmonic_param_s(c: Curve, x_weights, t: float) -> float:
    """Weighted harmonic parametrisation s(t) = sum a(x) s_x(t), t a curve parameter."""
    total_w = sum(w for _, w in x_weights)
    if any(w <= 0 for _, w in x_weights) or abs(total_w - 1) > 1e-9:
        raise ValueError("weights must be positive and sum to 1")
    out = 0.0
    for x, w in x_weights:
        out += w * harmonic_param_sx(c, x, t)
    return float(out)


def harmonic_param_sx(c: Curve, x, t, _unzipped=None):
    W, ch = _unzipped or unzip_radial_at(c, x)
    E = exclusive_arc_lengths(ch.weld)
    tot = E.sum()
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if tot <= 0:
        res = np.zeros_like(tt)
    else:
        par = c.params[ch.sample_index]
        cum = np.concatenate([[0.0], np.cumsum(E)]) / tot
        k = np.searchsorted(par, tt, side="right")
        res = cum[k]
    return float(res[0]) if np.ndim(t) == 0 else res
