"""Compiled inner loops for the slit-map zippers."""
import numpy as np
from numba import njit

UNRESOLVED_TAU = 1e-13
UNRESOLVED_JUMP = 0.5
TWO_PI = 2.0 * np.pi


@njit(cache=True, inline="always")
def slit(z, u, v2):
    # v2 > 0: u + sqrt((z-u)^2 + v2), removes the vertical slit of height sqrt(v2) at u.
    # v2 < 0: the inverse map, growing that slit. Branch keeps the result in the closed upper half-plane.
    if np.isinf(z.real) or np.isinf(z.imag):
        return z
    d = z - u
    s = np.sqrt(d * d + v2)
    if s.imag < 0.0 or (s.imag == 0.0 and s.real * d.real < 0.0):
        s = -s
    return u + s


@njit(cache=True, inline="always")
def slit_deriv(z, u, v2):
    d = z - u
    s = np.sqrt(d * d + v2)
    if s.imag < 0.0 or (s.imag == 0.0 and s.real * d.real < 0.0):
        s = -s
    return u + s, d / s


@njit(cache=True, inline="always")
def disc_to_h(zeta):
    # i(1+zeta)/(1-zeta)
    if zeta == 1.0:
        return complex(np.inf, 0.0)
    return 1j * (1.0 + zeta) / (1.0 - zeta)


@njit(cache=True, inline="always")
def h_to_disc(z):
    if np.isinf(z.real) or np.isinf(z.imag):
        return complex(1.0, 0.0)
    return (z - 1j) / (z + 1j)


@njit(cache=True, inline="always")
def radial_step(zeta, W, v2, c, inverse):
    # Disc map removing (or, if inverse, growing) the radial slit at angle W whose
    # capacity is -log(c^2), with v2 = 1 - c^2.
    rot = -np.exp(-1j * W)
    z = disc_to_h(zeta * rot)
    if inverse:
        z = slit(z * c, 0.0, -v2)
    else:
        z = slit(z, 0.0, v2) / c
    return h_to_disc(z) / rot


# ---------------------------------------------------------------- chordal

@njit(cache=True)
def chordal_unzip(z, allow_touch):
    """Vertical-slit zipper. Returns (u, dcap, sample_index, status, index); status 0 ok,
    1 a sample fell below the real axis at step ``index``."""
    n = z.shape[0]
    w = z.copy()
    u = np.empty(n - 1)
    dc = np.empty(n - 1)
    idx = np.empty(n - 1, dtype=np.int64)
    m = 0
    total = 0.0
    base = w[0].real
    for j in range(n):
        w[j] = w[j] - base
    for k in range(1, n):
        p = w[k]
        if np.isinf(p.real):
            return u[:m], dc[:m], idx[:m], 2, k
        q = p.imag
        if q < 0.0 or (q == 0.0 and not allow_touch):
            if q < -1e-12 or not allow_touch:
                return u[:m], dc[:m], idx[:m], 1, k
            q = 0.0
        if q == 0.0 or total + q * q / 4.0 <= total:
            continue
        total += q * q / 4.0
        a = p.real
        v2 = q * q
        u[m] = a + base
        dc[m] = v2 / 4.0
        idx[m] = k
        m += 1
        for j in range(k + 1, n):
            w[j] = slit(w[j], a, v2)
    return u[:m], dc[:m], idx[:m], 0, n


@njit(cache=True)
def chordal_trace(u, dc):
    """gamma_k = f_1 o ... o f_k (u_k) for the inverse slit maps f_j."""
    n = u.shape[0]
    out = np.empty(n, dtype=np.complex128)
    for k in range(n):
        out[k] = complex(u[k], 0.0)
    for j in range(n - 1, -1, -1):
        v2 = 4.0 * dc[j]
        for k in range(j, n):
            out[k] = slit(out[k], u[j], -v2)
    return out


@njit(cache=True)
def chordal_apply(z, u, dc, upto):
    """Apply the first ``upto`` forward slit maps to each entry of z; records
    the first step at which an interior point lands on the real axis."""
    out = z.copy()
    swallowed = np.full(z.shape[0], -1, dtype=np.int64)
    for j in range(z.shape[0]):
        w = out[j]
        for k in range(upto):
            interior = w.imag > 0.0
            w = slit(w, u[k], 4.0 * dc[k])
            if interior and w.imag <= 0.0 and swallowed[j] < 0:
                swallowed[j] = k
        out[j] = w
    return out, swallowed


@njit(cache=True)
def chordal_apply_deriv(z, u, dc):
    n = z.shape[0]
    out = z.copy()
    der = np.ones(n, dtype=np.complex128)
    for j in range(n):
        w = out[j]
        d = der[j]
        for k in range(u.shape[0]):
            w, dd = slit_deriv(w, u[k], 4.0 * dc[k])
            d *= dd
        out[j] = w
        der[j] = d
    return out, der


@njit(cache=True)
def chordal_weld(u, dc):
    """Final positions of (left base, tip, right base) of every slit."""
    n = u.shape[0]
    out = np.empty((n, 3))
    for k in range(n):
        v = 2.0 * np.sqrt(dc[k])
        out[k, 0] = u[k] - v
        out[k, 1] = u[k]
        out[k, 2] = u[k] + v
    for k in range(n):
        for m in range(k + 1, n):
            a = u[m]
            v2 = 4.0 * dc[m]
            for r in range(3):
                x = out[k, r] - a
                s = np.sqrt(x * x + v2)
                out[k, r] = a + (s if x >= 0.0 else -s)
    return out


@njit(cache=True)
def _unresolved(tau, total, jump):
    """A step of capacity below double-precision resolution that moves the angle a lot:
    the sample sits behind a door too narrow to resolve and its image angle is noise."""
    return tau < UNRESOLVED_TAU * max(1.0, total) and abs(jump) > UNRESOLVED_JUMP


@njit(cache=True)
def radial_from_chordal(u, dc, xs, arg_pre, max_tau, n_steps):
    """Radial driving data at each interior point xs[i], read off a chordal slit chain.

    g_k(x) and g_k'(x) are tracked through the slits; the radial map at x is
    A_k o g_k with A_k the disc map sending g_k(x) to 0 with derivative direction
    arg_pre[i]. Returns (W, t, count): W[i, :count[i]] and the radial capacity
    times t[i, :count[i]], with W[i, 0] the angle of the start point u[0].
    Only the first n_steps[i] slits are used for xs[i]; lost[i] flags a viewpoint whose
    image fell onto the real axis numerically before that."""
    n = u.shape[0]
    m = xs.shape[0]
    W = np.empty((m, n + 1))
    T = np.empty((m, n + 1))
    cnt = np.zeros(m, dtype=np.int64)
    lost = np.zeros(m, dtype=np.bool_)
    for i in range(m):
        g = xs[i]
        d = complex(1.0, 0.0)
        lc0 = np.log(2.0 * g.imag)
        U = complex(u[0], 0.0)
        th = arg_pre[i] + 0.5 * np.pi
        a = np.angle((U - g) / (U - g.conjugate())) + th
        a = a - TWO_PI * np.round(a / TWO_PI)
        W[i, 0] = a
        T[i, 0] = 0.0
        c = 1
        prev = a
        last = 0.0
        for k in range(min(n, n_steps[i] + 1)):
            v2 = 4.0 * dc[k]
            g, dd = slit_deriv(g, u[k], v2)
            d *= dd
            if g.imag <= 0.0:
                lost[i] = True
                break
            t = lc0 - np.log(2.0 * g.imag) + np.log(abs(d))
            U = complex(u[k], 0.0)
            th = arg_pre[i] + 0.5 * np.pi - np.angle(d)
            a = np.angle((U - g) / (U - g.conjugate())) + th
            a = a + TWO_PI * np.round((prev - a) / TWO_PI)
            if t > last and _unresolved(t - last, last, a - prev):
                continue
            prev = a
            if t <= last:
                continue
            W[i, c] = a
            T[i, c] = t
            c += 1
            last = t
            if t > max_tau:
                break
        cnt[i] = c
    return W, T, cnt, lost


# ---------------------------------------------------------------- radial

@njit(cache=True)
def radial_unzip(zeta, min_log_crad):
    """Radial zipper on disc samples (zeta[0] on the circle).

    Returns (W, dcap, sample_index, status, stop_index). status 0: ran to the
    end; 1: crad fell below exp(min_log_crad) (x swallowed); 2: a sample
    crossed outside the disc."""
    n = zeta.shape[0]
    w = zeta.copy()
    W = np.empty(n)
    dc = np.empty(n)
    idx = np.empty(n, dtype=np.int64)
    m = 0
    prev = np.angle(w[0])
    W0 = prev
    total = 0.0
    for k in range(1, n):
        p = w[k]
        r = abs(p)
        if r > 1.0 + 1e-9:
            return W0, W[:m], dc[:m], idx[:m], 2, k
        if r >= 1.0:
            # lands on the circle: zero capacity, nothing to remove
            continue
        ang = np.angle(p)
        ang = ang + TWO_PI * np.round((prev - ang) / TWO_PI)
        q = (1.0 - r) / (1.0 + r)
        v2 = q * q
        tau = -np.log1p(-v2)
        if tau <= 0.0 or total + tau <= total:
            continue
        if _unresolved(tau, total, ang - prev):
            continue
        c = np.sqrt(1.0 - v2)
        W[m] = ang
        dc[m] = tau
        idx[m] = k
        m += 1
        prev = ang
        total += tau
        if -total < min_log_crad:
            return W0, W[:m], dc[:m], idx[:m], 1, k
        for j in range(k + 1, n):
            w[j] = radial_step(w[j], ang, v2, c, False)
    return W0, W[:m], dc[:m], idx[:m], 0, n


@njit(cache=True)
def radial_trace(W, dc):
    n = W.shape[0]
    out = np.empty(n, dtype=np.complex128)
    for k in range(n):
        out[k] = np.exp(1j * W[k])
    for j in range(n - 1, -1, -1):
        c = np.exp(-0.5 * dc[j])
        v2 = 1.0 - c * c
        for k in range(j, n):
            out[k] = radial_step(out[k], W[j], v2, c, True)
    return out


@njit(cache=True)
def radial_apply(zeta, W, dc, upto):
    out = zeta.copy()
    swallowed = np.full(zeta.shape[0], -1, dtype=np.int64)
    for j in range(zeta.shape[0]):
        p = out[j]
        for k in range(upto):
            interior = abs(p) < 1.0
            c = np.exp(-0.5 * dc[k])
            p = radial_step(p, W[k], 1.0 - c * c, c, False)
            if interior and abs(p) >= 1.0 - 1e-15 and swallowed[j] < 0:
                swallowed[j] = k
        out[j] = p
    return out, swallowed


@njit(cache=True, error_model="numpy")
def radial_weld(W, dc):
    """Final circle angles (lo, tip, hi) of the arcs consumed by each step,
    tracked as continuous lifts."""
    n = W.shape[0]
    out = np.empty((n, 3))
    for k in range(n):
        c = np.exp(-0.5 * dc[k])
        v = np.sqrt(1.0 - c * c)
        half = 2.0 * np.arctan(v / c)
        out[k, 0] = W[k] - half
        out[k, 1] = W[k]
        out[k, 2] = W[k] + half
    for k in range(n):
        for m in range(k + 1, n):
            c = np.exp(-0.5 * dc[m])
            v2 = 1.0 - c * c
            for r in range(3):
                th = out[k, r]
                a = (th - W[m] + np.pi) % TWO_PI
                x = -np.cos(0.5 * a) / np.sin(0.5 * a)
                s = np.sqrt(x * x + v2) / c
                x2 = s if x >= 0.0 else -s
                a2 = np.pi + 2.0 * np.arctan(x2)
                out[k, r] = th + (a2 - a)
    return out


@njit(cache=True, error_model="numpy")
def radial_push_angles(theta, W, dc):
    """Push boundary angles (continuous lifts) through every radial step."""
    out = theta.copy()
    for m in range(W.shape[0]):
        c = np.exp(-0.5 * dc[m])
        v2 = 1.0 - c * c
        for r in range(out.shape[0]):
            th = out[r]
            a = (th - W[m] + np.pi) % TWO_PI
            if a == 0.0:
                continue
            x = -np.cos(0.5 * a) / np.sin(0.5 * a)
            s = np.sqrt(x * x + v2) / c
            x2 = s if x >= 0.0 else -s
            out[r] = th + (np.pi + 2.0 * np.arctan(x2) - a)
    return out


# ---------------------------------------------------------------- walk on spheres

@njit(cache=True)
def _seg_dist(p, a, b):
    d = b - a
    L2 = d.real * d.real + d.imag * d.imag
    if L2 == 0.0:
        return abs(p - a), 0.0
    f = ((p - a).real * d.real + (p - a).imag * d.imag) / L2
    if f < 0.0:
        f = 0.0
    elif f > 1.0:
        f = 1.0
    return abs(p - (a + f * d)), f


@njit(cache=True)
def build_grid(pts, G):
    """Bucket polyline segments (in [-1,1]^2) into a G x G grid (CSR layout)."""
    nseg = pts.shape[0] - 1
    cell = 2.0 / G
    counts = np.zeros(G * G + 1, dtype=np.int64)
    for s in range(nseg):
        a, b = pts[s], pts[s + 1]
        i0 = max(0, min(G - 1, int((min(a.real, b.real) + 1.0) / cell)))
        i1 = max(0, min(G - 1, int((max(a.real, b.real) + 1.0) / cell)))
        j0 = max(0, min(G - 1, int((min(a.imag, b.imag) + 1.0) / cell)))
        j1 = max(0, min(G - 1, int((max(a.imag, b.imag) + 1.0) / cell)))
        for i in range(i0, i1 + 1):
            for j in range(j0, j1 + 1):
                counts[i * G + j + 1] += 1
    start = np.cumsum(counts)
    fill = start[:-1].copy()
    items = np.empty(start[-1], dtype=np.int64)
    for s in range(nseg):
        a, b = pts[s], pts[s + 1]
        i0 = max(0, min(G - 1, int((min(a.real, b.real) + 1.0) / cell)))
        i1 = max(0, min(G - 1, int((max(a.real, b.real) + 1.0) / cell)))
        j0 = max(0, min(G - 1, int((min(a.imag, b.imag) + 1.0) / cell)))
        j1 = max(0, min(G - 1, int((max(a.imag, b.imag) + 1.0) / cell)))
        for i in range(i0, i1 + 1):
            for j in range(j0, j1 + 1):
                items[fill[i * G + j]] = s
                fill[i * G + j] += 1
    return start, items


@njit(cache=True)
def _nearest_seg(p, pts, start, items, G, rmax):
    cell = 2.0 / G
    ci = max(0, min(G - 1, int((p.real + 1.0) / cell)))
    cj = max(0, min(G - 1, int((p.imag + 1.0) / cell)))
    best = rmax
    bs = -1
    bf = 0.0
    for ring in range(G):
        if (ring - 1) * cell > best:
            break
        for i in range(ci - ring, ci + ring + 1):
            if i < 0 or i >= G:
                continue
            for j in range(cj - ring, cj + ring + 1):
                if j < 0 or j >= G:
                    continue
                if max(abs(i - ci), abs(j - cj)) != ring:
                    continue
                k = i * G + j
                for q in range(start[k], start[k + 1]):
                    s = items[q]
                    d, f = _seg_dist(p, pts[s], pts[s + 1])
                    if d < best:
                        best = d
                        bs = s
                        bf = f
    return best, bs, bf


@njit(cache=True)
def walk_on_spheres(pts, times, z0, walkers, step, eps, seed, G, max_steps):
    """Brownian hitting in the unit disc slit by the polyline pts.

    Returns per-walker hit times: -1.0 for the circle, -2.0 if not absorbed."""
    np.random.seed(seed)
    start, items = build_grid(pts, G)
    out = np.empty(walkers)
    for w in range(walkers):
        p = z0
        res = -2.0
        for it in range(max_steps):
            dc = 1.0 - abs(p)
            ds, s, f = _nearest_seg(p, pts, start, items, G, dc)
            if s < 0 or dc <= ds:
                if dc < eps:
                    res = -1.0
                    break
                r = dc
            else:
                if ds < eps:
                    res = times[s] + f * (times[s + 1] - times[s])
                    break
                r = ds
            if r > step:
                r = step
            th = 2.0 * np.pi * np.random.random()
            p = p + r * np.exp(1j * th)
        out[w] = res
    return out
