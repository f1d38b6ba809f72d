"""Generators for the counterexample families and the half-strip example."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import DISC, HALF_PLANE, Curve, is_simple, polyline
from .geometry import CAYLEY, CAYLEY_INV, MobiusTransform, as_complex, automorphism_from_points, is_inf

LADDER_HEIGHT = 1.0


@dataclass(frozen=True)
class FamilySpec:
    family: str
    j: int = 1
    variant: str | None = None
    depth: int | None = None
    samples_per_unit: int = 200

    def __post_init__(self):
        if self.j < 0:
            raise ValueError("j must be non-negative")
        if self.depth is not None and not 0 <= self.depth <= 12:
            raise ValueError("depth must lie in [0, 12]")


def _refined(vertices, per_segment=None, max_step=None, domain=HALF_PLANE):
    v = np.asarray(vertices, dtype=complex)
    if per_segment:
        out = [v[:1]]
        f = np.arange(1, per_segment + 1) / per_segment
        for a, b in zip(v[:-1], v[1:]):
            out.append(a + f * (b - a))
        return Curve(np.concatenate(out), domain=domain)
    return polyline(v, domain=domain, max_step=max_step)


def _graded_offsets(L, step, fine, ratio=0.25):
    """Offsets in (0, L] with spacing clip(ratio * distance to nearer end, fine, step)."""
    half = 0.5 * L
    s1 = fine / ratio
    a = np.arange(0.0, min(s1, half), fine)
    if s1 < half:
        s2 = min(step / ratio, half)
        k = int(np.ceil(np.log(s2 / s1) / np.log1p(ratio)))
        b = s1 * (1 + ratio) ** np.arange(k + 1)
        b = b[b < half]
        c = np.arange(b[-1] + step, half, step) if s2 < half else np.empty(0)
        a = np.concatenate([a, b, c])
    a = a[a < half - 0.25 * fine]
    off = np.concatenate([a, [half], (L - a)[::-1]])
    return off[1:]


def _refined_graded(vertices, step, fine, domain=HALF_PLANE):
    """Polyline refined towards every vertex, so sharp turns are resolved cheaply."""
    v = np.asarray(vertices, dtype=complex)
    out = [v[:1]]
    for a, b in zip(v[:-1], v[1:]):
        L = abs(b - a)
        out.append(a + _graded_offsets(L, step, fine) * ((b - a) / L))
    return Curve(np.concatenate(out), domain=domain)


# ------------------------------------------------------------------ ladder

def ladder_vertices(n_pairs: int) -> np.ndarray:
    """0, z_1, w_1, ..., w_{n-1}, z_n with z_k = (-1)^k + ik and w_k = ik/2."""
    v = [0j]
    for k in range(1, n_pairs + 1):
        v.append((-1) ** k + 1j * k)
        if k < n_pairs:
            v.append(0.5j * k)
    return np.array(v)


def gen_ladder(j: int, height: float = LADDER_HEIGHT, per_segment: int | None = None,
               max_step: float = 5e-4, fine: float = 1e-7) -> Curve:
    """The ladder scaled by 2^-j, cut at the vertex z_n of height ``height``.

    The spikes at z_k are wedges of opening about 2/k^2, so by default samples are
    graded towards every vertex (spacing ``fine`` up to ``max_step``); pass
    ``per_segment`` for uniform sampling instead.
    """
    n = max(1, int(round(height * 2 ** j)))
    v = ladder_vertices(n) * 2.0 ** -j
    if per_segment:
        return _refined(v, per_segment)
    return _refined_graded(v, max_step, fine)


def ladder_target(height: float = LADDER_HEIGHT, n: int = 400) -> Curve:
    return _refined([0, 1j * height], n)


# ------------------------------------------------------------------ semicircle perturbations

def gen_perturbed_semicircle(j: int, n: int = 4000, mode: int = 6) -> Curve:
    """Upper unit semicircle from -1 to 1 pushed outwards by up to 2^-j (j=0: none).

    The bump profile sin^2(t) (1 + sin(mode t)) / 2 is non-negative, so the hulls
    are nested in the amplitude and every capacity moves monotonically; the
    sin^2 taper makes the curves meet the real axis exactly like the semicircle,
    where the driving function is singular."""
    th = np.linspace(np.pi, 0.0, n)
    amp = 0.0 if j is None or j <= 0 else 2.0 ** -j
    r = 1.0 + amp * np.sin(th) ** 2 * 0.5 * (1.0 + np.sin(mode * th))
    z = r * np.exp(1j * th)
    z[0], z[-1] = -1.0, 1.0
    return Curve(z, np.linspace(0, 1, n))


# ------------------------------------------------------------------ helpers

def _dense(vertices, step) -> np.ndarray:
    """Polyline through the vertices with segments cut to length <= step (first vertex included)."""
    v = np.asarray(vertices, dtype=complex)
    out = [v[:1]]
    for a, b in zip(v[:-1], v[1:]):
        k = max(1, int(np.ceil(abs(b - a) / step)))
        seg = a + (b - a) * np.arange(1, k + 1) / k
        seg[-1] = b
        out.append(seg)
    return np.concatenate(out)


def _join(pieces) -> np.ndarray:
    pts = np.concatenate([np.asarray(p, dtype=complex) for p in pieces])
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.abs(np.diff(pts)) > 1e-14
    return pts[keep]


def _arc(center, radius, a0, sweep, step) -> np.ndarray:
    k = max(8, int(np.ceil(abs(sweep) * radius / step)))
    return center + radius * np.exp(1j * (a0 + sweep * np.linspace(0.0, 1.0, k + 1)))


def _loop_points(p, tangent, r, gap, step) -> np.ndarray:
    """Clockwise circle of radius r on the left of the direction ``tangent``, leaving the
    base at p - gap*tangent and rejoining it at p + gap*tangent (touching at p if gap = 0)."""
    tau = tangent / abs(tangent)
    n = 1j * tau
    s = min(gap, 0.9 * r)
    c = p + n * np.sqrt(r * r - s * s)
    a0 = np.angle(p - s * tau - c)
    a1 = np.angle(p + s * tau - c)
    sweep = (a0 - a1) % (2 * np.pi)
    if sweep == 0.0:
        sweep = 2 * np.pi
    return _arc(c, r, a0, -sweep, step)


# ------------------------------------------------------------------ three-segment family

def _graded_disc(vertices, step, fine) -> np.ndarray:
    """Polyline samples in the disc with spacing clip((1 - |z|) / 2, fine, step)."""
    v = np.asarray(vertices, dtype=complex)
    out = [v[:1]]
    for a, b in zip(v[:-1], v[1:]):
        L = abs(b - a)
        e = (b - a) / L
        s, pts = 0.0, []
        while True:
            z = a + s * e
            s += min(step, max(fine, 0.5 * (1 - abs(z))))
            if s >= L - 0.5 * fine:
                break
            pts.append(a + s * e)
        pts.append(b)
        out.append(np.array(pts))
    return np.concatenate(out)


def three_segment_limit(max_step: float = 5e-4) -> Curve:
    """eta_1 eta_2 eta_3 in the disc: -1 -> i -> -i -> 1 (touches the circle at +-i)."""
    return Curve(_graded_disc([-1, 1j, -1j, 1], max_step, 1e-6), domain=DISC)


def gen_three_segment(j: int, variant: str = "plain", max_step: float = 0.01) -> Curve:
    """Simple disc curves near eta_1 eta_2 eta_3 ("plain") or eta_1 eta_2 eta_2^- eta_2 eta_3
    ("doubled").

    The retraced strands run at x = d, 0, -d with d = 2^-j / 4 (the plain strand at x = d). Near +-i every
    feature lives at the scale e = d^2: strands end in V-shaped tips a distance e
    from the circle and leave them at fixed angles, so what is hidden behind the
    two pinches carries vanishing harmonic measure in both directions.
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    d = 2.0 ** -j / 4
    e = d * d
    q = complex(-2 * e, 1 - 1.5 * e)      # eta_1 passes here, above the upper V
    top = complex(0, 1 - e)
    bot = complex(0, -1 + e)
    a_top, a_bot = complex(d, 1 - 3 * d), complex(d, -1 + 3 * d)
    if variant == "plain":
        v = [-1, q, top, a_top, a_bot, bot, 1]
    elif variant == "doubled":
        tc = complex(-e, 1 - 3 * e)       # junction of the second and third strands
        r1, r2 = complex(-e, -1 + e / 2), complex(e, -1 + e / 2)
        v = [-1, q, top, a_top, a_bot, bot,                     # first strand, x = d
             complex(0, 1 - 5 * e), tc,                          # second strand, x = 0
             complex(-d, tc.imag - 1.5 * (d - e)),              # third strand, x = -d
             complex(-d, r1.imag + 1.5 * (d - e)), r1, r2, 1]
    else:
        raise ValueError("variant must be 'plain' or 'doubled'")
    return Curve(_graded_disc(v, min(max_step, d / 2), e / 4), domain=DISC)


# ------------------------------------------------------------------ dyadic loops

def dyadic_points(depth: int):
    """(level k, base parameter t_{k,i}) for k <= depth, in the order they occur along [0,1]."""
    out = []

    def rec(a, b, k):
        if k > depth:
            return
        m = 0.5 * (a + b)
        rec(a, m, k + 1)
        out.append((k, m))
        rec(m, b, k + 1)

    rec(0.0, 1.0, 1)
    return out


def _base_eval(base: Curve, t):
    par, pts = base.params, base.points
    p = np.interp(t, par, pts.real) + 1j * np.interp(t, par, pts.imag)
    i = int(np.clip(np.searchsorted(par, t, side="right") - 1, 0, len(par) - 2))
    if abs(t - par[i]) < 1e-12 and i > 0:
        tan = (pts[i + 1] - pts[i - 1])
    else:
        tan = pts[i + 1] - pts[i]
    return p, tan / abs(tan)


def gen_dyadic_loops(depth: int, base: Curve, loop_scale: float = 0.3, gap: float = 0.0,
                     step: float | None = None) -> Curve:
    """Base curve with clockwise loops of radius loop_scale*4^-k at the parameters
    t_{k,i} = 2^{-k+1} i + 2^{-k}, k <= depth.

    Loops sit on the left of the direction of travel. Time follows the thirds rule:
    the span a dyadic interval occupied at level k-1 is split equally between its
    first half, the new loop and its second half. With gap > 0 each loop leaves and
    rejoins the base at distance gap from its attachment point, so a simple base
    gives a simple curve.
    """
    if depth < 0 or depth > 12:
        raise ValueError("depth must lie in [0, 12]")
    if base.domain != HALF_PLANE:
        raise ValueError("base must be a half-plane curve")
    if step is None:
        step = min(0.01, loop_scale * 4.0 ** -max(depth, 1) / 4)
    attach = {t: (k, *_base_eval(base, t)) for k, t in dyadic_points(depth)}
    # disjointness: loop discs against each other and against the base
    loops = []
    for t, (k, p, tan) in attach.items():
        r = loop_scale * 4.0 ** -k
        g = min(gap, 0.9 * r)
        loops.append((p, p + 1j * tan * np.sqrt(r * r - g * g), r, g))
    for a in range(len(loops)):
        for b in range(a + 1, len(loops)):
            if abs(loops[a][1] - loops[b][1]) <= loops[a][2] + loops[b][2]:
                raise ValueError("loops intersect; reduce loop_scale")
    bp = base.refine(step).points
    for p, c, r, g in loops:
        # base points inside the trimmed window around the attachment are dropped
        near = (np.abs(bp - c) < r * (1 - 1e-9)) & (np.abs(bp - p) > g * (1 + 1e-9))
        if near.any():
            raise ValueError("a loop meets the base curve; reduce loop_scale")

    pts, times = [], []
    # arclength position of every base parameter, used to trim windows of size gap
    seg = np.abs(np.diff(base.points))
    arc = np.concatenate([[0.0], np.cumsum(seg)])

    def arc_at(t):
        return float(np.interp(t, base.params, arc))

    def t_at(s):
        return float(np.interp(s, arc, base.params))

    def emit_base(s0, s1, A, B, trim0, trim1):
        u0 = t_at(arc_at(s0) + trim0)
        u1 = t_at(arc_at(s1) - trim1)
        inner = base.params[(base.params > u0) & (base.params < u1)]
        u = np.concatenate([[u0], inner, [u1]])
        q = np.interp(u, base.params, base.points.real) + 1j * np.interp(u, base.params, base.points.imag)
        qq = _dense(q, step)
        # time along the piece proportional to arclength
        L = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(qq)))])
        f = L / L[-1] if L[-1] > 0 else np.linspace(0, 1, len(qq))
        pts.append(qq)
        times.append(A + (B - A) * f)

    def rec(s0, s1, A, B, k, trim0, trim1):
        if k > depth:
            emit_base(s0, s1, A, B, trim0, trim1)
            return
        m = 0.5 * (s0 + s1)
        third = (B - A) / 3
        kk, p, tan = attach[m]
        r = loop_scale * 4.0 ** -kk
        g = min(gap, 0.9 * r)
        rec(s0, m, A, A + third, k + 1, trim0, g)
        lp = _loop_points(p, tan, r, gap, step)
        pts.append(lp)
        times.append(A + third + third * np.linspace(0, 1, len(lp)))
        rec(m, s1, A + 2 * third, B, k + 1, g, trim1)

    rec(0.0, 1.0, 0.0, 1.0, 1, 0.0, 0.0)
    P = np.concatenate(pts)
    T = np.concatenate(times)
    keep = np.ones(len(P), dtype=bool)
    keep[1:] = (np.abs(np.diff(P)) > 1e-14) & (np.diff(T) > 0)
    P, T = P[keep], T[keep]
    T = (T - T[0]) / (T[-1] - T[0])
    return Curve(P, T)


# ------------------------------------------------------------------ hooks

HOOK_TOP = 3.0
HOOK_BASE = 0.5
HOOK_MID = 1.5
HOOK_LOOP_SCALE = 0.6   # loop radius at level k is HOOK_LOOP_SCALE * 4^-k
HOOK_LOOP_DEPTH = 4


@dataclass(frozen=True)
class HookGeometry:
    delta: float        # half the distance between the two sides
    pairs: int          # interlocking pairs; fingers l = 0 .. 2*pairs-1
    h: float            # vertical spacing of the attachments
    w: float            # horizontal spacing of the nested prongs
    g: float            # half thickness of a finger outline

    def finger(self, l):
        """Centre line of finger l (even: attached to the left side, odd: right side)."""
        d, w, h = self.delta, self.w, self.h
        y = HOOK_MID + (l + 1) * h
        b = HOOK_MID - h / 2 + l * w
        xl, xr = -d + (l + 1) * w, d - (l + 1) * w
        if l % 2 == 0:
            return [complex(-d, y), complex(xl, y), complex(xl, b), complex(xr, b), complex(xr, y)]
        return [complex(d, y), complex(xr, y), complex(xr, b), complex(xl, b), complex(xl, y)]


def hook_geometry(j: int) -> HookGeometry:
    d = 2.0 ** -j / 2
    m = j
    h = (HOOK_TOP - HOOK_MID) / (2 * m + 1)
    w = 2 * d / (4 * m + 2)
    return HookGeometry(d, m, h, w, w / 4)


def _finger_outline(center, g, step):
    from shapely.geometry import LineString

    ls = LineString([(z.real, z.imag) for z in center])
    out = np.array(ls.offset_curve(-g, join_style="mitre").coords)
    back = np.array(ls.offset_curve(g, join_style="mitre").coords)
    out = out[:, 0] + 1j * out[:, 1]
    back = back[:, 0] + 1j * back[:, 1]
    return _dense(np.concatenate([out, back[::-1]]), step)


def _side(x0, going_up, events, step):
    """A vertical side at Re z = x0 from HOOK_BASE to HOOK_TOP (or back), with
    events (height, half-window, points) spliced in where they occur."""
    y0, y1 = (HOOK_BASE, HOOK_TOP) if going_up else (HOOK_TOP, HOOK_BASE)
    sgn = 1.0 if going_up else -1.0
    events = sorted(events, key=lambda e: sgn * e[0])
    pieces = [np.array([complex(x0, y0)])]
    cur = y0
    for y, s, pts in events:
        a = y - sgn * s
        if sgn * (a - cur) <= 0:
            raise ValueError("decorations on a side overlap")
        pieces.append(_dense([complex(x0, cur), complex(x0, a)], step)[1:])
        pieces.append(pts)
        cur = y + sgn * s
    pieces.append(_dense([complex(x0, cur), complex(x0, y1)], step)[1:])
    return _join(pieces)


def _side_loops(x0, going_up, depth, step, avoid):
    """Dyadic loop decorations on the outer side of a wall, nudged clear of ``avoid`` windows."""
    ev = []
    tan = 1j if going_up else -1j
    for k, t in dyadic_points(depth):
        r = HOOK_LOOP_SCALE * 4.0 ** -k
        s = r / 8
        y = HOOK_BASE + (HOOK_TOP - HOOK_BASE) * (t if going_up else 1 - t)
        for ya, sa in avoid:
            if abs(y - ya) < s + sa + 2 * step:
                y = ya + np.sign(y - ya + 1e-15) * (s + sa + 2 * step)
        p = complex(x0, y)
        ev.append((y, s, _loop_points(p, tan, r, s, min(step * 4, r / 6))))
    return ev


def _hooks_curve(geo: HookGeometry | None, delta: float, loop_depth: int, step: float,
                 nest_step: float) -> Curve:
    left_f, right_f = [], []
    if geo is not None:
        for l in range(2 * geo.pairs):
            c = geo.finger(l)
            y = c[0].imag
            ev = (y, geo.g, _finger_outline(c, geo.g, nest_step))
            (left_f if l % 2 == 0 else right_f).append(ev)
    left = _side(-delta, True, left_f + _side_loops(-delta, True, loop_depth, step,
                                                     [(e[0], e[1]) for e in left_f]), step)
    right = _side(delta, False, right_f + _side_loops(delta, False, loop_depth, step,
                                                      [(e[0], e[1]) for e in right_f]), step)
    start = _dense([-1.0, complex(-1.0, HOOK_BASE), complex(-delta, HOOK_BASE)], step)
    top = _dense([complex(-delta, HOOK_TOP), complex(delta, HOOK_TOP)], min(step, delta / 4))
    end = _dense([complex(delta, HOOK_BASE), complex(1.0, HOOK_BASE), 1.0], step)
    return Curve(_join([start, left[1:], top[1:], right[1:], end[1:]]))


def gen_hooks(j: int, loop_depth: int | None = None, step: float = 0.01, nest_factor: float = 1.0,
              check: bool = True) -> Curve:
    """Two sides at Re z = -+2^-j/2 from height 1/2 to 3 joined across the top and to -+1,
    carrying j interlocking pairs of U-shaped hooks in the gap and dyadic loops outside.

    Hook l (l = 0 .. 2j-1; even on the left side, odd on the right) is a thin outline of
    the U that leaves its side at height 3/2 + (l+1) h, drops below the mid-line 3/2 and
    rises back to its attachment height inside the cup of hook l-1. Seen from either end
    each new hook lies in the cups of the ones drawn before it.
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    geo = hook_geometry(j)
    depth = min(j, HOOK_LOOP_DEPTH) if loop_depth is None else loop_depth
    c = _hooks_curve(geo, geo.delta, depth, min(step, geo.delta / 2), nest_factor * geo.w)
    if check and not is_simple(c):
        raise ValueError("hooks curve self-intersects at this resolution")
    return c


def hooks_target(delta: float, loop_depth: int = HOOK_LOOP_DEPTH, step: float = 0.01) -> Curve:
    """The hook-free curve: around the segment between the sides, with the loop decorations."""
    step = min(step, delta / 2)
    return _hooks_curve(None, delta, loop_depth, step, step)


# ------------------------------------------------------------------ figure eight

FIG8_P = 2j
# angles (degrees) of the loop rays at P, counterclockwise order:
# eta_1 in at 180, eta_2 (200 -> 340), eta_3 (310 -> 230), eta_6 out at 0,
# eta_5 (160 -> 20), eta_4 (50 -> 130)
FIG8_LOOPS = {2: (200.0, 340.0, 0.8), 3: (310.0, 230.0, 0.5),
              4: (50.0, 130.0, 0.45), 5: (160.0, 20.0, 0.8)}


def _sector_loop(k, rho, step):
    a, b, R = FIG8_LOOPS[k]
    a, b = np.deg2rad(a), np.deg2rad(b)
    # sweep through the sector interior: loops 2 and 4 turn counterclockwise, 3 and 5 clockwise
    sweep = (b - a) % (2 * np.pi) if k in (2, 4) else -((a - b) % (2 * np.pi))
    out = _dense([FIG8_P + rho * np.exp(1j * a), FIG8_P + R * np.exp(1j * a)], step)
    arc = _arc(FIG8_P, R, a, sweep, step)
    back = _dense([FIG8_P + R * np.exp(1j * b), FIG8_P + rho * np.exp(1j * b)], step)
    return _join([out, arc[1:], back[1:]])


def _fig8(order, rho, step) -> Curve:
    P = FIG8_P
    pieces = [_dense([-1.0, -1 + 2j, P - 1.0, P - rho], step)]
    for k in order:
        lp = _sector_loop(k, rho, step)
        pieces.append(_dense([pieces[-1][-1], lp[0]], min(step, rho / 4))[1:])
        pieces.append(lp[1:])
    pieces.append(_dense([pieces[-1][-1], P + rho], min(step, rho / 4))[1:])
    pieces.append(_dense([P + rho, P + 1.0, 1 + 2j, 1.0], step)[1:])
    return Curve(_join(pieces))


def gen_figure_eight(j: int, variant: str = "a", step: float = 0.01, check: bool = True) -> Curve:
    """Simple approximations of eta_1 eta_2 eta_3 eta_4 eta_5 eta_6 ("a") and of the
    order with eta_3, eta_4 swapped ("b").

    All four loops are circular sectors hinged at P = 2i: eta_2 (big, lower) contains
    eta_3, eta_5 (big, upper) contains eta_4. In the approximation the rays stop at
    distance rho = 2^-j / 4 from P and consecutive loops are joined by chords across
    that small disc; the ray angles are chosen so these chords never cross in either order.
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    order = {"a": (2, 3, 4, 5), "b": (2, 4, 3, 5)}.get(variant)
    if order is None:
        raise ValueError("variant must be 'a' or 'b'")
    c = _fig8(order, 2.0 ** -j / 4, step)
    if check and not is_simple(c):
        raise ValueError("figure-eight approximation self-intersects")
    return c


def figure_eight_limits(j: int, step: float = 0.01):
    """(forward limit eta_1 eta_2 eta_4 eta_5 eta_6, backward limit eta_1 eta_2 eta_3 eta_5 eta_6)
    drawn at the resolution of index j."""
    rho = 2.0 ** -j / 4
    return _fig8((2, 4, 5), rho, step), _fig8((2, 3, 5), rho, step)


# ------------------------------------------------------------------ half strip

def half_strip_vertices(k: int) -> np.ndarray:
    """0, z_1, w_1, ..., z_{k-1}, w_{k-1}, z_k with z_n = (-1)^n + in and w_n = i(1 - 2^-n)."""
    v = [0j]
    for n in range(1, k + 1):
        v.append((-1) ** n + 1j * n)
        if n < k:
            v.append(1j * (1 - 2.0 ** -n))
    return np.array(v)


def gen_half_strip(k: int, per_segment: int = 40) -> Curve:
    if k < 1:
        raise ValueError("k must be >= 1")
    return _refined(half_strip_vertices(k), per_segment)


# ------------------------------------------------------------------ transport

def _ccw_mid(a, b):
    ta, tb = np.angle(a), np.angle(b)
    return np.exp(1j * (ta + ((tb - ta) % (2 * np.pi)) / 2))


def transport_to_canonical(c: Curve, domain: str, a, b) -> Curve:
    """Move a curve from a to b in the disc, the half-strip {|Re z| < 1, Im z > 0} or the
    half-plane to a half-plane curve from -1 to 1.

    The domain is first mapped to the disc (half-strip: z -> sin(pi z / 2), then Cayley);
    the Mobius map then sends a, b and the midpoint of the counterclockwise arc from a to
    b to -1, 1 and 0. For the disc with a = -1, b = 1 this is the map with 0 -> i.
    """
    a, b = as_complex(a), as_complex(b)
    pts = np.array(c.points)
    if domain == "half_strip":
        if abs(abs(a.real) - 1) > 1e-9 and abs(a.imag) > 1e-9 or abs(abs(b.real) - 1) > 1e-9 and abs(b.imag) > 1e-9:
            raise ValueError("endpoints must lie on the boundary of the half-strip")
        f = lambda z: np.sin(np.pi * np.asarray(z, dtype=complex) / 2)
        pts, a, b = f(pts), complex(f(a)), complex(f(b))
        domain = HALF_PLANE
    if domain == HALF_PLANE:
        for p in (a, b):
            if not is_inf(p) and abs(p.imag) > 1e-9:
                raise ValueError("endpoints must lie on the real line")
        to_disc = CAYLEY
    elif domain == DISC:
        if abs(abs(a) - 1) > 1e-9 or abs(abs(b) - 1) > 1e-9:
            raise ValueError("endpoints must lie on the unit circle")
        to_disc = MobiusTransform.identity()
    else:
        raise ValueError(f"unknown domain {domain!r}")
    da, db = complex(to_disc(a)), complex(to_disc(b))
    dm = _ccw_mid(da, db)
    m = automorphism_from_points([CAYLEY_INV(da), CAYLEY_INV(db), CAYLEY_INV(dm)], [-1.0, 1.0, 0.0])
    full = m.compose(CAYLEY_INV).compose(to_disc)
    out = np.asarray(full(pts), dtype=complex)
    out[0], out[-1] = -1.0, 1.0
    out.imag = np.maximum(out.imag, 0.0)
    return Curve(out, c.params)


# ------------------------------------------------------------------ viewpoints

def viewpoint_grid(n: int = 12, box=(-2.0, 2.0, 0.15, 3.5), avoid=(), min_dist: float = 0.05):
    """n deterministic interior points (Halton sequence in box) at Euclidean distance
    >= min_dist from every curve in ``avoid``."""
    from scipy.spatial import cKDTree
    from scipy.stats import qmc

    trees = [cKDTree(np.column_stack([c.points.real, c.points.imag])) for c in avoid]
    gen = qmc.Halton(d=2, scramble=False)
    x0, x1, y0, y1 = box
    out = []
    while len(out) < n:
        u = gen.random(64)
        for a, b in u:
            z = complex(x0 + (x1 - x0) * a, y0 + (y1 - y0) * b)
            if all(t.query([z.real, z.imag])[0] >= min_dist for t in trees):
                out.append(z)
                if len(out) == n:
                    break
    return out
