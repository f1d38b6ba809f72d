"""Chordal and radial Loewner chains: forward traces and vertical-slit zippers."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np
import shapely
from scipy.spatial import cKDTree

from . import _kernels as K
from .curves import DISC, HALF_PLANE, Curve
from .geometry import (CAYLEY, INF, ComplexPoint, MobiusTransform, as_complex, cdist, is_inf,
                       psi_boundary, psi_interior)

CHORDAL = "chordal"
RADIAL = "radial"
SWALLOW_LOG_CRAD = np.log(1e-8)


class Swallowed(Exception):
    """A point was filled by the chain; ``step`` is the swallowing step index."""

    def __init__(self, msg, step=None):
        super().__init__(msg)
        self.step = step


class UnzipError(ValueError):
    def __init__(self, msg, step=None):
        super().__init__(msg)
        self.step = step


@dataclass(frozen=True)
class SlitStep:
    w: float
    dcap: float

    def __post_init__(self):
        if not self.dcap > 0:
            raise ValueError("dcap must be positive")


@dataclass
class DrivingFunction:
    """Piecewise-linear driving function on [0, T]."""

    times: np.ndarray
    values: np.ndarray
    kind: str = CHORDAL
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.kind not in (CHORDAL, RADIAL):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.times.shape != self.values.shape or self.times.ndim != 1 or len(self.times) < 1:
            raise ValueError("times and values must be equal-length 1d arrays")
        if self.times[0] != 0.0 or np.any(np.diff(self.times) <= 0):
            raise ValueError("times must start at 0 and increase strictly")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("driving values must be finite")

    @property
    def T(self) -> float:
        return float(self.times[-1])

    def __call__(self, t):
        """W at t, held at the terminal value past T."""
        return np.interp(t, self.times, self.values)

    def __len__(self):
        return len(self.times)

    def steps(self):
        """(w, dcap) arrays of the slit steps that realise this function."""
        return self.values[1:].copy(), np.diff(self.times)

    def shifted(self, c) -> "DrivingFunction":
        return DrivingFunction(self.times, self.values + c, self.kind, dict(self.meta))

    def to_csv(self, path, sidecar=True):
        np.savetxt(path, np.column_stack([self.times, self.values]), delimiter=",",
                   header="t,w", comments="", fmt="%.17g")
        if sidecar:
            meta = {"kind": self.kind, "T": self.T}
            meta.update({k: v for k, v in self.meta.items() if k in ("x", "source")})
            with open(str(path) + ".json", "w") as fh:
                json.dump(meta, fh, indent=1)

    @classmethod
    def from_csv(cls, path) -> "DrivingFunction":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        kind, meta = CHORDAL, {}
        try:
            with open(str(path) + ".json") as fh:
                meta = json.load(fh)
            kind = meta.pop("kind", CHORDAL)
            meta.pop("T", None)
        except FileNotFoundError:
            pass
        return cls(data[:, 0], data[:, 1], kind, meta)


@dataclass
class LoewnerChain:
    """pre, then the slit steps, then post. Radial chains work in disc coordinates."""

    kind: str
    pre: MobiusTransform
    w: np.ndarray
    dcap: np.ndarray
    post: MobiusTransform
    sample_index: np.ndarray | None = None
    _weld: np.ndarray | None = None

    @property
    def steps(self):
        return [SlitStep(float(a), float(b)) for a, b in zip(self.w, self.dcap)]

    @property
    def T(self) -> float:
        return float(self.dcap.sum())

    def __len__(self):
        return len(self.w)

    @property
    def weld(self) -> np.ndarray:
        """(n, 3) array of final boundary coordinates (left, tip, right) consumed by each step.

        Real positions for chordal chains, continuous circle angles for radial ones."""
        if self._weld is None:
            fn = K.chordal_weld if self.kind == CHORDAL else K.radial_weld
            self._weld = fn(np.ascontiguousarray(self.w), np.ascontiguousarray(self.dcap))
        return self._weld

    def __call__(self, z):
        return chain_eval(self, z)


# ------------------------------------------------------------- elementary map

def slit_map_forward(z, s: SlitStep):
    """w + sqrt((z-w)^2 + 4 dcap): removes the slit [w, w + 2i sqrt(dcap)]."""
    zc = as_complex(z)
    arr = np.atleast_1d(np.asarray(zc, dtype=complex))
    out, sw = K.chordal_apply(arr, np.array([s.w]), np.array([s.dcap]), 1)
    d = arr - s.w
    h = 2 * np.sqrt(s.dcap)
    inside = (np.abs(d.real) == 0) & (d.imag > 0) & (d.imag < h)
    if np.any(inside):
        raise Swallowed("point lies on the removed slit", 0)
    if isinstance(z, ComplexPoint):
        return ComplexPoint.from_complex(out[0])
    return complex(out[0]) if np.ndim(zc) == 0 else out


# ------------------------------------------------------------- forward solvers

def _grid(W: DrivingFunction, n):
    if n is None:
        return W.times
    return np.linspace(0.0, W.T, int(n) + 1)


def solve_chordal_trace(W: DrivingFunction, n: int | None = None) -> Curve:
    """Trace of the vertical-slit chain driven by W on n uniform steps (or W's own grid)."""
    if W.kind != CHORDAL:
        raise ValueError("solve_chordal_trace needs a chordal driving function")
    t = _grid(W, n)
    u = W(t[1:])
    pts = np.concatenate([[complex(W(0.0), 0.0)], K.chordal_trace(u, np.diff(t))])
    return Curve(pts, t / t[-1], HALF_PLANE)


def solve_radial_trace(W: DrivingFunction, n: int | None = None) -> Curve:
    """Trace in the closed unit disc of the radial chain driven by the angle W."""
    if W.kind != RADIAL:
        raise ValueError("solve_radial_trace needs a radial driving function")
    t = _grid(W, n)
    pts = np.concatenate([[np.exp(1j * W(0.0))], K.radial_trace(W(t[1:]), np.diff(t))])
    return Curve(pts, t / t[-1], DISC)


# ------------------------------------------------------------- zippers

def unzip_chordal(c: Curve, allow_touch: bool = False):
    """Driving function seen from infinity and the slit chain of a half-plane curve.

    Samples lying exactly on the real axis (curves touching the boundary) are
    rejected unless ``allow_touch``; then they contribute no step.
    """
    if c.domain != HALF_PLANE:
        c = c.to_half_plane()
    z = np.array(c.points)
    if abs(z[0].imag) > 1e-12:
        raise UnzipError("curve must start on the real axis", 0)
    z[0] = z[0].real
    fin = ~is_inf(z)
    if not fin[-1] and fin[:-1].all():
        z = z[:-1]
    u, dc, idx, status, k = K.chordal_unzip(z, allow_touch)
    if status == 1:
        raise UnzipError(f"sample {k} maps below the real axis (numerically swallowed)", k)
    if status == 2:
        raise UnzipError(f"sample {k} is the point at infinity", k)
    times = np.concatenate([[0.0], np.cumsum(dc)])
    W = DrivingFunction(times, np.concatenate([[z[0].real], u]), CHORDAL, {"source": c.digest()})
    ident = MobiusTransform.identity()
    ch = LoewnerChain(CHORDAL, ident, u, dc, ident, sample_index=idx)
    return W, ch


# ------------------------------------------------------------- disconnection

def _touch_events(z: np.ndarray):
    """Sample indices k (0 < k < n-1) where the curve meets the real axis or an earlier
    sample, together with the earlier index (-1 for the axis)."""
    n = len(z)
    ev = {int(k): -1 for k in np.nonzero(np.abs(z[1:-1].imag) <= 1e-12)[0] + 1}
    fin = np.nonzero(np.isfinite(z.real))[0]
    pairs = cKDTree(np.column_stack([z[fin].real, z[fin].imag])).query_pairs(1e-9, output_type="ndarray")
    for a, b in pairs:
        i, k = sorted((int(fin[a]), int(fin[b])))
        if 0 < k < n - 1 and k - i > 1 and k not in ev:
            ev[k] = i
    return sorted(ev.items())


def _face(polys, p):
    pt = shapely.Point(p.real, p.imag)
    for i, poly in enumerate(polys):
        if poly.contains(pt):
            return i
    return -1


def disconnection_index(c: Curve, x) -> int | None:
    """First sample index at which c (in the half-plane) cuts x off from the rest of
    the curve, by touching the real axis or an earlier part of itself; None if never.

    x and the continuation of the curve must then lie in different faces of the
    arrangement formed by the curve so far and the real axis."""
    if c.domain == DISC:
        c = c.to_half_plane()
    z = c.points
    xc = complex(as_complex(x))
    for k, i in _touch_events(z):
        if i >= 0:
            loop = z[i:k + 1]
            if not list(shapely.polygonize([shapely.LineString(np.column_stack([loop.real, loop.imag]))]).geoms):
                continue  # pure retrace, encloses nothing
        head = z[:k + 1]
        head = head[np.isfinite(head.real)]
        lo = min(head.real.min(), xc.real) - 1.0
        hi = max(head.real.max(), xc.real) + 1.0
        lines = shapely.unary_union([shapely.LineString(np.column_stack([head.real, head.imag])),
                                     shapely.LineString([(lo, 0.0), (hi, 0.0)])])
        polys = list(shapely.polygonize([lines]).geoms)
        nxt = z[k + 1] if is_inf(z[k + 1]) else 0.5 * (z[k] + z[k + 1])
        if is_inf(nxt):
            nxt = z[k] + 1e6j
        if _face(polys, xc) != _face(polys, nxt):
            return k
    return None


def _to_disc_frame(x):
    x = as_complex(x)
    return CAYLEY.compose(psi_interior(x))


def unzip_radial_at(c: Curve, x, min_log_crad: float = SWALLOW_LOG_CRAD):
    """Driving angle W_{x,t} and radial chain of c seen from the interior point x.

    The curve is moved to the disc by cayley o psi_x (x -> 0) and unzipped with
    radial slit maps; stops when x is swallowed (conformal radius below 1e-8).
    """
    xc = as_complex(x)
    if c.domain == DISC:
        c = c.to_half_plane()
    if not np.isfinite(xc.real) or xc.imag <= 0:
        raise ValueError("x must be an interior point of the half-plane")
    if np.min(cdist(c.points, xc)) <= 1e-6:
        raise UnzipError("x lies on the curve")
    cut = disconnection_index(c, xc)
    if cut is not None:
        c = Curve(c.points[:cut + 1], c.params[:cut + 1] / c.params[cut], HALF_PLANE, validate=False)
    pre = _to_disc_frame(xc)
    zeta = np.asarray(pre(c.points), dtype=complex)
    start = zeta[0]
    if abs(abs(start) - 1.0) > 1e-9:
        raise UnzipError("curve must start on the boundary", 0)
    zeta[0] = start / abs(start)
    W0, w, dc, idx, status, k = K.radial_unzip(zeta, min_log_crad)
    if status == 2:
        raise UnzipError(f"sample {k} left the disc during unzipping", k)
    times = np.concatenate([[0.0], np.cumsum(dc)])
    W = DrivingFunction(times, np.concatenate([[W0], w]), RADIAL,
                        {"x": [xc.real, xc.imag], "source": c.digest(),
                         "swallowed": bool(status == 1 or cut is not None),
                         "stop_index": int(k) if cut is None else int(cut)})
    ch = LoewnerChain(RADIAL, pre, w, dc, pre.inverse(), sample_index=idx)
    return W, ch


def unzip_radial_many(c: Curve, xs, max_tau: float = -SWALLOW_LOG_CRAD):
    """Radial driving functions of c seen from several interior points at once.

    One chordal unzip (towards the curve's end when it lies on the boundary)
    is shared by all viewpoints; each x is then pushed through the slit maps,
    so the cost is one zipper pass plus O(n) per point. Agrees with
    ``unzip_radial_at`` up to the zipper discretisation; viewpoints that the shared
    pass loses to underflow are redone with ``unzip_radial_at``.
    """
    if c.domain == DISC:
        c = c.to_half_plane()
    xs = [as_complex(x) for x in xs]
    for x in xs:
        if not np.isfinite(x.real) or x.imag <= 0:
            raise ValueError("x must be an interior point of the half-plane")
    end = c.end
    frame = psi_boundary(end) if (is_inf(end) or abs(end.imag) <= 1e-12) else MobiusTransform.identity()
    _, ch = unzip_chordal(c.transformed(frame), allow_touch=True)
    xa = np.asarray(xs, dtype=complex)
    fx = np.asarray(frame(xa), dtype=complex)
    arg_pre = np.array([np.angle(_to_disc_frame(x).derivative(x)) - np.angle(frame.derivative(x))
                        for x in xs])
    u = np.concatenate([[np.asarray(frame(c.start)).real.item()], ch.w])
    dc = np.concatenate([[0.0], ch.dcap])
    # x cut off at sample k: only the slits of samples <= k count
    n_steps = np.full(len(xs), len(ch.w), dtype=np.int64)
    for i, x in enumerate(xs):
        cut = disconnection_index(c, x)
        if cut is not None:
            n_steps[i] = int(np.searchsorted(ch.sample_index, cut, side="right"))
    Wa, Ta, cnt, lost = K.radial_from_chordal(u, dc, fx, arg_pre, max_tau, n_steps)
    out = []
    for i, x in enumerate(xs):
        if lost[i]:
            # x sits in a pocket compressed below double precision as seen from the
            # curve's end; the zipper centred at x still resolves it
            out.append(unzip_radial_at(c, x, -max_tau)[0])
            continue
        k = cnt[i]
        out.append(DrivingFunction(Ta[i, :k].copy(), Wa[i, :k].copy(), RADIAL,
                                   {"x": [x.real, x.imag], "source": c.digest(), "route": "chordal"}))
    return out


def chain_from_driving(W: DrivingFunction, x=None, n: int | None = None) -> LoewnerChain:
    """Slit chain realising W (radial chains anchored at x in the half-plane)."""
    t = _grid(W, n)
    w, dc = W(t[1:]), np.diff(t)
    if W.kind == CHORDAL:
        ident = MobiusTransform.identity()
        return LoewnerChain(CHORDAL, ident, w, dc, ident)
    pre = _to_disc_frame(1j if x is None else x)
    return LoewnerChain(RADIAL, pre, w, dc, pre.inverse())


def _eval(ch: LoewnerChain, z, upto=None):
    upto = len(ch.w) if upto is None else upto
    z = np.atleast_1d(np.asarray(as_complex(z), dtype=complex))
    if ch.kind == CHORDAL:
        y = np.asarray(ch.pre(z), dtype=complex)
        out, sw = K.chordal_apply(y, ch.w, ch.dcap, upto)
        return np.asarray(ch.post(out), dtype=complex), sw
    y = np.asarray(ch.pre(z), dtype=complex)
    out, sw = K.radial_apply(y, ch.w, ch.dcap, upto)
    return np.asarray(ch.post(out), dtype=complex), sw


def chain_eval(ch: LoewnerChain, z, upto: int | None = None, strict: bool = True):
    """Evaluate g = post o steps o pre. Raises Swallowed if a point is filled."""
    scalar = isinstance(z, ComplexPoint) or np.ndim(as_complex(z)) == 0
    out, sw = _eval(ch, z, upto)
    if strict and np.any(sw >= 0):
        k = int(sw[sw >= 0].min())
        raise Swallowed(f"point swallowed at step {k}", k)
    if isinstance(z, ComplexPoint):
        return ComplexPoint.from_complex(out[0])
    return complex(out[0]) if scalar else out


def conformal_radius_at(ch: LoewnerChain, x) -> float:
    """Conformal radius at x of the chain's domain (half-plane convention: crad(H, x) = 2 Im x)."""
    xc = as_complex(x)
    if ch.kind == CHORDAL:
        y = np.array([ch.pre(xc)], dtype=complex)
        out, der = K.chordal_apply_deriv(y, ch.w, ch.dcap)
        gx = ch.post(out[0])
        if gx.imag <= 0:
            raise Swallowed("x is swallowed")
        dtot = ch.pre.derivative(xc) * der[0] * ch.post.derivative(out[0])
        return float(2 * gx.imag / abs(dtot))
    # radial: chain in disc coordinates; crad(D, 0) = 1 for the disc image of x' = pre^{-1}(0)
    zeta = ch.pre(xc)
    out, sw = K.radial_apply(np.array([zeta], dtype=complex), ch.w, ch.dcap, len(ch.w))
    if sw[0] >= 0:
        raise Swallowed("x is swallowed", int(sw[0]))
    # derivative by a complex-step free central difference in the disc frame
    h = 1e-6 * max(1e-3, 1 - abs(zeta))
    pts = np.array([zeta + h, zeta - h, zeta + 1j * h, zeta - 1j * h], dtype=complex)
    img, _ = K.radial_apply(pts, ch.w, ch.dcap, len(ch.w))
    d = 0.5 * ((img[0] - img[1]) / (2 * h) + (img[2] - img[3]) / (2j * h))
    w = out[0]
    # crad of the disc at w is 1 - |w|^2; pull back through the chain and the pre map
    crad_disc = (1 - abs(w) ** 2) / abs(d)
    return float(crad_disc / abs(ch.pre.derivative(xc)))


def capacity(c: Curve) -> float:
    return unzip_chordal(c)[0].T


def radial_capacity(c: Curve, x) -> float:
    return unzip_radial_at(c, x)[0].T
