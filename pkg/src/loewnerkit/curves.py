"""Sampled curves in the closed half-plane or disc, with Hausdorff and Frechet distances."""
from __future__ import annotations

import csv
import hashlib
import io

import numpy as np
from numba import njit
from scipy.spatial import cKDTree

from .geometry import INF, ComplexPoint, MobiusTransform, as_complex, cayley, is_inf

HALF_PLANE = "half_plane"
DISC = "disc"


@njit(cache=True)
def _frechet(P, Q):
    n = P.shape[0]
    m = Q.shape[0]
    prev = np.empty(m)
    cur = np.empty(m)
    prev[0] = abs(P[0] - Q[0])
    for j in range(1, m):
        prev[j] = max(prev[j - 1], abs(P[0] - Q[j]))
    for i in range(1, n):
        cur[0] = max(prev[0], abs(P[i] - Q[0]))
        for j in range(1, m):
            best = min(prev[j], prev[j - 1], cur[j - 1])
            d = abs(P[i] - Q[j])
            cur[j] = best if best > d else d
        prev, cur = cur, prev
    return prev[m - 1]


class Curve:
    """Ordered samples with strictly increasing parameters on [0, 1].

    Parameters
    ----------
    points : array-like of complex or ComplexPoint
        Samples; ``inf`` (or ``ComplexPoint.infinity()``) marks the point at infinity.
    params : array-like, optional
        Strictly increasing parameters with first 0 and last 1. Defaults to
        normalised Euclidean chord length (index spacing if infinity occurs).
    domain : {"half_plane", "disc"}
    """

    __slots__ = ("points", "params", "domain")

    def __init__(self, points, params=None, domain=HALF_PLANE, validate=True):
        if domain not in (HALF_PLANE, DISC):
            raise ValueError(f"unknown domain {domain!r}")
        pts = np.array([as_complex(p) for p in points] if _has_points(points) else np.array(as_complex(points)),
                       dtype=complex).ravel()
        if params is None:
            params = _chord_params(pts)
        par = np.array(params, dtype=float).ravel()
        if par.shape != pts.shape:
            raise ValueError("points and params differ in length")
        # drop repeated consecutive samples
        same = np.zeros(len(pts), dtype=bool)
        if len(pts) > 1:
            a, b = pts[1:], pts[:-1]
            same[1:] = (a == b) | (is_inf(a) & is_inf(b))
        if same.any():
            keep = ~same
            last_param = par[-1]
            pts, par = pts[keep], par[keep]
            par[-1] = last_param
        if validate:
            if len(pts) < 2:
                raise ValueError("a curve needs at least two distinct samples")
            if np.any(np.diff(par) <= 0):
                raise ValueError("params must be strictly increasing")
            if abs(par[0]) > 1e-12 or abs(par[-1] - 1) > 1e-12:
                raise ValueError("params must run from 0 to 1")
            fin = pts[~is_inf(pts)]
            if domain == HALF_PLANE and np.any(fin.imag < -1e-12):
                raise ValueError("half-plane curve has points below the real axis")
            if domain == DISC:
                if np.any(is_inf(pts)) or np.any(np.abs(pts) > 1 + 1e-12):
                    raise ValueError("disc curve leaves the closed unit disc")
        par[0], par[-1] = 0.0, 1.0
        self.points = pts
        self.params = par
        self.points.setflags(write=False)
        self.params.setflags(write=False)
        self.domain = domain

    # basic protocol
    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"Curve(n={len(self)}, domain={self.domain}, start={self.points[0]:.4g}, end={self.points[-1]:.4g})"

    def __eq__(self, other):
        return (isinstance(other, Curve) and self.domain == other.domain
                and np.array_equal(self.points, other.points) and np.array_equal(self.params, other.params))

    def __hash__(self):
        return hash(self.digest())

    @property
    def start(self) -> complex:
        return complex(self.points[0])

    @property
    def end(self) -> complex:
        return complex(self.points[-1])

    def point(self, k) -> ComplexPoint:
        return ComplexPoint.from_complex(self.points[k])

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(self.domain.encode())
        h.update(np.ascontiguousarray(self.points).tobytes())
        h.update(np.ascontiguousarray(self.params).tobytes())
        return h.hexdigest()[:16]

    def ground(self) -> np.ndarray:
        """Coordinates in which cdist is Euclidean (Cayley image, or the disc itself)."""
        if self.domain == DISC:
            return np.array(self.points)
        return np.asarray(cayley(self.points))

    def to_half_plane(self) -> "Curve":
        if self.domain == HALF_PLANE:
            return self
        from .geometry import CAYLEY_INV
        return Curve(CAYLEY_INV(self.points), self.params, HALF_PLANE)

    # constructions
    def reverse(self) -> "Curve":
        return Curve(self.points[::-1], 1.0 - self.params[::-1], self.domain, validate=False)

    def concat(self, other: "Curve", tol=1e-9) -> "Curve":
        if self.domain != other.domain:
            raise ValueError("cannot concatenate curves from different domains")
        a, b = self.points[-1], other.points[0]
        gap = abs(a - b) if self.domain == DISC else abs(cayley(a) - cayley(b))
        if not gap <= tol:
            raise ValueError(f"endpoint mismatch: {a} vs {b}")
        pts = np.concatenate([self.points, other.points[1:]])
        par = np.concatenate([0.5 * self.params, 0.5 + 0.5 * other.params[1:]])
        return Curve(pts, par, self.domain)

    def transformed(self, m, domain=None) -> "Curve":
        """Image under a Mobius map or a vectorised callable."""
        return Curve(m(self.points), self.params, domain or self.domain)

    def scaled(self, lam) -> "Curve":
        return Curve(self.points * lam, self.params, self.domain)

    def reparametrized(self, func) -> "Curve":
        """Apply an increasing homeomorphism of [0,1] to the parameters."""
        return Curve(self.points, func(self.params), self.domain)

    def segment_lengths(self) -> np.ndarray:
        if np.any(is_inf(self.points)):
            raise ValueError("curve passes through infinity")
        return np.abs(np.diff(self.points))

    def arclength(self) -> float:
        return float(self.segment_lengths().sum())

    def resample(self, n: int) -> "Curve":
        """n points at equal Euclidean arclength spacing along the polyline."""
        if n < 2:
            raise ValueError("n must be at least 2")
        seg = self.segment_lengths()
        s = np.concatenate([[0.0], np.cumsum(seg)])
        targets = np.linspace(0.0, s[-1], n)
        k = np.clip(np.searchsorted(s, targets, side="right") - 1, 0, len(seg) - 1)
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(seg[k] > 0, (targets - s[k]) / seg[k], 0.0)
        pts = self.points[k] + frac * (self.points[k + 1] - self.points[k])
        pts[0], pts[-1] = self.points[0], self.points[-1]
        return Curve(pts, np.linspace(0, 1, n), self.domain)

    def refine(self, max_step: float) -> "Curve":
        """Insert samples so that no segment is longer than max_step; keeps all vertices."""
        seg = self.segment_lengths()
        counts = np.maximum(1, np.ceil(seg / max_step).astype(int))
        if np.all(counts == 1):
            return self
        out = [self.points[:1]]
        par = [self.params[:1]]
        for k, m in enumerate(counts):
            f = np.arange(1, m + 1) / m
            out.append(self.points[k] + f * (self.points[k + 1] - self.points[k]))
            par.append(self.params[k] + f * (self.params[k + 1] - self.params[k]))
        return Curve(np.concatenate(out), np.concatenate(par), self.domain)

    # distances
    def hausdorff_distance(self, other: "Curve") -> float:
        return hausdorff_distance(self, other)

    def uniform_distance(self, other: "Curve") -> float:
        return uniform_distance(self, other)

    def is_simple(self) -> bool:
        return is_simple(self)

    # io
    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        if self.domain == DISC:
            buf.write("# domain: disc\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "re", "im"])
        for t, z in zip(self.params, self.points):
            if is_inf(z):
                w.writerow([repr(float(t)), "inf"])
            else:
                w.writerow([repr(float(t)), repr(float(z.real)), repr(float(z.imag))])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, path_or_text) -> "Curve":
        if "\n" in str(path_or_text):
            text = str(path_or_text)
        else:
            with open(path_or_text) as fh:
                text = fh.read()
        domain = HALF_PLANE
        rows = []
        for line in text.splitlines():
            if line.startswith("#"):
                if "disc" in line:
                    domain = DISC
                continue
            if line.strip():
                rows.append(next(csv.reader([line])))
        if not rows or rows[0][:2] != ["t", "re"]:
            raise ValueError("curve CSV must start with header t,re,im")
        ts, zs = [], []
        for r in rows[1:]:
            ts.append(float(r[0]))
            zs.append(INF if r[1].strip() == "inf" else complex(float(r[1]), float(r[2])))
        return cls(np.array(zs), np.array(ts), domain)


def _has_points(points):
    try:
        return len(points) > 0 and isinstance(points[0], ComplexPoint)
    except TypeError:
        return False


def _chord_params(pts):
    n = len(pts)
    if n < 2:
        return np.zeros(n)
    if np.any(is_inf(pts)):
        return np.linspace(0.0, 1.0, n)
    s = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(pts)))])
    if s[-1] <= 0:
        return np.linspace(0.0, 1.0, n)
    s /= s[-1]
    # exact duplicates are removed later; keep the array strictly increasing where it matters
    return s


def polyline(vertices, domain=HALF_PLANE, max_step=None) -> Curve:
    c = Curve(np.asarray(vertices, dtype=complex), domain=domain)
    return c.refine(max_step) if max_step else c


def hausdorff_distance(c1: Curve, c2: Curve) -> float:
    """Hausdorff distance of the sample sets under cdist."""
    g1, g2 = c1.ground(), c2.ground()
    p1 = np.column_stack([g1.real, g1.imag])
    p2 = np.column_stack([g2.real, g2.imag])
    d12 = cKDTree(p2).query(p1)[0].max()
    d21 = cKDTree(p1).query(p2)[0].max()
    return float(max(d12, d21))


def uniform_distance(c1: Curve, c2: Curve) -> float:
    """Discrete Frechet distance of the sample sequences under cdist."""
    return float(_frechet(c1.ground(), c2.ground()))


def is_simple(c: Curve) -> bool:
    """True when the polyline through the samples has no self-intersections."""
    from shapely.geometry import LineString

    g = c.ground() if c.domain == DISC or np.any(is_inf(c.points)) else c.points
    ls = LineString(np.column_stack([g.real, g.imag]))
    return bool(ls.is_simple) and not (len(g) > 2 and g[0] == g[-1])
