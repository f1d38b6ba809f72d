"""Points of the extended half-plane, Mobius maps, and the Cayley metric.

Complex arrays use ``complex(inf, 0)`` as the tag for the point at infinity.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

INF = complex(np.inf, 0.0)


def is_inf(z):
    z = np.asarray(z)
    return np.isinf(z.real) | np.isinf(z.imag)


@dataclass(frozen=True)
class ComplexPoint:
    """A point of the Riemann sphere with an explicit tag for infinity."""

    re: float = 0.0
    im: float = 0.0
    at_infinity: bool = False

    def __post_init__(self):
        if self.at_infinity:
            object.__setattr__(self, "re", 0.0)
            object.__setattr__(self, "im", 0.0)
        elif not (np.isfinite(self.re) and np.isfinite(self.im)):
            raise ValueError("finite ComplexPoint needs finite coordinates")

    @classmethod
    def infinity(cls) -> "ComplexPoint":
        return cls(at_infinity=True)

    @classmethod
    def from_complex(cls, z) -> "ComplexPoint":
        if isinstance(z, ComplexPoint):
            return z
        z = complex(z)
        if np.isinf(z.real) or np.isinf(z.imag):
            return cls.infinity()
        return cls(z.real, z.imag)

    def to_complex(self) -> complex:
        return INF if self.at_infinity else complex(self.re, self.im)

    def __complex__(self):
        return self.to_complex()

    def __repr__(self):
        if self.at_infinity:
            return "ComplexPoint(inf)"
        return f"ComplexPoint({self.re!r}{self.im:+}j)"


def as_complex(z):
    """Convert ComplexPoint, scalars or array-likes to complex / complex arrays."""
    if isinstance(z, ComplexPoint):
        return z.to_complex()
    if np.isscalar(z):
        z = complex(z)
        return INF if (np.isinf(z.real) or np.isinf(z.imag)) else z
    arr = np.array(z, dtype=complex)
    arr[is_inf(arr)] = INF
    return arr


def _apply(a, b, c, d, z):
    z = np.asarray(z, dtype=complex)
    inf = is_inf(z)
    zf = np.where(inf, 0.0, z)
    num = a * zf + b
    den = c * zf + d
    pole = den == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / np.where(pole, 1.0, den)
    out = np.where(pole, INF, out)
    at_inf = a / c if c != 0 else INF
    out = np.where(inf, at_inf, out)
    return out


@dataclass(frozen=True)
class MobiusTransform:
    """z -> (az+b)/(cz+d), stored with ad - bc = 1."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a, b, c, d = (complex(v) for v in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        scale = max(abs(a), abs(b), abs(c), abs(d))
        if scale == 0 or abs(det) <= 1e-14 * scale * scale:
            raise ValueError("degenerate Mobius transform")
        s = np.sqrt(det)
        for name, v in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, v / s)

    @classmethod
    def identity(cls) -> "MobiusTransform":
        return cls(1, 0, 0, 1)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def __call__(self, z):
        if isinstance(z, ComplexPoint):
            return ComplexPoint.from_complex(_apply(self.a, self.b, self.c, self.d, z.to_complex())[()])
        out = _apply(self.a, self.b, self.c, self.d, z)
        return complex(out) if out.ndim == 0 else out

    def derivative(self, z):
        z = np.asarray(as_complex(z))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = 1.0 / (self.c * z + self.d) ** 2
        return complex(out) if out.ndim == 0 else out

    def compose(self, other: "MobiusTransform") -> "MobiusTransform":
        """self after other."""
        m = self.matrix @ other.matrix
        return MobiusTransform(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    def inverse(self) -> "MobiusTransform":
        return MobiusTransform(self.d, -self.b, -self.c, self.a)

    def preserves_half_plane(self, tol=1e-9) -> bool:
        m = self.matrix
        # real up to a common phase, with positive determinant
        k = np.argmax(np.abs(m))
        ph = m.flat[k] / abs(m.flat[k])
        r = m / ph
        return bool(np.all(np.abs(r.imag) <= tol * np.abs(r).max())) and (
            r[0, 0].real * r[1, 1].real - r[0, 1].real * r[1, 0].real > 0
        )

    def to_tuple(self):
        return tuple(complex(v) for v in (self.a, self.b, self.c, self.d))


CAYLEY = MobiusTransform(1, -1j, 1, 1j)
CAYLEY_INV = CAYLEY.inverse()


def cayley(z):
    """phi(z) = (z - i)/(z + i); maps the half-plane onto the unit disc, infinity to 1."""
    return CAYLEY(z)


def cayley_inv(w):
    return CAYLEY_INV(w)


def cdist(z, w):
    """Chordal-type metric |phi(z) - phi(w)| (vectorised, broadcasting)."""
    d = np.abs(np.asarray(CAYLEY(as_complex(z))) - np.asarray(CAYLEY(as_complex(w))))
    return float(d) if d.ndim == 0 else d


def psi_interior(x) -> MobiusTransform:
    """Half-plane automorphism sending x to i with positive derivative at x."""
    x = as_complex(x)
    if not np.isfinite(x.real) or x.imag <= 0:
        raise ValueError("psi_interior needs a finite point of the open half-plane")
    return MobiusTransform(1, -x.real, 0, x.imag)


def psi_boundary(x) -> MobiusTransform:
    """Half-plane automorphism sending the boundary point x to infinity.

    x = 1 gives z -> (1+z)/(1-z) (so -1 -> 0), x = -1 gives z -> (z-1)/(z+1).
    For |x| > 1 the map fixes -1 and 1; for |x| < 1 no automorphism can do that,
    and the returned map swaps them instead.
    """
    x = as_complex(x)
    if is_inf(x):
        return MobiusTransform.identity()
    if abs(x.imag) > 1e-12:
        raise ValueError("psi_boundary needs a real point or infinity")
    x = x.real
    if abs(x - 1.0) <= 1e-12:
        x = 1.0
    elif abs(x + 1.0) <= 1e-12:
        x = -1.0
    if x == 1.0:
        return MobiusTransform(1, 1, -1, 1)
    if x == -1.0:
        return MobiusTransform(1, -1, 1, 1)
    if abs(x) > 1:
        return MobiusTransform(-x, 1, 1, -x)
    return MobiusTransform(x, -1, 1, -x)


def mobius_apply(m: MobiusTransform, z) -> ComplexPoint:
    return m(ComplexPoint.from_complex(z))


def mobius_compose(m1: MobiusTransform, m2: MobiusTransform) -> MobiusTransform:
    return m1.compose(m2)


def automorphism_from_points(src, dst) -> MobiusTransform:
    """Mobius map taking three points src to three points dst (both may contain inf)."""

    def to_std(p):
        # sends p0 -> 0, p1 -> 1, p2 -> inf
        p0, p1, p2 = (as_complex(v) for v in p)
        if is_inf(p0):
            return MobiusTransform(0, p1 - p2, 1, -p2)
        if is_inf(p1):
            return MobiusTransform(1, -p0, 1, -p2)
        if is_inf(p2):
            return MobiusTransform(1, -p0, 0, p1 - p0)
        return MobiusTransform(p1 - p2, -p0 * (p1 - p2), p1 - p0, -p2 * (p1 - p0))

    return to_std(dst).inverse().compose(to_std(src))
