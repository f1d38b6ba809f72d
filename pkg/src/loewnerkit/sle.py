"""Samplers for SLE driving processes.

Chordal SLE_kappa is driven by sqrt(kappa) B. The radial SLE(kappa; rho) system

    dW = sqrt(kappa) dB + i (rho/2) (e^{iW} + V) / (e^{iW} - V) dt,
    dV = -V (V + e^{iW}) / (V - e^{iW}) dt,

is integrated by Euler-Maruyama with V renormalised onto the unit circle.
All randomness comes from a Philox generator keyed by (seed, stream), so a
sample is reproducible on every platform.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, replace

import numpy as np

from .curves import HALF_PLANE, Curve
from .geometry import CAYLEY, INF, as_complex, psi_interior
from .loewner import CHORDAL, RADIAL, DrivingFunction, solve_chordal_trace, solve_radial_trace

COLLISION_TOL = 1e-3
REAL_TOL = 1e-9


@dataclass(frozen=True)
class SleConfig:
    kappa: float = 2.0
    rho: float = 0.0
    w0: float = 0.0
    v0: float = np.pi
    T: float = 1.0
    dt: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kappa < 0:
            raise ValueError("kappa must be non-negative")
        if self.dt is None:
            object.__setattr__(self, "dt", 1e-4 * self.T)
        if not self.dt > 0 or self.T < self.dt:
            raise ValueError("need dt > 0 and T >= dt")
        if abs(np.exp(1j * self.w0) - np.exp(1j * self.v0)) < COLLISION_TOL:
            raise ValueError("W and V must start apart")

    @property
    def n_steps(self) -> int:
        return int(round(self.T / self.dt))

    def to_dict(self):
        return asdict(self)


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator for sample number ``stream`` under ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


def brownian_increments(cfg: SleConfig, streams) -> np.ndarray:
    """(len(streams), n) standard normal increments scaled by sqrt(dt)."""
    n = cfg.n_steps
    out = np.empty((len(streams), n))
    for i, s in enumerate(streams):
        out[i] = rng_for(cfg.seed, s).standard_normal(n)
    return out * np.sqrt(cfg.dt)


def _times(cfg: SleConfig) -> np.ndarray:
    return np.arange(cfg.n_steps + 1) * cfg.dt


def sample_chordal_driving_batch(cfg: SleConfig, m: int, first_stream: int = 0) -> np.ndarray:
    """(m, n+1) array of sqrt(kappa) B on the dt grid, one stream per row."""
    dB = brownian_increments(cfg, range(first_stream, first_stream + m))
    W = np.zeros((m, cfg.n_steps + 1))
    np.cumsum(np.sqrt(cfg.kappa) * dB, axis=1, out=W[:, 1:])
    return W


def sample_chordal_driving(cfg: SleConfig, stream: int = 0) -> DrivingFunction:
    """W_t = sqrt(kappa) B_t on the dt grid."""
    W = sample_chordal_driving_batch(cfg, 1, stream)[0]
    return DrivingFunction(_times(cfg), W, CHORDAL, {"kappa": cfg.kappa, "seed": cfg.seed, "stream": stream})


def sample_radial_sle_kr_batch(cfg: SleConfig, m: int, first_stream: int = 0,
                               collision_tol: float = COLLISION_TOL):
    """Euler-Maruyama for m independent copies of the (W, V) system.

    Returns
    -------
    W : (m, n+1) real array, held at its last value after a collision
    v : (m, n+1) continuous angle of V, held likewise
    stop : (m,) index of the collision step, or n when the run completed
    """
    n = cfg.n_steps
    dt = cfg.dt
    dB = np.sqrt(cfg.kappa) * brownian_increments(cfg, range(first_stream, first_stream + m))
    W = np.empty((m, n + 1))
    v = np.empty((m, n + 1))
    W[:, 0] = cfg.w0
    v[:, 0] = cfg.v0
    V = np.full(m, np.exp(1j * cfg.v0))
    alive = np.ones(m, dtype=bool)
    stop = np.full(m, n)
    half_rho = 0.5 * cfg.rho
    for k in range(n):
        w = W[:, k]
        z = np.exp(1j * w)
        ratio = (z + V) / (z - V)
        drift = 1j * half_rho * ratio
        resid = np.abs(drift.imag)
        if np.any(resid[alive] > REAL_TOL * np.maximum(1.0, np.abs(drift.real[alive]))):
            raise FloatingPointError("drift lost its realness")
        w_new = w + drift.real * dt + dB[:, k]
        V_new = V + V * ratio * dt
        V_new /= np.abs(V_new)
        v_new = v[:, k] + np.angle(V_new / V)
        # collision: closeness, or the angle difference changing sign across a step
        before = np.sin(0.5 * (w - v[:, k]))
        after = np.sin(0.5 * (w_new - v_new))
        hit = alive & ((np.abs(np.exp(1j * w_new) - V_new) < collision_tol) | (before * after <= 0))
        if np.any(hit):
            stop[hit] = k
            alive &= ~hit
        W[:, k + 1] = np.where(alive, w_new, w)
        v[:, k + 1] = np.where(alive, v_new, v[:, k])
        V = np.where(alive, V_new, V)
    return W, v, stop


def sample_radial_sle_kr(cfg: SleConfig, stream: int = 0, collision_tol: float = COLLISION_TOL):
    """Radial SLE(kappa; rho) driving angle and force point path V_t = e^{i v_t}.

    After a collision (the force point is swallowed) the run is truncated and the
    returned driving function ends at the collision time; ``meta["collided"]``
    records it.
    """
    W, v, stop = sample_radial_sle_kr_batch(cfg, 1, stream, collision_tol)
    k = int(stop[0])
    t = _times(cfg)
    meta = {"kappa": cfg.kappa, "rho": cfg.rho, "seed": cfg.seed, "stream": stream,
            "collided": bool(k < cfg.n_steps)}
    Wf = DrivingFunction(t[:k + 1], W[0, :k + 1], RADIAL, meta)
    return Wf, np.exp(1j * v[0, :k + 1])


def viewpoint_angles(x, a=0.0, b=INF):
    """(w0, v0): angles of a and b after the disc frame cayley o psi_x."""
    frame = CAYLEY.compose(psi_interior(as_complex(x)))
    w0 = float(np.angle(complex(frame(a))))
    v0 = float(np.angle(complex(frame(b))))
    return w0, v0


def sample_sle_trace(cfg: SleConfig, n: int = 1000, viewpoint="terminal", stream: int = 0) -> Curve:
    """Trace of chordal SLE_kappa from 0 to infinity in the half-plane.

    ``viewpoint="terminal"`` drives the chordal chain by sqrt(kappa) B. An
    interior viewpoint x instead samples radial SLE(kappa; kappa - 6) started at
    the images of 0 and infinity and returns the radial trace pulled back to the
    half-plane.
    """
    if isinstance(viewpoint, str):
        if viewpoint != "terminal":
            raise ValueError("viewpoint must be 'terminal' or an interior point")
        return solve_chordal_trace(sample_chordal_driving(cfg, stream), n)
    x = as_complex(viewpoint)
    w0, v0 = viewpoint_angles(x)
    rcfg = replace(cfg, rho=cfg.kappa - 6.0, w0=w0, v0=v0)
    W, _ = sample_radial_sle_kr(rcfg, stream)
    if W.T == 0:
        raise ValueError("force point swallowed immediately")
    disc = solve_radial_trace(W, min(n, len(W) - 1))
    frame = CAYLEY.compose(psi_interior(x))
    pts = np.asarray(frame.inverse()(disc.points), dtype=complex)
    pts[0] = pts[0].real
    return Curve(pts, disc.params, HALF_PLANE)
