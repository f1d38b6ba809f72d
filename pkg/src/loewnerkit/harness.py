"""Convergence, round-trip and law-convergence experiments, with report output."""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

from . import __version__
from . import examples as ex
from .curves import Curve
from .geometry import as_complex
from .loewner import (CHORDAL, DrivingFunction, UnzipError, solve_chordal_trace, unzip_chordal,
                      unzip_radial_at)
from .metrics import (compare_drivings, d_strong, drivings_from, locally_uniform_from,
                      terminal_driving)
from .sle import SleConfig, sample_chordal_driving_batch, sample_radial_sle_kr_batch, viewpoint_angles

CONVERGING = "CONVERGING"
STALLED = "STALLED"
INCONCLUSIVE = "INCONCLUSIVE"
STALL_FLOOR = 0.05
WINDOW = 4

X_METRICS = ("d_cap_r", "d_cap_l")
ALL_METRICS = ("d_cap_r", "d_cap_l", "d_f", "d_b", "d_strong", "hausdorff")


def verdict(values, floor: float = STALL_FLOOR, window: int = WINDOW) -> str:
    """CONVERGING: the last ``window`` values strictly decrease and the final value is
    below half the initial one. STALLED: otherwise, with the last values reaching
    ``floor``. Anything else is INCONCLUSIVE."""
    v = np.asarray(values, dtype=float)
    if len(v) < window:
        return INCONCLUSIVE
    tail = v[-window:]
    if np.all(np.diff(tail) < 0) and v[-1] < 0.5 * v[0]:
        return CONVERGING
    if tail.max() >= floor:
        return STALLED
    return INCONCLUSIVE


# ------------------------------------------------------------------ families

def _three(j):
    variant = "plain" if j % 2 else "doubled"
    return ex.transport_to_canonical(ex.gen_three_segment(j, variant), "disc", -1, 1)


def _three_target(js):
    t = ex.transport_to_canonical(ex.three_segment_limit(), "disc", -1, 1)
    return t, t.reverse()


def _hooks_target(js):
    t = ex.hooks_target(2.0 ** -(max(js) + 1) / 2)
    return t, t.reverse()


def _fig8(j):
    return ex.gen_figure_eight(j, "a" if j % 2 else "b")


def _fig8_target(js):
    F, B = ex.figure_eight_limits(max(js))
    return F, B.reverse()


def _semicircle_target(js):
    t = ex.gen_perturbed_semicircle(0)
    return t, t.reverse()


FAMILIES = {
    "ladder": dict(build=ex.gen_ladder, target=lambda js: (ex.ladder_target(), None), js=range(2, 7),
                   metrics=("d_cap_r", "d_strong", "hausdorff"),
                   expected={"d_cap_r": CONVERGING, "d_strong": STALLED}),
    "three_segment": dict(build=_three, target=_three_target, js=range(1, 9),
                          metrics=("d_f", "d_b", "d_strong", "hausdorff"),
                          expected={"d_f": CONVERGING, "d_b": CONVERGING, "d_strong": STALLED}),
    "hooks": dict(build=ex.gen_hooks, target=_hooks_target, js=range(1, 8),
                  metrics=("d_cap_r", "d_cap_l", "d_strong"),
                  expected={"d_cap_r": CONVERGING, "d_cap_l": CONVERGING, "d_strong": STALLED}),
    "figure_eight": dict(build=_fig8, target=_fig8_target, js=range(1, 7),
                         metrics=("d_cap_r", "d_cap_l", "d_strong"),
                         expected={"d_strong": STALLED}),
    "semicircle": dict(build=ex.gen_perturbed_semicircle, target=_semicircle_target, js=range(1, 9),
                       metrics=("d_cap_r", "d_cap_l", "d_strong", "hausdorff"),
                       expected={"d_cap_r": CONVERGING, "d_cap_l": CONVERGING, "d_strong": CONVERGING}),
}


# ------------------------------------------------------------------ config and report

@dataclass
class ExperimentConfig:
    family: str = "semicircle"
    js: list = field(default_factory=list)
    xs: list = field(default_factory=list)
    n_grid: int = 12
    metrics: list = field(default_factory=list)
    floor: float = STALL_FLOOR
    seed: int = 0
    out: str | None = None
    # sampler experiments
    mode: str = "viewpoint"
    kappa: float = 2.0
    m: int = 400
    times: list = field(default_factory=lambda: [0.1, 0.3])
    chordal_T: float = 25.0
    n_trace: int = 1500
    ks_tol: float = 0.1

    def __post_init__(self):
        self.xs = [as_complex(x) for x in self.xs]
        if len(set(self.xs)) != len(self.xs):
            raise ValueError("viewpoints must be pairwise distinct")
        if self.family in FAMILIES:
            spec = FAMILIES[self.family]
            self.js = list(self.js) or list(spec["js"])
            self.metrics = list(self.metrics) or list(spec["metrics"])

    def to_dict(self):
        d = asdict(self)
        d["xs"] = [[x.real, x.imag] for x in self.xs]
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["xs"] = [complex(*x) if isinstance(x, (list, tuple)) else complex(x) for x in d.get("xs", [])]
        return cls(**d)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class Report:
    rows: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    FIELDS = ("j", "x_re", "x_im", "metric", "value", "components")

    def add(self, j, x, metric, value, components=()):
        x = complex(x) if x is not None else complex("nan")
        self.rows.append({"j": int(j), "x_re": x.real, "x_im": x.imag, "metric": metric,
                          "value": float(value), "components": [float(c) for c in components]})

    def series(self, metric, x=None):
        rows = [r for r in self.rows if r["metric"] == metric
                and (x is None or (r["x_re"], r["x_im"]) == (x.real, x.imag))]
        rows.sort(key=lambda r: r["j"])
        return [r["j"] for r in rows], [r["value"] for r in rows]

    def to_dict(self):
        return {"rows": self.rows, "verdicts": self.verdicts, "meta": self.meta}

    @classmethod
    def from_dict(cls, d):
        return cls(list(d["rows"]), dict(d["verdicts"]), dict(d["meta"]))


def _xkey(x: complex) -> str:
    return f"{x.real:.6g}{x.imag:+.6g}i"


# ------------------------------------------------------------------ convergence suite

def _dist_to_polyline(z: np.ndarray, x: complex) -> float:
    a, d = z[:-1], np.diff(z)
    dd = np.maximum(np.abs(d) ** 2, 1e-300)
    s = np.clip(((x - a) * np.conj(d)).real / dd, 0.0, 1.0)
    return float(np.min(np.abs(a + s * d - x)))


def _grid_for(cfg: ExperimentConfig, curves):
    if cfg.xs:
        for j, c in curves.items():
            for x in cfg.xs:
                if _dist_to_polyline(c.points, x) < 1e-9:
                    raise ValueError(f"viewpoint {x} lies on the curve at j={j}")
        return cfg.xs
    return ex.viewpoint_grid(cfg.n_grid, avoid=list(curves.values()))


def run_convergence_suite(cfg: ExperimentConfig) -> Report:
    """Metric series of a family against its target, with trend verdicts per (metric, x)."""
    if cfg.family not in FAMILIES:
        raise ValueError(f"unknown family {cfg.family!r}")
    spec = FAMILIES[cfg.family]
    t0 = time.perf_counter()
    js = cfg.js
    curves = {j: spec["build"](j) for j in js}
    tgt_r, tgt_l = spec["target"](js)
    avoid = dict(curves)
    avoid["target"] = tgt_r
    xs = _grid_for(cfg, avoid)
    metrics = cfg.metrics
    rep = Report(meta={"family": cfg.family, "config": cfg.to_dict(), "version": __version__,
                       "xs": [[x.real, x.imag] for x in xs]})

    need_r = "d_cap_r" in metrics
    need_l = "d_cap_l" in metrics
    WR = drivings_from(tgt_r, xs) if need_r else None
    WL = drivings_from(tgt_l, xs) if need_l else None
    TF = terminal_driving(tgt_r, "forward") if "d_f" in metrics else None
    TB = terminal_driving(tgt_r, "backward") if "d_b" in metrics else None

    for j in js:
        c = curves[j]
        per_x = {}
        if need_r:
            per_x["d_cap_r"] = [compare_drivings(a, b) for a, b in zip(drivings_from(c, xs), WR)]
        if need_l:
            per_x["d_cap_l"] = [compare_drivings(a, b) for a, b in zip(drivings_from(c.reverse(), xs), WL)]
        scalar = {}
        if "d_f" in metrics:
            scalar["d_f"] = locally_uniform_from(terminal_driving(c, "forward"), TF)[0]
        if "d_b" in metrics:
            scalar["d_b"] = locally_uniform_from(terminal_driving(c, "backward"), TB)[0]
        if "d_strong" in metrics:
            scalar["d_strong"] = d_strong(c, tgt_r)
        if "hausdorff" in metrics:
            scalar["hausdorff"] = c.hausdorff_distance(tgt_r)
        for name in metrics:
            for i, x in enumerate(xs):
                if name in per_x:
                    r = per_x[name][i]
                    rep.add(j, x, name, r.value, r.components)
                else:
                    # x-independent metrics are repeated for every viewpoint
                    rep.add(j, x, name, scalar[name])

    for name in metrics:
        for x in xs:
            _, vals = rep.series(name, x)
            rep.verdicts[f"{name}@{_xkey(x)}"] = verdict(vals, cfg.floor)
    rep.meta["expected"] = spec["expected"]
    rep.meta["runtime_s"] = time.perf_counter() - t0
    return rep


def verdicts_as_expected(rep: Report) -> bool:
    expected = rep.meta.get("expected", {})
    for key, v in rep.verdicts.items():
        name = key.split("@")[0]
        if name in expected and v != expected[name]:
            return False
    return True


def figure_eight_limit_gap(j: int, xs=None) -> float:
    """max over x of sup_t |W_x(forward limit) - W_x(backward limit)| for the two
    incompatible limits of the interweaved figure-eight family."""
    F, B = ex.figure_eight_limits(j)
    xs = xs if xs is not None else ex.viewpoint_grid(12, avoid=[F, B])
    return max(compare_drivings(a, b).components[1]
               for a, b in zip(drivings_from(F, xs), drivings_from(B, xs)))


# ------------------------------------------------------------------ round trips

ROUNDTRIP_NS = (250, 500, 1000, 2000)


def _smooth_driving(n_ref=4000):
    t = np.linspace(0, 1, n_ref + 1)
    return DrivingFunction(t, 0.5 * np.sin(2 * np.pi * t), CHORDAL)


def _trace_error(W: DrivingFunction, n: int, ref: Curve) -> float:
    c = solve_chordal_trace(W, n)
    return float(np.max(np.abs(c.points - np.interp(c.params, ref.params, ref.points.real)
                               - 1j * np.interp(c.params, ref.params, ref.points.imag))))


def _unzip_error(W: DrivingFunction, n: int) -> float:
    c = solve_chordal_trace(W, n)
    U = unzip_chordal(c)[0]
    g = np.linspace(0, W.T, 4 * n + 1)
    return float(np.max(np.abs(U(g) - W(g))))


def run_roundtrip_suite(cfg: ExperimentConfig | None = None, ns=ROUNDTRIP_NS) -> Report:
    """Trace and drive-trace-unzip errors on an n-ladder, with fitted exponents.

    Drivings: W = 0 (closed form trace 2i sqrt(t)), a smooth sine (reference
    trace at 8x the finest n) and a kappa = 8/3 Brownian sample.
    """
    cfg = cfg or ExperimentConfig(family="roundtrip")
    rep = Report(meta={"family": "roundtrip", "version": __version__, "ns": list(ns)})
    zero = DrivingFunction(np.array([0.0, 1.0]), np.zeros(2), CHORDAL)
    smooth = _smooth_driving()
    bm = SleConfig(kappa=8 / 3, T=1.0, dt=1.0 / (8 * max(ns)), seed=cfg.seed)
    brown = DrivingFunction(np.arange(bm.n_steps + 1) * bm.dt, sample_chordal_driving_batch(bm, 1)[0])
    ref_s = solve_chordal_trace(smooth, 8 * max(ns))
    for n in ns:
        c0 = solve_chordal_trace(zero, n)
        exact = 2j * np.sqrt(c0.params)
        rep.add(n, None, "zero_trace", np.max(np.abs(c0.points - exact)))
        rep.add(n, None, "zero_unzip", _unzip_error(zero, n))
        rep.add(n, None, "smooth_trace", _trace_error(smooth, n, ref_s))
        rep.add(n, None, "smooth_unzip", _unzip_error(smooth, n))
        rep.add(n, None, "brownian_unzip", _unzip_error(brown, n))
    for name in ("smooth_trace", "zero_unzip", "smooth_unzip", "brownian_unzip"):
        n_, v = rep.series(name)
        v = np.maximum(np.asarray(v), 1e-300)
        rep.meta[f"{name}_exponent"] = float(np.polyfit(np.log(n_), np.log(v), 1)[0])
    return rep


# ------------------------------------------------------------------ law convergence

BM_STEPS = 40_000


def _quadratic_grid(T, n):
    return T * (np.arange(n + 1) / n) ** 2


def chordal_traces(cfg: ExperimentConfig, m: int, first_stream: int):
    """m chordal SLE_kappa traces from 0 towards infinity up to capacity chordal_T.

    The Brownian path lives on a uniform grid; the trace is built on a
    quadratically graded subgrid so that the start is resolved finely.
    """
    sc = SleConfig(kappa=cfg.kappa, T=cfg.chordal_T, dt=cfg.chordal_T / BM_STEPS, seed=cfg.seed)
    W = sample_chordal_driving_batch(sc, m, first_stream)
    t = np.arange(sc.n_steps + 1) * sc.dt
    g = _quadratic_grid(cfg.chordal_T, cfg.n_trace)
    out = []
    for row in W:
        Wg = DrivingFunction(g, np.interp(g, t, row))
        out.append(solve_chordal_trace(Wg))
    return out


def _values_at(W: DrivingFunction, times):
    return np.asarray(W(np.asarray(times)), dtype=float)


def _unzipped_values(curves, x, times):
    vals, failed = [], 0
    for c in curves:
        try:
            W = unzip_radial_at(c, x)[0]
        except UnzipError:
            failed += 1
            continue
        vals.append(_values_at(W, times))
    return np.array(vals).reshape(-1, len(times)), failed


def _to_pm1(c: Curve) -> Curve:
    """Half-plane curve from 0 towards infinity, moved to run from -1 towards 1 and
    closed up with the straight segment from its image tip to 1."""
    z = c.points
    w = (z - 1) / (z + 1)
    w[0] = -1.0
    tip = w[-1]
    k = max(2, int(np.ceil(abs(1 - tip) / max(np.abs(np.diff(w)).min(), 1e-3))))
    k = min(k, 200)
    tail = tip + (1 - tip) * np.arange(1, k + 1) / k
    pts = np.concatenate([w, tail])
    pts[-1] = 1.0
    return Curve(pts)


def _mirror_reverse(c: Curve) -> Curve:
    return Curve(-np.conj(c.points[::-1]))


def run_law_convergence(cfg: ExperimentConfig) -> Report:
    """Per-(x, t) two-sample KS distances between driving marginals of two generators.

    modes:
      viewpoint  chordal traces unzipped at x vs the SLE(kappa; kappa-6) sampler
      reversal   reversed (and mirrored) traces vs forward traces, both -1 -> 1
      self       one generator split into two halves (null check)
    """
    if cfg.m < 50:
        raise ValueError("m < 50 samples is underpowered")
    t0 = time.perf_counter()
    xs = cfg.xs or [0.5 + 0.8j]
    times = list(cfg.times)
    rep = Report(meta={"family": f"law:{cfg.mode}", "config": cfg.to_dict(), "version": __version__})
    m = cfg.m
    for x in xs:
        failed = 0
        if cfg.mode == "viewpoint":
            A, failed = _unzipped_values(chordal_traces(cfg, m, 0), x, times)
            w0, v0 = viewpoint_angles(x)
            sc = SleConfig(kappa=cfg.kappa, rho=cfg.kappa - 6, w0=w0, v0=v0, T=max(times),
                           dt=max(times) * 1e-3, seed=cfg.seed + 1)
            Wb, _, _ = sample_radial_sle_kr_batch(sc, m)
            tb = np.arange(sc.n_steps + 1) * sc.dt
            B = np.column_stack([Wb[:, np.searchsorted(tb, t - 1e-12)] for t in times])
        elif cfg.mode == "reversal":
            fwd = [_to_pm1(c) for c in chordal_traces(cfg, 2 * m, 0)]
            A, f1 = _unzipped_values([_mirror_reverse(c) for c in fwd[:m]], x, times)
            B, f2 = _unzipped_values(fwd[m:], x, times)
            failed = f1 + f2
        elif cfg.mode == "self":
            V, failed = _unzipped_values(chordal_traces(cfg, m, 0), x, times)
            A, B = V[::2], V[1::2]
        else:
            raise ValueError(f"unknown mode {cfg.mode!r}")
        for k, t in enumerate(times):
            res = stats.ks_2samp(A[:, k], B[:, k])
            rep.add(0, x, f"ks@t={t:g}", res.statistic, (res.pvalue, len(A), len(B)))
            ok = res.statistic <= cfg.ks_tol
            rep.verdicts[f"ks@t={t:g}@{_xkey(x)}"] = "PASS" if ok else "FAIL"
        rep.meta[f"failed_unzips@{_xkey(x)}"] = failed
    rep.meta["runtime_s"] = time.perf_counter() - t0
    return rep


# ------------------------------------------------------------------ output

def _csv_text(r: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(Report.FIELDS)
    for row in r.rows:
        w.writerow([row["j"], repr(row["x_re"]), repr(row["x_im"]), row["metric"], repr(row["value"]),
                    ";".join(repr(c) for c in row["components"])])
    return buf.getvalue()


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(type(o))


def _svg_text(r: Report, width=720, panel_h=260) -> str:
    metrics = sorted({row["metric"] for row in r.rows})
    height = max(1, len(metrics)) * panel_h
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'font-family="sans-serif" font-size="11">']
    colours = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
               "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"]
    for p, name in enumerate(metrics):
        rows = [row for row in r.rows if row["metric"] == name]
        xs = sorted({(row["x_re"], row["x_im"]) for row in rows}, key=str)
        js = [row["j"] for row in rows]
        vals = np.array([row["value"] for row in rows])
        pos = vals[vals > 0]
        lo, hi = (np.log10(pos.min()), np.log10(pos.max())) if len(pos) else (0.0, 1.0)
        if hi - lo < 1e-9:
            lo, hi = lo - 0.5, hi + 0.5
        j0, j1 = min(js), max(js)
        y0 = p * panel_h
        L, R, T, B = 60, width - 20, y0 + 25, y0 + panel_h - 30

        def X(j):
            return L + (R - L) * ((j - j0) / (j1 - j0) if j1 > j0 else 0.5)

        def Y(v):
            v = max(v, 10 ** lo)
            return B - (B - T) * (np.log10(v) - lo) / (hi - lo)

        parts.append(f'<text x="{L}" y="{y0 + 15}">{name} (log scale)</text>')
        parts.append(f'<rect x="{L}" y="{T}" width="{R - L}" height="{B - T}" fill="none" stroke="#999"/>')
        parts.append(f'<text x="5" y="{T + 10}">{10 ** hi:.2g}</text><text x="5" y="{B}">{10 ** lo:.2g}</text>')
        for j in sorted(set(js)):
            parts.append(f'<text x="{X(j) - 3:.1f}" y="{B + 15}">{j}</text>')
        for k, xv in enumerate(xs):
            pts = sorted((row["j"], row["value"]) for row in rows if (row["x_re"], row["x_im"]) == xv)
            path = " ".join(f"{X(j):.1f},{Y(v):.1f}" for j, v in pts)
            parts.append(f'<polyline points="{path}" fill="none" stroke="{colours[k % len(colours)]}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_report(r: Report, fmt: str, path) -> str:
    """Write the report as csv (flat rows), json (full structure) or svg (metric vs j)."""
    if fmt == "csv":
        text = _csv_text(r)
    elif fmt == "json":
        text = json.dumps(r.to_dict(), indent=1, default=_json_default, sort_keys=True)
    elif fmt == "svg":
        text = _svg_text(r)
    else:
        raise ValueError("format must be csv, json or svg")
    with open(path, "w") as fh:
        fh.write(text)
    return str(path)


def load_report(path) -> Report:
    with open(path) as fh:
        return Report.from_dict(json.load(fh))
