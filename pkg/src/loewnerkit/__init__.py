"""Numerical Loewner-chain toolkit: zippers, driving-function metrics, SLE samplers."""
__version__ = "0.1.0"

from .geometry import (
    INF, ComplexPoint, MobiusTransform, cayley, cayley_inv, cdist, psi_interior, psi_boundary,
    mobius_apply, mobius_compose,
)
from .curves import DISC, HALF_PLANE, Curve, hausdorff_distance, is_simple, polyline, uniform_distance
from .loewner import (
    CHORDAL, RADIAL, DrivingFunction, LoewnerChain, Swallowed, UnzipError, capacity, chain_eval,
    chain_from_driving, radial_capacity, solve_chordal_trace, solve_radial_trace, unzip_chordal,
    unzip_radial_at,
)
from .metrics import d_b, d_cap_l, d_cap_r, d_f, d_locally_uniform, d_strong, driving_from
from .sle import SleConfig, sample_chordal_driving, sample_radial_sle_kr, sample_sle_trace
from .harness import (
    ExperimentConfig, Report, emit_report, run_convergence_suite, run_law_convergence,
    run_roundtrip_suite,
)
