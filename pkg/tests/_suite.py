"""Small half-plane curves shared by the analysis and acceptance tests."""
import numpy as np

from loewnerkit.curves import polyline

VIEWPOINT = 0.4 + 0.6j

TEST_CURVES = {
    "slit": polyline([0, 1j], max_step=2e-3),
    "tilt": polyline([0.2, 0.2 + np.exp(1j * np.pi / 3) * 1.2], max_step=2e-3),
    "L": polyline([-0.5, -0.5 + 1j, 0.5 + 1j], max_step=2e-3),
    "zig": polyline([0, 0.4 + 0.5j, -0.2 + 0.9j, 0.3 + 1.4j], max_step=2e-3),
    "arc": polyline(np.exp(1j * np.linspace(np.pi, 0.3, 40)) + 0.3, max_step=2e-3),
}
