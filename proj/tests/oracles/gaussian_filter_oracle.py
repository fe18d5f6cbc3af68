"""Frozen reference values for the reflected Gaussian filter tests.

Run with numpy and scipy installed; paste the printed arrays into
tests/test_estimation.cpp when the cases change.
"""
import numpy as np
from scipy.ndimage import gaussian_filter1d

CASES = {
    "spike11_bw1": (np.eye(1, 11, 5).ravel(), 1.0),
    "ramp7_bw2p5": (np.arange(7, dtype=float) ** 2, 2.5),
    "wave26_bw6": (np.sin(np.arange(26) * 0.7) + 0.05 * np.arange(26), 6.0),
    "short3_bw4": (np.array([1.0, -2.0, 5.0]), 4.0),
}

for name, (x, bw) in CASES.items():
    y = gaussian_filter1d(x, bw, mode="reflect", truncate=4.0)
    print(name, "{" + ", ".join(f"{v:.17g}" for v in y) + "}")
