"""Central finite-difference gradient checking used across the test suite.

The objective is always a fixed random linear functional of the layer
output, so the analytic gradient is the layer backward evaluated at that
projection. Step 1e-5, float64 throughout.
"""

import numpy as np

H_STEP = 1e-5
REL_TOL = 1e-4


def numeric_grad(f, arr, h=H_STEP):
    """d f() / d arr by central differences, mutating arr in place."""
    grad = np.zeros_like(arr, dtype=np.float64)
    flat = arr.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        fp = f()
        flat[i] = orig - h
        fm = f()
        flat[i] = orig
        gflat[i] = (fp - fm) / (2.0 * h)
    return grad


def max_rel_err(analytic, numeric, floor=1e-6):
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return float(np.max(np.abs(analytic - numeric) / denom))


def check_grad(f, arr, analytic, tol=REL_TOL, floor=1e-6):
    err = max_rel_err(analytic, numeric_grad(f, arr), floor=floor)
    assert err < tol, f"gradient mismatch: max relative error {err:.3e}"
    return err
