"""Independent reference implementations used as test oracles.

These deliberately avoid the library's own solver path: the accelerated
proximal-gradient iteration below shares no code with the ADMM solver it is
used to check.
"""

import numpy as np


def lasso_objective(phi, y, lam, x):
    r = phi @ x - y
    return 0.5 * float(r @ r) + lam * float(np.abs(x).sum())


def lasso_fista(phi, y, lam, tol=1e-10, max_iter=200000):
    """Accelerated proximal gradient with a fixed 1/L step, run until the
    iterate moves less than tol (relative)."""
    n = phi.shape[1]
    lip = np.linalg.norm(phi, 2) ** 2
    if lip == 0.0:
        return np.zeros(n)
    x = np.zeros(n)
    v = x.copy()
    t = 1.0
    for _ in range(max_iter):
        grad = phi.T @ (phi @ v - y)
        step = v - grad / lip
        x_new = np.sign(step) * np.maximum(np.abs(step) - lam / lip, 0.0)
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        v = x_new + ((t - 1.0) / t_new) * (x_new - x)
        if np.max(np.abs(x_new - x)) <= tol * max(1.0, np.max(np.abs(x_new))):
            return x_new
        x, t = x_new, t_new
    return x
