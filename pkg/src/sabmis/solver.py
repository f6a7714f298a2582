"""l1-regularized least squares via ADMM with a reusable direct factorization.

Solves min 0.5 * ||phi @ s - y||^2 + lam * ||s||_1. The quadratic subproblem
matrix (phi^T phi + rho I) is small (p2 x p2), so it is factorized once per
(phi, rho) pair and shared across the thousands of per-block solves of an
image.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import DimensionError, ParamError, SolverError


def soft_threshold(v: np.ndarray, kappa: float) -> np.ndarray:
    """Elementwise sign(v) * max(|v| - kappa, 0): the l1 proximal operator."""
    if kappa < 0:
        raise ParamError(f"soft threshold needs kappa >= 0, got {kappa}")
    v = np.asarray(v, dtype=np.float64)
    return np.sign(v) * np.maximum(np.abs(v) - kappa, 0.0)


def default_lambda(phi: np.ndarray, y: np.ndarray, scale: float = 1e-3) -> float:
    """Scale-aware regularization weight: scale * ||phi^T y||_inf."""
    return scale * float(np.max(np.abs(phi.T @ y)))


@dataclass(frozen=True, eq=False)
class LassoProblem:
    phi: np.ndarray
    y: np.ndarray
    lam: float

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if phi.ndim != 2 or y.ndim != 1 or y.size != phi.shape[0]:
            raise DimensionError(
                f"inconsistent problem: phi {phi.shape}, y length {y.size}")
        if not np.isfinite(y).all():
            raise SolverError("measurements contain non-finite values")
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise ParamError(f"lam must be finite and nonnegative, got {self.lam}")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class SolverConfig:
    rho: float = 1.0
    eps_abs: float = 1e-6
    eps_rel: float = 1e-4
    max_iter: int = 500
    lambda_scale: float = 1e-3  # multiplies ||phi^T y||_inf when the caller derives lam

    def __post_init__(self):
        if self.rho <= 0:
            raise ParamError(f"rho must be positive, got {self.rho}")
        if self.eps_abs <= 0 or self.eps_rel <= 0:
            raise ParamError("stopping tolerances must be positive")
        if self.max_iter < 1:
            raise ParamError(f"max_iter must be at least 1, got {self.max_iter}")


@dataclass(frozen=True, eq=False)
class SolverResult:
    s: np.ndarray
    iterations: int
    primal_residual: float
    dual_residual: float
    objective: float
    converged: bool


@dataclass(frozen=True, eq=False)
class CachedFactorization:
    """Cholesky factor of (phi^T phi + rho I), valid for exactly one (phi, rho)."""

    phi: np.ndarray
    rho: float
    chol: tuple
    phi_t: np.ndarray
    fingerprint: str


def _fingerprint(phi: np.ndarray, rho: float) -> str:
    h = hashlib.sha256()
    h.update(np.int64(phi.shape[0]).tobytes())
    h.update(np.int64(phi.shape[1]).tobytes())
    h.update(np.float64(rho).tobytes())
    h.update(np.ascontiguousarray(phi).tobytes())
    return h.hexdigest()


def prepare(phi: np.ndarray, rho: float) -> CachedFactorization:
    """Factor (phi^T phi + rho I) once; reusable across right-hand sides."""
    if rho <= 0:
        raise ParamError(f"rho must be positive, got {rho}")
    phi = np.asarray(phi, dtype=np.float64)
    if not np.isfinite(phi).all():
        raise SolverError("matrix contains non-finite values")
    gram = phi.T @ phi + rho * np.eye(phi.shape[1])
    try:
        chol = cho_factor(gram, lower=True)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"(phi^T phi + rho I) is not positive definite: {exc}") from exc
    return CachedFactorization(phi, float(rho), chol, phi.T.copy(), _fingerprint(phi, rho))


def solve_lasso(problem: LassoProblem, cfg: SolverConfig | None = None,
                cache: CachedFactorization | None = None) -> SolverResult:
    """Run the ADMM iteration and return the sparse z iterate.

    Per iteration: s solves (phi^T phi + rho I) s = phi^T y + rho (z - u),
    z = soft_threshold(s + u, lam / rho), u += s - z. Stops when
    ||s - z|| <= eps_pri and ||rho (z - z_prev)|| <= eps_dual with
    eps_pri  = sqrt(n) eps_abs + eps_rel * max(||s||, ||z||),
    eps_dual = sqrt(n) eps_abs + eps_rel * ||rho u||.
    Hitting max_iter is reported through `converged`, not raised.
    """
    cfg = SolverConfig() if cfg is None else cfg
    phi, y, lam = problem.phi, problem.y, problem.lam
    if cache is None:
        cache = prepare(phi, cfg.rho)
    elif cache.rho != cfg.rho or not (cache.phi is phi
                                      or cache.fingerprint == _fingerprint(phi, cfg.rho)):
        raise ParamError("cached factorization does not match (phi, rho)")

    n = phi.shape[1]
    rho = cfg.rho
    aty = cache.phi_t @ y
    sqrt_n = math.sqrt(n)
    s = np.zeros(n)
    z = np.zeros(n)
    u = np.zeros(n)
    iterations = cfg.max_iter
    converged = False
    r_norm = d_norm = 0.0
    for it in range(1, cfg.max_iter + 1):
        s = cho_solve(cache.chol, aty + rho * (z - u))
        z_prev = z
        z = soft_threshold(s + u, lam / rho)
        u = u + s - z
        r_norm = float(np.linalg.norm(s - z))
        d_norm = rho * float(np.linalg.norm(z - z_prev))
        eps_pri = sqrt_n * cfg.eps_abs + cfg.eps_rel * max(
            float(np.linalg.norm(s)), float(np.linalg.norm(z)))
        eps_dual = sqrt_n * cfg.eps_abs + cfg.eps_rel * rho * float(np.linalg.norm(u))
        if r_norm <= eps_pri and d_norm <= eps_dual:
            iterations = it
            converged = True
            break
    fit = phi @ z - y
    objective = 0.5 * float(fit @ fit) + lam * float(np.abs(z).sum())
    return SolverResult(z, iterations, r_norm, d_norm, objective, converged)
