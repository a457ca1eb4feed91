"""Transformation-driven kernels: one shared innovation, signed per-coordinate moves.

The family proposes ``y = T_z(x, eps)`` where ``eps >= 0`` is a single scalar
innovation and ``z`` picks forward/backward/no-change per coordinate; the
conjugate move ``-z`` inverts the transformation, which is what makes the
acceptance ratio a plain move-probability ratio times a density ratio times a
Jacobian.  The additive family ``y_i = x_i + z_i a_i eps`` has unit Jacobian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .chain import Kernel, StepResult, accept_step
from .targets import Target

__all__ = [
    "conjugate",
    "move_log_prob",
    "Transformation",
    "additive_transformation",
    "TmcmcConfig",
    "DependentZConfig",
    "sample_epsilon",
    "additive_forward",
    "additive_tmcmc_step",
    "general_tmcmc_step",
    "dependent_z_tmcmc_step",
    "make_additive_tmcmc_kernel",
    "make_general_tmcmc_kernel",
    "make_dependent_z_kernel",
]

ArrayLike = Union[float, Sequence[float], np.ndarray]


def conjugate(z: np.ndarray) -> np.ndarray:
    """Backward move type: flips forward and backward, fixes no-change."""
    return -np.asarray(z)


def move_log_prob(z: np.ndarray, p: np.ndarray, q: np.ndarray) -> float:
    """``log P(z)`` for independent coordinates with probs (p, q, 1-p-q)."""
    r = 1.0 - p - q
    probs = np.where(z > 0, p, np.where(z < 0, q, r))
    if np.any(probs <= 0.0):
        return -math.inf
    return float(np.sum(np.log(probs)))


def _move_log_ratio(z: np.ndarray, p: np.ndarray, q: np.ndarray) -> float:
    # log P(-z) - log P(z); zero coordinates contribute nothing.  The drawn
    # move always has positive probability, but the reverse may not.
    pos, neg = z > 0, z < 0
    forward = np.concatenate([p[pos], q[neg]])
    reverse = np.concatenate([q[pos], p[neg]])
    if np.any(reverse <= 0.0):
        return -math.inf
    return float(np.sum(np.log(reverse)) - np.sum(np.log(forward)))


@dataclass(frozen=True)
class Transformation:
    """Forward map and log-Jacobian of a move-type transformation family.

    ``forward(x, eps, z)`` applies the move; ``log_jacobian(x, eps, z)`` is
    ``log |d(T_z(x,eps),eps)/d(x,eps)|``.  Conjugate application must invert
    the forward map, and the Jacobians of a move and its conjugate must cancel.
    """

    forward: Callable[[np.ndarray, float, np.ndarray], np.ndarray]
    log_jacobian: Callable[[np.ndarray, float, np.ndarray], float]
    name: str = ""


def additive_forward(x: np.ndarray, eps: float, z: np.ndarray, a: ArrayLike = 1.0) -> np.ndarray:
    """``y_i = x_i + z_i a_i eps``; the log-Jacobian is identically zero."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z)
    if z.shape != x.shape:
        raise ValueError(f"z shape {z.shape} does not match x shape {x.shape}")
    scales = np.broadcast_to(np.asarray(a, dtype=float), x.shape)
    return x + (z * scales) * eps


def additive_transformation(a: ArrayLike = 1.0) -> Transformation:
    return Transformation(
        forward=lambda x, eps, z: additive_forward(x, eps, z, a),
        log_jacobian=lambda x, eps, z: 0.0,
        name="additive",
    )


@dataclass(frozen=True)
class TmcmcConfig:
    """Tuning for the single-innovation kernels.

    ``scales`` are the per-coordinate multipliers ``a_i > 0``, ``eps_scale``
    the half-normal innovation scale, and ``(p, q)`` the per-coordinate
    forward/backward probabilities (remainder is the no-change probability).
    Scalars broadcast across coordinates.
    """

    scales: ArrayLike = 1.0
    eps_scale: float = 1.0
    p: ArrayLike = 0.5
    q: ArrayLike = 0.5

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.scales, dtype=float))
        p = np.atleast_1d(np.asarray(self.p, dtype=float))
        q = np.atleast_1d(np.asarray(self.q, dtype=float))
        if np.any(a <= 0.0):
            raise ValueError(f"scales must be positive, got {self.scales}")
        if self.eps_scale <= 0.0:
            raise ValueError(f"eps_scale must be positive, got {self.eps_scale}")
        if np.any(p < 0.0) or np.any(q < 0.0) or np.any(p + q > 1.0 + 1e-12):
            raise ValueError("need p_i, q_i >= 0 and p_i + q_i <= 1")
        if np.all(p + q == 0.0):
            raise ValueError("at least one coordinate needs p_i + q_i > 0")

    def broadcast(self, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        a = np.broadcast_to(np.asarray(self.scales, dtype=float), (k,))
        p = np.broadcast_to(np.asarray(self.p, dtype=float), (k,))
        q = np.broadcast_to(np.asarray(self.q, dtype=float), (k,))
        return a, p, q


@dataclass(frozen=True)
class DependentZConfig:
    """Tuning for the kernel whose move probabilities are drawn per iteration.

    Each ``sigma_j`` is a covariance descriptor for the Gaussian ``w_j``:
    a 1-D array of diagonal variances or a 2-D positive-definite matrix.
    """

    mu_1: np.ndarray
    mu_2: np.ndarray
    mu_3: np.ndarray
    sigma_1: np.ndarray
    sigma_2: np.ndarray
    sigma_3: np.ndarray
    eps_scale: float = 1.0
    scales: ArrayLike = 1.0

    def __post_init__(self):
        if self.eps_scale <= 0.0:
            raise ValueError(f"eps_scale must be positive, got {self.eps_scale}")
        if np.any(np.atleast_1d(np.asarray(self.scales, dtype=float)) <= 0.0):
            raise ValueError("scales must be positive")
        for name in ("sigma_1", "sigma_2", "sigma_3"):
            self._factor(getattr(self, name), name)

    @staticmethod
    def _factor(sigma, name: str) -> np.ndarray:
        """Left factor L with L L' = Sigma (sqrt of diagonal, else Cholesky)."""
        s = np.asarray(sigma, dtype=float)
        if s.ndim == 1:
            if np.any(s <= 0.0):
                raise ValueError(f"{name}: diagonal variances must be positive")
            return np.sqrt(s)
        try:
            return np.linalg.cholesky(s)
        except np.linalg.LinAlgError as exc:
            raise ValueError(f"{name}: covariance must be positive definite") from exc

    def factors(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (
            self._factor(self.sigma_1, "sigma_1"),
            self._factor(self.sigma_2, "sigma_2"),
            self._factor(self.sigma_3, "sigma_3"),
        )


def sample_epsilon(rng: np.random.Generator, s: float) -> float:
    """Half-normal innovation: ``|N(0, s^2)|`` with density ``2 phi(e/s)/s``."""
    if s <= 0.0:
        raise ValueError(f"s must be positive, got {s}")
    return s * abs(float(rng.standard_normal()))


def _draw_signed_z(rng: np.random.Generator, p: np.ndarray) -> np.ndarray:
    # p_i + q_i = 1, so a single uniform per coordinate decides the sign.
    return np.where(rng.random(p.shape[0]) < p, 1.0, -1.0)


def _draw_ternary_z(rng: np.random.Generator, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    # Never returns the all-zero vector: that outcome is resampled, which
    # renormalizes P(z) by a constant that cancels in P(-z)/P(z).
    while True:
        u = rng.random(p.shape[0])
        z = np.where(u < p, 1.0, np.where(u < p + q, -1.0, 0.0))
        if np.any(z != 0.0):
            return z


def additive_tmcmc_step(
    x: np.ndarray,
    target: Target,
    cfg: TmcmcConfig,
    rng: np.random.Generator,
    lp_current: Optional[float] = None,
) -> StepResult:
    """One additive-transformation step with sign-only moves.

    Requires ``p_i + q_i = 1`` (no zero coordinates); acceptance is
    ``min{1, prod_i ratio_i * pi(y)/pi(x)}`` with ``ratio_i = q_i/p_i`` for a
    forward coordinate and ``p_i/q_i`` for a backward one.
    """
    x = np.asarray(x, dtype=float)
    a, p, q = cfg.broadcast(x.size)
    if not np.allclose(p + q, 1.0):
        raise ValueError("additive_tmcmc_step requires p_i + q_i = 1 for every coordinate")
    z = _draw_signed_z(rng, p)
    eps = sample_epsilon(rng, cfg.eps_scale)
    y = x + (z * a) * eps
    lp_x = target.log_density(x) if lp_current is None else lp_current
    lp_y = target.log_density(y)
    log_ratio = _move_log_ratio(z, p, q)
    return accept_step(x, y, log_ratio + lp_y - lp_x, lp_x, lp_y, rng)


def general_tmcmc_step(
    x: np.ndarray,
    target: Target,
    transform: Transformation,
    cfg: TmcmcConfig,
    rng: np.random.Generator,
    lp_current: Optional[float] = None,
) -> StepResult:
    """One step of the general single-innovation kernel.

    Move types are drawn coordinatewise over {forward, backward, no-change};
    acceptance multiplies the move-probability ratio, the density ratio, and
    the transformation Jacobian.  With the additive transformation and
    ``p_i + q_i = 1`` this reproduces :func:`additive_tmcmc_step` draw for
    draw on a shared generator.
    """
    x = np.asarray(x, dtype=float)
    _, p, q = cfg.broadcast(x.size)
    z = _draw_ternary_z(rng, p, q)
    eps = sample_epsilon(rng, cfg.eps_scale)
    y = np.asarray(transform.forward(x, eps, z), dtype=float)
    lp_x = target.log_density(x) if lp_current is None else lp_current
    lp_y = target.log_density(y)
    log_jac = float(transform.log_jacobian(x, eps, z))
    log_ratio = _move_log_ratio(z, p, q)
    if not math.isfinite(log_jac):
        # Broken user transformation: reject and surface via the diagnostics flag.
        u = float(rng.random())
        return StepResult(x, False, -math.inf, u, lp_x, nonfinite_proposal=True)
    return accept_step(x, y, log_ratio + log_jac + lp_y - lp_x, lp_x, lp_y, rng)


def dependent_z_tmcmc_step(
    x: np.ndarray,
    target: Target,
    cfg: DependentZConfig,
    rng: np.random.Generator,
    lp_current: Optional[float] = None,
    _factors=None,
) -> StepResult:
    """Additive step whose move probabilities are softmax draws per iteration.

    Draws ``w_j ~ N(mu_j, Sigma_j)`` for j = 1, 2, 3, sets per coordinate
    ``p_i, q_i, 1 - p_i - q_i`` proportional to ``exp(w_ji)`` (max-subtracted),
    then proceeds as the additive kernel; the all-zero move proposes the
    current point and is accepted as a self-transition.
    """
    x = np.asarray(x, dtype=float)
    k = x.size
    L1, L2, L3 = cfg.factors() if _factors is None else _factors
    mus = (np.asarray(cfg.mu_1, float), np.asarray(cfg.mu_2, float), np.asarray(cfg.mu_3, float))
    w = np.empty((3, k))
    for j, (mu, L) in enumerate(zip(mus, (L1, L2, L3))):
        noise = rng.standard_normal(k)
        w[j] = mu + (L * noise if L.ndim == 1 else L @ noise)
    w -= w.max(axis=0, keepdims=True)
    ew = np.exp(w)
    probs = ew / ew.sum(axis=0, keepdims=True)
    p, q = probs[0], probs[1]

    u = rng.random(k)
    z = np.where(u < p, 1.0, np.where(u < p + q, -1.0, 0.0))
    eps = sample_epsilon(rng, cfg.eps_scale)
    a = np.broadcast_to(np.asarray(cfg.scales, dtype=float), (k,))
    y = x + (z * a) * eps
    lp_x = target.log_density(x) if lp_current is None else lp_current
    lp_y = target.log_density(y)
    log_ratio = _move_log_ratio(z, p, q)
    return accept_step(x, y, log_ratio + lp_y - lp_x, lp_x, lp_y, rng)


def make_additive_tmcmc_kernel(target: Target, cfg: TmcmcConfig) -> Kernel:
    """Bind target and config into a ``(x, rng) -> StepResult`` kernel.

    Caches the current log-density between steps and skips the move-ratio sum
    when ``p = q`` (the ratio is identically 1 then), which matters in the
    scaling-study hot path.
    """
    a, p, q = cfg.broadcast(target.dim)
    if not np.allclose(p + q, 1.0):
        raise ValueError("additive kernel requires p_i + q_i = 1 for every coordinate")
    symmetric = bool(np.all(p == q))
    s = cfg.eps_scale
    log_density = target.log_density
    cache = {"x": None, "lp": None}

    def kernel(x: np.ndarray, rng: np.random.Generator) -> StepResult:
        x = np.asarray(x, dtype=float)
        lp_x = cache["lp"] if cache["x"] is not None and x is cache["x"] else log_density(x)
        z = _draw_signed_z(rng, p)
        eps = s * abs(float(rng.standard_normal()))
        y = x + (z * a) * eps
        lp_y = log_density(y)
        log_ratio = 0.0 if symmetric else _move_log_ratio(z, p, q)
        step = accept_step(x, y, log_ratio + lp_y - lp_x, lp_x, lp_y, rng)
        cache["x"], cache["lp"] = step.x_next, step.log_density
        return step

    return kernel


def make_general_tmcmc_kernel(target: Target, transform: Transformation, cfg: TmcmcConfig) -> Kernel:
    def kernel(x: np.ndarray, rng: np.random.Generator) -> StepResult:
        return general_tmcmc_step(x, target, transform, cfg, rng)

    return kernel


def make_dependent_z_kernel(target: Target, cfg: DependentZConfig) -> Kernel:
    factors = cfg.factors()

    def kernel(x: np.ndarray, rng: np.random.Generator) -> StepResult:
        return dependent_z_tmcmc_step(x, target, cfg, rng, _factors=factors)

    return kernel
