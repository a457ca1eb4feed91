"""Baseline kernels: random-walk Metropolis and Hamiltonian Monte Carlo.

The leapfrog integrator is implemented in the combined-update form

    x(t+dt) = x(t) + dt M^{-1} {p(t) - (dt/2) grad U(x(t))}
    p(t+dt) = p(t) - (dt/2) {grad U(x(t)) + grad U(x(t+dt))}

which is algebraically the usual half-kick / drift / half-kick scheme, so it
is time-reversible and volume preserving.  The Hamiltonian uses the kinetic
energy ``p' M^{-1} p / 2`` matching the ``N(0, M)`` momentum refresh.

Note on parameterization: for a single leapfrog step of size ``dt`` the
position proposal is exactly Gaussian with mean
``x + (dt^2/2) M^{-1} grad log pi(x)`` and variance ``dt^2 M^{-1}``; that is,
the familiar Langevin-proposal step parameter equals the *squared* leapfrog
step here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .chain import Kernel, StepResult, accept_step
from .targets import Target

__all__ = [
    "HmcConfig",
    "PhasePoint",
    "LeapfrogError",
    "rwmh_step",
    "make_rwmh_kernel",
    "potential",
    "grad_potential",
    "leapfrog",
    "hmc_step",
    "make_hmc_kernel",
    "hmc_one_step_proposal_params",
]


@dataclass(frozen=True)
class HmcConfig:
    """Leapfrog trajectory settings: L steps of size dt with diagonal mass."""

    L: int
    dt: float
    mass: Union[float, Sequence[float], np.ndarray] = 1.0

    def __post_init__(self):
        if self.L < 1:
            raise ValueError(f"L must be a positive integer, got {self.L}")
        if self.dt <= 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if np.any(np.atleast_1d(np.asarray(self.mass, dtype=float)) <= 0.0):
            raise ValueError("mass entries must be positive")

    def mass_vector(self, k: int) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.mass, dtype=float), (k,))


@dataclass(frozen=True)
class PhasePoint:
    """Position/momentum pair on the phase space."""

    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.p))):
            raise ValueError("phase point components must be finite")


class LeapfrogError(RuntimeError):
    """Raised when a gradient evaluation turns non-finite mid-trajectory."""


def rwmh_step(
    x: np.ndarray,
    target: Target,
    sigma: float,
    rng: np.random.Generator,
    lp_current: Optional[float] = None,
) -> StepResult:
    """Propose ``x + sigma * N(0, I)`` and accept by the density ratio."""
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = np.asarray(x, dtype=float)
    y = x + sigma * rng.standard_normal(x.size)
    lp_x = target.log_density(x) if lp_current is None else lp_current
    lp_y = target.log_density(y)
    return accept_step(x, y, lp_y - lp_x, lp_x, lp_y, rng)


def make_rwmh_kernel(target: Target, sigma: float) -> Kernel:
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    log_density = target.log_density
    cache = {"x": None, "lp": None}

    def kernel(x: np.ndarray, rng: np.random.Generator) -> StepResult:
        x = np.asarray(x, dtype=float)
        lp_x = cache["lp"] if cache["x"] is not None and x is cache["x"] else log_density(x)
        y = x + sigma * rng.standard_normal(x.size)
        lp_y = log_density(y)
        step = accept_step(x, y, lp_y - lp_x, lp_x, lp_y, rng)
        cache["x"], cache["lp"] = step.x_next, step.log_density
        return step

    return kernel


def potential(target: Target, x: np.ndarray) -> float:
    """``U(x) = -log pi(x)``."""
    return -target.log_density(np.asarray(x, dtype=float))


def grad_potential(target: Target, x: np.ndarray) -> np.ndarray:
    """``grad U(x) = -grad log pi(x)``; requires the target gradient."""
    if target.grad_log_density is None:
        raise ValueError(f"target {target.name!r} has no gradient; HMC needs one")
    return -np.asarray(target.grad_log_density(np.asarray(x, dtype=float)), dtype=float)


def leapfrog(start: PhasePoint, cfg: HmcConfig, target: Target) -> PhasePoint:
    """Apply the leapfrog update ``cfg.L`` times from ``start``."""
    if target.grad_log_density is None:
        raise ValueError(f"target {target.name!r} has no gradient; leapfrog needs one")
    x = np.asarray(start.x, dtype=float).copy()
    p = np.asarray(start.p, dtype=float).copy()
    inv_m = 1.0 / cfg.mass_vector(x.size)
    dt = cfg.dt
    grad = grad_potential(target, x)
    for step in range(cfg.L):
        if not np.all(np.isfinite(grad)):
            raise LeapfrogError(f"non-finite potential gradient at leapfrog step {step}")
        x = x + dt * inv_m * (p - 0.5 * dt * grad)
        grad_new = grad_potential(target, x)
        if not np.all(np.isfinite(grad_new)):
            raise LeapfrogError(f"non-finite potential gradient at leapfrog step {step}")
        p = p - 0.5 * dt * (grad + grad_new)
        grad = grad_new
    return PhasePoint(x, p)


def _hamiltonian(target: Target, x: np.ndarray, p: np.ndarray, inv_m: np.ndarray) -> float:
    return potential(target, x) + 0.5 * float(p @ (inv_m * p))


def hmc_step(
    x: np.ndarray,
    target: Target,
    cfg: HmcConfig,
    rng: np.random.Generator,
) -> StepResult:
    """One HMC transition: fresh ``N(0, M)`` momentum, leapfrog, energy test.

    Accepts with probability ``min{1, exp(-H(x'', p'') + H(x, p'))}``; the
    momentum is discarded afterwards.
    """
    x = np.asarray(x, dtype=float)
    mass = cfg.mass_vector(x.size)
    inv_m = 1.0 / mass
    p0 = np.sqrt(mass) * rng.standard_normal(x.size)
    end = leapfrog(PhasePoint(x, p0), cfg, target)
    h0 = _hamiltonian(target, x, p0, inv_m)
    h1 = _hamiltonian(target, end.x, end.p, inv_m)
    lp_y = target.log_density(end.x)
    return accept_step(x, end.x, h0 - h1, target.log_density(x), lp_y, rng)


def make_hmc_kernel(target: Target, cfg: HmcConfig) -> Kernel:
    if target.grad_log_density is None:
        raise ValueError(f"target {target.name!r} has no gradient; HMC needs one")

    def kernel(x: np.ndarray, rng: np.random.Generator) -> StepResult:
        return hmc_step(x, target, cfg, rng)

    return kernel


def hmc_one_step_proposal_params(
    x: np.ndarray,
    target: Target,
    cfg: HmcConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """Exact Gaussian law of the L = 1 position proposal from ``x``.

    Returns ``(mean, var)`` with ``mean = x + (dt^2/2) M^{-1} grad log pi(x)``
    and ``var = dt^2 M^{-1}`` (diagonal), the push-forward of the ``N(0, M)``
    momentum through a single leapfrog step of size ``dt``.
    """
    if cfg.L != 1:
        raise ValueError(f"proposal characterization requires L = 1, got L = {cfg.L}")
    x = np.asarray(x, dtype=float)
    inv_m = 1.0 / cfg.mass_vector(x.size)
    score = -grad_potential(target, x)
    mean = x + 0.5 * cfg.dt**2 * inv_m * score
    var = cfg.dt**2 * inv_m
    return mean, var
