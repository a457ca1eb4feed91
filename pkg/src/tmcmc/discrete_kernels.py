"""Discrete-state transformation kernels and exact transition matrices.

Two families: a spin-flip kernel on ``{-1,+1}^k`` whose forward/backward
transformations are sign maps driven by an innovation larger than 1 (so the
proposed value per coordinate is +1 with probability ``p_i`` and -1 otherwise,
independent of the innovation), and an integer-lattice kernel that mixes a
single-coordinate update with a joint move of all coordinates by the same
integer jump.  No Jacobians appear in either acceptance ratio.

For small state spaces the kernels are also materialized as exact stochastic
matrices, which is what the detailed-balance certification consumes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.stats import norm

from .chain import Kernel, StepResult, accept_step
from .targets import Target

__all__ = [
    "SpinState",
    "LatticeState",
    "ising_tmcmc_step",
    "zk_tmcmc_step",
    "make_ising_kernel",
    "make_zk_kernel",
    "jump_magnitude_masses",
    "exact_transition_matrix",
    "enumerate_spin_states",
    "enumerate_box_states",
    "ising_transition_matrix",
    "lattice_transition_matrix",
    "write_matrix_csv",
    "stationary_distribution",
    "strongly_connected_classes",
]

MAX_EXACT_STATES = 5000


@dataclass(frozen=True)
class SpinState:
    """State of the spin chain; every component is exactly +1 or -1."""

    spins: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.spins)
        if not np.all(np.abs(s) == 1):
            raise ValueError("spins must all be +1 or -1")


@dataclass(frozen=True)
class LatticeState:
    """Integer-lattice state with the enumeration bound used by exact checks."""

    coords: np.ndarray
    box_radius: int

    def __post_init__(self):
        c = np.asarray(self.coords)
        if self.box_radius < 1:
            raise ValueError("box_radius must be a positive integer")
        if np.any(np.abs(c) > self.box_radius):
            raise ValueError("coords must lie within the enumeration box")


def _validate_spin_probs(p: np.ndarray) -> None:
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise ValueError("forward probabilities must lie strictly in (0, 1)")


def _spin_selection_log_prob(x: np.ndarray, p: np.ndarray) -> float:
    # Probability of the move-type vector that produces x coordinatewise.
    return float(np.sum(np.where(x > 0, np.log(p), np.log1p(-p))))


def ising_tmcmc_step(
    x: np.ndarray,
    target: Target,
    p: Union[float, np.ndarray],
    rng: np.random.Generator,
) -> StepResult:
    """One spin-chain step.

    Per coordinate the forward sign map is chosen with probability ``p_i``
    (proposing +1) and the backward one otherwise (proposing -1); acceptance is
    ``min{1, P(reverse move)/P(move) * pi(y)/pi(x)}``.
    """
    x = np.asarray(x, dtype=float)
    probs = np.broadcast_to(np.asarray(p, dtype=float), x.shape)
    _validate_spin_probs(probs)
    y = np.where(rng.random(x.size) < probs, 1.0, -1.0)
    log_ratio = _spin_selection_log_prob(x, probs) - _spin_selection_log_prob(y, probs)
    lp_x, lp_y = target.log_density(x), target.log_density(y)
    return accept_step(x, y, log_ratio + lp_y - lp_x, lp_x, lp_y, rng)


def make_ising_kernel(target: Target, p: Union[float, np.ndarray]) -> Kernel:
    probs = np.broadcast_to(np.asarray(p, dtype=float), (target.dim,))
    _validate_spin_probs(probs)

    def kernel(x: np.ndarray, rng: np.random.Generator) -> StepResult:
        return ising_tmcmc_step(x, target, probs, rng)

    return kernel


def zk_tmcmc_step(
    x: np.ndarray,
    target: Target,
    r: float,
    jump_scale: float,
    rng: np.random.Generator,
) -> StepResult:
    """One integer-lattice step.

    With probability ``r`` a uniformly chosen coordinate jumps by ``+-m``;
    otherwise every coordinate jumps by ``z_i m`` with independent signs.  The
    magnitude is ``m = floor(eps)`` with ``eps = 1 + |N(0, jump_scale^2)|``,
    so ``m >= 1``.  Move probabilities are symmetric, hence acceptance is the
    plain density ratio.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"r must lie in [0, 1], got {r}")
    if jump_scale <= 0.0:
        raise ValueError(f"jump_scale must be positive, got {jump_scale}")
    x = np.asarray(x, dtype=float)
    branch = rng.random()
    eps = 1.0 + jump_scale * abs(float(rng.standard_normal()))
    m = math.floor(eps)
    if branch < r:
        j = int(rng.integers(x.size))
        sign = 1.0 if rng.random() < 0.5 else -1.0
        y = x.copy()
        y[j] += sign * m
    else:
        z = np.where(rng.random(x.size) < 0.5, 1.0, -1.0)
        y = x + z * m
    lp_x, lp_y = target.log_density(x), target.log_density(y)
    return accept_step(x, y, lp_y - lp_x, lp_x, lp_y, rng)


def make_zk_kernel(target: Target, r: float, jump_scale: float) -> Kernel:
    def kernel(x: np.ndarray, rng: np.random.Generator) -> StepResult:
        return zk_tmcmc_step(x, target, r, jump_scale, rng)

    return kernel


def jump_magnitude_masses(jump_scale: float, m_max: int) -> tuple[np.ndarray, float]:
    """Exact masses ``Pr(floor(eps) = m)`` for ``m = 1..m_max`` plus the tail.

    ``eps = 1 + |N(0, s^2)|`` gives ``Pr(floor(eps) = m) =
    2 (Phi(m/s) - Phi((m-1)/s))``; the returned tail is the mass beyond
    ``m_max``, which exact-matrix builders fold into self-transitions.
    """
    s = float(jump_scale)
    edges = np.arange(0, m_max + 1) / s
    cdf = norm.cdf(edges)
    masses = 2.0 * np.diff(cdf)
    tail = 2.0 * (1.0 - cdf[-1])
    return masses, float(tail)


def exact_transition_matrix(
    states: np.ndarray,
    proposal_probs: np.ndarray,
    log_pi: np.ndarray,
    extra_log_ratio: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Assemble the Metropolis kernel matrix from a proposal description.

    ``proposal_probs[i, j]`` is the probability of proposing state ``j`` from
    state ``i`` (rows may sum to less than 1; the deficit is
    propose-outside-the-space mass and counts as rejection).
    ``extra_log_ratio[i, j]`` is the log move-probability ratio entering the
    acceptance test, zero for symmetric kernels.  The diagonal collects every
    rejection, so rows sum to one exactly.
    """
    n = len(states)
    if n > MAX_EXACT_STATES:
        raise ValueError(f"state space too large for exact construction: {n} > {MAX_EXACT_STATES}")
    P = np.asarray(proposal_probs, dtype=float)
    if P.shape != (n, n) or np.any(P < 0.0):
        raise ValueError("proposal_probs must be a nonnegative (n, n) matrix")
    row_sums = P.sum(axis=1)
    if np.any(row_sums > 1.0 + 1e-9):
        raise RuntimeError(f"internal error: proposal rows sum to {row_sums.max()} > 1")
    log_pi = np.asarray(log_pi, dtype=float)
    extra = np.zeros((n, n)) if extra_log_ratio is None else np.asarray(extra_log_ratio, dtype=float)

    log_alpha = extra + log_pi[None, :] - log_pi[:, None]
    alpha = np.minimum(1.0, np.exp(np.minimum(log_alpha, 0.0)))
    K = P * alpha
    np.fill_diagonal(K, 0.0)
    diag = 1.0 - K.sum(axis=1)
    if np.any(diag < -1e-12):
        raise RuntimeError(f"internal error: negative self-transition mass {diag.min()}")
    np.fill_diagonal(K, np.maximum(diag, 0.0))
    err = np.abs(K.sum(axis=1) - 1.0).max()
    if err > 1e-12:
        raise RuntimeError(f"internal error: kernel rows sum to 1 +- {err}")
    return K


def enumerate_spin_states(k: int) -> np.ndarray:
    """All ``2^k`` spin vectors, lexicographic in (-1, +1) per coordinate."""
    return np.array(list(itertools.product((-1.0, 1.0), repeat=k)))


def enumerate_box_states(k: int, box_radius: int) -> np.ndarray:
    """All integer vectors with ``|x_i| <= box_radius``."""
    rng = range(-box_radius, box_radius + 1)
    return np.array(list(itertools.product(rng, repeat=k)), dtype=float)


def ising_transition_matrix(
    target: Target,
    p: Union[float, np.ndarray],
    eps_values: Optional[Sequence[float]] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Exact kernel matrix of the spin kernel over all ``2^k`` states.

    ``eps_values`` is an innovation grid on ``(1, inf)``; the sign maps are
    constant over that range, so any grid yields the identical matrix (a
    property the tests pin down).  Proposals are state-independent.
    """
    k = target.dim
    probs = np.broadcast_to(np.asarray(p, dtype=float), (k,))
    _validate_spin_probs(probs)
    eps_grid = np.asarray([1.5] if eps_values is None else list(eps_values), dtype=float)
    if np.any(eps_grid <= 1.0):
        raise ValueError("innovation values must exceed 1")
    weights = np.full(eps_grid.size, 1.0 / eps_grid.size)

    states = enumerate_spin_states(k)
    n = states.shape[0]
    # Selection probability of each state as a proposal, computed through the
    # sign maps for every grid value.  On (1, inf) the maps are constant
    # (forward always +1, backward always -1), so the per-value probabilities
    # are bitwise identical and marginalizing over the grid is a no-op; two
    # different grids therefore yield the same matrix exactly.
    per_eps = []
    for eps in eps_grid:
        forward = np.sign(states + eps)
        backward = np.sign(states - eps)
        sel_eps = np.array(
            [
                math.exp(
                    float(
                        np.sum(
                            np.where(
                                s == forward[idx],
                                np.log(probs),
                                np.where(s == backward[idx], np.log1p(-probs), -np.inf),
                            )
                        )
                    )
                )
                for idx, s in enumerate(states)
            ]
        )
        per_eps.append(sel_eps)
    sel = per_eps[0]
    for other in per_eps[1:]:
        if not np.array_equal(sel, other):
            raise RuntimeError("internal error: sign maps not constant on (1, inf)")
    P = np.tile(sel, (n, 1))
    log_sel = np.log(sel)
    extra = log_sel[:, None] - log_sel[None, :]
    log_pi = np.array([target.log_density(s) for s in states])
    return states, exact_transition_matrix(states, P, log_pi, extra)


def lattice_transition_matrix(
    target: Target,
    r: float,
    jump_scale: float,
    box_radius: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Exact kernel matrix of the lattice kernel truncated to a box.

    Proposals leaving the box are rejected (self-transitions), so the matrix
    is exactly stochastic; jump magnitudes above ``2 * box_radius`` always
    leave the box and are folded into the diagonal via the tail mass.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"r must lie in [0, 1], got {r}")
    k = target.dim
    states = enumerate_box_states(k, box_radius)
    n = states.shape[0]
    masses, _tail = jump_magnitude_masses(jump_scale, 2 * box_radius)
    index = {tuple(s): i for i, s in enumerate(states)}

    P = np.zeros((n, n))
    for i, x in enumerate(states):
        for m_idx, g in enumerate(masses):
            m = m_idx + 1
            if r > 0.0:
                piece = r * g / (2.0 * k)
                for j in range(k):
                    for sign in (1.0, -1.0):
                        y = x.copy()
                        y[j] += sign * m
                        tgt = index.get(tuple(y))
                        if tgt is not None:
                            P[i, tgt] += piece
            if r < 1.0:
                piece = (1.0 - r) * g / (2.0**k)
                for z in itertools.product((-1.0, 1.0), repeat=k):
                    y = x + m * np.asarray(z)
                    tgt = index.get(tuple(y))
                    if tgt is not None:
                        P[i, tgt] += piece
    log_pi = np.array([target.log_density(s) for s in states])
    return states, exact_transition_matrix(states, P, log_pi)


def write_matrix_csv(states: np.ndarray, K: np.ndarray, path) -> None:
    """Dense kernel-matrix CSV for offline inspection.

    First columns are the state coordinates (``s_0..s_{k-1}``), remaining
    columns the transition probabilities to each state in enumeration order.
    """
    states = np.asarray(states, dtype=float)
    k = states.shape[1] if states.ndim == 2 else 1
    states = states.reshape(len(states), k)
    with open(path, "w", encoding="utf-8") as fh:
        head = [f"s_{i}" for i in range(k)] + [f"to_{j}" for j in range(len(states))]
        fh.write(",".join(head) + "\n")
        for row_state, row in zip(states, K):
            cells = [repr(float(v)) for v in row_state] + [repr(float(p)) for p in row]
            fh.write(",".join(cells) + "\n")


def stationary_distribution(K: np.ndarray) -> np.ndarray:
    """Left stationary vector of a stochastic matrix via the unit eigenvalue."""
    vals, vecs = np.linalg.eig(K.T)
    idx = int(np.argmin(np.abs(vals - 1.0)))
    v = np.real(vecs[:, idx])
    v = np.abs(v)
    return v / v.sum()


def strongly_connected_classes(K: np.ndarray, atol: float = 1e-14) -> tuple[int, np.ndarray]:
    """Number of strongly connected classes of the kernel's directed graph."""
    graph = csr_matrix((K > atol).astype(np.int8))
    n_comp, labels = connected_components(graph, directed=True, connection="strong")
    return int(n_comp), labels
