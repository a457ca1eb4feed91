"""Chain driving, tracing, and reproducible seeding shared by all kernels.

A kernel is any callable ``(x, rng) -> StepResult``.  The runner owns the
accept/reject bookkeeping only through what kernels report; every step stores
the uniform draw that decided acceptance, so traces are replayable:
``accepted == (log(u) < log_alpha)`` holds row by row.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

__all__ = ["StepResult", "Trace", "Kernel", "chain_rng", "run_chain"]


@dataclass(frozen=True)
class StepResult:
    """Outcome of one Markov transition."""

    x_next: np.ndarray
    accepted: bool
    log_alpha: float
    uniform: float
    log_density: float
    nonfinite_proposal: bool = False


Kernel = Callable[[np.ndarray, np.random.Generator], StepResult]


def chain_rng(seed: int, chain_index: int = 0) -> np.random.Generator:
    """Generator for chain ``chain_index`` of run seed ``seed``.

    The derivation is ``SeedSequence(entropy=seed, spawn_key=(chain_index,))``
    feeding a PCG64 stream; it is documented so multi-chain runs can be
    reproduced cell by cell.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chain_index,)))


def accept_step(
    x: np.ndarray,
    proposal: np.ndarray,
    log_alpha: float,
    lp_current: float,
    lp_proposal: float,
    rng: np.random.Generator,
) -> StepResult:
    """Shared Metropolis accept/reject with a recorded uniform.

    A non-finite proposal log-density forces ``log_alpha = -inf`` (auto
    reject) so rejected excursions never write NaN into the trace.
    """
    nonfinite = not math.isfinite(lp_proposal)
    if nonfinite:
        log_alpha = -math.inf
    elif not math.isfinite(lp_current) and math.isfinite(lp_proposal):
        log_alpha = math.inf
    u = float(rng.random())
    log_u = math.log(u) if u > 0.0 else -math.inf
    accepted = log_u < log_alpha
    if accepted:
        return StepResult(proposal, True, log_alpha, u, lp_proposal, nonfinite)
    return StepResult(np.asarray(x, dtype=float), False, log_alpha, u, lp_current, nonfinite)


@dataclass
class Trace:
    """Ordered record of a single chain.

    ``states`` holds the recorded coordinates (all of them unless the runner
    was asked for a subset), one row per iteration after the initial state.
    """

    states: np.ndarray
    accepted: np.ndarray
    log_density: np.ndarray
    log_alpha: np.ndarray
    uniforms: np.ndarray
    recorded_coords: list[int]
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def n_nonfinite_proposals(self) -> int:
        return int(self.meta.get("n_nonfinite_proposals", 0))

    def tail(self, burn_in: int) -> "Trace":
        """Trace with the first ``burn_in`` iterations dropped."""
        if not 0 <= burn_in < len(self):
            raise ValueError(f"burn_in must be in [0, {len(self)}), got {burn_in}")
        return Trace(
            self.states[burn_in:],
            self.accepted[burn_in:],
            self.log_density[burn_in:],
            self.log_alpha[burn_in:],
            self.uniforms[burn_in:],
            self.recorded_coords,
            dict(self.meta, burn_in_dropped=burn_in),
        )

    def write_csv(self, path) -> None:
        """Write ``iter,accepted,log_density,x_0,...,x_{k-1}``."""
        cols = ",".join(f"x_{i}" for i in self.recorded_coords)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"iter,accepted,log_density,{cols}\n")
            for i in range(len(self)):
                xs = ",".join(repr(float(v)) for v in self.states[i])
                fh.write(f"{i},{int(self.accepted[i])},{float(self.log_density[i])!r},{xs}\n")

    def summary(self) -> dict:
        """JSON-ready run summary (acceptance rate, per-coordinate ESS, timing)."""
        from .diagnostics import acceptance_rate, iact_and_ess

        ess = {}
        if len(self) >= 100:
            for j, coord in enumerate(self.recorded_coords):
                _, e = iact_and_ess(self.states[:, j])
                ess[f"x_{coord}"] = e
        return {
            "seed": self.meta.get("seed"),
            "config": self.meta.get("config", {}),
            "n_iter": len(self),
            "accept_rate": acceptance_rate(self),
            "ess_per_coordinate": ess,
            "wall_time_s": self.meta.get("wall_time_s"),
        }

    def write_summary_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.summary(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def run_chain(
    kernel: Kernel,
    x0: np.ndarray,
    n_iter: int,
    rng_seed: Union[int, np.random.Generator],
    record_coords: Optional[Sequence[int]] = None,
    meta: Optional[dict] = None,
) -> Trace:
    """Run ``n_iter`` transitions of ``kernel`` from ``x0``.

    Deterministic given the seed.  ``record_coords`` limits which coordinates
    are stored (memory control for large-k studies); flags, log-densities,
    acceptance thresholds and uniforms are always stored in full.
    """
    x0 = np.asarray(x0, dtype=float)
    if n_iter < 1:
        raise ValueError(f"n_iter must be >= 1, got {n_iter}")
    if not np.all(np.isfinite(x0)):
        raise ValueError("x0 must be finite")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else chain_rng(int(rng_seed))

    coords = list(range(x0.size)) if record_coords is None else list(record_coords)
    states = np.empty((n_iter, len(coords)))
    accepted = np.empty(n_iter, dtype=bool)
    log_density = np.empty(n_iter)
    log_alpha = np.empty(n_iter)
    uniforms = np.empty(n_iter)

    x = x0
    n_bad = 0
    t0 = time.perf_counter()
    for i in range(n_iter):
        step = kernel(x, rng)
        x = step.x_next
        states[i] = x[coords]
        accepted[i] = step.accepted
        log_density[i] = step.log_density
        log_alpha[i] = step.log_alpha
        uniforms[i] = step.uniform
        n_bad += step.nonfinite_proposal
    wall = time.perf_counter() - t0

    info = dict(meta or {})
    info.setdefault("seed", None if isinstance(rng_seed, np.random.Generator) else int(rng_seed))
    info["wall_time_s"] = wall
    info["n_nonfinite_proposals"] = n_bad
    return Trace(states, accepted, log_density, log_alpha, uniforms, coords, info)
