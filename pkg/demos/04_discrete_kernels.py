"""Discrete-state kernels: exact stationarity, and a reducibility trap.

The spin kernel's exact 2^k transition matrix has the spin-chain distribution
as its stationary vector to machine precision.  On the integer lattice, the
joint move that shifts every coordinate by the same integer preserves the
parity of coordinate differences, so with no single-coordinate moves the
chain is reducible; mixing in coordinate updates with probability r restores
irreducibility.
"""

import numpy as np

from tmcmc import (
    ising_transition_matrix,
    lattice_transition_matrix,
    make_ising_chain,
    make_lattice_target,
    make_zk_kernel,
    run_chain,
    stationary_distribution,
)
from tmcmc.discrete_kernels import strongly_connected_classes

spin_target = make_ising_chain(3, coupling=0.5)
states, K = ising_transition_matrix(spin_target, p=0.5)
log_w = np.array([spin_target.log_density(s) for s in states])
pi = np.exp(log_w - log_w.max())
pi /= pi.sum()
err = np.abs(stationary_distribution(K) - pi).max()
print(f"spin chain k=3, coupling 0.5: |stationary(K) - normalized target|_inf = {err:.2e}")

lattice = make_lattice_target(2, rate=1.0)
for r in (0.0, 0.3):
    _, K_lat = lattice_transition_matrix(lattice, r=r, jump_scale=1.5, box_radius=3)
    n_classes, _ = strongly_connected_classes(K_lat)
    print(f"lattice k=2, r={r}: {n_classes} strongly connected class(es)")

print("\nsimulated parity of x_1 - x_2 from start (1, 2):")
for r in (0.0, 0.3):
    trace = run_chain(make_zk_kernel(lattice, r=r, jump_scale=1.5), np.array([1.0, 2.0]), 20_000, 9)
    parities = sorted(int(p) for p in set((np.rint(trace.states[:, 0] - trace.states[:, 1]).astype(int)) % 2))
    print(f"  r={r}: parity classes visited: {parities}")
