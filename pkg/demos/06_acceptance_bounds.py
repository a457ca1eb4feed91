"""Acceptance-rate bound evaluators for strongly log-concave targets.

For curvature growing like k^3, the random-walk acceptance bound collapses at
a Gaussian-tail rate while the additive-kernel bound only decays
polynomially, so their ratio diverges; single-step HMC tracks the random walk
when its trajectory non-centrality is small relative to k and decays even
faster when it is large.  All values are held in log space: at k = 200 the
magnitudes are far beyond double-precision range.
"""

from tmcmc.bounds import AcceptanceBoundInputs, hmc_ar_bounds, rwmh_ar_bounds, tmcmc_ar_bounds

print(f"{'k':>4s} {'rwmh upper':>12s} {'additive lower':>15s} {'log ratio':>10s} "
      f"{'hmc lower':>12s}")
for k in (10, 25, 50, 100, 200):
    curv = float(k) ** 3
    inp = AcceptanceBoundInputs(k=k, m_k=curv, M_k=curv, dt=0.05, lam=0.1 * k)
    rw = rwmh_ar_bounds(inp)
    tm = tmcmc_ar_bounds(inp)
    hm = hmc_ar_bounds(inp)
    print(
        f"{k:4d} {rw.log_upper:12.1f} {tm.log_lower:15.1f} "
        f"{tm.log_lower - rw.log_upper:10.1f} {hm.log_lower:12.1f}"
    )

print("\n(log scale; the growing ratio column is the divergence of the additive")
print("kernel's lower bound over the random-walk upper bound)")

inp = AcceptanceBoundInputs(k=100, m_k=100.0**3, M_k=100.0**3, dt=0.05, lam=0.0)
h = hmc_ar_bounds(inp)
print(f"\nHMC asymptotes at k=100: small non-centrality {h.log_asymp_small_lambda:.1f} "
      f"(the random-walk form), large non-centrality regime available alongside.")
