"""Three kernels on the same 10-D standard normal target.

The single-innovation additive kernel updates every coordinate with one
shared draw and random signs; the random-walk baseline perturbs all
coordinates independently; HMC follows simulated dynamics.  All three leave
the target invariant, which the sample moments confirm, but they buy their
moves at different acceptance rates and autocorrelation times.
"""

import numpy as np

from tmcmc import (
    HmcConfig,
    TmcmcConfig,
    acceptance_rate,
    iact_and_ess,
    make_additive_tmcmc_kernel,
    make_hmc_kernel,
    make_iid_gaussian,
    make_rwmh_kernel,
    run_chain,
)

K, N, BURN, SEED = 10, 60_000, 5_000, 42

target = make_iid_gaussian(K)
kernels = {
    "additive-tmcmc": make_additive_tmcmc_kernel(target, TmcmcConfig(eps_scale=2.4 / np.sqrt(K))),
    "rwmh": make_rwmh_kernel(target, 2.38 / np.sqrt(K)),
    "hmc": make_hmc_kernel(target, HmcConfig(L=10, dt=0.2)),
}

print(f"target: {target.name},  {N} iterations per kernel, burn-in {BURN}")
print(f"{'kernel':16s} {'accept':>7s} {'mean[0]':>9s} {'var[0]':>7s} {'iact[0]':>8s} {'ess[0]':>7s}")
for name, kernel in kernels.items():
    trace = run_chain(kernel, np.zeros(K), N, SEED).tail(BURN)
    iact, ess = iact_and_ess(trace)
    print(
        f"{name:16s} {acceptance_rate(trace):7.3f} {trace.states[:, 0].mean():9.4f} "
        f"{trace.states[:, 0].var():7.3f} {iact:8.1f} {ess:7.0f}"
    )
print("\nall three agree with the N(0, 1) marginals; the innovation kernel keeps a")
print("far higher acceptance rate than the random walk at matched proposal scale.")
