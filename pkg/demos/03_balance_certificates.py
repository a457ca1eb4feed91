"""Balance and structure certificates, including deliberate failures.

Continuous kernels are certified on grid-quantized surrogates whose
transition matrices are exact, so detailed balance is checked to 1e-10 rather
than Monte Carlo noise; the dependent-move-probability kernel gets a common
random-number Monte Carlo band instead.  Negative controls (move ratio
dropped, matrix perturbed, non-symplectic integrator) must fail, proving the
harness detects violations rather than rubber-stamping.
"""

from tmcmc.verify import (
    format_verdict_table,
    run_continuous_db_suite,
    run_structure_suite,
    suite_ok,
)

print("== continuous-kernel balance certificates ==")
continuous = run_continuous_db_suite(seed=0)
print(format_verdict_table(continuous))
print(f"suite ok: {suite_ok(continuous)}\n")

print("== integrator structure and planar reachability ==")
structure = run_structure_suite(seed=0)
print(format_verdict_table(structure))
print(f"suite ok: {suite_ok(structure)}")
