"""Acceptance suite: one test per release criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines; the suite is deterministic given the seeds fixed below.  Budgets are
sized for a single desktop core.
"""

import math

import numpy as np

from tmcmc.baseline_kernels import HmcConfig, PhasePoint, hmc_one_step_proposal_params, leapfrog
from tmcmc.benchmark import ChallengerConfig, run_challenger_benchmark
from tmcmc.bounds import AcceptanceBoundInputs, hmc_ar_bounds, rwmh_ar_bounds, tmcmc_ar_bounds
from tmcmc.chain import chain_rng, run_chain
from tmcmc.discrete_kernels import make_zk_kernel
from tmcmc.scaling import ScalingStudySpec, fixed_scale_ar_curve, run_scaling_study
from tmcmc.targets import make_iid_gaussian, make_lattice_target
from tmcmc.verify import (
    check_energy_error_scaling,
    check_leapfrog_structure,
    run_continuous_db_suite,
    run_discrete_suite,
    run_structure_suite,
    suite_ok,
)

RWMH_TARGET, RWMH_TOL = 0.234, 0.03
TMCMC_TARGET, TMCMC_TOL = 0.439, 0.05


def report(criterion: int, passed: bool, detail: str) -> None:
    print(f"[criterion {criterion}] {'PASS' if passed else 'FAIL'} - {detail}")


def test_criterion_1_optimal_acceptance_reproduction():
    spec = ScalingStudySpec(
        dims=(100,),
        ell_grid=(1.6, 1.9, 2.2, 2.5, 2.8, 3.1, 3.4),
        n_iter=200_000,
        burn_in=10_000,
        seeds=(1, 2, 3, 4),
    )
    rep = run_scaling_study(spec, n_workers=1)
    opt = {o.kernel: o for o in rep.optima}
    rw, tm = opt["rwmh"], opt["additive-tmcmc"]
    ok_rw = abs(rw.accept_rate - RWMH_TARGET) <= RWMH_TOL
    ok_tm = abs(tm.accept_rate - TMCMC_TARGET) <= TMCMC_TOL
    ok_order = tm.accept_rate > rw.accept_rate
    report(
        1,
        ok_rw and ok_tm and ok_order,
        f"k=100 optimal acceptance: rwmh {rw.accept_rate:.4f} (target {RWMH_TARGET}+-{RWMH_TOL}), "
        f"additive-tmcmc {tm.accept_rate:.4f} (target {TMCMC_TARGET}+-{TMCMC_TOL})",
    )
    assert ok_rw
    assert ok_tm
    assert ok_order


def test_criterion_2_acceptance_decay_ordering():
    ks = np.array([5, 10, 20, 50, 100])
    curves = fixed_scale_ar_curve(dims=ks, n_iter=100_000, seed=314)
    tm, rw = curves["additive-tmcmc"], curves["rwmh"]
    dominance = bool(np.all(tm > rw))
    slope_tm = float(np.polyfit(ks, np.log(tm), 1)[0])
    slope_rw = float(np.polyfit(ks, np.log(rw), 1)[0])
    steeper = slope_rw < slope_tm < 0.0
    report(
        2,
        dominance and steeper,
        f"fixed unit scale: dominance at every k={[int(v) for v in ks]}; "
        f"log-AR slopes rwmh {slope_rw:.4f} < additive-tmcmc {slope_tm:.4f}",
    )
    assert dominance
    assert steeper


def test_criterion_3_exact_detailed_balance():
    verdicts = run_discrete_suite(seed=0)
    db = [v for v in verdicts if v.check_name.startswith("detailed-balance")]
    ok_pass = all(v.passed and v.tolerance <= 1e-10 for v in db) and len(db) == 4
    corrupted = run_discrete_suite(seed=0, corrupt_acceptance=True)
    bad_db = [v for v in corrupted if v.check_name.startswith("detailed-balance")]
    ok_controls = all(not v.passed for v in bad_db)
    worst = max(v.max_violation for v in db)
    report(
        3,
        ok_pass and ok_controls,
        f"spin (k<=4) and lattice (k=1, |x|<=5) kernels: max violation {worst:.2e} < 1e-10; "
        f"corrupted variants all fail",
    )
    assert ok_pass
    assert ok_controls


def test_criterion_4_grid_surrogate_detailed_balance():
    verdicts = run_continuous_db_suite(seed=0)
    regular = [v for v in verdicts if not v.negative_control]
    controls = [v for v in verdicts if v.negative_control]
    ok = all(v.passed for v in regular) and all(not v.passed for v in controls)
    worst = max(v.max_violation for v in regular)
    report(
        4,
        ok,
        f"grid surrogates (additive p=0.5/0.7, rwmh, dependent-z MC band): "
        f"max violation {worst:.2e}; {len(controls)} negative controls fail",
    )
    assert suite_ok(verdicts)
    assert ok


def test_criterion_5_leapfrog_structure_and_energy_scaling():
    grid = ((1, 0.05), (3, 0.1), (5, 0.15), (10, 0.2))
    structure = check_leapfrog_structure(make_iid_gaussian(3), grid=grid, n_points=30, seed=0)
    energy = check_energy_error_scaling(k=10, L=10, dt=0.1, n_points=400, seed=0)
    rev = structure.details["reversibility_error"]
    jac = structure.details["jacobian_error"]
    ratio = energy.details["ratio"]
    ok = structure.passed and energy.passed
    report(
        5,
        ok,
        f"reversibility {rev:.2e} < 1e-10, |det J - 1| {jac:.2e} < 1e-6, "
        f"energy-error ratio {ratio:.3f} in [3.5, 4.5]",
    )
    assert structure.passed
    assert rev < 1e-10 and jac < 1e-6
    assert 3.5 <= ratio <= 4.5


def test_criterion_6_hmc_single_step_proposal_law():
    k, n = 4, 100_000
    target = make_iid_gaussian(k)
    cfg = HmcConfig(L=1, dt=0.3, mass=np.array([1.0, 2.0, 0.5, 1.25]))
    x = np.array([0.8, -0.5, 1.2, 0.0])
    mean, var = hmc_one_step_proposal_params(x, target, cfg)
    rng = chain_rng(606)
    sqrt_m = np.sqrt(cfg.mass_vector(k))
    draws = np.empty((n, k))
    for i in range(n):
        p0 = sqrt_m * rng.standard_normal(k)
        draws[i] = leapfrog(PhasePoint(x, p0), cfg, target).x
    emp_mean = draws.mean(axis=0)
    emp_var = draws.var(axis=0, ddof=1)
    mean_z = np.abs(emp_mean - mean) / np.sqrt(var / n)
    var_z = np.abs(emp_var - var) / (var * math.sqrt(2.0 / (n - 1)))
    ok = bool(np.all(mean_z < 4.0) and np.all(var_z < 4.0))
    report(
        6,
        ok,
        f"10^5 single-step proposals: max |z| for means {mean_z.max():.2f}, "
        f"for variances {var_z.max():.2f} (limit 4)",
    )
    assert ok


def test_criterion_7_lattice_parity_demonstration():
    target = make_lattice_target(2, 0.4)
    x0 = np.array([1.0, 2.0])
    pure = run_chain(make_zk_kernel(target, r=0.0, jump_scale=1.3), x0, 100_000, 7070)
    diffs = np.rint(pure.states[:, 0] - pure.states[:, 1]).astype(int)
    parity_invariant = bool(np.all(diffs % 2 == 1))

    mixed = run_chain(make_zk_kernel(target, r=0.3, jump_scale=1.3), x0, 10_000, 7071)
    md = np.rint(mixed.states[:, 0] - mixed.states[:, 1]).astype(int)
    both_classes = set(md % 2) == {0, 1}
    report(
        7,
        parity_invariant and both_classes,
        "r=0 keeps parity of x_1 - x_2 invariant over 10^5 iterations; "
        "r=0.3 visits both parity classes within 10^4",
    )
    assert parity_invariant
    assert both_classes


def test_criterion_8_challenger_cross_kernel_agreement():
    rep = run_challenger_benchmark(ChallengerConfig())
    max_nse = max(v["n_se"] for v in rep["cross_kernel"].values())
    ok = rep["agreement"] and rep["beta1_negative"] and rep["converged"]
    report(
        8,
        ok,
        f"posterior means agree within {max_nse:.2f} combined SE (limit 3); "
        f"beta1 means negative; max split-chain statistic {rep['max_split_rhat']:.4f} < 1.05",
    )
    assert rep["agreement"]
    assert rep["beta1_negative"]
    assert rep["max_split_rhat"] < 1.05


def test_criterion_9_bound_evaluator_sanity():
    rng = np.random.default_rng(99)
    worst_gap = -np.inf
    for _ in range(1000):
        k = int(rng.integers(1, 301))
        m = float(10.0 ** rng.uniform(-3, 3))
        M = m * (1.0 + float(rng.uniform(0.0, 3.0)))
        psi2 = float(rng.uniform(1e-4, 0.3))
        psi1 = float(rng.uniform(1e-4, (1.0 - psi2) * 0.9))
        inp = AcceptanceBoundInputs(
            k=k, m_k=m, M_k=M, psi1=psi1, psi2=psi2,
            dt=float(rng.uniform(1e-3, 2.0)), lam=float(rng.uniform(0.0, 50.0 * k)),
        )
        for pair in (rwmh_ar_bounds(inp), tmcmc_ar_bounds(inp), hmc_ar_bounds(inp)):
            worst_gap = max(worst_gap, pair.log_lower - pair.log_upper)
    ordered = worst_gap <= 1e-12

    log_ratio = []
    for k in range(10, 201, 10):
        curv = float(k) ** 3
        inp = AcceptanceBoundInputs(k=k, m_k=curv, M_k=curv)
        log_ratio.append(tmcmc_ar_bounds(inp).log_lower - rwmh_ar_bounds(inp).log_upper)
    monotone = bool(np.all(np.diff(log_ratio) > 0.0))
    report(
        9,
        ordered and monotone,
        f"lower <= upper on 10^3 random inputs for all three bound pairs "
        f"(worst log gap {worst_gap:.1e}); additive/random-walk log-ratio rises "
        f"from {log_ratio[0]:.1f} to {log_ratio[-1]:.1f} over k=10..200",
    )
    assert ordered
    assert monotone


def test_structure_suite_aggregates_cleanly():
    verdicts = run_structure_suite(seed=0)
    assert suite_ok(verdicts)
