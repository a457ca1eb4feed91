import itertools
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from tmcmc.targets import (
    ChallengerRecord,
    LogConcaveMeta,
    load_challenger_data,
    make_anisotropic_gaussian,
    make_challenger_logistic,
    make_iid_gaussian,
    make_ising_chain,
    make_lattice_target,
)

RNG = np.random.default_rng(1234)


def finite_diff_grad(f, x, h=1e-5):
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


# --- Gaussian families ---------------------------------------------------


def test_iid_gaussian_closed_forms():
    t1 = make_iid_gaussian(1)
    assert_allclose(t1.log_density(np.zeros(1)), -0.5 * math.log(2 * math.pi))
    t2 = make_iid_gaussian(2)
    assert_allclose(t2.grad_log_density(np.zeros(2)), np.zeros(2))
    t3 = make_iid_gaussian(3)
    assert_allclose(t3.log_density(np.ones(3)), -1.5 * math.log(2 * math.pi) - 1.5)


def test_iid_gaussian_rejects_zero_dim():
    with pytest.raises(ValueError):
        make_iid_gaussian(0)


def test_anisotropic_reduces_to_iid():
    iso = make_iid_gaussian(2)
    ani = make_anisotropic_gaussian([1.0, 1.0])
    for _ in range(20):
        x = RNG.standard_normal(2) * 3
        assert_allclose(ani.log_density(x), iso.log_density(x), rtol=1e-14)


def test_anisotropic_gradient_and_meta():
    t = make_anisotropic_gaussian([2.0, 8.0])
    assert_allclose(t.grad_log_density(np.ones(2)), [-2.0, -8.0])
    assert t.meta.m_k == 2.0
    assert t.meta.M_k == 8.0
    with pytest.raises(ValueError):
        make_anisotropic_gaussian([1.0, -2.0])


@pytest.mark.parametrize(
    "factory",
    [
        lambda: make_iid_gaussian(4),
        lambda: make_anisotropic_gaussian([0.5, 1.0, 3.0, 9.0]),
        lambda: make_challenger_logistic(10.0),
        lambda: make_challenger_logistic(10.0, center=True),
    ],
)
def test_gradients_match_finite_differences(factory):
    target = factory()
    rng = np.random.default_rng(7)
    for _ in range(100):
        x = rng.uniform(-10, 10, size=target.dim)
        if "challenger" in target.name:
            x = x * np.array([1.0, 0.05])  # keep eta in a numerically sane range
        g = target.grad_log_density(x)
        fd = finite_diff_grad(target.log_density, x)
        assert np.max(np.abs(g - fd) / (1.0 + np.abs(g))) < 1e-5


def test_log_concave_sandwich_for_gaussians():
    # Strong concavity/smoothness: between any two points the log-density gap
    # is bracketed by the quadratic bounds with the declared curvatures.
    for target in (make_iid_gaussian(3), make_anisotropic_gaussian([0.7, 2.0, 5.0])):
        m, M = target.meta.m_k, target.meta.M_k
        rng = np.random.default_rng(11)
        for _ in range(200):
            x = rng.standard_normal(target.dim) * 2
            y = rng.standard_normal(target.dim) * 2
            gap = target.log_density(y) - target.log_density(x)
            lin = float(target.grad_log_density(x) @ (y - x))
            d2 = float((y - x) @ (y - x))
            assert gap <= lin - 0.5 * m * d2 + 1e-9
            assert gap >= lin - 0.5 * M * d2 - 1e-9


def test_log_concave_meta_validation():
    with pytest.raises(ValueError):
        LogConcaveMeta(m_k=2.0, M_k=1.0, mode=np.zeros(1))


# --- Challenger data and posterior ---------------------------------------


def test_challenger_dataset_integrity():
    records = load_challenger_data()
    assert len(records) == 23
    assert sum(r.failure for r in records) == 7
    temps = [r.temp_f for r in records]
    assert min(temps) == 53 and max(temps) == 81
    assert all(isinstance(r, ChallengerRecord) for r in records)


def test_challenger_external_csv_roundtrip(tmp_path):
    records = load_challenger_data()
    path = tmp_path / "oring.csv"
    with open(path, "w") as fh:
        fh.write("flight_no,failure,temp_f\n")
        for r in records:
            fh.write(f"{r.flight_no},{r.failure},{r.temp_f}\n")
    assert load_challenger_data(str(path)) == records
    bad = tmp_path / "bad.csv"
    bad.write_text("flight,fail,temp\n1,0,70\n")
    with pytest.raises(ValueError):
        load_challenger_data(str(bad))


def test_challenger_log_density_at_origin():
    target = make_challenger_logistic(10.0)
    assert_allclose(target.log_density(np.zeros(2)), -23 * math.log(2.0))


def test_challenger_gradient_at_origin_matches_dataset_sums():
    records = load_challenger_data()
    y = np.array([r.failure for r in records], float)
    t = np.array([r.temp_f for r in records], float)
    expected = np.array([np.sum(y - 0.5), t @ y - 0.5 * t.sum()])
    assert_allclose(expected, [-4.5, -354.0])  # hand-derived from the 23 rows
    target = make_challenger_logistic(10.0)
    # prior contributes nothing to the gradient at the origin
    assert_allclose(target.grad_log_density(np.zeros(2)), expected)


def test_challenger_center_is_exact_reparameterization():
    raw = make_challenger_logistic(10.0)
    cen = make_challenger_logistic(10.0, center=True)
    t_bar = cen.info["t_bar"]
    rng = np.random.default_rng(3)
    for _ in range(50):
        g0, b1 = rng.uniform(-3, 3), rng.uniform(-0.5, 0.5)
        lp_c = cen.log_density(np.array([g0, b1]))
        lp_r = raw.log_density(np.array([g0 - b1 * t_bar, b1]))
        assert_allclose(lp_c, lp_r, rtol=0, atol=1e-10)


def challenger_quadrature_moments(prior_sd=10.0, n=801, span=9.0):
    """Independent posterior-moment oracle by dense 2-D quadrature."""
    records = load_challenger_data()
    y = np.array([r.failure for r in records], float)
    t = np.array([r.temp_f for r in records], float)
    tb = t.mean()
    g0 = np.linspace(-1.12 - span * 0.57, -1.12 + span * 0.57, n)
    b1 = np.linspace(-0.186 - span * 0.079, -0.186 + span * 0.079, n)
    G0, B1 = np.meshgrid(g0, b1, indexing="ij")
    eta = G0[..., None] + B1[..., None] * (t - tb)
    loglik = (y * eta - np.logaddexp(0.0, eta)).sum(-1)
    raw0 = G0 - B1 * tb
    logpost = loglik - (raw0**2 + B1**2) / (2 * prior_sd**2)
    w = np.exp(logpost - logpost.max())
    w /= w.sum()
    mean0 = float((w * raw0).sum())
    mean1 = float((w * B1).sum())
    sd0 = float(np.sqrt((w * (raw0 - mean0) ** 2).sum()))
    sd1 = float(np.sqrt((w * (B1 - mean1) ** 2).sum()))
    return mean0, mean1, sd0, sd1


def test_challenger_posterior_slope_negative_by_quadrature():
    mean0, mean1, sd0, sd1 = challenger_quadrature_moments()
    assert mean1 < 0.0
    # frozen oracle values, converged to the digits shown
    assert_allclose([mean0, mean1], [11.8068, -0.185799], atol=5e-4)
    assert_allclose([sd0, sd1], [5.3131, 0.078048], atol=5e-4)


def test_challenger_prior_sd_validation():
    with pytest.raises(ValueError):
        make_challenger_logistic(0.0)


# --- Discrete targets -----------------------------------------------------


def test_ising_uniform_when_uncoupled():
    t = make_ising_chain(2, 0.0)
    vals = {t.log_density(np.array(s)) for s in itertools.product((-1, 1), repeat=2)}
    assert vals == {0.0}


def test_ising_single_bond():
    t = make_ising_chain(2, 1.0)
    assert t.log_density(np.array([1.0, 1.0])) == 1.0
    assert t.log_density(np.array([1.0, -1.0])) == -1.0


def test_ising_enumeration_oracle():
    t = make_ising_chain(3, 0.5)
    states = list(itertools.product((-1.0, 1.0), repeat=3))
    weights = np.array([math.exp(t.log_density(np.array(s))) for s in states])
    assert np.all(weights > 0)
    # brute-force normalizing constant: 2 bonds, sum over 8 states
    expected = sum(
        math.exp(0.5 * (s[0] * s[1] + s[1] * s[2])) for s in states
    )
    assert_allclose(weights.sum(), expected, rtol=1e-14)


def test_lattice_log_ratio_and_symmetry():
    t = make_lattice_target(1, 1.0)
    assert_allclose(t.log_density(np.array([0.0])) - t.log_density(np.array([3.0])), 3.0)
    t2 = make_lattice_target(2, 1.0)
    for x in ([1.0, -2.0], [0.0, 4.0], [-3.0, -3.0]):
        x = np.array(x)
        assert t2.log_density(x) == t2.log_density(-x)
        assert t2.log_density(x) == t2.log_density(np.abs(x))


def test_lattice_truncated_masses_finite_sum_oracle():
    t = make_lattice_target(1, 1.0)
    xs = np.arange(-20, 21, dtype=float)
    w = np.exp([t.log_density(np.array([x])) for x in xs])
    w /= w.sum()
    # geometric tails: direct summation of exp(-|x|) over the box
    z = sum(math.exp(-abs(x)) for x in range(-20, 21))
    assert_allclose(w[xs == 0.0][0], 1.0 / z, rtol=1e-12)
    assert_allclose(w[xs == 3.0][0], math.exp(-3.0) / z, rtol=1e-12)


def test_lattice_validation():
    with pytest.raises(ValueError):
        make_lattice_target(2, 0.0)
    with pytest.raises(ValueError):
        make_lattice_target(0, 1.0)
