"""Concentration normalizers and their exact / Monte Carlo oracles."""

import math

import numpy as np
import pytest

from specshare import (
    NakagamiM,
    Rayleigh,
    Rician,
    empirical_lower_sum,
    exact_exponential_lower_sum,
    inverse_low_gain_expansion,
    lower_sum_concentration,
    max_concentration,
)
from specshare.fading import LowGainParams, TailParams
from specshare.order_stats import deviation_probability, lower_sum_sequence, max_sequence
from specshare.rng import StreamKey

from seeds import SEEDS


# ---------------------------------------------------------------- closed forms


def test_max_concentration_formula():
    assert max_concentration(TailParams(1.0), 8) == pytest.approx(math.log(8.0))
    assert max_concentration(TailParams(2.0), 100) == pytest.approx(math.log(100.0) / 2.0)


def test_max_concentration_domain():
    with pytest.raises(ValueError):
        max_concentration(TailParams(1.0), 1)


def test_lower_sum_concentration_formula():
    assert lower_sum_concentration(LowGainParams(1.0, 1.0), 10**6, 1000) == pytest.approx(0.5)
    # f(n) = n collapses to half the full-sum mean
    assert lower_sum_concentration(LowGainParams(1.0, 1.0), 37, 37) == pytest.approx(37 / 2)
    # lam=2, gamma=2: n (k/n)^{3/2} / (sqrt(2) * 3/2)
    value = lower_sum_concentration(LowGainParams(2.0, 2.0), 10**4, 100)
    assert value == pytest.approx(10**4 * 1e-3 / (math.sqrt(2.0) * 1.5), rel=1e-12)
    assert value == pytest.approx(4.714, abs=5e-4)


def test_lower_sum_concentration_domain():
    low = LowGainParams(1.0, 1.0)
    with pytest.raises(ValueError):
        lower_sum_concentration(low, 10, 0)
    with pytest.raises(ValueError):
        lower_sum_concentration(low, 10, 11)


def test_sequence_wrappers():
    seq = max_sequence(TailParams(2.0))
    assert seq(100) == pytest.approx(math.log(100) / 2)
    seq = lower_sum_sequence(LowGainParams(1.0, 1.0), 0.5)
    assert seq(10**4) == pytest.approx(lower_sum_concentration(LowGainParams(1.0, 1.0), 10**4, 100))
    assert "n" in seq.description


# ---------------------------------------------------------------- exact oracle


def test_exact_exponential_lower_sum_hand_values():
    assert exact_exponential_lower_sum(2, 1) == pytest.approx(0.5, rel=1e-14)
    # 1/3 + (1/3 + 1/2)
    assert exact_exponential_lower_sum(3, 2) == pytest.approx(7.0 / 6.0, rel=1e-14)


def test_exact_exponential_lower_sum_full_sum_is_harmonic_mean_total():
    # k = n gives the full sum of n unit exponentials: mean n
    assert exact_exponential_lower_sum(50, 50) == pytest.approx(50.0, rel=1e-12)


def test_exact_exponential_lower_sum_matches_double_sum():
    for n, k in [(5, 2), (9, 4), (12, 12), (40, 7)]:
        double = sum(sum(1.0 / j for j in range(n - i + 1, n + 1)) for i in range(1, k + 1))
        assert exact_exponential_lower_sum(n, k) == pytest.approx(double, rel=1e-12)


def test_exact_exponential_lower_sum_large_n():
    value = exact_exponential_lower_sum(10**6, 1000)
    assert value == pytest.approx(0.5006667498832833, rel=1e-12)
    # within 0.2% of the concentration value 0.5
    assert abs(value - 0.5) / 0.5 < 0.002


def test_exact_exponential_lower_sum_domain():
    with pytest.raises(ValueError):
        exact_exponential_lower_sum(10, 0)
    with pytest.raises(ValueError):
        exact_exponential_lower_sum(10, 11)


def test_exact_oracle_vs_simulation_small_n():
    # brute Monte Carlo averaging (no enumeration), 1e7 trials per n in
    # chunks; fixed seed keeps the 3-standard-error verdict deterministic
    rng = StreamKey(SEEDS["lower-sum-oracle"]).generator()
    trials = 10**7
    chunk = 10**6
    for n in (2, 5, 12):
        sums = np.zeros(n)
        squares = np.zeros(n)
        for _ in range(trials // chunk):
            draws = np.sort(rng.exponential(size=(chunk, n)), axis=1)
            prefix = np.cumsum(draws, axis=1)
            sums += prefix.sum(axis=0)
            squares += (prefix**2).sum(axis=0)
        for k in range(1, n + 1):
            mean = sums[k - 1] / trials
            var = squares[k - 1] / trials - mean**2
            se = math.sqrt(var / trials)
            exact = exact_exponential_lower_sum(n, k)
            assert abs(mean - exact) <= 3.0 * se + 1e-12, (n, k)


# ---------------------------------------------------------------- empirical


def test_empirical_lower_sum_full_sum():
    rng = StreamKey(SEEDS["lower-sum-small-mc"]).generator()
    model = Rayleigh()
    key = StreamKey(SEEDS["lower-sum-small-mc"]).child("full")
    total = empirical_lower_sum(model, 100, 100, key.generator())
    assert total == pytest.approx(model.sample(key.generator(), 100).sum(), rel=1e-12)


def test_empirical_lower_sum_tracks_exact_oracle():
    model = Rayleigh()
    root = StreamKey(SEEDS["lower-sum-small-mc"]).child("oracle")
    values = [
        empirical_lower_sum(model, 10**5, 316, root.child(t).generator()) for t in range(100)
    ]
    exact = exact_exponential_lower_sum(10**5, 316)
    assert np.mean(values) == pytest.approx(exact, rel=0.03)


def test_empirical_lower_sum_min_of_n():
    # k=1 is the minimum; for n exponentials its mean is 1/n
    model = Rayleigh()
    root = StreamKey(SEEDS["min-of-n"])
    n = 10**4
    values = [empirical_lower_sum(model, n, 1, root.child(t).generator()) for t in range(10**4)]
    assert np.mean(values) == pytest.approx(1.0 / n, rel=0.05)


def test_empirical_lower_sum_domain():
    with pytest.raises(ValueError):
        empirical_lower_sum(Rayleigh(), 10, 0, np.random.default_rng(0))


# ---------------------------------------------------------------- inverse expansion


def test_inverse_low_gain_expansion_values():
    assert inverse_low_gain_expansion(LowGainParams(1.0, 1.0), 1e-4) == pytest.approx(1e-4)
    assert inverse_low_gain_expansion(LowGainParams(2.0, 2.0), 1e-4) == pytest.approx(
        math.sqrt(5e-5), rel=1e-12
    )
    assert inverse_low_gain_expansion(
        LowGainParams(2.0 * math.exp(-1.0), 1.0), 1e-3
    ) == pytest.approx(math.e * 5e-4, rel=1e-12)


def test_inverse_low_gain_expansion_domain():
    low = LowGainParams(1.0, 1.0)
    for y in (0.0, -1e-3, 0.1, 0.5):
        with pytest.raises(ValueError):
            inverse_low_gain_expansion(low, y)


@pytest.mark.parametrize(
    "model", [Rayleigh(), Rician(1.0), NakagamiM(2.0)], ids=lambda m: m.spec_string()
)
def test_inverse_expansion_error_order_against_quantile(model):
    # |quantile(y) - (y/lam)^{1/gamma}| = O(y^{2/gamma}): the error ratio
    # fitted at the coarsest y must bound the finer ones (with headroom)
    low = model.low_gain_params()
    ys = [1e-2, 1e-3, 1e-4]
    ratios = [
        abs(model.quantile(y) - inverse_low_gain_expansion(low, y)) / y ** (2.0 / low.gamma)
        for y in ys
    ]
    M = ratios[0]
    assert all(r <= 1.5 * M + 1e-9 for r in ratios)


# ---------------------------------------------------------------- concentration MC

CONC_MODELS = [Rayleigh(), Rician(1.0), NakagamiM(2.0)]


@pytest.mark.parametrize("model", CONC_MODELS, ids=lambda m: m.spec_string())
def test_max_deviation_probability_nonincreasing(model):
    # the in-probability convergence of max/normalizer: deviation mass must
    # not grow with n.  The absolute deviation band reachable at these n is
    # family-dependent (heavier pre-exponential corrections need deeper n),
    # so eps is set per family well inside the observed finite-n bias.
    eps = {"rayleigh": 0.25, "rician:K=1": 1.0, "nakagami:m=2": 0.65}[model.spec_string()]
    c = model.tail_parameter().c
    root = StreamKey(SEEDS["max-concentration"]).child(model.spec_string())
    probs = []
    for n in (10**3, 10**4, 10**5):
        maxima = np.array(
            [model.sample(root.child(n, t).generator(), n).max() for t in range(500)]
        )
        probs.append(deviation_probability(maxima, math.log(n) / c, eps))
    assert probs[0] >= probs[1] >= probs[2]
    assert probs[2] < 0.05


def test_max_deviation_rayleigh_tight_band():
    # for the exponential itself E[max] = H_n, so the 25% band empties out
    root = StreamKey(SEEDS["max-concentration"]).child("rayleigh-tight")
    n = 10**5
    maxima = np.array([Rayleigh().sample(root.child(t).generator(), n).max() for t in range(500)])
    assert deviation_probability(maxima, math.log(n), 0.25) < 0.05
    assert np.mean(maxima) / math.log(n) == pytest.approx(1.05, abs=0.03)


@pytest.mark.parametrize("model", CONC_MODELS, ids=lambda m: m.spec_string())
def test_lower_sum_ratio_concentrates(model):
    low = model.low_gain_params()
    root = StreamKey(SEEDS["lower-sum-concentration"]).child(model.spec_string())
    stds = []
    for n in (10**3, 10**4, 10**5):
        k = math.ceil(math.sqrt(n))
        normal = lower_sum_concentration(low, n, k)
        trials = 200 if n < 10**5 else 100
        ratios = np.array(
            [
                empirical_lower_sum(model, n, k, root.child(n, t).generator()) / normal
                for t in range(trials)
            ]
        )
        stds.append(ratios.std())
        if n == 10**5:
            assert np.mean(ratios) == pytest.approx(1.0, abs=0.05)
    assert stds[0] > stds[2]


def test_scale_property_equivalent_normalizers():
    # a_n ~ b_n (here ln n vs ln(n+1)) must give the same concentration
    # verdicts on the same samples
    root = StreamKey(SEEDS["scale-property"])
    n = 10**4
    maxima = np.array([Rayleigh().sample(root.child(t).generator(), n).max() for t in range(300)])
    for eps in (0.15, 0.25, 0.4):
        p_a = deviation_probability(maxima, math.log(n), eps)
        p_b = deviation_probability(maxima, math.log(n + 1), eps)
        assert abs(p_a - p_b) <= 0.01
