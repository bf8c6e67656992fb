"""Closed forms, Gaussian limit, reduced density matrix, and entropy."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binqwalk.analytics import (
    GaussParams,
    ReducedDensity,
    binomial_mass,
    binomial_pmf,
    closed_form_amplitudes,
    closed_form_state,
    entanglement_entropy,
    entropy_asymptote,
    gaussian_approx,
    reduced_density,
)
from binqwalk.coin import CoinSpec, evolve, step
from binqwalk.lattice import initial_state, pmf

from conftest import exact_binomial


def test_binomial_pmf_frozen_values():
    assert binomial_pmf(0, 2, 0.5) == pytest.approx(0.5, abs=1e-15)
    assert binomial_pmf(1, 3, 0.75) == pytest.approx(0.421875, abs=1e-15)
    for t, p in [(5, 0.3), (40, 0.75)]:
        assert binomial_pmf(t, t, p) == pytest.approx(p**t, rel=1e-13)


def test_binomial_pmf_is_zero_off_support():
    assert binomial_pmf(1, 2, 0.5) == 0.0
    assert binomial_pmf(7, 4, 0.5) == 0.0


@pytest.mark.parametrize("p", [0.0, 0.25, 0.5, 0.75, 1.0])
@pytest.mark.parametrize("t", [0, 1, 2, 17, 60])
def test_binomial_pmf_matches_exact_combinatorics(t, p):
    for n in range(-t, t + 1):
        assert binomial_pmf(n, t, p) == pytest.approx(
            exact_binomial(n, t, p), abs=1e-13
        )


def test_binomial_mass_matches_scalar():
    mass = binomial_mass(31, 0.3)
    for n in range(-31, 32):
        assert mass[n + 31] == pytest.approx(binomial_pmf(n, 31, 0.3), abs=1e-15)


def test_binomial_survives_large_t():
    mass = binomial_mass(10_000, 0.5)
    assert np.isfinite(mass).all()
    assert mass.sum() == pytest.approx(1.0, abs=1e-9)


def test_closed_form_one_step_amplitudes():
    plus, minus = closed_form_amplitudes(1, 1, 0.75)
    assert plus == pytest.approx(math.sqrt(0.75), abs=1e-15)
    assert minus == 0.0


@pytest.mark.parametrize("p", [0.3, 0.5, 0.75])
@pytest.mark.parametrize("t", [1, 4, 25])
def test_closed_form_boundary_values(t, p):
    plus_top, minus_top = closed_form_amplitudes(t, t, p)
    plus_bot, minus_bot = closed_form_amplitudes(-t, t, p)
    assert plus_top == pytest.approx(p ** (t / 2), rel=1e-13)
    assert minus_top == 0.0
    assert plus_bot == 0.0
    assert minus_bot == pytest.approx((1 - p) ** (t / 2), rel=1e-13)


def test_closed_form_rejects_bad_queries():
    with pytest.raises(ValueError):
        closed_form_amplitudes(0, 0, 0.5)
    with pytest.raises(ValueError):
        closed_form_amplitudes(1, 2, 0.5)
    with pytest.raises(ValueError):
        closed_form_amplitudes(5, 3, 0.5)


@pytest.mark.parametrize("p", [0.3, 0.5, 0.75])
def test_each_component_encodes_previous_step_pmf(p):
    # psi_plus(n,t) = sqrt(p) * sqrt(rho(n-1,t-1)) and the mirror identity:
    # the redundancy that makes measurement reversal possible.
    for t in (1, 2, 9, 40):
        for n in range(-t, t + 1, 2):
            plus, minus = closed_form_amplitudes(n, t, p)
            assert plus == pytest.approx(
                math.sqrt(p) * math.sqrt(exact_binomial(n - 1, t - 1, p)), abs=1e-12
            )
            assert minus == pytest.approx(
                math.sqrt(1 - p) * math.sqrt(exact_binomial(n + 1, t - 1, p)),
                abs=1e-12,
            )


def test_unbiased_components_are_shifted_mirrors():
    state = closed_form_state(24, 0.5)
    for n in range(-22, 25, 2):
        plus, _ = closed_form_amplitudes(n, 24, 0.5)
        _, minus = closed_form_amplitudes(n - 2, 24, 0.5)
        assert plus == pytest.approx(minus, abs=1e-14)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("p", [0.25, 0.5, 0.75])
def test_closed_form_state_matches_evolution(p):
    state = evolve(initial_state(), CoinSpec(p), 31)
    closed = closed_form_state(31, p)
    assert np.abs(state.psi_plus - closed.psi_plus).max() < 1e-12
    assert np.abs(state.psi_minus - closed.psi_minus).max() < 1e-12


def test_closed_form_states_stay_normalized():
    for t in (1, 10, 100, 200):
        assert closed_form_state(t, 0.75).norm() == pytest.approx(1.0, abs=1e-11)


def test_gaussian_peak_value():
    params = GaussParams.from_bias(0.75)
    t = 100
    peak = gaussian_approx(params.mu * t, t, 0.75)
    assert peak == pytest.approx(2.0 / math.sqrt(2 * math.pi * params.sigma2 * t))


def test_gaussian_is_symmetric_when_unbiased():
    for n in (2, 10, 36):
        assert gaussian_approx(n, 50, 0.5) == gaussian_approx(-n, 50, 0.5)


def test_gaussian_rejects_degenerate_bias():
    with pytest.raises(ValueError):
        gaussian_approx(0, 10, 0.0)
    with pytest.raises(ValueError):
        gaussian_approx(0, 10, 1.0)


def test_gaussian_tracks_binomial_closely_at_t_100():
    worst = max(
        abs(binomial_pmf(n, 100, 0.75) - gaussian_approx(n, 100, 0.75))
        for n in range(-100, 101, 2)
    )
    assert worst < 0.005


@pytest.mark.parametrize("p", [0.3, 0.5, 0.75])
def test_reduced_density_diagonal_is_bias_split(p):
    state = initial_state()
    spec = CoinSpec(p)
    for _ in range(25):
        state = step(state, spec)
        rd = reduced_density(state)
        assert rd.p_plus == pytest.approx(p, abs=1e-12)
        assert rd.p_minus == pytest.approx(1 - p, abs=1e-12)


def test_off_diagonal_vanishes_at_t_1():
    rd = reduced_density(evolve(initial_state(), CoinSpec(0.75), 1))
    assert rd.q_offdiag == pytest.approx(0.0, abs=1e-15)


def test_off_diagonal_saturates_at_large_t():
    p = 0.75
    rd = reduced_density(evolve(initial_state(), CoinSpec(p), 600))
    assert rd.q_offdiag == pytest.approx(math.sqrt(p * (1 - p)), abs=2e-3)


def test_reduced_density_validates_inputs():
    with pytest.raises(ValueError):
        ReducedDensity(p_plus=0.6, p_minus=0.6, q_offdiag=0.0)
    with pytest.raises(ValueError):
        ReducedDensity(p_plus=0.9, p_minus=0.1, q_offdiag=0.5)


def test_entropy_is_maximal_after_first_step():
    rd = reduced_density(evolve(initial_state(), CoinSpec(0.5), 1))
    assert entanglement_entropy(rd) == 1.0


def test_entropy_frozen_value_for_biased_first_step():
    # Eigenvalues (0.75, 0.25) once the off-diagonal term vanishes.
    rd = reduced_density(evolve(initial_state(), CoinSpec(0.75), 1))
    assert entanglement_entropy(rd) == pytest.approx(0.8112781244591328, abs=1e-12)


@given(
    p_plus=st.floats(min_value=0.0, max_value=1.0),
    frac=st.floats(min_value=-1.0, max_value=1.0),
)
@settings(max_examples=200, deadline=None)
def test_entropy_matches_eigenvalue_oracle(p_plus, frac):
    q = frac * math.sqrt(p_plus * (1.0 - p_plus))
    rd = ReducedDensity(p_plus=p_plus, p_minus=1.0 - p_plus, q_offdiag=q)
    eigs = np.linalg.eigvalsh(np.array([[rd.p_plus, q], [q, rd.p_minus]]))
    expected = -sum(lam * math.log2(lam) for lam in eigs if lam > 1e-15)
    assert entanglement_entropy(rd) == pytest.approx(expected, abs=1e-9)


def test_entropy_rejects_invalid_discriminant():
    # Possible only for a non-unit-trace matrix, so corrupt past validation.
    rd = ReducedDensity(p_plus=0.5, p_minus=0.5, q_offdiag=0.0)
    object.__setattr__(rd, "p_plus", 0.6)
    object.__setattr__(rd, "p_minus", 0.6)
    with pytest.raises(ValueError, match="discriminant"):
        entanglement_entropy(rd)


@pytest.mark.parametrize("p", [0.5, 0.75])
def test_entropy_decreases_monotonically(p):
    state = initial_state()
    spec = CoinSpec(p)
    previous = None
    for _ in range(120):
        state = step(state, spec)
        entropy = entanglement_entropy(reduced_density(state))
        if previous is not None:
            assert entropy <= previous + 1e-12
        previous = entropy
    assert previous < 0.05  # well on its way to zero


def test_entropy_asymptote_values():
    assert entropy_asymptote(1) == 0.5
    # log2(4000)/4000, frozen from direct evaluation.
    assert entropy_asymptote(1000) == pytest.approx(0.0029914460711655217, abs=1e-18)
    with pytest.raises(ValueError):
        entropy_asymptote(0)


def test_entropy_decay_is_bias_independent():
    ratios = {}
    for p in (0.5, 0.75):
        state = evolve(initial_state(), CoinSpec(p), 400)
        entropy = entanglement_entropy(reduced_density(state))
        ratios[p] = entropy / entropy_asymptote(400)
    assert ratios[0.5] == pytest.approx(ratios[0.75], rel=0.02)
