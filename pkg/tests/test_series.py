import math

import numpy as np
import pytest

from gravcorr.analysis import series as series_module
from gravcorr.analysis.series import (
    GOLDEN_RATIO,
    CorrelationSeries,
    asymptotic_ktm_discord,
    correlation_series,
    peak_discord,
    peak_mutual_information,
)
from gravcorr.dynamics.propagator import evolve_series, propagate
from gravcorr.errors import DomainError, InputError, NumericalDegeneracyError
from gravcorr.gaussian.correlations import CorrelationRecord, correlation_record, gaussian_discord
from gravcorr.models.dktm import dktm_generators
from gravcorr.models.params import ModelParams
from gravcorr.models.states import coherent_cov, squeezed_cov
from tests.oracles import asymptote_log1p


def synthetic_series(taus, discord, mutual_information=None) -> CorrelationSeries:
    mutual_information = discord if mutual_information is None else mutual_information
    records = [CorrelationRecord(mutual_information=i, discord=d, ppt_nu_minus=1.0, entangled=False)
               for d, i in zip(discord, mutual_information)]
    return CorrelationSeries(taus=taus, records=records, traces=np.full(len(taus), 4.0))


# ==================== peaks ====================

def test_parabola_refinement_recovers_vertex():
    taus = np.arange(6, dtype=float)
    discord = 1.0 - (taus - 2.3) ** 2 / 100.0
    peak = peak_discord(synthetic_series(taus, discord))
    assert peak.tau_star == pytest.approx(2.3, abs=1e-9)
    assert peak.d_star == pytest.approx(discord[2])


def test_peak_at_grid_end_is_not_refined():
    taus = np.arange(5, dtype=float)
    peak = peak_discord(synthetic_series(taus, 0.1 * taus))
    assert peak == (4.0, pytest.approx(0.4))


def test_flat_series_returns_first_sample():
    peak = peak_discord(synthetic_series(np.arange(4, dtype=float), np.zeros(4)))
    assert peak == (0.0, 0.0)


def test_peak_needs_three_samples():
    with pytest.raises(InputError):
        peak_discord(synthetic_series(np.array([0.0, 1.0]), np.array([0.0, 0.1])))


def test_golden_refinement_needs_trajectory():
    series = synthetic_series(np.arange(5, dtype=float), np.array([0.0, 0.2, 0.3, 0.2, 0.1]))
    with pytest.raises(InputError):
        peak_discord(series, refine="golden")


def test_golden_refinement_improves_sampled_peak(ktm):
    traj = evolve_series(ktm, coherent_cov(), 300.0, 31, spacing="linear")
    series = correlation_series(traj)
    sampled = peak_discord(series, refine="none")
    golden = peak_discord(series, refine="golden")
    assert golden.d_star >= sampled.d_star
    assert abs(golden.tau_star - sampled.tau_star) <= 10.0 + 1e-9
    assert golden.d_star == pytest.approx(gaussian_discord(propagate(ktm, coherent_cov(), golden.tau_star)))


def test_peak_mutual_information_is_sampled_maximum():
    taus = np.arange(4, dtype=float)
    peak = peak_mutual_information(synthetic_series(taus, np.zeros(4), np.array([0.1, 0.5, 0.3, 0.2])))
    assert peak == (1.0, 0.5)


def test_series_rejects_mismatched_lengths():
    with pytest.raises(ValueError):
        CorrelationSeries(taus=[0.0, 1.0], records=[], traces=[4.0, 4.0])


# ==================== asymptote ====================

def test_asymptote_domain():
    with pytest.raises(DomainError):
        asymptotic_ktm_discord(1e-2, 0.99 * GOLDEN_RATIO / 1e-2)
    assert math.isfinite(asymptotic_ktm_discord(1e-2, 1.01 * GOLDEN_RATIO / 1e-2))


def test_asymptote_vanishes_at_long_times():
    assert abs(asymptotic_ktm_discord(1e-2, 1e8)) < 1e-5
    # Leading behaviour is 4 / (3 (eta tau)^3).
    assert asymptotic_ktm_discord(1e-2, 1e4) == pytest.approx(4.0 / 3.0e6, rel=0.05)
    values = [asymptotic_ktm_discord(1e-2, tau) for tau in (1e3, 3e3, 1e4)]
    assert all(abs(b) < abs(a) for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("x", [1.7, 2.0, 3.0, 10.0, 30.0, 100.0])
def test_asymptote_matches_log1p_arrangement(x):
    eta = 1e-2
    assert asymptotic_ktm_discord(eta, x / eta) == pytest.approx(asymptote_log1p(eta, x / eta), rel=1e-6)


def test_asymptote_decays_to_zero_from_above():
    eta = 1e-2
    values = [asymptotic_ktm_discord(eta, x / eta) for x in (1.7, 2.0, 5.0, 10.0, 100.0, 1e3)]
    assert all(v > 0.0 for v in values)
    assert all(b < a for a, b in zip(values, values[1:]))


@pytest.mark.slow
def test_asymptote_overestimates_numeric_discord(ktm):
    # The closed form decays as (eta tau)^-3 but sits far above the computed
    # discord, which falls roughly as (eta tau)^-2 from a much smaller value.
    eta = 1e-2
    taus = (1e3, 1e4)
    numeric = [gaussian_discord(propagate(ktm, coherent_cov(), tau)) for tau in taus]
    formula = [asymptotic_ktm_discord(eta, tau) for tau in taus]
    assert 0.0 < numeric[1] < numeric[0]
    assert 0.0 < formula[1] < formula[0]
    assert all(n < 0.1 * f for n, f in zip(numeric, formula))


# ==================== trajectories of the models ====================

@pytest.mark.parametrize("sigma0", [coherent_cov(), squeezed_cov(0.5), squeezed_cov(1.0), squeezed_cov(2.0)])
def test_product_start_has_no_correlations(ktm, sigma0):
    series = correlation_series(evolve_series(ktm, sigma0, 10.0, 3, spacing="linear"))
    assert series.taus[0] == 0.0
    assert series.discord[0] == pytest.approx(0.0, abs=1e-10)
    assert series.mutual_information[0] == pytest.approx(0.0, abs=1e-10)


@pytest.mark.slow
@pytest.mark.parametrize("model", ["ktm", "dktm"])
def test_classical_channels_never_entangle(model, request):
    gen = request.getfixturevalue(model)
    series = correlation_series(evolve_series(gen, coherent_cov(), 1e3, 500, spacing="log"))
    assert np.all(series.ppt_nu_minus >= 1.0 - 1e-8)
    assert not series.entangled.any()
    assert np.all(series.discord < 1.0)




@pytest.mark.parametrize("alpha", [1e-3, 1e-2, 5e-2])
def test_dktm_with_small_alpha_never_entangles(alpha):
    gen = dktm_generators(ModelParams(eta=1e-2, alpha_tilde=alpha))
    series = correlation_series(evolve_series(gen, coherent_cov(), 1e3, 200, spacing="log"))
    assert np.all(series.ppt_nu_minus >= 1.0 - 1e-8)
    assert not series.entangled.any()


@pytest.mark.slow
def test_printed_cross_diffusion_entangles():
    gen = dktm_generators(ModelParams(eta=1e-2, alpha_tilde=0.1), d11="paper")
    series = correlation_series(evolve_series(gen, coherent_cov(), 1e3, 500, spacing="log"))
    assert series.entangled.any()
    assert np.min(series.ppt_nu_minus) < 1.0 - 1e-5
@pytest.mark.slow
def test_unitary_coupling_entangles(unitary):
    series = correlation_series(evolve_series(unitary, coherent_cov(), 1e3, 500, spacing="log"))
    assert np.min(series.ppt_nu_minus) < 1.0 - 1e-3
    assert series.entangled.any()


@pytest.mark.slow
def test_ktm_discord_rises_then_decays(ktm):
    series = correlation_series(evolve_series(ktm, coherent_cov(), 1e3, 500, spacing="log"))
    peak = peak_discord(series)
    assert series.taus[0] < peak.tau_star < series.taus[-1]
    assert series.discord[-1] < 0.5 * peak.d_star
    assert series.traces[-1] > series.traces[0]


@pytest.mark.slow
def test_first_maximum_ratio(ktm):
    series = correlation_series(evolve_series(ktm, coherent_cov(), 1e3, 500, spacing="log"))
    ratio = peak_discord(series).d_star / peak_mutual_information(series).d_star
    assert 0.3 <= ratio <= 0.7


def test_measured_side_and_branch_pass_through(dktm):
    traj = evolve_series(dktm, squeezed_cov(0.3), 100.0, 5, spacing="linear")
    series = correlation_series(traj, measured=1, branch="paper", max_workers=1)
    assert series.measured == 1
    assert series.branch == "paper"
    assert series.discord[-1] == pytest.approx(gaussian_discord(traj.sigmas[-1], measured=1, branch="paper"))


def test_correlation_failure_names_sample_time(ktm, monkeypatch):
    traj = evolve_series(ktm, coherent_cov(), 10.0, 5, spacing="linear")

    def degenerate_after_start(sigma, measured, branch):
        if np.trace(sigma) > 4.0 + 1e-12:
            raise NumericalDegeneracyError("Symplectic spectrum is degenerate", {"gap": 0.0})
        return correlation_record(sigma, measured, branch)

    monkeypatch.setattr(series_module, "correlation_record", degenerate_after_start)
    with pytest.raises(NumericalDegeneracyError, match="tau=2.5") as exc_info:
        correlation_series(traj, max_workers=1)
    assert exc_info.value.details == {"gap": 0.0, "tau": 2.5}
