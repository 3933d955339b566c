import math

import numpy as np
import pytest

from ringfwm import units
from ringfwm.errors import (DomainError, FitError, InsufficientSpanError,
                            PairingError, ValidationError)
from ringfwm.fitting import (CalibrationChain, SweepDataset, SweepRecord,
                             calibrate_to_chip, fit_gamma, fit_lorentzian,
                             fit_power_law, verify_ratio_law)
from ringfwm.fwm import spontaneous_idler_power, stimulated_idler_power
from ringfwm.ring import RingParams, transmission

# frozen by scripts/oracle.py
ON_CHIP_1MW_7DB = 4.4668359215096312e-4  # 1 mW after the 3.5 dB facet


def _stim_sweep(ring, pump_mws, signal_uw=200.0, noise=None, rng=None,
                cutoff_w=2e-3):
    records = []
    for mw in pump_mws:
        pump = units.milliwatts(mw)
        signal = units.microwatts(signal_uw)
        idler = stimulated_idler_power(ring, pump, signal).magnitude
        if noise is not None:
            idler *= 1.0 + noise * rng.standard_normal()
        records.append(SweepRecord(pump_w=pump.magnitude, idler_w=max(idler, 0.0),
                                   signal_w=signal.magnitude))
    return SweepDataset(ring_id="r5", records=records, powers_are_on_chip=True,
                        pump_cutoff_w=cutoff_w)


def _spont_sweep(ring, pump_mws, cutoff_w=2e-3):
    records = [SweepRecord(
        pump_w=mw * 1e-3,
        idler_w=spontaneous_idler_power(ring, units.milliwatts(mw)).magnitude)
        for mw in pump_mws]
    return SweepDataset(ring_id="r5", records=records, powers_are_on_chip=True,
                        pump_cutoff_w=cutoff_w)


class TestCalibration:
    def test_facet_loss_is_half_insertion(self):
        chain = CalibrationChain(total_insertion_loss_db=7.0)
        assert chain.per_facet_loss_db == 3.5
        assert calibrate_to_chip(1e-3, chain, "into_chip") == pytest.approx(
            ON_CHIP_1MW_7DB, rel=1e-12)

    def test_zero_db_identity(self):
        chain = CalibrationChain(total_insertion_loss_db=0.0)
        assert calibrate_to_chip(1e-3, chain, "into_chip") == 1e-3
        assert calibrate_to_chip(1e-3, chain, "out_of_chip") == 1e-3

    def test_roundtrip_identity(self):
        chain = CalibrationChain(total_insertion_loss_db=7.0,
                                 input_path_losses_db={"filter": 1.2},
                                 output_path_losses_db={"filter": 1.2})
        down = calibrate_to_chip(1e-3, chain, "into_chip")
        assert calibrate_to_chip(down, chain, "out_of_chip") == pytest.approx(
            1e-3, rel=1e-12)

    def test_detector_scale(self):
        chain = CalibrationChain(total_insertion_loss_db=0.0, detector_scale=2.0)
        assert calibrate_to_chip(2e-6, chain, "out_of_chip") == pytest.approx(1e-6)

    def test_negative_loss_rejected(self):
        with pytest.raises(DomainError):
            CalibrationChain(total_insertion_loss_db=-1.0)

    def test_unknown_direction_rejected(self):
        chain = CalibrationChain(total_insertion_loss_db=7.0)
        with pytest.raises(DomainError):
            calibrate_to_chip(1e-3, chain, "sideways")


class TestSweepDataset:
    def test_mixed_records_rejected(self):
        with pytest.raises(ValidationError, match="mixes"):
            SweepDataset(ring_id="x", records=[
                SweepRecord(pump_w=1e-3, idler_w=1e-12, signal_w=2e-4),
                SweepRecord(pump_w=2e-3, idler_w=1e-12),
            ], powers_are_on_chip=True)

    def test_negative_power_rejected(self):
        with pytest.raises(ValidationError):
            SweepRecord(pump_w=-1e-3, idler_w=1e-12)

    def test_below_cutoff_filtering(self, ring):
        sweep = _stim_sweep(ring, [0.5, 1.0, 3.0])
        assert len(sweep.below_cutoff()) == 2


class TestFitLorentzian:
    def _trace(self, ring, n=201, half_widths=8.0, noise=None, rng=None):
        lam0 = ring.pump_wavelength_m
        width = lam0 / ring.q_factor
        lams = np.linspace(lam0 - half_widths * width / 2,
                           lam0 + half_widths * width / 2, n)
        ts = np.array([transmission(ring, units.meters(l)) for l in lams])
        if noise is not None:
            ts = np.clip(ts * (1.0 + noise * rng.standard_normal(n)), 0.0, 1.0)
        return lams, ts

    def test_noiseless_roundtrip(self, ring):
        lams, ts = self._trace(ring)
        fit = fit_lorentzian(lams, ts)
        assert fit.center_m.value == pytest.approx(1558.5e-9, rel=1e-6)
        assert fit.q_factor.value == pytest.approx(7900.0, rel=1e-6)
        assert fit.min_transmission.value == pytest.approx(0.01, rel=1e-4)

    def test_one_percent_noise_recovers_q_within_one_percent(self, ring):
        rng = np.random.default_rng(42)
        lams, ts = self._trace(ring, n=401, noise=0.01, rng=rng)
        fit = fit_lorentzian(lams, ts)
        assert fit.q_factor.value == pytest.approx(7900.0, rel=0.01)
        assert fit.q_factor.sigma > 0

    def test_flat_trace_rejected(self):
        lams = np.linspace(1558e-9, 1559e-9, 51)
        with pytest.raises(FitError):
            fit_lorentzian(lams, np.ones_like(lams))

    def test_too_few_samples_rejected(self):
        lams = np.linspace(1558e-9, 1559e-9, 5)
        with pytest.raises(ValidationError):
            fit_lorentzian(lams, np.full(5, 0.5))

    def test_narrow_span_rejected(self, ring):
        # trace much narrower than the linewidth: flanks barely move
        lam0 = ring.pump_wavelength_m
        width = lam0 / ring.q_factor
        lams = np.linspace(lam0 - width / 20, lam0 + width / 20, 31)
        ts = [transmission(ring, units.meters(l)) for l in lams]
        with pytest.raises((InsufficientSpanError, FitError)):
            fit_lorentzian(lams, ts)

    def test_out_of_range_transmission_rejected(self):
        lams = np.linspace(1558e-9, 1559e-9, 9)
        ts = np.full(9, 0.5)
        ts[3] = 1.5
        with pytest.raises(ValidationError):
            fit_lorentzian(lams, ts)


class TestFitGamma:
    def test_noiseless_roundtrip(self, ring):
        sweep = _stim_sweep(ring, np.linspace(0.1, 1.0, 8))
        fit = fit_gamma(sweep, ring)
        assert fit.value == pytest.approx(190.0, rel=1e-6)
        assert fit.n_points_used == 8
        assert fit.n_points_excluded == 0

    def test_ten_percent_noise_within_five_percent(self, ring):
        rng = np.random.default_rng(7)
        sweep = _stim_sweep(ring, np.linspace(0.1, 1.0, 12), noise=0.10, rng=rng)
        fit = fit_gamma(sweep, ring)
        assert fit.value == pytest.approx(190.0, rel=0.05)
        assert fit.sigma > 0

    def test_cutoff_exclusion_is_bit_identical(self, ring):
        low = list(np.linspace(0.1, 1.0, 8))
        sweep_clean = _stim_sweep(ring, low)
        # points above 2 mW with fake saturation: measured power clipped
        records = list(sweep_clean.records) + [
            SweepRecord(pump_w=3e-3, signal_w=2e-4, idler_w=1e-7)]
        sweep_dirty = SweepDataset(ring_id="r5", records=records,
                                   powers_are_on_chip=True)
        fit_clean = fit_gamma(sweep_clean, ring)
        fit_dirty = fit_gamma(sweep_dirty, ring)
        assert fit_dirty.value == fit_clean.value
        assert fit_dirty.n_points_excluded == 1

    def test_all_points_above_cutoff_rejected(self, ring):
        sweep = _stim_sweep(ring, [3.0, 4.0, 5.0])
        with pytest.raises(FitError, match="cutoff"):
            fit_gamma(sweep, ring)

    def test_spontaneous_dataset_rejected(self, ring):
        sweep = _spont_sweep(ring, [0.2, 0.5, 1.0])
        with pytest.raises(ValidationError):
            fit_gamma(sweep, ring)

    def test_calibration_rescaling_invariance(self, ring):
        # declaring +X dB on the detected idler and in the chain leaves gamma put
        sweep_chip = _stim_sweep(ring, np.linspace(0.1, 1.0, 8))
        chain = CalibrationChain(total_insertion_loss_db=7.0)
        records_fiber = [SweepRecord(
            pump_w=r.pump_w / 10 ** (-3.5 / 10.0),
            signal_w=r.signal_w / 10 ** (-3.5 / 10.0),
            idler_w=r.idler_w * 10 ** (-3.5 / 10.0))
            for r in sweep_chip.records]
        sweep_fiber = SweepDataset(ring_id="r5", records=records_fiber,
                                   powers_are_on_chip=False)
        fit_chip = fit_gamma(sweep_chip, ring)
        fit_fiber = fit_gamma(sweep_fiber, ring, calibration=chain)
        assert fit_fiber.value == pytest.approx(fit_chip.value, rel=1e-9)

    def test_uncalibrated_fiber_powers_need_chain(self, ring):
        sweep = SweepDataset(
            ring_id="r5",
            records=_stim_sweep(ring, [0.2, 0.5, 1.0]).records,
            powers_are_on_chip=False)
        with pytest.raises(ValidationError, match="CalibrationChain"):
            fit_gamma(sweep, ring)


class TestFitPowerLaw:
    def test_exact_quadratic(self):
        x = np.array([1.0, 2.0, 3.0, 5.0])
        fit = fit_power_law(x, 7 * x ** 2, expected_exponent=2.0)
        assert fit.exponent.value == pytest.approx(2.0, abs=1e-9)
        assert fit.consistent_at_2_sigma

    def test_radius_scaling_from_model(self):
        radii = [5e-6, 10e-6, 20e-6, 30e-6]
        powers = [spontaneous_idler_power(
            RingParams(radius_m=r, q_factor=7900.0, n_eff=2.47,
                       pump_wavelength_m=1558.5e-9, gamma_per_w_per_m=190.0),
            units.milliwatts(1)).magnitude for r in radii]
        fit = fit_power_law(radii, powers, expected_exponent=-2.0)
        assert fit.exponent.value == pytest.approx(-2.0, abs=1e-9)

    def test_noisy_coverage(self):
        # 2-sigma band covers the true exponent in >= 90% of seeded trials
        x = np.geomspace(1.0, 30.0, 10)
        hits = 0
        trials = 100
        for seed in range(trials):
            rng = np.random.default_rng(seed)
            y = 3.0 * x ** -2 * (1.0 + 0.1 * rng.standard_normal(x.size))
            fit = fit_power_law(x, np.abs(y), expected_exponent=-2.0)
            hits += fit.consistent_at_2_sigma
        assert hits >= 90

    def test_prefactor_invariance(self):
        x = np.array([1.0, 2.0, 4.0, 8.0])
        y = x ** 1.7
        a = fit_power_law(x, y).exponent.value
        b = fit_power_law(x, 1234.5 * y).exponent.value
        assert a == pytest.approx(b, rel=1e-12)

    def test_nonpositive_rejected(self):
        with pytest.raises(DomainError):
            fit_power_law([1.0, 2.0, 3.0], [1.0, -2.0, 3.0])

    def test_too_few_points_rejected(self):
        with pytest.raises(ValidationError):
            fit_power_law([1.0, 2.0], [1.0, 2.0])


class TestVerifyRatioLaw:
    def test_synthetic_identity(self, ring):
        pumps = [0.12, 0.3, 0.6, 1.0]
        report = verify_ratio_law(_stim_sweep(ring, pumps),
                                  _spont_sweep(ring, pumps), ring)
        assert report.max_relative_deviation < 1e-12
        assert report.ratio_spread < 1e-12
        assert len(report.entries) == 4

    def test_predicted_ratio_value(self, ring):
        pumps = [0.5, 1.0, 1.5]
        report = verify_ratio_law(_stim_sweep(ring, pumps),
                                  _spont_sweep(ring, pumps), ring)
        assert report.entries[0].predicted_ratio == pytest.approx(
            2.4375111564742255e-5, rel=1e-12)

    def test_noisy_data_within_twenty_percent(self, ring):
        rng = np.random.default_rng(0)
        pumps = [0.12, 0.3, 0.6, 1.0]
        stim = _stim_sweep(ring, pumps, noise=0.10, rng=rng)
        spont_records = [SweepRecord(
            pump_w=r.pump_w,
            idler_w=r.idler_w * (1.0 + 0.1 * rng.standard_normal()))
            for r in _spont_sweep(ring, pumps).records]
        spont = SweepDataset(ring_id="r5", records=spont_records,
                             powers_are_on_chip=True)
        report = verify_ratio_law(stim, spont, ring)
        assert report.max_relative_deviation < 0.20

    def test_no_common_pump_powers(self, ring):
        with pytest.raises(PairingError):
            verify_ratio_law(_stim_sweep(ring, [0.1, 0.2, 0.3]),
                             _spont_sweep(ring, [0.4, 0.5, 0.6]), ring)

    def test_swapped_datasets_rejected(self, ring):
        pumps = [0.5, 1.0, 1.5]
        with pytest.raises(ValidationError):
            verify_ratio_law(_spont_sweep(ring, pumps),
                             _stim_sweep(ring, pumps), ring)
