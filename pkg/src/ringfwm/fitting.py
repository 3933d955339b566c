"""Characterization fits: power calibration, Q extraction, gamma extraction,
power-law scaling checks, and the ratio-law verification.

All fitters are pure functions of their inputs. Pump powers above the
thermo-optic cutoff are excluded from every fit rather than modeled: the
saturation regime is a disturbance, not a subject here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import curve_fit

from . import units
from .errors import (DomainError, FitError, InsufficientSpanError, PairingError,
                     ValidationError)
from .fwm import spontaneous_to_stimulated_ratio
from .ring import RingParams, enhancement_factor

DEFAULT_PUMP_CUTOFF_W = 2e-3   # thermo-optic saturation onset, on-chip


@dataclass(frozen=True)
class CalibrationChain:
    """Losses between the instruments and the chip facets.

    Per-facet coupling loss is half the fiber-to-fiber insertion loss.
    Component losses are split by which arm of the setup they sit in;
    detector_scale converts a detector reading to the power at the
    detector (reading = detector_scale * power).
    """

    total_insertion_loss_db: float
    input_path_losses_db: dict = field(default_factory=dict)
    output_path_losses_db: dict = field(default_factory=dict)
    detector_scale: float = 1.0

    def __post_init__(self):
        if self.total_insertion_loss_db < 0.0:
            raise DomainError("insertion loss must be >= 0 dB")
        for name, db in {**self.input_path_losses_db,
                         **self.output_path_losses_db}.items():
            if db < 0.0:
                raise DomainError(f"component loss {name!r} must be >= 0 dB")
        if not self.detector_scale > 0.0:
            raise DomainError("detector scale must be positive")

    @property
    def per_facet_loss_db(self) -> float:
        return self.total_insertion_loss_db / 2.0


def calibrate_to_chip(raw_w: float, chain: CalibrationChain,
                      direction: str) -> float:
    """Rescale a measured power to its on-chip value.

    direction "into_chip": laser power attenuated by the input arm and
    one facet. direction "out_of_chip": detected power scaled back up by
    one facet and the output arm to recover the power generated on chip.
    """
    if raw_w < 0.0:
        raise DomainError(f"power must be nonnegative, got {raw_w}")
    if direction == "into_chip":
        loss_db = chain.per_facet_loss_db + sum(chain.input_path_losses_db.values())
        return raw_w * 10.0 ** (-loss_db / 10.0)
    if direction == "out_of_chip":
        loss_db = chain.per_facet_loss_db + sum(chain.output_path_losses_db.values())
        return (raw_w / chain.detector_scale) * 10.0 ** (+loss_db / 10.0)
    raise DomainError(f"unknown direction {direction!r}")


@dataclass(frozen=True)
class SweepRecord:
    """One calibrated operating point. signal_w is None in spontaneous runs."""

    pump_w: float
    idler_w: float
    signal_w: Optional[float] = None

    def __post_init__(self):
        if self.pump_w < 0.0 or self.idler_w < 0.0:
            raise ValidationError("powers must be nonnegative")
        if self.signal_w is not None and self.signal_w < 0.0:
            raise ValidationError("signal power must be nonnegative")


@dataclass(frozen=True)
class SweepDataset:
    """Series of (P_p, [P_s], measured idler) points for one ring.

    A dataset is either stimulated (every record has a signal power) or
    spontaneous (no record does); mixing is rejected.
    """

    ring_id: str
    records: tuple
    powers_are_on_chip: bool
    pump_cutoff_w: float = DEFAULT_PUMP_CUTOFF_W

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if not self.records:
            raise ValidationError("dataset has no records")
        has_signal = [r.signal_w is not None for r in self.records]
        if any(has_signal) and not all(has_signal):
            raise ValidationError(
                "dataset mixes stimulated and spontaneous records")
        if self.pump_cutoff_w <= 0.0:
            raise ValidationError("pump cutoff must be positive")

    @property
    def is_stimulated(self) -> bool:
        return self.records[0].signal_w is not None

    def below_cutoff(self) -> tuple:
        return tuple(r for r in self.records if r.pump_w <= self.pump_cutoff_w)


@dataclass(frozen=True)
class FitResult:
    """A fitted parameter with its one-sigma uncertainty."""

    value: float
    sigma: float
    residual_norm: float
    n_points_used: int
    n_points_excluded: int = 0

    def __post_init__(self):
        if self.sigma < 0.0:
            raise ValidationError("uncertainty must be >= 0")

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "sigma": self.sigma,
            "residual_norm": self.residual_norm,
            "n_points_used": self.n_points_used,
            "n_points_excluded": self.n_points_excluded,
        }


# -- Lorentzian Q extraction -------------------------------------------------

def _lorentzian_dip(lam, lam0, q, t_min):
    x = 2.0 * q * (lam - lam0) / lam0
    return 1.0 - (1.0 - t_min) / (1.0 + x * x)


@dataclass(frozen=True)
class LorentzianFit:
    center_m: FitResult
    q_factor: FitResult
    min_transmission: FitResult

    def to_json_dict(self) -> dict:
        return {
            "center_nm": {**self.center_m.to_json_dict(),
                          "value": self.center_m.value / 1e-9,
                          "sigma": self.center_m.sigma / 1e-9},
            "q_factor": self.q_factor.to_json_dict(),
            "min_transmission": self.min_transmission.to_json_dict(),
        }


def fit_lorentzian(wavelengths_m: Sequence[float],
                   transmissions: Sequence[float]) -> LorentzianFit:
    """Least-squares fit of a single Lorentzian dip to a transmission trace.

    Needs at least 7 samples and a trace at least half a linewidth wide;
    a flat trace (no resolvable dip) is a fit error.
    """
    lam = np.asarray(wavelengths_m, dtype=float)
    t = np.asarray(transmissions, dtype=float)
    if lam.size != t.size:
        raise ValidationError("wavelength and transmission arrays differ in length")
    if lam.size < 7:
        raise ValidationError(f"need >= 7 samples, got {lam.size}")
    if np.any((t < 0.0) | (t > 1.0)):
        raise ValidationError("transmissions must lie in [0, 1]")

    depth = 1.0 - t.min()
    if depth < 1e-6:
        raise FitError("trace is flat: no resonance dip to fit")

    lam0_guess = float(lam[np.argmin(t)])
    tmin_guess = float(t.min())
    # half-depth width from the outermost crossings around the minimum
    half_level = 1.0 - depth / 2.0
    below = lam[t <= half_level]
    width_guess = float(below.max() - below.min()) if below.size >= 2 else \
        (lam.max() - lam.min()) / 4.0
    if width_guess <= 0.0:
        width_guess = (lam.max() - lam.min()) / 4.0
    q_guess = max(lam0_guess / width_guess, 2.0)

    span = float(lam.max() - lam.min())
    if span < 0.5 * width_guess:
        raise InsufficientSpanError(
            f"trace span {span:g} m is narrower than half the estimated "
            f"linewidth {width_guess:g} m")

    try:
        popt, pcov = curve_fit(
            _lorentzian_dip, lam, t,
            p0=[lam0_guess, q_guess, tmin_guess],
            bounds=([lam.min(), 1.0, 0.0], [lam.max(), np.inf, 1.0]),
            maxfev=20000)
    except RuntimeError as exc:
        raise FitError(f"Lorentzian fit did not converge: {exc}") from exc

    fitted_width = popt[0] / popt[1]
    if span < 0.5 * fitted_width:
        raise InsufficientSpanError(
            f"trace span {span:g} m covers less than half the fitted "
            f"linewidth {fitted_width:g} m")

    resid = t - _lorentzian_dip(lam, *popt)
    rnorm = float(np.linalg.norm(resid))
    perr = np.sqrt(np.abs(np.diag(pcov)))
    if not np.all(np.isfinite(perr)):
        raise FitError("Lorentzian fit is degenerate (unbounded uncertainty)")
    if perr[1] >= abs(popt[1]):
        raise FitError("Q uncertainty spans the estimate; trace unusable")

    n = int(lam.size)
    return LorentzianFit(
        center_m=FitResult(float(popt[0]), float(perr[0]), rnorm, n),
        q_factor=FitResult(float(popt[1]), float(perr[1]), rnorm, n),
        min_transmission=FitResult(float(popt[2]), float(perr[2]), rnorm, n),
    )


# -- gamma extraction --------------------------------------------------------

def fit_gamma(sweep: SweepDataset, ring: RingParams,
              calibration: Optional[CalibrationChain] = None) -> FitResult:
    """Extract gamma from a stimulated sweep.

    The stimulated idler power is gamma^2 times a known factor of
    (R, Q, n_eff, lambda_p, P_s, P_p^2), so the fit is a closed-form
    linear scale factor in gamma^2; gamma is its square root. Points
    above the pump cutoff (thermo-optic regime) are excluded.
    """
    if not sweep.is_stimulated:
        raise ValidationError("gamma fit needs a stimulated dataset")
    records = sweep.records
    if not sweep.powers_are_on_chip:
        if calibration is None:
            raise ValidationError(
                "dataset is not on-chip calibrated; a CalibrationChain is required")
        records = tuple(
            SweepRecord(
                pump_w=calibrate_to_chip(r.pump_w, calibration, "into_chip"),
                signal_w=calibrate_to_chip(r.signal_w, calibration, "into_chip"),
                idler_w=calibrate_to_chip(r.idler_w, calibration, "out_of_chip"))
            for r in records)

    usable = [r for r in records if r.pump_w <= sweep.pump_cutoff_w]
    excluded = len(records) - len(usable)
    if len(usable) < 3:
        raise FitError(
            f"only {len(usable)} usable records below the {sweep.pump_cutoff_w} W "
            "pump cutoff; need >= 3")

    two_pi_r = 2.0 * math.pi * ring.radius_m
    factor = two_pi_r ** 2 * enhancement_factor(ring) ** 4
    x = np.array([factor * r.signal_w * r.pump_w ** 2 for r in usable])
    y = np.array([r.idler_w for r in usable])
    sxx = float(np.dot(x, x))
    if sxx == 0.0:
        raise FitError("all usable records have zero drive power")
    scale = float(np.dot(x, y)) / sxx  # least squares through the origin
    if scale <= 0.0:
        raise FitError(f"fitted gamma^2 is nonpositive ({scale:g}): data "
                       "inconsistent with the stimulated model")
    resid = y - scale * x
    ssr = float(np.dot(resid, resid))
    dof = max(len(usable) - 1, 1)
    sigma_scale = math.sqrt(ssr / dof / sxx)
    gamma = math.sqrt(scale)
    sigma_gamma = sigma_scale / (2.0 * gamma)
    return FitResult(gamma, sigma_gamma, math.sqrt(ssr),
                     n_points_used=len(usable), n_points_excluded=excluded)


# -- power-law regression ------------------------------------------------------

@dataclass(frozen=True)
class PowerLawFit:
    exponent: FitResult
    log_prefactor: float
    expected_exponent: Optional[float] = None
    consistent_at_2_sigma: Optional[bool] = None

    def to_json_dict(self) -> dict:
        doc = {"exponent": self.exponent.to_json_dict(),
               "log_prefactor": self.log_prefactor}
        if self.expected_exponent is not None:
            doc["expected_exponent"] = self.expected_exponent
            doc["consistent_at_2_sigma"] = self.consistent_at_2_sigma
        return doc


def fit_power_law(x: Sequence[float], y: Sequence[float],
                  expected_exponent: Optional[float] = None) -> PowerLawFit:
    """Exponent of y ~ x^p by linear regression in log-log space."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.size != ya.size:
        raise ValidationError("x and y differ in length")
    if xa.size < 3:
        raise ValidationError(f"need >= 3 points, got {xa.size}")
    if np.any(xa <= 0.0) or np.any(ya <= 0.0):
        raise DomainError("power-law fit requires strictly positive x and y")

    lx = np.log(xa)
    ly = np.log(ya)
    lxc = lx - lx.mean()
    sxx = float(np.dot(lxc, lxc))
    if sxx == 0.0:
        raise DomainError("all x values identical; exponent undetermined")
    slope = float(np.dot(lxc, ly)) / sxx
    intercept = float(ly.mean() - slope * lx.mean())
    resid = ly - (slope * lx + intercept)
    ssr = float(np.dot(resid, resid))
    dof = xa.size - 2
    sigma = math.sqrt(ssr / dof / sxx) if dof > 0 else 0.0

    consistent = None
    if expected_exponent is not None:
        consistent = abs(slope - expected_exponent) <= 2.0 * sigma + 1e-9
    return PowerLawFit(
        exponent=FitResult(slope, sigma, math.sqrt(ssr), int(xa.size)),
        log_prefactor=intercept,
        expected_exponent=expected_exponent,
        consistent_at_2_sigma=consistent,
    )


# -- ratio-law verification ----------------------------------------------------

@dataclass(frozen=True)
class RatioLawEntry:
    pump_w: float
    signal_w: float
    measured_ratio: float
    predicted_ratio: float
    relative_deviation: float


@dataclass(frozen=True)
class RatioLawReport:
    ring_id: str
    entries: tuple
    max_relative_deviation: float
    ratio_spread: float   # std/mean of the measured ratios across pump powers

    def to_json_dict(self) -> dict:
        return {
            "ring_id": self.ring_id,
            "entries": [
                {"pump_power_W": e.pump_w,
                 "signal_power_W": e.signal_w,
                 "measured_ratio": e.measured_ratio,
                 "predicted_ratio": e.predicted_ratio,
                 "relative_deviation": e.relative_deviation}
                for e in self.entries],
            "max_relative_deviation": self.max_relative_deviation,
            "measured_ratio_spread": self.ratio_spread,
        }


def verify_ratio_law(stim: SweepDataset, spont: SweepDataset,
                     ring: RingParams,
                     pump_match_rtol: float = 1e-9) -> RatioLawReport:
    """Compare measured spontaneous/stimulated ratios to the prediction
    hbar omega_p^2 / (4 Q P_s) at every shared pump power.

    Also reports the spread of the measured ratio across pump powers,
    which should vanish: the ratio is pump-power independent.
    """
    if not stim.is_stimulated:
        raise ValidationError("first dataset must be stimulated")
    if spont.is_stimulated:
        raise ValidationError("second dataset must be spontaneous")

    omega_p = ring.pump_omega()
    entries = []
    for rs in stim.below_cutoff():
        for rp in spont.below_cutoff():
            if rp.pump_w == 0.0 or rs.pump_w == 0.0:
                continue
            if abs(rs.pump_w - rp.pump_w) > pump_match_rtol * rs.pump_w:
                continue
            if rs.idler_w == 0.0 or rs.signal_w == 0.0:
                continue
            measured = rp.idler_w / rs.idler_w
            predicted = spontaneous_to_stimulated_ratio(
                ring.q_factor, omega_p, units.watts(rs.signal_w))
            entries.append(RatioLawEntry(
                pump_w=rs.pump_w,
                signal_w=rs.signal_w,
                measured_ratio=measured,
                predicted_ratio=predicted,
                relative_deviation=abs(measured - predicted) / predicted))
            break
    if not entries:
        raise PairingError("the two sweeps share no usable pump powers")

    measured = np.array([e.measured_ratio for e in entries])
    spread = float(measured.std() / measured.mean()) if len(entries) > 1 else 0.0
    return RatioLawReport(
        ring_id=stim.ring_id,
        entries=tuple(entries),
        max_relative_deviation=max(e.relative_deviation for e in entries),
        ratio_spread=spread,
    )
