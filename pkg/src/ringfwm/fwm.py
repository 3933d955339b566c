"""Four-wave-mixing power and pair-rate predictions.

Implements the stimulated and spontaneous idler powers of a critically
coupled ring driven on resonance, their ratio, and the characteristic
power hbar*omega_p^2 that sets the scale of that ratio. The ratio makes
the headline operation possible: predict the spontaneous (photon-pair)
output of a device from a purely classical stimulated measurement, with
no knowledge of gamma or the ring size.

All three resonances are approximated by the pump frequency and share
one Q and one group velocity. Validity: pump at or below ~2 mW on-chip,
above which thermo-optic saturation sets in and these formulas overshoot.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Optional

from . import units
from .errors import ConfigurationError, DomainError
from .ring import RingParams, enhancement_factor
from .units import Quantity

# Departure-from-critical-coupling warning threshold on the on-resonance
# transmission floor.
CRITICAL_COUPLING_TMIN_WARN = 0.05

# Documented validity ceiling for the pump power (thermo-optic onset).
THERMO_OPTIC_ONSET_W = 2e-3


@dataclass(frozen=True)
class FwmPrediction:
    """Bundle of predicted outputs for one operating point."""

    spontaneous_idler_power_w: float
    pair_rate_per_s: float
    stimulated_idler_power_w: Optional[float] = None
    ratio: Optional[float] = None
    pump_power_w: Optional[float] = None
    signal_power_w: Optional[float] = None
    ring: Optional[RingParams] = None

    def to_json_dict(self) -> dict:
        doc = {
            "spontaneous_idler_power_W": self.spontaneous_idler_power_w,
            "spontaneous_idler_power_pW": self.spontaneous_idler_power_w / 1e-12,
            "pair_rate_per_s": self.pair_rate_per_s,
        }
        if self.stimulated_idler_power_w is not None:
            doc["stimulated_idler_power_W"] = self.stimulated_idler_power_w
            doc["stimulated_idler_power_uW"] = self.stimulated_idler_power_w / 1e-6
        if self.ratio is not None:
            doc["spontaneous_to_stimulated_ratio"] = self.ratio
        if self.pump_power_w is not None:
            doc["pump_power_W"] = self.pump_power_w
        if self.signal_power_w is not None:
            doc["signal_power_W"] = self.signal_power_w
        if self.ring is not None:
            doc["ring"] = self.ring.to_json_dict()
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def _check_powers(**powers: Quantity) -> None:
    for name, p in powers.items():
        if p.in_si(units.POWER) < 0.0:
            raise DomainError(f"{name} must be nonnegative, got {p.magnitude} W")


def _require_gamma(ring: RingParams) -> Quantity:
    if ring.gamma_per_w_per_m is None:
        raise ConfigurationError(
            "ring has no nonlinear parameter gamma; fit or set it first")
    return ring.gamma()


def _warn_if_undercoupled(ring: RingParams) -> None:
    if ring.min_transmission > CRITICAL_COUPLING_TMIN_WARN:
        warnings.warn(
            f"on-resonance transmission {ring.min_transmission:.3f} exceeds "
            f"{CRITICAL_COUPLING_TMIN_WARN}; the ring departs from critical "
            "coupling and these predictions assume it",
            stacklevel=3)


def stimulated_idler_power(ring: RingParams, pump_power: Quantity,
                           signal_power: Quantity) -> Quantity:
    """Idler power from seeded mixing: (gamma 2 pi R)^2 F^4 P_s P_p^2,

    with F = Q v_g / (omega_p pi R) the resonant enhancement.
    """
    gamma = _require_gamma(ring)
    _check_powers(pump_power=pump_power, signal_power=signal_power)
    _warn_if_undercoupled(ring)
    f = units.dimensionless(enhancement_factor(ring))
    scale = (gamma * 2.0 * math.pi * ring.radius()) ** 2
    out = scale * f ** 4 * signal_power * pump_power ** 2
    out.in_si(units.POWER)  # mechanical dimension proof
    return out


def spontaneous_idler_power(ring: RingParams, pump_power: Quantity) -> Quantity:
    """Idler power from vacuum-seeded mixing:

    (gamma 2 pi R)^2 F^3 (hbar omega_p v_g / (4 pi R)) P_p^2.
    """
    gamma = _require_gamma(ring)
    _check_powers(pump_power=pump_power)
    _warn_if_undercoupled(ring)
    f = units.dimensionless(enhancement_factor(ring))
    scale = (gamma * 2.0 * math.pi * ring.radius()) ** 2
    vacuum_seed = (units.photon_energy(ring.pump_omega()) * ring.group_velocity()
                   / (4.0 * math.pi * ring.radius()))
    out = scale * f ** 3 * vacuum_seed * pump_power ** 2
    out.in_si(units.POWER)
    return out


def pair_generation_rate(ring: RingParams, pump_power: Quantity) -> Quantity:
    """Photon pairs per second: spontaneous idler power / (hbar omega_p).

    Pair rate equals the idler photon rate, since photons come in pairs.
    """
    p_sp = spontaneous_idler_power(ring, pump_power)
    rate = p_sp / units.photon_energy(ring.pump_omega())
    rate.in_si(units.RATE)
    return rate


def spontaneous_to_stimulated_ratio(q_factor: float, pump_omega: Quantity,
                                    signal_power: Quantity) -> float:
    """hbar omega_p^2 / (4 Q P_s): independent of ring size and gamma."""
    if q_factor <= 0.0:
        raise DomainError(f"Q must be positive, got {q_factor}")
    p_s = signal_power.in_si(units.POWER)
    if p_s <= 0.0:
        raise DomainError("signal power must be positive (ratio undefined at 0)")
    ratio = characteristic_power(pump_omega) / (4.0 * q_factor * signal_power)
    return ratio.in_si(units.DIMENSIONLESS)


def characteristic_power(pump_omega: Quantity) -> Quantity:
    """The natural power scale hbar omega_p^2 (about 160 uW near 1.55 um)."""
    w = pump_omega.in_si(units.ANGULAR_FREQUENCY)
    if w <= 0.0:
        raise DomainError(f"angular frequency must be positive, got {w}")
    out = units.HBAR_Q * pump_omega * pump_omega
    out.in_si(units.POWER)
    return out


def predict_spontaneous_from_measurement(
        measured_stimulated_idler: Quantity, q_factor: float,
        pump_omega: Quantity, signal_power: Quantity) -> FwmPrediction:
    """Spontaneous power and pair rate from a classical measurement alone.

    Multiplies the measured stimulated idler power by the
    spontaneous/stimulated ratio; needs only Q, the pump frequency, and
    the injected signal power. Valid at the pump power the stimulated
    measurement was taken at.
    """
    p_st = measured_stimulated_idler.in_si(units.POWER)
    if p_st < 0.0:
        raise DomainError(f"measured power must be nonnegative, got {p_st}")
    ratio = spontaneous_to_stimulated_ratio(q_factor, pump_omega, signal_power)
    p_sp = measured_stimulated_idler * ratio
    rate = p_sp / units.photon_energy(pump_omega)
    return FwmPrediction(
        spontaneous_idler_power_w=p_sp.in_si(units.POWER),
        pair_rate_per_s=rate.in_si(units.RATE),
        stimulated_idler_power_w=p_st,
        ratio=ratio,
        signal_power_w=signal_power.in_si(units.POWER),
    )


def predict(ring: RingParams, pump_power: Quantity,
            signal_power: Optional[Quantity] = None) -> FwmPrediction:
    """Full model-path prediction for one ring and operating point."""
    p_sp = spontaneous_idler_power(ring, pump_power)
    rate = p_sp / units.photon_energy(ring.pump_omega())
    p_st = None
    ratio = None
    if signal_power is not None:
        p_st = stimulated_idler_power(ring, pump_power, signal_power)
        if signal_power.in_si(units.POWER) > 0.0:
            ratio = spontaneous_to_stimulated_ratio(
                ring.q_factor, ring.pump_omega(), signal_power)
    return FwmPrediction(
        spontaneous_idler_power_w=p_sp.in_si(units.POWER),
        pair_rate_per_s=rate.in_si(units.RATE),
        stimulated_idler_power_w=(None if p_st is None
                                  else p_st.in_si(units.POWER)),
        ratio=ratio,
        pump_power_w=pump_power.in_si(units.POWER),
        signal_power_w=(None if signal_power is None
                        else signal_power.in_si(units.POWER)),
        ring=ring,
    )
