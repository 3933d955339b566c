"""Geometric and spectral model of a bus-coupled micro-ring.

Covers the resonance comb, free spectral range, the Lorentzian
transmission dip of a (near-)critically-coupled ring, and the
dimensionless field-enhancement factor that the mixing formulas share.

Conventions: the group velocity is taken as c/n_eff with a single
effective index for all three resonances (no dispersion), and the
transmission at any wavelength uses only the nearest comb resonance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from . import units
from .errors import DomainError, ValidationError
from .units import Quantity


@dataclass(frozen=True)
class RingParams:
    """Physical description of one ring. All stored values are SI."""

    radius_m: float
    q_factor: float
    n_eff: float
    pump_wavelength_m: float
    gamma_per_w_per_m: Optional[float] = None   # None until fitted
    min_transmission: float = 0.0

    def __post_init__(self):
        if not (self.radius_m > 0.0 and math.isfinite(self.radius_m)):
            raise DomainError(f"radius must be positive, got {self.radius_m}")
        if not self.q_factor > 1.0:
            raise DomainError(f"Q must exceed 1, got {self.q_factor}")
        if not self.n_eff >= 1.0:
            raise DomainError(f"n_eff must be >= 1, got {self.n_eff}")
        if not self.pump_wavelength_m > 0.0:
            raise DomainError(
                f"pump wavelength must be positive, got {self.pump_wavelength_m}")
        if self.gamma_per_w_per_m is not None and self.gamma_per_w_per_m < 0.0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma_per_w_per_m}")
        if not 0.0 <= self.min_transmission <= 1.0:
            raise DomainError(
                f"min transmission must be in [0, 1], got {self.min_transmission}")

    # -- derived quantities ------------------------------------------------

    def radius(self) -> Quantity:
        return units.meters(self.radius_m)

    def pump_wavelength(self) -> Quantity:
        return units.meters(self.pump_wavelength_m)

    def pump_omega(self) -> Quantity:
        return units.wavelength_to_angular_frequency(self.pump_wavelength())

    def group_velocity(self) -> Quantity:
        """v_g = c/n_eff (phase-index convention, kept for reproducibility)."""
        return units.C_Q / self.n_eff

    def gamma(self) -> Quantity:
        if self.gamma_per_w_per_m is None:
            raise DomainError("gamma has not been set or fitted for this ring")
        return units.per_watt_per_meter(self.gamma_per_w_per_m)

    def with_gamma(self, gamma_per_w_per_m: float) -> "RingParams":
        return replace(self, gamma_per_w_per_m=gamma_per_w_per_m)

    # -- JSON (keys fixed by the on-disk schema) ----------------------------

    def to_json_dict(self) -> dict:
        doc = {
            "radius_um": self.radius_m / 1e-6,
            "q_factor": self.q_factor,
            "n_eff": self.n_eff,
            "pump_wavelength_nm": self.pump_wavelength_m / 1e-9,
            "min_transmission": self.min_transmission,
        }
        if self.gamma_per_w_per_m is not None:
            doc["gamma_per_W_per_m"] = self.gamma_per_w_per_m
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "RingParams":
        required = {"radius_um", "q_factor", "n_eff", "pump_wavelength_nm"}
        missing = required - doc.keys()
        if missing:
            raise ValidationError(
                f"ring JSON missing fields: {', '.join(sorted(missing))}")
        try:
            return cls(
                radius_m=float(doc["radius_um"]) * 1e-6,
                q_factor=float(doc["q_factor"]),
                n_eff=float(doc["n_eff"]),
                pump_wavelength_m=float(doc["pump_wavelength_nm"]) * 1e-9,
                gamma_per_w_per_m=(float(doc["gamma_per_W_per_m"])
                                   if "gamma_per_W_per_m" in doc else None),
                min_transmission=float(doc.get("min_transmission", 0.0)),
            )
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"ring JSON field invalid: {exc}") from exc

    @classmethod
    def from_json_file(cls, path) -> "RingParams":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))

    def to_json_file(self, path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8")


@dataclass(frozen=True)
class ResonanceTriplet:
    """Signal/pump/idler wavelengths, equally spaced in frequency.

    The signal is the lowest-energy (longest-wavelength) resonance:
    lambda_s > lambda_p > lambda_i, and omega_s + omega_i = 2 omega_p.
    """

    signal_wavelength_m: float
    pump_wavelength_m: float
    idler_wavelength_m: float
    neighbor_order: int

    def __post_init__(self):
        if self.neighbor_order < 1:
            raise DomainError("neighbor order must be >= 1")
        if not (self.signal_wavelength_m > self.pump_wavelength_m
                > self.idler_wavelength_m > 0.0):
            raise DomainError("expected lambda_s > lambda_p > lambda_i > 0")
        w_s = 2 * math.pi * units.SPEED_OF_LIGHT / self.signal_wavelength_m
        w_p = 2 * math.pi * units.SPEED_OF_LIGHT / self.pump_wavelength_m
        w_i = 2 * math.pi * units.SPEED_OF_LIGHT / self.idler_wavelength_m
        if abs(w_s + w_i - 2 * w_p) > 1e-9 * (2 * w_p):
            raise DomainError(
                "triplet violates energy conservation: omega_s + omega_i != 2 omega_p")


def free_spectral_range(ring: RingParams) -> Quantity:
    """Angular-frequency spacing between adjacent resonances: v_g / R.

    The equivalent wavelength spacing near the pump is
    lambda_p^2 * FSR / (2 pi c).
    """
    return ring.group_velocity() / ring.radius()


def fsr_wavelength_spacing(ring: RingParams) -> Quantity:
    """FSR expressed as a wavelength gap near the pump resonance."""
    fsr = free_spectral_range(ring)
    lam = ring.pump_wavelength()
    return lam * lam * fsr / (2.0 * math.pi * units.C_Q)


def resonance_comb(ring: RingParams, span_min: Quantity, span_max: Quantity) -> list:
    """Resonance wavelengths inside [span_min, span_max], pump included.

    The comb is exactly equally spaced in angular frequency; members are
    returned as wavelength Quantities in increasing order.
    """
    lo = span_min.in_si(units.LENGTH)
    hi = span_max.in_si(units.LENGTH)
    if hi < lo:
        return []
    lam_p = ring.pump_wavelength_m
    if not lo <= lam_p <= hi:
        raise DomainError("span must contain the pump wavelength")
    w_p = ring.pump_omega().magnitude
    dw = free_spectral_range(ring).magnitude
    two_pi_c = 2 * math.pi * units.SPEED_OF_LIGHT

    out = []
    # lower frequencies -> longer wavelengths (walk down until past span)
    k = 0
    while True:
        w = w_p - k * dw
        if w <= 0.0:
            break
        lam = two_pi_c / w
        if lam > hi:
            break
        out.append(lam)
        k += 1
    k = 1
    while True:
        lam = two_pi_c / (w_p + k * dw)
        if lam < lo:
            break
        out.append(lam)
        k += 1
    out.sort()
    return [units.meters(lam) for lam in out]


def select_triplet(ring: RingParams, m: int) -> ResonanceTriplet:
    """Triplet at the m-th neighbors: omega_s,i = omega_p -/+ m * FSR."""
    if m < 1:
        raise DomainError("neighbor order must be >= 1 (degenerate FWM not modeled)")
    w_p = ring.pump_omega().magnitude
    dw = free_spectral_range(ring).magnitude
    w_s = w_p - m * dw
    w_i = w_p + m * dw
    if w_s <= 0.0:
        raise DomainError(f"neighbor order {m} walks past zero frequency")
    two_pi_c = 2 * math.pi * units.SPEED_OF_LIGHT
    return ResonanceTriplet(
        signal_wavelength_m=two_pi_c / w_s,
        pump_wavelength_m=ring.pump_wavelength_m,
        idler_wavelength_m=two_pi_c / w_i,
        neighbor_order=m,
    )


def transmission(ring: RingParams, wavelength: Quantity) -> float:
    """Bus transmission at a wavelength: Lorentzian dip on the nearest resonance.

    T(lambda) = 1 - (1 - T_min) / (1 + (2 Q (lambda - lambda_0)/lambda_0)^2),
    so T(lambda_0) = T_min and the full width at half depth is lambda_0 / Q.
    """
    lam = wavelength.in_si(units.LENGTH)
    if lam <= 0.0:
        raise DomainError(f"wavelength must be positive, got {lam}")
    lam0 = _nearest_resonance(ring, lam)
    x = 2.0 * ring.q_factor * (lam - lam0) / lam0
    return 1.0 - (1.0 - ring.min_transmission) / (1.0 + x * x)


def _nearest_resonance(ring: RingParams, lam: float) -> float:
    """Comb wavelength closest to lam (comb equally spaced in frequency)."""
    w = 2 * math.pi * units.SPEED_OF_LIGHT / lam
    w_p = ring.pump_omega().magnitude
    dw = free_spectral_range(ring).magnitude
    k = round((w - w_p) / dw)
    w0 = w_p + k * dw
    if w0 <= 0.0:
        w0 = w_p + math.ceil((1e-12 * w_p - w_p) / dw) * dw
    return 2 * math.pi * units.SPEED_OF_LIGHT / w0


def enhancement_factor(ring: RingParams) -> float:
    """Dimensionless resonant enhancement Q v_g / (omega_p pi R)."""
    ef = (ring.q_factor * ring.group_velocity()
          / (ring.pump_omega() * math.pi * ring.radius()))
    return ef.in_si(units.DIMENSIONLESS)
