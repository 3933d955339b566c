"""Dimensioned scalar quantities and physical constants.

Every formula in the toolkit is evaluated through :class:`Quantity`, so a
dimensional mistake (adding a power to a length, a stray factor of radius)
is caught mechanically instead of silently producing a wrong number.

The dimension system is deliberately small: exponents over the three base
axes (watt, meter, second) cover everything the ring formulas need.
Canonical storage is SI; helpers exist for the reporting units used in
practice (nm, eV, mW, uW, pW).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DimensionError, DomainError

# CODATA 2018
SPEED_OF_LIGHT = 299_792_458.0          # m/s, exact
PLANCK = 6.626_070_15e-34               # J s, exact
HBAR = PLANCK / (2.0 * math.pi)         # J s
EV = 1.602_176_634e-19                  # J, exact


@dataclass(frozen=True)
class Dimension:
    """Exponents over the (watt, meter, second) base axes."""

    watt: int = 0
    meter: int = 0
    second: int = 0

    def __mul__(self, other: "Dimension") -> "Dimension":
        return Dimension(self.watt + other.watt,
                         self.meter + other.meter,
                         self.second + other.second)

    def __truediv__(self, other: "Dimension") -> "Dimension":
        return Dimension(self.watt - other.watt,
                         self.meter - other.meter,
                         self.second - other.second)

    def __pow__(self, n: int) -> "Dimension":
        return Dimension(self.watt * n, self.meter * n, self.second * n)

    def __str__(self) -> str:
        if self == DIMENSIONLESS:
            return "1"
        parts = []
        for sym, exp in (("W", self.watt), ("m", self.meter), ("s", self.second)):
            if exp == 1:
                parts.append(sym)
            elif exp != 0:
                parts.append(f"{sym}^{exp}")
        return "*".join(parts)


DIMENSIONLESS = Dimension()
POWER = Dimension(watt=1)
LENGTH = Dimension(meter=1)
TIME = Dimension(second=1)
ANGULAR_FREQUENCY = Dimension(second=-1)   # rad/s; radians carry no dimension
RATE = Dimension(second=-1)
VELOCITY = Dimension(meter=1, second=-1)
ENERGY = Dimension(watt=1, second=1)       # J = W*s
NONLINEAR_PARAMETER = Dimension(watt=-1, meter=-1)


@dataclass(frozen=True)
class Quantity:
    """A finite real magnitude tagged with a physical dimension.

    Addition and subtraction require matching dimensions; multiplication,
    division and integer powers combine them. Construction rejects NaN
    and infinities, so any valid Quantity is safe to feed onward.
    """

    magnitude: float
    dimension: Dimension = DIMENSIONLESS

    def __post_init__(self):
        object.__setattr__(self, "magnitude", float(self.magnitude))
        if not math.isfinite(self.magnitude):
            raise DomainError(f"non-finite magnitude: {self.magnitude!r}")

    # -- arithmetic -------------------------------------------------------

    def _require_same(self, other: "Quantity", op: str) -> None:
        if self.dimension != other.dimension:
            raise DimensionError(
                f"cannot {op} [{self.dimension}] and [{other.dimension}]")

    def __add__(self, other: "Quantity") -> "Quantity":
        self._require_same(other, "add")
        return Quantity(self.magnitude + other.magnitude, self.dimension)

    def __sub__(self, other: "Quantity") -> "Quantity":
        self._require_same(other, "subtract")
        return Quantity(self.magnitude - other.magnitude, self.dimension)

    def __mul__(self, other):
        if isinstance(other, Quantity):
            return Quantity(self.magnitude * other.magnitude,
                            self.dimension * other.dimension)
        return Quantity(self.magnitude * other, self.dimension)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Quantity):
            return Quantity(self.magnitude / other.magnitude,
                            self.dimension / other.dimension)
        return Quantity(self.magnitude / other, self.dimension)

    def __rtruediv__(self, other) -> "Quantity":
        return Quantity(other / self.magnitude, DIMENSIONLESS / self.dimension)

    def __pow__(self, n: int) -> "Quantity":
        if not isinstance(n, int):
            raise DimensionError("only integer powers preserve dimensions")
        return Quantity(self.magnitude ** n, self.dimension ** n)

    def __neg__(self) -> "Quantity":
        return Quantity(-self.magnitude, self.dimension)

    def __lt__(self, other: "Quantity") -> bool:
        self._require_same(other, "compare")
        return self.magnitude < other.magnitude

    def __le__(self, other: "Quantity") -> bool:
        self._require_same(other, "compare")
        return self.magnitude <= other.magnitude

    def __repr__(self) -> str:
        return f"Quantity({self.magnitude!r}, [{self.dimension}])"

    # -- accessors --------------------------------------------------------

    def in_si(self, expected: Dimension) -> float:
        """Magnitude in SI base units, asserting the expected dimension."""
        if self.dimension != expected:
            raise DimensionError(
                f"expected [{expected}], got [{self.dimension}]")
        return self.magnitude


# -- constructors for the units instruments and datasheets report ---------

def watts(x: float) -> Quantity:
    return Quantity(x, POWER)


def milliwatts(x: float) -> Quantity:
    return Quantity(x * 1e-3, POWER)


def microwatts(x: float) -> Quantity:
    return Quantity(x * 1e-6, POWER)


def picowatts(x: float) -> Quantity:
    return Quantity(x * 1e-12, POWER)


def meters(x: float) -> Quantity:
    return Quantity(x, LENGTH)


def micrometers(x: float) -> Quantity:
    return Quantity(x * 1e-6, LENGTH)


def nanometers(x: float) -> Quantity:
    return Quantity(x * 1e-9, LENGTH)


def rad_per_s(x: float) -> Quantity:
    return Quantity(x, ANGULAR_FREQUENCY)


def per_second(x: float) -> Quantity:
    return Quantity(x, RATE)


def joules(x: float) -> Quantity:
    return Quantity(x, ENERGY)


def electronvolts(x: float) -> Quantity:
    return Quantity(x * EV, ENERGY)


def per_watt_per_meter(x: float) -> Quantity:
    return Quantity(x, NONLINEAR_PARAMETER)


def dimensionless(x: float) -> Quantity:
    return Quantity(x, DIMENSIONLESS)


# -- display conversions ---------------------------------------------------

def as_nanometers(q: Quantity) -> float:
    return q.in_si(LENGTH) / 1e-9


def as_micrometers(q: Quantity) -> float:
    return q.in_si(LENGTH) / 1e-6


def as_milliwatts(q: Quantity) -> float:
    return q.in_si(POWER) / 1e-3


def as_microwatts(q: Quantity) -> float:
    return q.in_si(POWER) / 1e-6


def as_picowatts(q: Quantity) -> float:
    return q.in_si(POWER) / 1e-12


def as_electronvolts(q: Quantity) -> float:
    return q.in_si(ENERGY) / EV


# -- conversions used throughout -------------------------------------------

HBAR_Q = Quantity(HBAR, ENERGY * TIME)
C_Q = Quantity(SPEED_OF_LIGHT, VELOCITY)


def wavelength_to_angular_frequency(wavelength: Quantity) -> Quantity:
    """omega = 2 pi c / lambda."""
    lam = wavelength.in_si(LENGTH)
    if lam <= 0.0:
        raise DomainError(f"wavelength must be positive, got {lam}")
    return rad_per_s(2.0 * math.pi * SPEED_OF_LIGHT / lam)


def angular_frequency_to_wavelength(omega: Quantity) -> Quantity:
    """lambda = 2 pi c / omega."""
    w = omega.in_si(ANGULAR_FREQUENCY)
    if w <= 0.0:
        raise DomainError(f"angular frequency must be positive, got {w}")
    return meters(2.0 * math.pi * SPEED_OF_LIGHT / w)


def photon_energy(omega: Quantity) -> Quantity:
    """E = hbar * omega for a single photon."""
    w = omega.in_si(ANGULAR_FREQUENCY)
    if w <= 0.0:
        raise DomainError(f"angular frequency must be positive, got {w}")
    return joules(HBAR * w)
