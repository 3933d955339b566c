"""Micro-ring four-wave-mixing toolkit.

Predicts spontaneous (photon-pair) generation in micro-ring resonators
from classical device parameters or from stimulated-mixing measurements,
and provides the supporting characterization: Q extraction, gamma
fitting, power calibration, and scaling-law verification.
"""

from .errors import (ConfigurationError, DimensionError, DomainError, FitError,
                     InsufficientSpanError, PairingError, RingFwmError,
                     ValidationError)
from .fitting import (CalibrationChain, FitResult, LorentzianFit, PowerLawFit,
                      RatioLawReport, SweepDataset, SweepRecord,
                      calibrate_to_chip, fit_gamma, fit_lorentzian,
                      fit_power_law, verify_ratio_law)
from .fwm import (FwmPrediction, characteristic_power, pair_generation_rate,
                  predict, predict_spontaneous_from_measurement,
                  spontaneous_idler_power, spontaneous_to_stimulated_ratio,
                  stimulated_idler_power)
from .ring import (RingParams, ResonanceTriplet, enhancement_factor,
                   free_spectral_range, fsr_wavelength_spacing, resonance_comb,
                   select_triplet, transmission)
from .units import (Quantity, photon_energy, angular_frequency_to_wavelength,
                    wavelength_to_angular_frequency)

__version__ = "0.1.0"
