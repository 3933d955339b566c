"""File formats: spectrum and sweep CSVs, ring JSON, and the report document.

CSV headers carry the units the instruments report (nm, mW, uW, pW);
everything is converted to SI at this boundary and back on write.
Readers reject structurally invalid data instead of repairing it; the
single exception is a narrow snap band around the [0, 1] transmission
range, where slightly out-of-range values are clamped with a warning.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import ValidationError
from .fitting import CalibrationChain, SweepDataset, SweepRecord
from .ring import RingParams

REPORT_SCHEMA = "ringfwm/1"

SPECTRUM_HEADER = ["wavelength_nm", "transmission"]
SWEEP_HEADER = ["pump_mW", "signal_uW", "idler_pW"]

# Values in [-0.01, 0) or (1, 1.01] are snapped to the boundary; anything
# further out is rejected.
TRANSMISSION_SNAP_BAND = 0.01


@dataclass(frozen=True)
class SpectrumTrace:
    """An ordered transmission trace for one ring."""

    ring_id: str
    wavelengths_m: tuple
    transmissions: tuple
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "wavelengths_m", tuple(self.wavelengths_m))
        object.__setattr__(self, "transmissions", tuple(self.transmissions))
        if len(self.wavelengths_m) != len(self.transmissions):
            raise ValidationError("wavelengths and transmissions differ in length")
        for a, b in zip(self.wavelengths_m, self.wavelengths_m[1:]):
            if not b > a:
                raise ValidationError("wavelengths must be strictly increasing")
        for t in self.transmissions:
            if not 0.0 <= t <= 1.0:
                raise ValidationError(f"transmission {t} outside [0, 1]")


def _snap_transmission(value: float, line_no: int) -> float:
    if 0.0 <= value <= 1.0:
        return value
    if -TRANSMISSION_SNAP_BAND <= value < 0.0:
        warnings.warn(f"line {line_no}: transmission {value} snapped to 0")
        return 0.0
    if 1.0 < value <= 1.0 + TRANSMISSION_SNAP_BAND:
        warnings.warn(f"line {line_no}: transmission {value} snapped to 1")
        return 1.0
    raise ValidationError(
        f"line {line_no}: transmission {value} outside [{-TRANSMISSION_SNAP_BAND}, "
        f"{1.0 + TRANSMISSION_SNAP_BAND}]")


def read_spectrum_csv(path, ring_id: Optional[str] = None) -> SpectrumTrace:
    """Read a `wavelength_nm,transmission` CSV into a validated trace."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty file") from None
        if [h.strip() for h in header] != SPECTRUM_HEADER:
            raise ValidationError(
                f"{path}: expected header {','.join(SPECTRUM_HEADER)}, "
                f"got {','.join(header)}")
        wavelengths = []
        transmissions = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValidationError(f"{path}, line {line_no}: expected 2 columns")
            try:
                lam_nm = float(row[0])
                t = float(row[1])
            except ValueError as exc:
                raise ValidationError(
                    f"{path}, line {line_no}: malformed number: {exc}") from exc
            wavelengths.append(lam_nm * 1e-9)
            transmissions.append(_snap_transmission(t, line_no))
    return SpectrumTrace(ring_id=ring_id or path.stem,
                         wavelengths_m=wavelengths,
                         transmissions=transmissions)


def write_spectrum_csv(trace: SpectrumTrace, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SPECTRUM_HEADER)
        for lam, t in zip(trace.wavelengths_m, trace.transmissions):
            writer.writerow([f"{lam / 1e-9:.17g}", f"{t:.17g}"])


def read_sweep_csv(path, ring_id: Optional[str] = None,
                   powers_are_on_chip: bool = True,
                   pump_cutoff_w: float = 2e-3) -> SweepDataset:
    """Read a `pump_mW,signal_uW,idler_pW` CSV into a SweepDataset.

    The signal column must be `NA` in every row (spontaneous dataset) or
    numeric in every row (stimulated); mixtures are rejected.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty file") from None
        if [h.strip() for h in header] != SWEEP_HEADER:
            raise ValidationError(
                f"{path}: expected header {','.join(SWEEP_HEADER)}, "
                f"got {','.join(header)}")
        records = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValidationError(f"{path}, line {line_no}: expected 3 columns")
            try:
                pump_w = float(row[0]) * 1e-3
                signal_w = None if row[1].strip() == "NA" else float(row[1]) * 1e-6
                idler_w = float(row[2]) * 1e-12
            except ValueError as exc:
                raise ValidationError(
                    f"{path}, line {line_no}: malformed number: {exc}") from exc
            if pump_w < 0.0 or idler_w < 0.0 or (signal_w is not None
                                                 and signal_w < 0.0):
                raise ValidationError(
                    f"{path}, line {line_no}: negative power")
            records.append(SweepRecord(pump_w=pump_w, idler_w=idler_w,
                                       signal_w=signal_w))
    try:
        return SweepDataset(ring_id=ring_id or path.stem,
                            records=records,
                            powers_are_on_chip=powers_are_on_chip,
                            pump_cutoff_w=pump_cutoff_w)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def write_sweep_csv(dataset: SweepDataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_HEADER)
        for r in dataset.records:
            signal = "NA" if r.signal_w is None else f"{r.signal_w / 1e-6:.17g}"
            writer.writerow([f"{r.pump_w / 1e-3:.17g}", signal,
                             f"{r.idler_w / 1e-12:.17g}"])


@dataclass(frozen=True)
class ExperimentRecord:
    """One ring's full characterization context."""

    ring: RingParams
    ring_id: str
    calibration: Optional[CalibrationChain] = None
    sweeps: tuple = ()
    notes: str = ""

    def __post_init__(self):
        object.__setattr__(self, "sweeps", tuple(self.sweeps))
        for sweep in self.sweeps:
            if sweep.ring_id != self.ring_id:
                raise ValidationError(
                    f"sweep ring_id {sweep.ring_id!r} does not match "
                    f"record ring_id {self.ring_id!r}")


def write_report(path, results: dict, inputs: Optional[dict] = None) -> None:
    """Write a schema-versioned, deterministically ordered report document."""
    doc = {
        "schema": REPORT_SCHEMA,
        "inputs": inputs or {},
        "results": results,
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def read_report(path) -> dict:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("schema") != REPORT_SCHEMA:
        raise ValidationError(
            f"{path}: unsupported report schema {doc.get('schema')!r}")
    return doc
