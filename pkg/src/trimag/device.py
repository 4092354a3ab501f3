"""Parametric laboratory-control models.

Maps bench controls (bias field, sphere position along the cavity edge,
crystal rotation) to model parameters.  The position and rotation curves
are explicit modeling choices: a sinusoidal antinode profile for the
cavity-mode field and a two-fold anisotropy cosine, both overridable by a
measured lookup table.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .params import ValidationError


@dataclass(frozen=True)
class MagnonTuning:
    """Field-to-frequency map of the uniform magnon mode.

    gamma_e   gyromagnetic ratio, GHz per tesla (ordinary frequency)
    omega_m0  zero-field anisotropy offset, MHz
    """

    gamma_e: float = 28.0
    omega_m0: float = 0.0

    def __post_init__(self):
        if not self.gamma_e > 0:
            raise ValidationError("gamma_e must be > 0")


def magnon_frequency(tuning: MagnonTuning, b_field: float) -> float:
    """Magnon frequency in MHz for a bias field in tesla."""
    if b_field < 0:
        raise ValidationError("b_field must be >= 0")
    return tuning.gamma_e * 1e3 * b_field + tuning.omega_m0


@dataclass(frozen=True)
class PositionCoupling:
    """Coupling strength versus sphere position along the cavity edge.

    g_max            coupling at the field antinode, MHz
    cavity_length_l  cavity length, mm; the coupling node sits at y = 0
    """

    g_max: float = 12.0
    cavity_length_l: float = 50.0

    def __post_init__(self):
        if self.g_max < 0:
            raise ValidationError("g_max must be >= 0")
        if not self.cavity_length_l > 0:
            raise ValidationError("cavity length must be > 0")


def coupling_vs_position(pc: PositionCoupling, y: float) -> float:
    """Coupling (MHz) at position y (mm), valid for |y| <= L/4.

    Sinusoidal profile g_max*|sin(2*pi*y/L)| of the standing-wave magnetic
    field with two antinodes along the long edge.
    """
    quarter = pc.cavity_length_l / 4.0
    if abs(y) > quarter:
        raise ValidationError(f"position must satisfy |y| <= L/4 = {quarter} mm")
    return pc.g_max * abs(math.sin(2.0 * math.pi * y / pc.cavity_length_l))


def anisotropy_rotation(theta: float, mean: float, span: float = 300.0,
                        table: np.ndarray | None = None) -> float:
    """Magnon frequency (MHz) versus crystal rotation angle (degrees).

    Analytic placeholder mean + (span/2)*cos(2*theta), two-fold symmetric
    with peak-to-peak range equal to span.  Passing a (theta_deg, freq_mhz)
    table switches to periodic linear interpolation of measured data.
    """
    if not (0.0 <= theta < 360.0):
        raise ValidationError("theta must lie in [0, 360)")
    if table is not None:
        knots = np.asarray(table, dtype=float)
        order = np.argsort(knots[:, 0])
        return float(np.interp(theta, knots[order, 0], knots[order, 1],
                               period=360.0))
    return mean + 0.5 * span * math.cos(2.0 * math.radians(theta))


def rotation_table_from_csv(path: str | Path) -> np.ndarray:
    """Load a rotation lookup table (header theta_deg,freq_mhz)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["theta_deg", "freq_mhz"]:
            raise ValidationError(
                "rotation table must start with header 'theta_deg,freq_mhz'")
        rows = [(float(a), float(b)) for a, b in reader]
    if not rows:
        raise ValidationError("rotation table has no data rows")
    return np.asarray(rows, dtype=float)
