"""Anisotropic skin model: two-regime stress-strain law and fitting.

The longitudinal response of the wrinkled composite has a soft regime
while the wrinkles unfold and a stiff regime once they are taut; the
transition strain is set by the elastomer pre-stretch applied during
lamination. Fitting routines recover the law from characterization CSVs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .core import SkinMaterial


class Direction(str, Enum):
    LONGITUDINAL = "longitudinal"
    TRANSVERSE = "transverse"


@dataclass(frozen=True)
class StressStrainSample:
    strain: float
    stress: float  # Pa
    direction: Direction = Direction.LONGITUDINAL

    def __post_init__(self):
        if self.strain < 0:
            raise ValueError("strain must be non-negative")
        if self.stress < 0:
            raise ValueError("stress must be non-negative")


class FitError(ValueError):
    """Characterization data cannot support the requested fit."""


def axial_stress(material: SkinMaterial, strain: float) -> float:
    """Longitudinal stress at a given strain, Pa.

    Soft slope up to the wrinkle strain, taut slope beyond; continuous at
    the breakpoint and monotone non-decreasing everywhere.
    """
    if strain < 0:
        raise ValueError("strain must be non-negative")
    e_w = material.wrinkle_strain
    if strain <= e_w:
        return material.axial_modulus_soft * strain
    return material.axial_modulus_soft * e_w + material.axial_modulus_taut * (strain - e_w)


def axial_strain_at_stress(material: SkinMaterial, stress: float) -> float:
    """Inverse of axial_stress; exact because the law is piecewise linear."""
    if stress < 0:
        raise ValueError("stress must be non-negative")
    knee = material.axial_modulus_soft * material.wrinkle_strain
    if stress <= knee:
        return stress / material.axial_modulus_soft
    return material.wrinkle_strain + (stress - knee) / material.axial_modulus_taut


def max_extension_from_prestretch(coeff: float, prestretch: float) -> float:
    """Percent-extension budget e = coeff * prestretch.

    Pre-stretch sets the wrinkle slack and hence the maximum longitudinal
    extension, nearly linearly.
    """
    if prestretch < 0:
        raise ValueError("prestretch must be non-negative")
    return coeff * prestretch


@dataclass(frozen=True)
class TwoRegimeFit:
    e_soft: float  # Pa
    e_taut: float  # Pa
    wrinkle_strain: float
    sse: float  # Pa^2, total squared residual
    single_regime: bool = False


def _zero_intercept_slope(x: np.ndarray, y: np.ndarray) -> float:
    denom = float(np.dot(x, x))
    if denom == 0.0:
        raise FitError("all strains are zero")
    return float(np.dot(x, y)) / denom


def fit_two_regime(samples: Sequence[StressStrainSample]) -> TwoRegimeFit:
    """Continuous two-piece linear least squares through the origin.

    The breakpoint is scanned over the interior sample strains (two points
    required on each side) and the pair of slopes solved per candidate;
    the candidate with the lowest total squared residual wins. Data that a
    single line already explains comes back flagged single_regime with the
    plain regression slope.
    """
    if len(samples) < 4:
        raise FitError("need at least 4 samples spanning both regimes")
    strains = np.array([s.strain for s in samples], dtype=float)
    stresses = np.array([s.stress for s in samples], dtype=float)
    if not np.all(np.diff(strains) > 0):
        raise FitError("sample strains must be strictly increasing")

    slope_single = _zero_intercept_slope(strains, stresses)
    sse_single = float(np.sum((stresses - slope_single * strains) ** 2))

    best = None
    for k in range(1, len(samples) - 1):
        e_w = float(strains[k])
        if e_w <= 0:
            continue
        # Columns: soft-regime lever min(x, e_w), taut-regime lever max(x - e_w, 0).
        a = np.column_stack([np.minimum(strains, e_w), np.maximum(strains - e_w, 0.0)])
        coeffs, _, _, _ = np.linalg.lstsq(a, stresses, rcond=None)
        resid = stresses - a @ coeffs
        sse = float(resid @ resid)
        if best is None or sse < best[0] - 1e-15 * max(1.0, best[0]):
            best = (sse, float(coeffs[0]), float(coeffs[1]), e_w)

    if best is None:
        raise FitError("no admissible breakpoint candidate")
    sse, e_soft, e_taut, e_w = best

    # A single line explaining the data as well as the best split means the
    # samples never left one regime.
    if sse_single <= sse + 1e-12 * max(1.0, sse):
        return TwoRegimeFit(
            e_soft=slope_single,
            e_taut=slope_single,
            wrinkle_strain=float(strains[-1]),
            sse=sse_single,
            single_regime=True,
        )
    return TwoRegimeFit(e_soft=e_soft, e_taut=e_taut, wrinkle_strain=e_w, sse=sse)


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_squared: float
    sse: float


def fit_linear(points: Iterable) -> LinearFit:
    """Ordinary least squares y = slope*x + intercept."""
    pts = list(points)
    if len(pts) < 2:
        raise FitError("need at least 2 points")
    x = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts], dtype=float)
    if np.all(x == x[0]):
        raise FitError("all x values identical")
    a = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), _, _, _ = np.linalg.lstsq(a, y, rcond=None)
    resid = y - (slope * x + intercept)
    sse = float(resid @ resid)
    sst = float(np.sum((y - y.mean()) ** 2))
    if sst == 0.0:
        r2 = 1.0 if sse <= 1e-30 else 0.0
    else:
        r2 = 1.0 - sse / sst
    return LinearFit(slope=float(slope), intercept=float(intercept), r_squared=r2, sse=sse)


def material_from_fit(fit: TwoRegimeFit, base: SkinMaterial | None = None) -> SkinMaterial:
    """Build a SkinMaterial from a longitudinal fit, keeping other fields."""
    from dataclasses import replace

    base = base or SkinMaterial()
    return replace(
        base,
        axial_modulus_soft=fit.e_soft,
        axial_modulus_taut=fit.e_taut,
        wrinkle_strain=fit.wrinkle_strain,
    )
