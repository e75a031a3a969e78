"""Capstan slip model and lock-state handling for layer-jamming bodies.

The holding force of a jammed unit grows exponentially with the bend
angle it is wrapped through, F_c = K * e^(mu*theta); a released unit
slides freely and holds nothing.
"""

from __future__ import annotations

import math
from dataclasses import replace
from typing import Sequence, Tuple

import numpy as np

from .core import JammingUnit, JamState
from .material import FitError, fit_linear


def critical_force(unit: JammingUnit, bend_angle: float) -> float:
    """Tension at which a jammed unit starts to slip, N.

    A released unit has no holding force and reports 0.
    """
    if bend_angle < 0:
        raise ValueError("bend_angle must be non-negative")
    if unit.state is not JamState.JAMMED:
        return 0.0
    return unit.k_theta * math.exp(unit.mu * bend_angle)


def capstan_drag(unit: JammingUnit, bend_angle: float) -> float:
    """Sliding resistance of the unit regardless of lock state, N.

    This is the friction term a deactivated structure contributes to the
    bending moment balance; it has the same exponential form as the
    critical holding force.
    """
    if bend_angle < 0:
        raise ValueError("bend_angle must be non-negative")
    return unit.k_theta * math.exp(unit.mu * bend_angle)


def holds(unit: JammingUnit, bend_angle: float, tension: float) -> bool:
    """Whether the unit carries `tension` without slipping."""
    if tension < 0:
        raise ValueError("tension must be non-negative")
    if unit.state is not JamState.JAMMED:
        return False
    return tension <= critical_force(unit, bend_angle)


def set_state(unit: JammingUnit, new_state: JamState) -> JammingUnit:
    """Return the unit with its lock state replaced; parameters untouched."""
    if unit.state is new_state:
        return unit
    return replace(unit, state=new_state)


def fit_capstan(samples: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """Log-linear least squares for (K_theta, mu) from (angle, force) pairs.

    ln F = ln K + mu * theta, so a plain linear fit in log space recovers
    both constants; noiseless synthetic data round-trips exactly.
    """
    if len(samples) < 2:
        raise FitError("need at least 2 samples")
    angles = np.array([s[0] for s in samples], dtype=float)
    forces = np.array([s[1] for s in samples], dtype=float)
    bad = np.nonzero(forces <= 0)[0]
    if bad.size:
        raise FitError(f"non-positive force at sample {int(bad[0])}")
    if np.all(angles == angles[0]):
        raise FitError("all angles identical; mu undefined")
    fit = fit_linear(zip(angles, np.log(forces)))
    return math.exp(fit.intercept), fit.slope
