"""Channeling resonance conditions from the de Broglie clock phase per atom.

A fixed phase point travelling at ``v_ph`` needs a system time ``d / v_ph``
to cross one interatomic spacing ``d``; the internal clock advances by
``mc2 / hbar`` per unit system time. Requiring the advance to be ``n*pi``
fixes the phase velocity and, with the Lorentz factor set to one, the
resonance momentum ``pc = mc2 * v_ph / c``.

The same phase velocity follows from spacing ``d/2`` crossed at the
Zitterbewegung frequency ``2 mc2 / h``; that reading is algebraically
identical to :func:`predict` with ``n = 2`` and needs no separate formula.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .units import PhysicalConstants, constants

__all__ = [
    "ChannelingSetup",
    "ResonancePrediction",
    "EffectiveMassResult",
    "predict",
    "system_phase_shift",
    "effective_mass",
    "predict_via_time_dilation",
    "mismatch_scan",
    "PAPER_SETUP",
]

_RELATIVISTIC_GAMMA_MIN = 1.05


@dataclass(frozen=True)
class ChannelingSetup:
    d: float  # fm
    mc2: float  # MeV
    n: int = 2

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise ValueError("harmonic must be an integer")
        if self.n < 1:
            raise ValueError("harmonic must be ≥ 1")
        if not (math.isfinite(self.d) and self.d > 0):
            raise ValueError("spacing d must be positive")
        if not (math.isfinite(self.mc2) and self.mc2 > 0):
            raise ValueError("nonpositive rest energy")

    def with_harmonic(self, n: int) -> ChannelingSetup:
        return ChannelingSetup(self.d, self.mc2, n)


# silicon <110> string spacing, 3.84 Angstrom
PAPER_SETUP = ChannelingSetup(d=3.84e5, mc2=0.511, n=2)


@dataclass(frozen=True)
class ResonancePrediction:
    n: int
    beta_ph_res: float
    pc_res: float
    delta_T_npi: float
    delta_phi: float
    gamma_alt: float


@dataclass(frozen=True)
class EffectiveMassResult:
    ratio_sq: float
    ratio: float
    m_eff_mc2: float


def _clock_length(mc2: float, consts: PhysicalConstants) -> float:
    """Distance light covers in one de Broglie period, h c / mc2."""
    return consts.h_c / mc2


def predict(setup: ChannelingSetup, consts: PhysicalConstants | None = None) -> ResonancePrediction:
    """Resonance phase velocity, momentum and system time lapse for harmonic ``n``."""
    consts = consts or constants()
    beta_ph = (2.0 / setup.n) * setup.d / _clock_length(setup.mc2, consts)
    return ResonancePrediction(
        n=setup.n,
        beta_ph_res=beta_ph,
        pc_res=setup.mc2 * beta_ph,
        delta_T_npi=0.5 * setup.n * consts.h / setup.mc2,
        delta_phi=setup.n * math.pi,
        gamma_alt=beta_ph,
    )


def system_phase_shift(
    d: float, pc: float, mc2: float, consts: PhysicalConstants | None = None
) -> tuple[float, float]:
    """System time ``d / v_ph`` and clock phase accumulated over one spacing.

    The phase velocity belonging to ``pc`` is taken from the resonance
    momentum relation, ``v_ph = c * pc / mc2``, so that the phase equals
    ``n*pi`` exactly at every predicted resonance. Numerically this is also
    the lab-frame phase of a time-dilated clock over ``d / v_gp``.
    """
    consts = consts or constants()
    if not pc > 0:
        raise ValueError("phase velocity undefined")
    if not (d > 0 and mc2 > 0):
        raise ValueError("d and mc2 must be positive")
    v_ph = consts.c * pc / mc2
    delta_T = d / v_ph
    return delta_T, delta_T * mc2 / consts.hbar


def effective_mass(
    pc_observed: float, setup: ChannelingSetup, consts: PhysicalConstants | None = None
) -> EffectiveMassResult:
    """Rest-mass renormalization that moves the predicted resonance onto ``pc_observed``.

    The resonance momentum scales as ``mc2**2``, hence the square root.
    """
    if not pc_observed > 0:
        raise ValueError("observed momentum must be positive")
    ratio_sq = pc_observed / predict(setup, consts).pc_res
    ratio = math.sqrt(ratio_sq)
    return EffectiveMassResult(ratio_sq=ratio_sq, ratio=ratio, m_eff_mc2=ratio * setup.mc2)


def predict_via_time_dilation(setup: ChannelingSetup, consts: PhysicalConstants | None = None) -> float:
    """Resonance momentum when the lab crossing rate ``v/d`` matches the dilated clock.

    Independent consistency route: the Lorentz factor is set to the
    resonance phase-velocity ratio and ``pc = mc2 * sqrt(gamma**2 - 1)``.
    Agrees with :func:`predict` to O(1/gamma**2).
    """
    consts = consts or constants()
    gamma = (2.0 / setup.n) * setup.d / _clock_length(setup.mc2, consts)
    if gamma <= _RELATIVISTIC_GAMMA_MIN:
        raise ValueError("setup outside relativistic regime")
    return setup.mc2 * math.sqrt((gamma - 1.0) * (gamma + 1.0))


def mismatch_scan(
    pc_lo: float,
    pc_hi: float,
    steps: int,
    d: float,
    mc2: float,
    consts: PhysicalConstants | None = None,
) -> list[tuple[float, float, float]]:
    """Distance of the per-spacing clock phase from the nearest ``k*pi`` (k >= 1).

    Rows are ``(pc, delta_phi, mismatch)`` on a uniform grid; minima of the
    mismatch sit on the resonance momenta of :func:`predict`.
    """
    if int(steps) != steps or steps < 2:
        raise ValueError("steps must be an integer ≥ 2")
    if not (0 < pc_lo < pc_hi) or not math.isfinite(pc_hi):
        raise ValueError("invalid momentum range")
    if not (d > 0 and mc2 > 0):
        raise ValueError("d and mc2 must be positive")
    rows = []
    for pc in np.linspace(pc_lo, pc_hi, int(steps)):
        pc = float(pc)
        _, phi = system_phase_shift(d, pc, mc2, consts)
        k_max = math.ceil(phi / math.pi) + 1
        mismatch = min(abs(phi - k * math.pi) for k in range(1, k_max + 1))
        rows.append((pc, phi, mismatch))
    return rows
