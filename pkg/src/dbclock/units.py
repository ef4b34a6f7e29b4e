"""Physical constants and HEP <-> natural unit conversion.

Natural units here mean hbar = c = 1 with the energy unit chosen by the
caller (usually the rest energy, so that m = 1 inside the simulator).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "PhysicalConstants",
    "UnitScale",
    "constants",
    "natural_constants",
    "convert",
    "CODATA",
]

# CODATA 2018
_HBAR_C_MEV_FM = 197.3269804
_C_FM_PER_S = 2.99792458e23
# rest energy with the digits used for the channeling numbers (not 0.51099895)
_ELECTRON_REST_ENERGY = 0.511

_QUANTITIES = ("energy", "length", "time")
_DIRECTIONS = ("to_natural", "to_hep")


@dataclass(frozen=True)
class PhysicalConstants:
    """hbar*c [MeV fm], c [fm/s], hbar [MeV s] and the electron rest energy [MeV].

    Planck's constant is never stored; use :attr:`h`.
    """

    hbar_c: float
    c: float
    hbar: float
    electron_rest_energy_paper: float

    def __post_init__(self):
        if not math.isclose(self.hbar, self.hbar_c / self.c, rel_tol=1e-15):
            raise ValueError("hbar must equal hbar_c / c")

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar

    @property
    def h_c(self) -> float:
        return 2.0 * math.pi * self.hbar_c


CODATA = PhysicalConstants(
    hbar_c=_HBAR_C_MEV_FM,
    c=_C_FM_PER_S,
    hbar=_HBAR_C_MEV_FM / _C_FM_PER_S,
    electron_rest_energy_paper=_ELECTRON_REST_ENERGY,
)


def constants() -> PhysicalConstants:
    return CODATA


def natural_constants() -> PhysicalConstants:
    """Constants with hbar = c = 1, for feeding natural-unit inputs to the
    resonance routines."""
    return PhysicalConstants(hbar_c=1.0, c=1.0, hbar=1.0, electron_rest_energy_paper=1.0)


@dataclass(frozen=True)
class UnitScale:
    """HEP size of one natural unit of energy (MeV), length (fm) and time (s)."""

    energy_unit: float
    length_unit: float
    time_unit: float

    def __post_init__(self):
        for name in ("energy_unit", "length_unit", "time_unit"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite")
        c = CODATA
        if not math.isclose(self.time_unit, self.length_unit / c.c, rel_tol=1e-12):
            raise ValueError("inconsistent scale: time_unit != length_unit / c")
        if not math.isclose(self.energy_unit * self.time_unit, c.hbar, rel_tol=1e-12):
            raise ValueError("inconsistent scale: energy_unit * time_unit != hbar")

    @classmethod
    def from_energy(cls, energy_unit: float) -> UnitScale:
        """Build the hbar = c = 1 scale whose energy unit is ``energy_unit`` MeV."""
        c = CODATA
        return cls(
            energy_unit=energy_unit,
            length_unit=c.hbar_c / energy_unit,
            time_unit=c.hbar / energy_unit,
        )

    def factor(self, quantity: str) -> float:
        if quantity not in _QUANTITIES:
            raise ValueError(f"unknown quantity {quantity!r}")
        return getattr(self, f"{quantity}_unit")


def convert(value: float, quantity: str, direction: str, scale: UnitScale) -> float:
    """Convert ``value`` between HEP units (MeV, fm, s) and natural units.

    >>> round(convert(1.0, "energy", "to_natural", UnitScale.from_energy(0.511)), 4)
    1.9569
    """
    if not math.isfinite(value):
        raise ValueError("non-finite value")
    if direction not in _DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    f = scale.factor(quantity)
    return value / f if direction == "to_natural" else value * f
