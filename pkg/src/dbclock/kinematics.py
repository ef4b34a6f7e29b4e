"""Closed-form relativistic and de Broglie quantities along the channeling axis."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .units import PhysicalConstants, constants

__all__ = ["KinematicsRecord", "kinematics_of", "gamma_of_beta"]


@dataclass(frozen=True)
class KinematicsRecord:
    """Derived quantities for one (pc, mc2) pair.

    ``beta_ph`` is ``None`` at rest, where the phase velocity is unbounded;
    ``beta_ph_infinite`` says so explicitly.
    """

    pc: float
    mc2: float
    E: float
    gamma: float
    beta_gp: float
    beta_ph: float | None
    nu_dB: float
    omega_zb: float
    t_dB: float

    @property
    def beta_ph_infinite(self) -> bool:
        return self.beta_ph is None

    def as_dict(self) -> dict:
        d = asdict(self)
        if self.beta_ph is None:
            d["beta_ph"] = "infinite"
        return d


def kinematics_of(pc: float, mc2: float, consts: PhysicalConstants | None = None) -> KinematicsRecord:
    """Energy, Lorentz factor, velocities and clock frequencies for momentum ``pc``.

    Energies in MeV and times in seconds unless ``consts`` is the natural set.
    """
    consts = consts or constants()
    if not mc2 > 0:
        raise ValueError("nonpositive rest energy")
    if pc < 0:
        raise ValueError("negative momentum")
    E = math.hypot(pc, mc2)
    beta_ph = E / pc if pc > 0 else None
    return KinematicsRecord(
        pc=pc,
        mc2=mc2,
        E=E,
        gamma=E / mc2,
        beta_gp=pc / E,
        beta_ph=beta_ph,
        nu_dB=mc2 / consts.h,
        omega_zb=2.0 * mc2 / consts.hbar,
        t_dB=consts.h / mc2,
    )


def gamma_of_beta(beta: float) -> float:
    if not 0.0 <= beta < 1.0:
        raise ValueError("unphysical speed")
    # (1-b)(1+b) keeps digits near b -> 1
    return 1.0 / math.sqrt((1.0 - beta) * (1.0 + beta))
