"""Channeling resonance arithmetic and free Dirac packet simulation.

Submodules: :mod:`units`, :mod:`kinematics`, :mod:`resonance`,
:mod:`dirac`, :mod:`time_operator`, :mod:`analysis`, :mod:`cli`.
"""
from .dirac import DiracAlgebra, PacketSpec, gaussian_packet, make_lattice, run
from .kinematics import kinematics_of
from .resonance import ChannelingSetup, effective_mass, predict

__all__ = [
    "ChannelingSetup",
    "DiracAlgebra",
    "PacketSpec",
    "effective_mass",
    "gaussian_packet",
    "kinematics_of",
    "make_lattice",
    "predict",
    "run",
]
__version__ = "0.1.0"
