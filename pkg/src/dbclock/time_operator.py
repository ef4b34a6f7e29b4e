"""Dynamical time operator ``T = alpha x + beta tau0`` (c = 1) and clock analysis.

For positive-energy packets the expectation of ``T`` grows at the rate
``<v_gp**2>``, so the centroid advances against ``<T>`` at the phase
velocity while it advances against lab time at the group velocity.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .analysis import linear_fit
from .dirac import (
    ContainmentError,
    DiracAlgebra,
    SpinorField,
    TimeSeries,
    alpha_x_density,
    apply_hamiltonian,
    centered_positions,
    evolve,
)

__all__ = [
    "TimeOperatorParams",
    "ClockReport",
    "apply_T",
    "expect_T",
    "ehrenfest_check",
    "clock_report",
]


@dataclass(frozen=True)
class TimeOperatorParams:
    tau0: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.tau0) and self.tau0 >= 0):
            raise ValueError("tau0 must be finite and ≥ 0")

    @classmethod
    def for_algebra(cls, algebra: DiracAlgebra) -> TimeOperatorParams:
        """One reduced de Broglie time, hbar / mc2."""
        return cls(1.0 / algebra.mc2)


def apply_T(field_: SpinorField, tau0: float, x_ref: float) -> SpinorField:
    """T psi with positions taken in the window centred on ``x_ref``."""
    lat = field_.lattice
    pos = x_ref + np.mod(lat.x - x_ref + 0.5 * lat.L, lat.L) - 0.5 * lat.L
    u, l = field_.amplitudes
    return SpinorField(lat, np.stack([pos * l + tau0 * u, pos * u - tau0 * l]))


def expect_T(field_: SpinorField, params: TimeOperatorParams) -> float:
    pos, _, contained = centered_positions(field_)
    if not contained:
        raise ContainmentError("packet not contained in the analysis window")
    u, l = field_.amplitudes
    dx = field_.lattice.dx
    beta = np.sum(np.abs(u) ** 2 - np.abs(l) ** 2) * dx
    return float((np.sum(alpha_x_density(field_, pos)) * dx + params.tau0 * beta) / field_.norm)


def ehrenfest_check(
    field_: SpinorField,
    params: TimeOperatorParams,
    algebra: DiracAlgebra,
    dt_fd: float = 1e-3,
) -> tuple[float, float, float]:
    """Central difference of <T> against <i[H, T]> from explicit operator products.

    Both sides use one fixed position window, centred on the centroid of
    ``field_``.
    """
    _, x_c, _ = centered_positions(field_)

    def t_mean(psi):
        return psi.inner(apply_T(psi, params.tau0, x_c)).real / psi.norm

    lhs = (t_mean(evolve(field_, dt_fd, algebra)) - t_mean(evolve(field_, -dt_fd, algebra))) / (2 * dt_fd)
    h_psi = apply_hamiltonian(field_, algebra)
    t_psi = apply_T(field_, params.tau0, x_c)
    rhs = -2.0 * h_psi.inner(t_psi).imag / field_.norm
    return lhs, rhs, abs(lhs - rhs)


@dataclass(frozen=True)
class ClockReport:
    """Fitted rates of a positive-energy run next to their k0 predictions.

    ``v_ph_expected`` and ``ratio_x_over_T`` are ``None`` when undefined
    (packet at rest, or ``<T>`` not advancing).
    """

    slope_T: float
    beta2_expected: float
    ratio_x_over_T: float | None
    v_ph_expected: float | None
    phase_rate: float
    clock_rate_expected: float
    slope_x: float
    v_gp_expected: float
    residuals: dict = field(default_factory=dict)

    @property
    def velocity_product(self) -> float | None:
        if self.ratio_x_over_T is None:
            return None
        return self.slope_x * self.ratio_x_over_T

    def as_dict(self) -> dict:
        d = asdict(self)
        d["velocity_product"] = self.velocity_product
        return d


def clock_report(series: TimeSeries, k0: float, algebra: DiracAlgebra) -> ClockReport:
    if series.n_warnings:
        raise ValueError("invalid series for clock analysis")
    if len(series) < 16:
        raise ValueError("clock analysis needs at least 16 records")
    t = series.t
    x = series.column("x_mean")
    T = series.column("T_mean")
    phase = series.column("phase_central")

    slope_x, _, rms_x = linear_fit(t, x)
    slope_T, _, rms_T = linear_fit(t, T)
    slope_phase, _, rms_phase = linear_fit(t, phase)
    residuals = {"x_vs_t": rms_x, "T_vs_t": rms_T, "phase_vs_t": rms_phase}
    ratio = None
    if np.ptp(T) > 1e-9 * max(1.0, float(np.max(np.abs(T)))):
        ratio, _, rms_xT = linear_fit(T, x)
        residuals["x_vs_T"] = rms_xT

    m = algebra.mc2
    E = math.hypot(k0, m)
    return ClockReport(
        slope_T=slope_T,
        beta2_expected=(k0 / E) ** 2,
        ratio_x_over_T=ratio,
        v_ph_expected=E / abs(k0) if k0 else None,
        phase_rate=slope_phase,
        clock_rate_expected=m * m / E,
        slope_x=slope_x,
        v_gp_expected=k0 / E,
        residuals=residuals,
    )
