"""Free Dirac wave packets in 1+1 dimensions on a periodic lattice.

Two-component spinors with ``alpha = sigma_x`` and ``beta = sigma_z``,
natural units (hbar = c = 1). Evolution is exact per Fourier mode:

    U_k(t) = cos(E_k t) I - i sin(E_k t) H_k / E_k,
    H_k = k alpha + m beta,  E_k = sqrt(k**2 + m**2),

so there is no time-step error and unitarity holds to rounding.

Positions on the ring are measured in a window of width ``L`` centred on
the running centroid; a record is only trustworthy when 99.9 % of the
probability sits inside the central half of that window.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .analysis import PhaseAliasingWarning, unwrap_phase

__all__ = [
    "Lattice",
    "DiracAlgebra",
    "SpinorField",
    "PacketSpec",
    "ObservableRecord",
    "TimeSeries",
    "ContainmentError",
    "make_lattice",
    "gaussian_packet",
    "evolve",
    "observables",
    "run",
    "displacement_check",
    "spectral_mean",
    "centered_positions",
    "CONTENTS",
]

CONTENTS = ("positive", "negative", "mixed", "raw")

_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_CONTAINED_FRACTION = 0.999
_TAIL_MASS_MAX = 1e-9
_MAX_WARNING_FRACTION = 0.10


class ContainmentError(RuntimeError):
    """The packet left the region where ring positions are meaningful."""


@dataclass(frozen=True)
class Lattice:
    N: int
    L: float
    dx: float = field(init=False)
    x: np.ndarray = field(init=False, repr=False, compare=False)
    k_modes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        N = self.N
        if isinstance(N, bool) or int(N) != N or N < 16 or (int(N) & (int(N) - 1)):
            raise ValueError("N must be a power of two ≥ 16")
        if not (math.isfinite(self.L) and self.L > 0):
            raise ValueError("L must be positive")
        N = int(N)
        object.__setattr__(self, "N", N)
        dx = self.L / N
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "x", -0.5 * self.L + dx * np.arange(N))
        object.__setattr__(self, "k_modes", 2.0 * np.pi * np.fft.fftfreq(N, d=dx))

    @property
    def k_nyquist(self) -> float:
        return math.pi / self.dx


def make_lattice(N: int, L: float) -> Lattice:
    return Lattice(N, L)


@dataclass(frozen=True)
class DiracAlgebra:
    """Dirac matrices of the 1+1D reduction and the rest energy ``mc2``."""

    mc2: float = 1.0
    alpha: np.ndarray = field(default_factory=lambda: _SIGMA_X.copy(), repr=False, compare=False)
    beta: np.ndarray = field(default_factory=lambda: _SIGMA_Z.copy(), repr=False, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.mc2) and self.mc2 > 0):
            raise ValueError("nonpositive rest energy")

    def energy(self, k):
        return np.hypot(k, self.mc2)

    def hamiltonian(self, k) -> np.ndarray:
        """H(k) for each k, shape ``k.shape + (2, 2)``."""
        k = np.asarray(k, dtype=float)
        return k[..., None, None] * self.alpha + self.mc2 * self.beta

    def projector(self, k, sign: int = +1) -> np.ndarray:
        """Energy-sign projector (I +- H(k)/E(k)) / 2."""
        k = np.asarray(k, dtype=float)
        H = self.hamiltonian(k)
        E = self.energy(k)[..., None, None]
        return 0.5 * (np.eye(2) + np.sign(sign) * H / E)


@dataclass(frozen=True)
class SpinorField:
    lattice: Lattice
    amplitudes: np.ndarray  # shape (2, N): upper, lower

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.shape != (2, self.lattice.N):
            raise ValueError("amplitudes must have shape (2, N)")
        object.__setattr__(self, "amplitudes", a)

    @property
    def density(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=0)

    @property
    def norm(self) -> float:
        return float(np.sum(self.density) * self.lattice.dx)

    def spectrum(self) -> np.ndarray:
        return np.fft.fft(self.amplitudes, axis=1)

    def inner(self, other: SpinorField) -> complex:
        return complex(np.sum(np.conj(self.amplitudes) * other.amplitudes) * self.lattice.dx)


@dataclass(frozen=True)
class PacketSpec:
    """Gaussian packet ``exp(-(x-x0)^2 / 4 sigma_x^2) exp(i k0 x)`` times a spinor.

    ``content`` selects the energy sign: ``positive``/``negative`` project
    the base spinor with the matching projector, ``mixed`` superposes the
    normalized projections with weights ``w_plus``/``w_minus``, and ``raw``
    uses ``spinor`` unprojected.
    """

    x0: float = 0.0
    k0: float = 0.0
    sigma_x: float = 10.0
    content: str = "positive"
    w_plus: float = 1.0
    w_minus: float = 1.0
    spinor: tuple[complex, complex] | None = None

    def __post_init__(self):
        if self.content not in CONTENTS:
            raise ValueError(f"content must be one of {', '.join(CONTENTS)}")
        if not self.sigma_x > 0:
            raise ValueError("sigma_x must be positive")
        if self.content == "mixed":
            if self.w_plus < 0 or self.w_minus < 0 or self.w_plus + self.w_minus == 0:
                raise ValueError("mixed weights must be nonnegative and not both zero")
        if self.content == "raw" and self.spinor is None:
            raise ValueError("raw content needs a spinor")

    def check(self, lattice: Lattice) -> None:
        """Resolution and aliasing requirements on ``lattice``."""
        if self.sigma_x < 4 * lattice.dx:
            raise ValueError("sigma_x must be ≥ 4·dx")
        if abs(self.k0) > 0.25 * lattice.k_nyquist:
            raise ValueError("|k0| must be ≤ 0.25·π/dx")


@dataclass(frozen=True)
class ObservableRecord:
    t: float
    norm: float
    x_mean: float
    p_mean: float
    alpha_mean: float
    beta_mean: float
    E_mean: float
    T_mean: float
    phase_central: float
    warning: bool = False

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls) if f.name != "warning"]

    def values(self) -> list[float]:
        return [getattr(self, c) for c in self.columns()]


@dataclass
class TimeSeries:
    records: list[ObservableRecord]
    phase_aliased: bool = False

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    @property
    def t(self) -> np.ndarray:
        return self.column("t")

    @property
    def n_warnings(self) -> int:
        return sum(r.warning for r in self.records)


def _base_spinor(packet: PacketSpec, sign: int) -> np.ndarray:
    if packet.spinor is not None:
        return np.asarray(packet.spinor, dtype=complex)
    return np.array([1, 0], dtype=complex) if sign > 0 else np.array([0, 1], dtype=complex)


def gaussian_packet(lattice: Lattice, packet: PacketSpec, algebra: DiracAlgebra) -> SpinorField:
    packet.check(lattice)
    x = lattice.x
    envelope = np.exp(-((x - packet.x0) ** 2) / (4.0 * packet.sigma_x**2) + 1j * packet.k0 * x)
    ref = float(np.sum(np.abs(envelope) ** 2))

    if packet.content == "raw":
        spinor = np.asarray(packet.spinor, dtype=complex)
        amps = spinor[:, None] * envelope[None, :]
    else:
        env_k = np.fft.fft(envelope)

        def projected(sign):
            P = algebra.projector(lattice.k_modes, sign)
            hat = np.einsum("kij,j->ik", P, _base_spinor(packet, sign)) * env_k
            w = np.sum(np.abs(hat) ** 2) / lattice.N
            if w < 1e-10 * ref:
                raise ValueError("empty projection")
            return hat / math.sqrt(w)

        if packet.content == "positive":
            hat = projected(+1)
        elif packet.content == "negative":
            hat = projected(-1)
        else:
            hat = np.zeros((2, lattice.N), dtype=complex)
            if packet.w_plus:
                hat = hat + packet.w_plus * projected(+1)
            if packet.w_minus:
                hat = hat + packet.w_minus * projected(-1)
        amps = np.fft.ifft(hat, axis=1)

    total = float(np.sum(np.abs(amps) ** 2) * lattice.dx)
    if total < 1e-300:
        raise ValueError("empty projection")
    psi = SpinorField(lattice, amps / math.sqrt(total))
    outside = np.abs(x) > 0.25 * lattice.L
    if np.sum(psi.density[outside]) * lattice.dx > _TAIL_MASS_MAX:
        raise ValueError("packet tail mass outside the central half of the box exceeds 1e-9")
    return psi


def _propagate_spectrum(hat: np.ndarray, k: np.ndarray, t: float, algebra: DiracAlgebra) -> np.ndarray:
    m = algebra.mc2
    E = algebra.energy(k)
    c = np.cos(E * t)
    s = np.sin(E * t) / E
    u, l = hat
    return np.stack([c * u - 1j * s * (m * u + k * l), c * l - 1j * s * (k * u - m * l)])


def evolve(field_: SpinorField, t: float, algebra: DiracAlgebra) -> SpinorField:
    """Apply exp(-i H t) exactly in momentum space."""
    if t == 0:
        return field_
    lat = field_.lattice
    hat = _propagate_spectrum(field_.spectrum(), lat.k_modes, t, algebra)
    return SpinorField(lat, np.fft.ifft(hat, axis=1))


def apply_hamiltonian(field_: SpinorField, algebra: DiracAlgebra) -> SpinorField:
    lat = field_.lattice
    hat = field_.spectrum()
    H = algebra.hamiltonian(lat.k_modes)
    return SpinorField(lat, np.fft.ifft(np.einsum("kij,jk->ik", H, hat), axis=1))


def spectral_mean(field_: SpinorField, func) -> float:
    """Expectation of a momentum-diagonal scalar ``func(k)``."""
    weight = np.sum(np.abs(field_.spectrum()) ** 2, axis=0)
    return float(np.sum(func(field_.lattice.k_modes) * weight) / np.sum(weight))


def centered_positions(field_: SpinorField, x_ref: float | None = None) -> tuple[np.ndarray, float, bool]:
    """Grid coordinates mapped into the length-L window around the centroid.

    Returns ``(positions, centroid, contained)``. Without ``x_ref`` the
    circular mean seeds the window. Positions are absolute (unwrapped)
    coordinates, so the centroid can drift past the box edges.
    """
    lat = field_.lattice
    rho = field_.density * lat.dx
    rho = rho / rho.sum()
    if x_ref is None:
        phase = np.angle(np.sum(rho * np.exp(2j * np.pi * lat.x / lat.L)))
        x_ref = phase * lat.L / (2 * np.pi)
    for _ in range(2):
        pos = x_ref + np.mod(lat.x - x_ref + 0.5 * lat.L, lat.L) - 0.5 * lat.L
        x_ref = float(np.dot(rho, pos))
    pos = x_ref + np.mod(lat.x - x_ref + 0.5 * lat.L, lat.L) - 0.5 * lat.L
    centroid = float(np.dot(rho, pos))
    inside = np.abs(pos - centroid) < 0.25 * lat.L
    contained = float(np.sum(rho[inside])) >= _CONTAINED_FRACTION
    return pos, centroid, contained


def alpha_x_density(field_: SpinorField, positions: np.ndarray) -> np.ndarray:
    """Pointwise psi^dagger alpha x psi; real because alpha and x commute."""
    u, l = field_.amplitudes
    return 2.0 * np.real(np.conj(u) * l) * positions


def _value_at(hat_row: np.ndarray, lattice: Lattice, x: float) -> complex:
    # band-limited (trigonometric) interpolation of one component
    return complex(np.sum(hat_row * np.exp(1j * lattice.k_modes * (x - lattice.x[0]))) / lattice.N)


def observables(
    field_: SpinorField,
    algebra: DiracAlgebra,
    tau0: float,
    *,
    t: float = 0.0,
    x_ref: float | None = None,
) -> ObservableRecord:
    """Expectation values of one state.

    ``x_ref`` is the previous centroid when called inside a time loop;
    ``phase_central`` is the raw (wrapped) phase of the upper component
    interpolated to the centroid.
    """
    lat = field_.lattice
    dx = lat.dx
    u, l = field_.amplitudes
    norm = field_.norm
    pos, x_mean, contained = centered_positions(field_, x_ref)

    hat = field_.spectrum()
    weight = np.sum(np.abs(hat) ** 2, axis=0)
    k = lat.k_modes
    p_mean = float(np.sum(k * weight) / np.sum(weight))
    m = algebra.mc2
    hu, hl = hat
    e_density = m * (np.abs(hu) ** 2 - np.abs(hl) ** 2) + 2.0 * k * np.real(np.conj(hu) * hl)
    E_mean = float(np.sum(e_density) / np.sum(weight))

    alpha_mean = float(np.sum(2.0 * np.real(np.conj(u) * l)) * dx / norm)
    beta_mean = float(np.sum(np.abs(u) ** 2 - np.abs(l) ** 2) * dx / norm)
    T_mean = float(np.sum(alpha_x_density(field_, pos)) * dx / norm) + tau0 * beta_mean
    phase = cmath.phase(_value_at(hu, lat, x_mean))

    return ObservableRecord(
        t=float(t),
        norm=norm,
        x_mean=x_mean,
        p_mean=p_mean,
        alpha_mean=alpha_mean,
        beta_mean=beta_mean,
        E_mean=E_mean,
        T_mean=T_mean,
        phase_central=phase,
        warning=not contained,
    )


def run(
    lattice: Lattice,
    packet: PacketSpec,
    algebra: DiracAlgebra,
    t_final: float,
    n_records: int,
    tau0: float,
) -> TimeSeries:
    """Observables at ``n_records`` equally spaced times in ``[0, t_final]``.

    Each record is propagated directly from the initial state, so errors
    do not accumulate. Raises :class:`ContainmentError` when more than 10 %
    of the records carry a containment warning.
    """
    if not t_final > 0:
        raise ValueError("t_final must be positive")
    if int(n_records) != n_records or n_records < 2:
        raise ValueError("n_records must be an integer ≥ 2")
    psi0 = gaussian_packet(lattice, packet, algebra)
    hat0 = psi0.spectrum()
    records = []
    x_prev = None
    for t in np.linspace(0.0, t_final, int(n_records)):
        hat = _propagate_spectrum(hat0, lattice.k_modes, float(t), algebra)
        psi = SpinorField(lattice, np.fft.ifft(hat, axis=1))
        rec = observables(psi, algebra, tau0, t=float(t), x_ref=x_prev)
        x_prev = rec.x_mean
        records.append(rec)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PhaseAliasingWarning)
        phases = unwrap_phase([r.phase_central for r in records])
    aliased = any(issubclass(w.category, PhaseAliasingWarning) for w in caught)
    records = [replace(r, phase_central=float(p)) for r, p in zip(records, phases)]
    series = TimeSeries(records, phase_aliased=aliased)
    if series.n_warnings > _MAX_WARNING_FRACTION * len(series):
        raise ContainmentError("packet escaped analysis window")
    return series


def displacement_check(field_: SpinorField, tau: float, algebra: DiracAlgebra) -> tuple[float, float, float]:
    """Centroid shift after a short evolution versus ``tau * <alpha>``.

    Returns ``(measured, predicted, |measured - predicted|)``; the
    difference is second order in ``tau`` when ``<alpha>`` is not constant.
    """
    before = observables(field_, algebra, 0.0)
    after = observables(evolve(field_, tau, algebra), algebra, 0.0, x_ref=before.x_mean)
    measured = after.x_mean - before.x_mean
    predicted = tau * before.alpha_mean
    return measured, predicted, abs(measured - predicted)
