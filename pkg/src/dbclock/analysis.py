"""Fits, phase unwrapping and dominant-frequency estimation for time series."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Series",
    "FrequencyEstimate",
    "NoDominantComponent",
    "PhaseAliasingWarning",
    "linear_fit",
    "dominant_frequency",
    "detrended_amplitude",
    "unwrap_phase",
]

_ALIAS_GUARD = 0.9 * math.pi


class NoDominantComponent(ValueError):
    pass


class PhaseAliasingWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Series:
    """Uniformly sampled real series."""

    t: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "y", y)
        if t.ndim != 1 or t.shape != y.shape:
            raise ValueError("t and y must be 1-D and of equal length")
        if len(t) < 4:
            raise ValueError("series needs at least 4 samples")
        dt = np.diff(t)
        if np.any(dt <= 0):
            raise ValueError("t must be strictly increasing")
        if np.max(np.abs(dt - dt.mean())) > 1e-9 * abs(dt.mean()):
            raise ValueError("t must be uniformly spaced")

    @property
    def dt(self) -> float:
        return float((self.t[-1] - self.t[0]) / (len(self.t) - 1))


def linear_fit(t, y=None) -> tuple[float, float, float]:
    """Ordinary least squares line through (t, y).

    Accepts either a :class:`Series` or two arrays; the abscissa need not be
    uniform when arrays are passed. Returns ``(slope, intercept, rms_residual)``.
    """
    if y is None:
        t, y = t.t, t.y
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.shape != y.shape or t.size < 2:
        raise ValueError("need at least two paired samples")
    tc = t - t.mean()
    sxx = float(np.dot(tc, tc))
    if sxx == 0.0 or sxx <= 1e-300:
        raise ValueError("degenerate abscissa")
    ym = y.mean()
    slope = float(np.dot(tc, y - ym) / sxx)
    intercept = float(ym - slope * t.mean())
    resid = y - (slope * t + intercept)
    return slope, intercept, float(np.sqrt(np.mean(resid**2)))


def detrended_amplitude(t, y=None) -> float:
    """Largest absolute deviation from the least-squares line."""
    if y is None:
        t, y = t.t, t.y
    slope, intercept, _ = linear_fit(t, y)
    return float(np.max(np.abs(np.asarray(y) - (slope * np.asarray(t) + intercept))))


@dataclass(frozen=True)
class FrequencyEstimate:
    omega: float
    amplitude: float
    half_width: float


def dominant_frequency(s: Series) -> FrequencyEstimate:
    """Strongest oscillation in ``s`` after removing a linear trend.

    Hann window, peak bin of the one-sided spectrum (DC excluded), then a
    parabola through the log-magnitudes of the peak and its neighbours.
    Raises :class:`NoDominantComponent` unless the peak is at least ten
    times the median bin magnitude.
    """
    slope, intercept, _ = linear_fit(s)
    resid = s.y - (slope * s.t + intercept)
    n = len(resid)
    win = np.hanning(n)
    mag = np.abs(np.fft.rfft(resid * win))
    body = mag[1:]
    peak = int(np.argmax(body)) + 1
    scale = max(1.0, float(np.max(np.abs(s.y))))
    if mag[peak] <= 10.0 * np.median(body) or mag[peak] <= 1e-12 * scale * win.sum():
        raise NoDominantComponent("no dominant component")

    offset = 0.0
    height = mag[peak]
    if 1 <= peak < len(mag) - 1 and mag[peak - 1] > 0 and mag[peak + 1] > 0:
        a, b, g = np.log(mag[peak - 1 : peak + 2])
        denom = a - 2.0 * b + g
        if denom < 0:
            offset = 0.5 * (a - g) / denom
            height = math.exp(b - 0.25 * (a - g) * offset)

    bin_width = 2.0 * math.pi / (n * s.dt)
    return FrequencyEstimate(
        omega=(peak + offset) * bin_width,
        amplitude=2.0 * height / win.sum(),
        half_width=0.5 * bin_width,
    )


def unwrap_phase(raw) -> np.ndarray:
    """Add multiples of 2*pi so successive differences fall within [-pi, pi).

    Emits :class:`PhaseAliasingWarning` when a reduced step exceeds 0.9*pi,
    i.e. when the sampling is too coarse to trust the continuation.
    """
    raw = np.asarray(raw, dtype=float)
    out = np.unwrap(raw)
    if raw.size > 1 and np.any(np.abs(np.diff(out)) > _ALIAS_GUARD):
        warnings.warn("phase step exceeds 0.9*pi; unwrapping may alias", PhaseAliasingWarning, stacklevel=2)
    return out
