"""Disturbance models: polyharmonic specs, shaping-filter spectra, irregular seas.

Phase convention (used everywhere in the package): the time-domain component
a sin(w t + phi) is carried as the complex amplitude d = a exp(i (phi - pi/2)),
so that Re(d e^(iwt)) reproduces the sine.  A zero-frequency component is a
real constant c whose mean square is c^2, not c^2 / 2.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .lti import HarmonicInput

CHANNELS = ("psi_bar", "d_phi", "d_psi")


def sin_to_complex(a: float, phi: float) -> complex:
    """Encode a sin(wt + phi) as a complex amplitude."""
    return a * cmath.exp(1j * (phi - math.pi / 2.0))


def complex_to_sin(d: complex) -> Tuple[float, float]:
    """Decode a complex amplitude back to (a, phi) with a >= 0."""
    return abs(d), cmath.phase(d) + math.pi / 2.0


@dataclass(frozen=True)
class DisturbanceSpec:
    """Frequencies plus per-channel complex amplitudes, channel order CHANNELS.

    frequencies are strictly increasing and nonnegative; the amplitude column
    at w = 0, if present, must be real.
    """

    frequencies: np.ndarray
    amplitudes: np.ndarray  # shape (3, n_freq), complex

    def __init__(self, frequencies, amplitudes):
        f = np.asarray(frequencies, dtype=float)
        a = np.atleast_2d(np.asarray(amplitudes, dtype=complex))
        if f.ndim != 1:
            raise ValueError("frequencies must be one-dimensional")
        if f.size and (np.any(np.diff(f) <= 0) or f[0] < 0):
            raise ValueError("frequencies must be strictly increasing and nonnegative")
        if a.shape != (len(CHANNELS), f.size):
            raise ValueError(f"amplitudes must be {len(CHANNELS)} x {f.size}")
        if not np.all(np.isfinite(a)):
            raise ValueError("amplitudes must be finite")
        if f.size and f[0] == 0.0 and np.any(a[:, 0].imag != 0):
            raise ValueError("zero-frequency amplitudes must be real")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "amplitudes", a)

    @property
    def n_frequencies(self) -> int:
        return self.frequencies.size

    def mean_square(self) -> np.ndarray:
        """Per-channel steady mean square: sum |d|^2/2 over w > 0 plus c^2 at w = 0."""
        weights = np.where(self.frequencies == 0.0, 1.0, 0.5)
        return (np.abs(self.amplitudes) ** 2) @ weights

    def to_json(self) -> str:
        payload = {
            "frequencies": [float(w) for w in self.frequencies],
            "channels": list(CHANNELS),
            "amplitudes": [
                [[float(d.real), float(d.imag)] for d in row] for row in self.amplitudes
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @staticmethod
    def from_json(text: str) -> "DisturbanceSpec":
        data = json.loads(text)
        if tuple(data.get("channels", CHANNELS)) != CHANNELS:
            raise ValueError("unexpected channel layout")
        amps = np.array([[complex(re, im) for re, im in row] for row in data["amplitudes"]],
                        dtype=complex).reshape(len(CHANNELS), -1)
        return DisturbanceSpec(np.asarray(data["frequencies"], dtype=float), amps)


def polyharmonic_signal(spec: DisturbanceSpec) -> HarmonicInput:
    """Exosystem-ready callable t -> (psi_bar, d_phi, d_psi)."""
    return HarmonicInput(spec.frequencies, spec.amplitudes)


def single_sine_spec(omega: float, a_phi: float, phi_phi: float,
                     a_psi: float, phi_psi: float, psi_bar: float = 0.0) -> DisturbanceSpec:
    """One wave frequency on the motion channels, optional constant heading setpoint."""
    if omega <= 0:
        raise ValueError("wave frequency must be positive")
    freqs = [omega]
    amps = [[0.0], [sin_to_complex(a_phi, phi_phi)], [sin_to_complex(a_psi, phi_psi)]]
    if psi_bar != 0.0:
        freqs = [0.0, omega]
        amps = [[psi_bar, 0.0], [0.0, amps[1][0]], [0.0, amps[2][0]]]
    return DisturbanceSpec(np.array(freqs), np.array(amps, dtype=complex))


@dataclass(frozen=True)
class SpectrumTable:
    """Sampled one-sided spectral density S(w) >= 0 on an increasing grid."""

    omega: np.ndarray
    S: np.ndarray

    def __init__(self, omega, S):
        w = np.asarray(omega, dtype=float)
        s = np.asarray(S, dtype=float)
        if w.ndim != 1 or w.shape != s.shape or w.size == 0:
            raise ValueError("omega and S must be equal-length 1-d arrays")
        if np.any(np.diff(w) <= 0):
            raise ValueError("omega grid must be strictly increasing")
        if np.any(s < 0):
            raise ValueError("spectral density must be nonnegative")
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "S", s)

    def __len__(self) -> int:
        return self.omega.size

    def bin_widths(self) -> np.ndarray:
        """Forward differences, last bin repeating the previous width."""
        if len(self) == 1:
            return np.array([1.0])
        dw = np.diff(self.omega)
        return np.append(dw, dw[-1])

    def total_energy(self) -> float:
        """Riemann sum of S over the grid, the variance target of a realization."""
        return float(np.sum(self.S * self.bin_widths()))

    def to_csv(self, path) -> None:
        with open(path, "w") as f:
            f.write("omega_rad_s, S\n")
            for w, s in zip(self.omega, self.S):
                f.write(f"{float(w)!r}, {float(s)!r}\n")

    @staticmethod
    def from_csv(path) -> "SpectrumTable":
        with open(path) as f:
            header = f.readline()
            if [c.strip() for c in header.split(",")] != ["omega_rad_s", "S"]:
                raise ValueError("spectrum CSV must start with header 'omega_rad_s, S'")
            rows = [line.split(",") for line in f if line.strip()]
        data = np.array([[float(a), float(b)] for a, b in rows])
        return SpectrumTable(data[:, 0], data[:, 1])


def shaping_filter_spectrum(K_w: float, omega0: float, zeta0: float,
                            grid: Optional[np.ndarray] = None) -> SpectrumTable:
    """|H(iw)|^2 for the first-order wave shaping filter.

    H(s) = K_w s / (s^2 + 2 zeta0 omega0 s + omega0^2); the squared magnitude
    peaks exactly at w = omega0 with value (K_w / (2 zeta0 omega0))^2.

    Args:
        grid: sample frequencies; default 1000 uniform points on (0, 4 omega0].
    """
    if K_w <= 0 or omega0 <= 0 or not (0 < zeta0 < 1):
        raise ValueError("require K_w > 0, omega0 > 0, zeta0 in (0, 1)")
    if grid is None:
        grid = np.linspace(0.0, 4.0 * omega0, 1001)[1:]
    w = np.asarray(grid, dtype=float)
    H = K_w * 1j * w / ((omega0 ** 2 - w ** 2) + 2j * zeta0 * omega0 * w)
    return SpectrumTable(w, np.abs(H) ** 2)


def sample_irregular_sea(table: SpectrumTable, p: int, seed: int) -> DisturbanceSpec:
    """Spectral sampling of an irregular sea onto the motion channels.

    Amplitudes follow a_i = sqrt(2 S(w_i) dw) so the realization's variance
    reproduces the Riemann sum of the density; roll and yaw phases are drawn
    independently, uniform on [0, 2 pi], from a seeded generator.  The heading
    setpoint channel stays zero.

    Raises:
        ValueError: p < 1 or p exceeding the table size.
    """
    if p < 1:
        raise ValueError("need at least one component")
    if p > len(table):
        raise ValueError(f"p = {p} exceeds spectrum table size {len(table)}")
    idx = np.unique(np.round(np.linspace(0, len(table) - 1, p)).astype(int))
    omega = table.omega[idx]
    sub = SpectrumTable(omega, table.S[idx])
    a = np.sqrt(2.0 * sub.S * sub.bin_widths())
    rng = np.random.default_rng(seed)
    ph_phi = rng.uniform(0.0, 2.0 * math.pi, size=a.size)
    ph_psi = rng.uniform(0.0, 2.0 * math.pi, size=a.size)
    amps = np.zeros((3, a.size), dtype=complex)
    amps[1] = a * np.exp(1j * (ph_phi - math.pi / 2.0))
    amps[2] = a * np.exp(1j * (ph_psi - math.pi / 2.0))
    if omega[0] == 0.0:
        amps[:, 0] = amps[:, 0].real  # S(0) grid point carries a real constant
    return DisturbanceSpec(omega, amps)


def dominant_frequencies(table: SpectrumTable, count: int) -> Tuple[List[float], bool]:
    """The `count` strongest interior peaks of S, strongest first.

    Boundary samples never count as peaks.  Returns (frequencies, truncated):
    truncated is True when fewer peaks exist than requested.
    """
    if count < 1:
        raise ValueError("count must be positive")
    S, w = table.S, table.omega
    peaks = [
        (S[i], -w[i], w[i])
        for i in range(1, len(table) - 1)
        if S[i] > S[i - 1] and S[i] > S[i + 1]
    ]
    peaks.sort(reverse=True)  # by S descending, ties broken toward lower omega
    found = [p[2] for p in peaks[:count]]
    return found, len(found) < count
