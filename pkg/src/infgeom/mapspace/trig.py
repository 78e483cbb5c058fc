"""Trigonometric interpolation and spectral differentiation on equispaced
grids of the circle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["GridS1", "TrigInterpolant", "interpolate", "spectral_derivative", "is_node"]


@dataclass(frozen=True)
class GridS1:
    """Equispaced nodes ``theta_j = 2 pi j / N`` (N even, N >= 8)."""

    N: int

    def __post_init__(self):
        if self.N < 8 or self.N % 2:
            raise ValueError(f"grid size must be even and >= 8, got {self.N}")

    @property
    def nodes(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.N) / self.N

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.fft.fftfreq(self.N, 1.0 / self.N)


class TrigInterpolant:
    """Trigonometric interpolant of grid samples, with cached coefficients.

    ``values`` has shape ``(N,)`` or ``(N, d)``. The Nyquist mode is split
    symmetrically, so the interpolant is real and reproduces the samples at
    the nodes. Constant data are reproduced exactly everywhere.
    """

    def __init__(self, values: np.ndarray):
        values = np.asarray(values, dtype=float)
        self.N = values.shape[0]
        self.tail = values.shape[1:]
        self.constant = bool(np.all(values == values[0]))
        self._first = values[0]
        c = np.fft.fft(values, axis=0) / self.N
        self._c = c.reshape(self.N, -1)
        self._k = np.fft.fftfreq(self.N, 1.0 / self.N)
        self._dc = None

    def __call__(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        th = np.atleast_1d(theta).ravel()
        if self.constant:
            out = np.broadcast_to(self._first, th.shape + self.tail).copy()
        else:
            out = self._evaluate(self._c, th).reshape(th.shape + self.tail)
        return out[0] if theta.ndim == 0 else out.reshape(theta.shape + self.tail)

    def derivative(self, theta) -> np.ndarray:
        """Derivative of the interpolant (Nyquist mode dropped)."""
        if self._dc is None:
            d = (1j * self._k)[:, None] * self._c
            d[self.N // 2] = 0.0
            self._dc = d
        theta = np.asarray(theta, dtype=float)
        th = np.atleast_1d(theta).ravel()
        out = self._evaluate(self._dc, th).reshape(th.shape + self.tail)
        return out[0] if theta.ndim == 0 else out.reshape(theta.shape + self.tail)

    def _evaluate(self, c: np.ndarray, th: np.ndarray) -> np.ndarray:
        phase = np.exp(1j * np.outer(th, self._k))
        nyq = self.N // 2
        phase[:, nyq] = np.cos(nyq * th)
        return (phase @ c).real


def interpolate(values: np.ndarray, theta) -> np.ndarray:
    """Evaluate the trigonometric interpolant of grid ``values`` at ``theta``."""
    return TrigInterpolant(values)(theta)


def spectral_derivative(values: np.ndarray, order: int = 1) -> np.ndarray:
    """Derivative of the trigonometric interpolant at the nodes (Nyquist mode
    dropped for odd orders)."""
    values = np.asarray(values, dtype=float)
    N = values.shape[0]
    k = np.fft.fftfreq(N, 1.0 / N)
    mult = (1j * k) ** order
    if order % 2:
        mult[N // 2] = 0.0
    shape = (N,) + (1,) * (values.ndim - 1)
    return np.fft.ifft(np.fft.fft(values, axis=0) * mult.reshape(shape), axis=0).real


def is_node(theta: float, N: int, tol: float = 1e-13) -> int | None:
    """Index of the grid node at ``theta`` (mod 2 pi), or ``None``."""
    x = (theta % (2.0 * np.pi)) * N / (2.0 * np.pi)
    j = int(round(x))
    if abs(x - j) <= tol * N:
        return j % N
    return None
