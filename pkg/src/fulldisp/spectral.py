"""Periodic pseudo-spectral operations on a uniform 1-D grid.

Fields are plain real ``ndarray`` samples at ``grid.x``; Fourier coefficients
use numpy's FFT ordering normalised so that ``coeffs[0]`` is the sample mean.
Fourier multipliers are given as callables of ``|xi|`` (vectorised) or as
precomputed arrays on the half spectrum ``grid.xi_half``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from typing import Callable, Union

import numpy as np

from .errors import DomainError, MultiplierError

Symbol = Union[Callable[[np.ndarray], np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid of ``n`` points on ``[0, length)``.

    Parameters
    ----------
    n : int
        Number of samples, even and at least 8.
    length : float
        Period of the torus.
    dealias : bool
        Apply the 2/3 rule after nonlinear products taken with :meth:`mul`.
    """

    n: int
    length: float = 2 * np.pi
    dealias: bool = True

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 8 or self.n % 2:
            raise DomainError(f"grid size must be an even integer >= 8, got {self.n}")
        if not np.isfinite(self.length) or self.length <= 0:
            raise DomainError(f"period must be positive, got {self.length}")

    def with_dealias(self, flag: bool) -> "Grid1D":
        return replace(self, dealias=flag)

    @cached_property
    def x(self) -> np.ndarray:
        return np.arange(self.n) * (self.length / self.n)

    @property
    def dx(self) -> float:
        return self.length / self.n

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Signed wavenumbers in FFT order, Nyquist taken as +n/2."""
        k = np.fft.fftfreq(self.n, d=1.0 / self.n)
        k[self.n // 2] = self.n // 2
        return 2 * np.pi / self.length * k

    @cached_property
    def xi_half(self) -> np.ndarray:
        """Non-negative wavenumbers of the real FFT (length n//2 + 1)."""
        return 2 * np.pi / self.length * np.arange(self.n // 2 + 1)

    @cached_property
    def _dealias_mask(self) -> np.ndarray:
        kk = np.arange(self.n // 2 + 1)
        return kk <= self.n / 3.0

    # -- transforms ---------------------------------------------------------
    def to_spectral(self, f: np.ndarray) -> np.ndarray:
        f = self._check_real(f)
        return np.fft.fft(f, axis=-1) / self.n

    def to_real(self, c: np.ndarray) -> np.ndarray:
        c = np.asarray(c)
        if c.shape[-1] != self.n:
            raise DomainError(f"expected {self.n} coefficients, got {c.shape[-1]}")
        return np.real(np.fft.ifft(c * self.n, axis=-1))

    def _check_real(self, f) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        if f.shape[-1] != self.n:
            raise DomainError(f"field has {f.shape[-1]} samples, grid has {self.n}")
        return f

    # -- linear operators -----------------------------------------------------
    def derivative(self, f: np.ndarray, order: int = 1) -> np.ndarray:
        """Spectral derivative along the last axis. Odd orders drop the Nyquist mode."""
        if order < 0:
            raise DomainError("derivative order must be non-negative")
        f = self._check_real(f)
        if order == 0:
            return f.copy()
        mult = (1j * self.xi_half) ** order
        if order % 2:
            mult[-1] = 0.0
        return np.fft.irfft(np.fft.rfft(f, axis=-1) * mult, n=self.n, axis=-1)

    def dx1(self, f):
        return self.derivative(f, 1)

    def dx2(self, f):
        return self.derivative(f, 2)

    def symbol_values(self, symbol: Symbol) -> np.ndarray:
        """Evaluate a multiplier on ``xi_half`` and check it is finite."""
        if callable(symbol):
            vals = np.asarray(symbol(self.xi_half), dtype=float)
        else:
            vals = np.asarray(symbol, dtype=float)
        if vals.shape != self.xi_half.shape:
            vals = np.broadcast_to(vals, self.xi_half.shape)
        bad = ~np.isfinite(vals)
        if bad.any():
            i = int(np.argmax(bad))
            raise MultiplierError(f"symbol not finite at xi={self.xi_half[i]:g}", self.xi_half[i])
        return vals

    def apply_multiplier(self, f: np.ndarray, symbol: Symbol) -> np.ndarray:
        """Apply the even Fourier multiplier ``symbol(|D|)`` to ``f``."""
        f = self._check_real(f)
        vals = self.symbol_values(symbol)
        return np.fft.irfft(np.fft.rfft(f, axis=-1) * vals, n=self.n, axis=-1)

    # -- nonlinear helpers -------------------------------------------------
    def dealias_field(self, f: np.ndarray) -> np.ndarray:
        """Zero every mode with ``|k| > n/3``."""
        f = self._check_real(f)
        return np.fft.irfft(np.fft.rfft(f, axis=-1) * self._dealias_mask, n=self.n, axis=-1)

    def dealias_coeffs(self, c: np.ndarray) -> np.ndarray:
        c = np.array(c, dtype=complex)
        k = np.abs(np.fft.fftfreq(self.n, d=1.0 / self.n))
        c[..., k > self.n / 3.0] = 0.0
        return c

    def mul(self, *fields) -> np.ndarray:
        """Pointwise product, truncated by the 2/3 rule when dealiasing is on."""
        out = np.asarray(fields[0], dtype=float)
        for g in fields[1:]:
            out = out * g
        return self.dealias_field(out) if self.dealias else out

    # -- quadrature ----------------------------------------------------------
    def integrate(self, f: np.ndarray) -> float:
        """Integral over one period (exact for trigonometric polynomials below Nyquist)."""
        f = self._check_real(f)
        return float(self.length * np.mean(f, axis=-1)) if f.ndim == 1 else self.length * np.mean(f, axis=-1)

    def inner(self, f, g) -> float:
        return self.integrate(np.asarray(f) * np.asarray(g))

    def norm(self, f) -> float:
        return float(np.sqrt(max(self.inner(f, f), 0.0)))

    def sobolev_norm(self, f, s: float = 2.0) -> float:
        """Discrete ``H^s`` norm, ``(sum (1+xi^2)^s |c_k|^2 L)^(1/2)``."""
        c = self.to_spectral(f)
        w = (1.0 + self.wavenumbers**2) ** s
        return float(np.sqrt(self.length * np.sum(w * np.abs(c) ** 2)))

    def band_limited(self, f: np.ndarray, kmax: float) -> np.ndarray:
        """Project onto modes with ``|k| <= kmax`` (integer mode index)."""
        f = self._check_real(f)
        keep = np.arange(self.n // 2 + 1) <= kmax
        return np.fft.irfft(np.fft.rfft(f, axis=-1) * keep, n=self.n, axis=-1)
