"""Named families of smooth periodic initial data."""
from __future__ import annotations

import numpy as np

from ..errors import DomainError
from ..spectral import Grid1D


def cosine(grid: Grid1D, a=0.5, k=1, b=0.5, m=1, phase=0.0):
    """``zeta = a cos(k x'), psi = b sin(m x')`` with ``x' = 2 pi x / L + phase``."""
    s = 2 * np.pi / grid.length * grid.x + phase
    return a * np.cos(k * s), b * np.sin(m * s)


def gaussian_periodic(grid: Grid1D, a=0.5, width=0.5, center=None, b=0.0, images=6):
    """Periodised Gaussian bump of peak ``a`` and standard deviation ``width``.

    ``psi`` is ``b`` times the same bump, so ``b = 0`` starts from rest.
    """
    if width <= 0:
        raise DomainError("width must be positive")
    L = grid.length
    c = L / 2 if center is None else center
    bump = np.zeros(grid.n)
    for j in range(-images, images + 1):
        bump += np.exp(-0.5 * ((grid.x - c + j * L) / width) ** 2)
    bump /= bump.max()
    return a * bump, b * bump


def make_initial(grid: Grid1D, spec: dict, kmax=None):
    """Build ``(zeta, psi)`` from an ``[initial]`` config section, band-limited to ``kmax``.

    ``kmax`` defaults to the dealiasing cutoff ``n/3`` (``spec['kmax'] > 0`` overrides).
    """
    fam = spec.get("family", "cosine")
    if fam == "cosine":
        zeta, psi = cosine(grid, spec.get("a", 0.5), spec.get("k", 1), spec.get("b", 0.5),
                           spec.get("m", 1), spec.get("phase", 0.0))
    elif fam == "gaussian-periodic":
        zeta, psi = gaussian_periodic(grid, spec.get("a", 0.5), spec.get("width", 0.5),
                                      spec.get("center"), spec.get("b", 0.0))
    else:
        raise DomainError(f"unknown initial-condition family {fam!r}")
    if kmax is None:
        kmax = spec.get("kmax", -1)
        if kmax is None or kmax <= 0:
            kmax = grid.n / 3
    return grid.band_limited(zeta, kmax), grid.band_limited(psi, kmax)
