# %% [markdown]
# # Water-waves reference: the strip solver
#
# The velocity potential is solved in the flattened strip `[0, L) x [-1, 0]`
# (Fourier in `x`, Chebyshev in `z`).  From it we get the depth-averaged
# velocity `Vbar` and the Dirichlet-to-Neumann map `G psi = -mu d_x(h Vbar)`.

# %%
import numpy as np

from fulldisp import Grid1D, Params
from fulldisp.strip import (
    StripGrid, SurfaceData, VbarKind, compute_dtn, compute_vbar, fd_gap, flat_dtn_symbol,
    solve_potential, solve_potential_fd, vbar_approx,
)

strip = StripGrid(Grid1D(64), 24)
g = strip.horizontal

# %% [markdown]
# Flat surface: the DtN map is the multiplier `sqrt(mu)|xi| tanh(sqrt(mu)|xi|)`.

# %%
psi = np.sin(g.x) + 0.3 * np.cos(3 * g.x)
for mu in (0.01, 0.1, 1.0):
    d = SurfaceData(np.zeros(g.n), psi, Params(mu, 0.0))
    exact = g.apply_multiplier(psi, lambda xi: flat_dtn_symbol(xi, mu))
    err = np.max(np.abs(compute_dtn(d, strip) - exact)) / np.max(np.abs(exact))
    print(f"mu = {mu:5.2f}: relative DtN error {err:.1e}")

# %% [markdown]
# Wavy surface: compare against an independent second-order finite-difference
# solve on successively finer grids.  The gap should shrink by four per refinement.

# %%
d = SurfaceData(0.5 * np.cos(g.x), np.sin(g.x), Params(0.3, 0.1))
phi = solve_potential(d, strip)
print("fixed-point iterations:", phi.iterations)
prev = None
for nx, nz in ((64, 32), (128, 64), (256, 128)):
    gap = fd_gap(phi, solve_potential_fd(d, g, nx, nz))
    print(f"FD {nx:4d} x {nz:4d}: gap {gap:.3e}" + (f"  ratio {prev / gap:.2f}" if prev else ""))
    prev = gap

# %% [markdown]
# Closed-form approximations of `Vbar` and their errors.

# %%
vb = compute_vbar(phi, d)
for kind in VbarKind:
    print(f"{kind.value:12s} |Vbar - approx| = {g.norm(vb - vbar_approx(kind, d, g)):.3e}")
