# %% [markdown]
# # Linear dispersion of each model
#
# `omega^2` is read off the numerical right-hand side by linearising about rest.
# The full-dispersion systems reproduce `omega^2 = xi^2 tanh(sqrt(mu) xi)/(sqrt(mu) xi)`
# at every resolved mode.  The classical ones only agree for small `sqrt(mu) xi`.

# %%
import numpy as np

from fulldisp import Grid1D, Params
from fulldisp.models import Model, ModelKind, measured_omega2, omega2_exact

g = Grid1D(32)
P = Params(1.0, 0.1)
modes = [1, 2, 3, 5, 8]
print(f"{'model':14s}" + "".join(f"{'k=' + str(k):>11s}" for k in modes))
print(f"{'exact':14s}" + "".join(f"{omega2_exact(k, P):11.5f}" for k in modes))
for kind in ModelKind:
    m = Model(kind, g, P, nz=16)
    print(f"{kind.value:14s}" + "".join(f"{measured_omega2(m, k):11.5f}" for k in modes))

# %% [markdown]
# Negative values for GN1-classical and WB-classical mean a growing mode:
# `1 - mu xi^2 / 3` changes sign at `sqrt(mu) xi = sqrt(3)`.
