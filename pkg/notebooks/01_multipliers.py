# %% [markdown]
# # Fourier multipliers
#
# The full-dispersion models are built from four symbols of `x = sqrt(mu)|xi|`:
# `F1 = tanh(x)/x`, `F2`, `F3` and the vertical profile `F0(z)`.  This script
# tabulates them, checks the algebraic identities that tie them together and
# looks at the pointwise upper bound on `F3`.

# %%
import numpy as np

from fulldisp import Params, eval_F0, eval_F1, eval_F2, eval_F3
from fulldisp.multipliers import f3_bound_residual, f3_sharp_bound_residual

P = Params(mu=1.0, eps=0.0)
xi = np.array([0.0, 1e-4, 0.1, 1.0, 3.0, 10.0, 100.0])
print(f"{'xi':>8} {'F1':>12} {'F2':>12} {'F3':>12} {'F0(z=-1)':>12}")
for k, a, b, c, d in zip(xi, eval_F1(xi, P), eval_F2(xi, P), eval_F3(xi, P), eval_F0(-1.0, xi, P)):
    print(f"{k:8.4g} {a:12.9f} {b:12.9f} {c:12.9f} {d:12.4e}")

# %% [markdown]
# Two identities hold exactly: `1 - (x^2/3) F2 = F1` and `F3 F1 = F2`.

# %%
xs = np.geomspace(1e-6, 1e3, 2000)
f1, f2, f3 = eval_F1(xs, P), eval_F2(xs, P), eval_F3(xs, P)
print("max |1 - x^2 F2 / 3 - F1| =", np.max(np.abs(1 - xs**2 * f2 / 3 - f1)))
print("max |F3 F1 - F2|          =", np.max(np.abs(f3 * f1 - f2)))

# %% [markdown]
# The bound `F3 <= 1/(1 + x/3)` fails for large `x`: there `F3 ~ 3/x - 3/x^2`,
# which exceeds `3/(x + 3)`.  The bound `F3 <= 3/(1 + x)` holds everywhere.

# %%
print("max of F3 (1 + x/3) - 1:", f3_bound_residual(xs, P).max())
print("max of F3 (1 + x)/3 - 1:", f3_sharp_bound_residual(xs, P).max())
