# %% [markdown]
# # Approximate Hamiltonians
#
# Both approximate energies differ from the exact water-waves energy by
# `O(mu^2 eps)`, and they coincide with it on a flat surface.

# %%
from fulldisp.harness.experiments import hamiltonian_sweep

axis = (0.05, 0.1, 0.2, 0.4)
rep, flat = hamiltonian_sweep(axis, axis)
for row in rep.fit_rows():
    print({k: (round(v, 3) if isinstance(v, float) else v) for k, v in row.items()})
for c in rep.checks() + flat.checks:
    print(c.line())

# %% [markdown]
# Gradient checks: each functional's analytic derivative against centred differences.

# %%
from fulldisp.harness.experiments import variational_suite

for c in variational_suite().checks:
    print(c.line())
