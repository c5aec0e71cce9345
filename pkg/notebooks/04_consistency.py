# %% [markdown]
# # Consistency with the water-waves equations
#
# Exact water-waves time derivatives are substituted into each model.  The
# leftover residual should scale like `mu^2 eps` for the Green-Naghdi type systems
# and like `mu eps` for Whitham-Boussinesq.

# %%
from fulldisp.harness.experiments import consistency_sweep

axis = (0.05, 0.1, 0.2, 0.4)
rep, extra = consistency_sweep(["FDGN1", "FDGN2", "FDGN-DIT", "WB", "GN1-classical"], axis, axis)
for row in rep.fit_rows():
    print({k: (round(v, 3) if isinstance(v, float) else v) for k, v in row.items()})
for c in rep.checks() + extra.checks:
    print(c.line())
