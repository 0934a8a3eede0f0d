# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Fibrations from sections and projections
#
# A reflexive section of the dual polytope gives a fibration; a unique
# weight partition whose facet is reflexive gives one too.

# %%
from refpoly import WeightSystem, delta_of_q
from refpoly.fibration import (count_reflexive_projections, facet_projection,
                               reflexive_facet_projections, reflexive_sections)

# %%
for w in [(1, 1, 4, 6), (1, 1, 2, 2, 2), (1, 1, 12, 28, 42), (8, 4, 3, 27, 42)]:
    ws = WeightSystem(w)
    fibers = [facet_projection(ws, p).weights for p in reflexive_facet_projections(ws)]
    print(w, "Pi =", count_reflexive_projections(ws), "facet fibers:", fibers)

# %% [markdown]
# The K3 fibration of the (1,1,2,2,2) threefold in detail.

# %%
DS = delta_of_q(WeightSystem((1, 1, 2, 2, 2))).dual()
for f in reflexive_sections(DS, 3):
    print("fiber", f.fiber_weights, "base rays", f.base_rays, "reducible", f.reducible_rays)
