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
# # Hodge numbers across lattices
#
# The quintic simplex is reflexive on 64 lattices.  Each gives a
# Calabi-Yau threefold; here we tabulate their Hodge numbers.

# %%
from collections import Counter

from refpoly import WeightSystem, delta_of_q, enumerate_lattices, hodge_numbers, picard

# %%
quintic = delta_of_q(WeightSystem((1, 1, 1, 1, 1)))
print(hodge_numbers(quintic).h)

reals = enumerate_lattices(quintic)
table = Counter((r.index, tuple(hodge_numbers(r.polytope()).h)) for r in reals)
for (index, h), count in sorted(table.items()):
    print(f"index {index:3d}  h11={h[0]:3d} h12={h[1]:3d}  x{count}")

# %% [markdown]
# For the quartic K3 the Picard number moves between 1 and 19.

# %%
quartic = delta_of_q(WeightSystem((1, 1, 1, 1)))
print(sorted({(r.index, picard(r.polytope())) for r in enumerate_lattices(quartic)}))
