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
# # Weight systems and their polytopes
#
# Enumerate the weight systems with four weights, build Delta(q) for a few
# of them and look at the minimality types.

# %%
from collections import Counter

from refpoly import WeightSystem, delta_of_q, enumerate_single_ws, minimality_type

# %%
candidates = enumerate_single_ws(4, "candidates")
ip = enumerate_single_ws(4, "ip")
print(len(candidates), "candidates,", len(ip), "with the IP property")
print("dropped:", sorted(set(w.weights for w in candidates) - set(w.weights for w in ip)))

# %% [markdown]
# Point counts of Delta(q) and its dual for the first few systems.

# %%
for w in ip[:8]:
    D = delta_of_q(w)
    S = D.dual()
    print(w.format(), len(D.lattice_points()), len(D.vertices),
          len(S.lattice_points()) if S.is_lattice else "-", len(S.vertices))

# %%
types = Counter(minimality_type(w).letter for w in ip)
print(types)
