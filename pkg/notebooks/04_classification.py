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
# # Classifying reflexive polytopes
#
# Start from the maximal polytopes Delta(q) and shrink.  Dimension 2 is
# instant; dimension 3 takes a few minutes.

# %%
import time
from collections import Counter

from refpoly import classify, connectedness_report
from refpoly.classify import polytope_from_key

# %%
run2 = classify(2)
print(run2.count, "polygons, connected:", connectedness_report(run2)[0])
print(sorted(len(polytope_from_key(k).lattice_points()) for k in run2.store.keys))

# %%
t = time.time()
run3 = classify(3, with_lattices=True)
print(run3.count, "polytopes in", round(time.time() - t), "s")
print("connected:", connectedness_report(run3)[0])

# %%
sizes = Counter(len(polytope_from_key(k).vertices) for k in run3.store.keys)
print(sorted(sizes.items()))
