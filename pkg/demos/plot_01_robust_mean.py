"""
Choosing the deepest group mean
===============================

Split a heavy-tailed sample into groups, average each group, and keep the
group mean whose distance to its nearest majority of other means is smallest.
On the real line this is a close cousin of the median of means.
"""

import numpy as np

from gros import CandidatePool, choose_k, minimize_on_line, partition_indices, select_index

rng = np.random.default_rng(0)

# Student(3) data with a few gross outliers
x = 5.0 + rng.standard_t(3, size=2400)
x[:5] = 1e6

K = choose_k(0.05)                      # 24 groups for confidence 95%
groups = partition_indices(len(x), K, rng)
means = np.array([x[g].mean() for g in groups])

sel = select_index(CandidatePool(means))
centre, radius = minimize_on_line(means)

print(f"groups: {K}")
print(f"plain mean            {x.mean():12.4f}")
print(f"selected group mean   {means[sel.selected_index]:12.4f}  (depth {sel.selected_depth:.4f})")
print(f"exact depth minimiser {centre:12.4f}  (depth {radius:.4f})")
print(f"median of means       {np.median(means):12.4f}")

###############################################################################
# The same selection works for vectors: the metric defaults to Euclidean.

pts = rng.standard_t(2, size=(1000, 3))
gm = np.array([pts[g].mean(axis=0) for g in partition_indices(1000, 10, rng)])
print("3-D selected mean:", gm[select_index(CandidatePool(gm)).selected_index].round(3))
