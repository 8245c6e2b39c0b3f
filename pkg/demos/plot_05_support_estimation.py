"""
Convex support estimation with outliers
=======================================

Points from the unit disk with 1% of them thrown into the ring between radius
1 and 1.25. The hull of the full sample grabs every outlier; the selected
group hull mostly does not.
"""

import matplotlib.pyplot as plt
import numpy as np

from gros.samplers import sample_ring_mixture
from gros.sets import hausdorff_to_unit_disk, rchull_fit

rng = np.random.default_rng(3)
X, outlier = sample_ring_mixture(2000, 0.01, rng)
fit = rchull_fit(X, 20, rng)

print(f"outliers: {outlier.sum()}")
print(f"Chull  distance to disk {hausdorff_to_unit_disk(fit.full.polygon):.4f}")
print(f"RChull distance to disk {hausdorff_to_unit_disk(fit.selected.polygon):.4f}")

fig, ax = plt.subplots(figsize=(5, 5))
ax.scatter(*X[~outlier].T, s=2, c="0.6")
ax.scatter(*X[outlier].T, s=8, c="r")
for poly, style in ((fit.full.polygon, "b-"), (fit.selected.polygon, "g-")):
    V = np.vstack([poly.vertices, poly.vertices[:1]])
    ax.plot(*V.T, style)
t = np.linspace(0, 2 * np.pi, 400)
ax.plot(np.cos(t), np.sin(t), "k:")
ax.set_aspect("equal")
fig.savefig("support.png", dpi=100)
