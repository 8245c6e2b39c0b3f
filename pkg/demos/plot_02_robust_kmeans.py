"""
k-means with robust centroid updates
====================================

Lloyd's algorithm recomputes every centre as a cluster mean, so one far point
can drag a centre away. RobustkM replaces that mean by the selected group
mean of the cluster members.
"""

import matplotlib.pyplot as plt
import numpy as np

from gros.clustering import classification_error, initial_centers, kmeans, robust_kmeans
from gros.samplers import sample_student_mixture

rng = np.random.default_rng(1)
X, labels = sample_student_mixture(1000, rng)
init = initial_centers(X, 3, rng)

plain = kmeans(X, 3, init, rng=rng)
robust = robust_kmeans(X, 3, K_groups=10, init_centers=init, rng=rng)

for name, fit in (("k-means", plain), ("RobustkM", robust)):
    print(f"{name:9s} error {classification_error(labels, fit.assignments, 3):.3f}  "
          f"iterations {fit.n_iter}")

fig, ax = plt.subplots(figsize=(5, 5))
ax.scatter(*X.T, s=4, c=robust.assignments, cmap="tab10")
ax.plot(*plain.centers.T, "kx", ms=10, label="k-means centres")
ax.plot(*robust.centers.T, "r+", ms=12, label="RobustkM centres")
ax.set_xlim(-15, 15)
ax.set_ylim(-15, 15)
ax.legend()
fig.savefig("robust_kmeans.png", dpi=100)
