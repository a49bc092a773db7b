"""Covariance matrices of a linear SEM as exact polynomials.

The running five-node graph is built once, its covariance is written in
the edge weights l{a}_{b} and error variances w{v}, and a random numeric
SEM confirms that evaluating the polynomials reproduces the matrix.
"""

import numpy as np

from gaussci import Dag, phi_sigma, sample_sem, sigma_entry
from gaussci.poly import lambda_var, omega_var

g = Dag(5, [(1, 2), (2, 4), (3, 4), (3, 5), (4, 5)])
print("graph edges:", ", ".join(f"{a}->{b}" for a, b in g.sorted_edges()))
print()

sigma = phi_sigma(g)
print("selected covariance entries as polynomials:")
for i, j in [(1, 4), (1, 5), (2, 5), (5, 5)]:
    print(f"  sigma_{i}{j} = {sigma_entry(sigma, i, j)}")
print()

# Every entry is a sum over treks: sigma_14 collects the single trek
# 1 -> 2 -> 4 weighted by the error variance of its top node 1.

rng = np.random.default_rng(7)
sem = sample_sem(g, rng)
values = {omega_var(v): sem.omega[v - 1] for v in g.nodes}
values.update((lambda_var(a, b), w) for (a, b), w in sem.lam_dict().items())

num = sem.sigma()
worst = 0.0
for i in g.nodes:
    for j in range(i, 6):
        sym = sigma_entry(sigma, i, j).evaluate(values)
        worst = max(worst, abs(sym - num[i - 1, j - 1]))
print(f"max |symbolic - numeric| over all entries: {worst:.2e}")
