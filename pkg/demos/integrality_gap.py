"""When the LP relaxation is loose, and what a certificate looks like.

Run: python3 demos/integrality_gap.py
"""

import numpy as np

from mwis_mp.generators import generate_instance
from mwis_mp.graph import bipartition
from mwis_mp.oracles import brute_force_mwis, check_complementary_slackness, lp_optimum

for n in (3, 4, 5, 6, 7):
    g = generate_instance("cycle", n, weight=3.0)
    lp, ip = lp_optimum(g), brute_force_mwis(g)
    print(f"C{n}: bipartite={bipartition(g).is_bipartite!s:5}  LP={lp.value:4}  IP={ip.value:4}"
          f"  LP optima={len(lp.optima)}  integral={lp.integral}")

# bipartite graphs always have a tight relaxation
tight = 0
for seed in range(200):
    g = generate_instance("random-bipartite", 10, seed=seed)
    tight += lp_optimum(g).value == brute_force_mwis(g).value
print(f"\nrandom bipartite n=10: LP = IP on {tight}/200")

# a primal/dual pair meeting every slackness condition proves optimality
p3 = generate_instance("path", 3)
x = brute_force_mwis(p3).optima[0]
lam = np.array([p3.weights[0], p3.weights[2]])
rep = check_complementary_slackness(p3, x, lam)
print(f"\npath weights {np.round(p3.weights, 3).tolist()}, x={x.tolist()}, lambda={np.round(lam, 3).tolist()}")
print("certificate holds:", rep.holds, rep.violations)
