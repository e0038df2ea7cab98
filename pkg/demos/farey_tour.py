"""
A short walk through the Farey graph
====================================

"""

# Slopes are reduced fractions p/q with q >= 0; 1/0 is the point at infinity.
from pantsplane.farey import Slope, Unimodular, farey_distance, farey_geodesic, nicf_digits, periodic_axis

S = Slope.parse

# Two slopes are adjacent when |ps - qr| = 1.
print(farey_distance(S("0/1"), S("1/0")))
print(farey_distance(S("0/1"), S("5/2")))

# Geodesics come from the continued fraction of the target.
for target in ["5/2", "13/8", "-7/3"]:
    path = farey_geodesic(S("1/0"), S(target))
    print(target, nicf_digits(S(target).p, S(target).q), " -> ".join(str(s) for s in path))

# A hyperbolic matrix translates along a periodic axis. [[3,-1],[1,0]] has trace 3.
m = Unimodular(3, -1, 1, 0)
axis = periodic_axis(m, 3)
print([str(s) for s in axis])

# Consecutive axis slopes are Farey neighbours, and distances grow linearly along it.
print([farey_distance(axis[0], s) for s in axis])
