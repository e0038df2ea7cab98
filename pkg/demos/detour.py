"""
Leaving the q-subgraph never helps
==================================

"""

from pantsplane.farey import INF, ZERO, Slope
from pantsplane.pants import PantsVertex, bounded_pants_distance, validate_path
from pantsplane.handles import HandleSystem
from pantsplane.projection import theorem1_shorten_path, theorem2_project_path

S = Slope.parse
system = HandleSystem()

# A path of length 6 that wanders through the sphere window between two handle moves.
a, b = PantsVertex(INF, ZERO), PantsVertex(INF, INF)
path = [PantsVertex(ZERO, ZERO), a,
        PantsVertex(INF, ZERO, S("2/1")), PantsVertex(INF, ZERO, S("5/2")), PantsVertex(INF, ZERO, S("3/1")),
        a, b]
for cert in validate_path(path):
    print(cert.window.name, cert.removed, "->", cert.added, "i =", cert.intersection)

# Waypoints follow the path inside the handle projections.
trace = theorem2_project_path(system, path)
for step in trace.steps:
    print(step.to_document())
print("total", trace.total, "problems", trace.check())

# The waypoints join up into a strictly shorter path that stays in the q-subgraph.
short = theorem1_shorten_path(system, path)
print(" -> ".join(str(v) for v in short))

# A bounded search agrees.
print(bounded_pants_distance(path[0], path[-1], bound=8, max_len=6, geodesics=True).to_document())
