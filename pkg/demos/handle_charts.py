"""
Charts on the two handles
=========================

"""

# The bundled genus 2 triangulation has one vertex, nine edges and six faces.
from pantsplane.farey import Slope
from pantsplane.handles import HandleSystem, Q, Y1, Y2, curve_label, sphere_window
from pantsplane.pants import PantsVertex, pants_vector, validate_pants
from pantsplane.projection import project_to_handle
from pantsplane.surface import validate_surface_model

S = Slope.parse
system = HandleSystem()
print(validate_surface_model(system.model))

# Cutting along q leaves two one-holed tori, the handles Y1 and Y2.
for piece in system.cut_along([Q]):
    print(piece.kind, piece.chart)

# Each handle curve is named by a slope in its chart. Weights are normal coordinates.
x = system.curve_from_chart_slope(Y1, S("3/2"))
print(x.weights, system.slope_in_chart(Y1, x.weights))

# A pants decomposition off the q-subgraph: two handle curves and a curve in the sphere between them.
v = PantsVertex(S("2/1"), S("-1/3"), S("3/2"))
weights = pants_vector(system, v)
print(weights, validate_pants(system, weights))

# The sphere curve crosses q, leaving waves in each handle.
sphere = v.curves()[2]
print(system.ambient_intersection(Q, weights))
for window in (Y1, Y2):
    print(window.name, system.footprints(sphere, window))

# The handle projection forgets the sphere curve and keeps both handle slopes.
print(project_to_handle(system, v))

# Chart slopes in the sphere window meet twice per unit of determinant.
w = sphere_window(S("2/1"), S("-1/3"))
a, b = curve_label(w, S("0/1")), curve_label(w, S("1/1"))
print(system.ambient_intersection(a, system.vector(b)))
