# Flags, the Waldhausen groupoids, and the 2-Segal checks.
from hallforge.groupoid import is_equivalence
from hallforge.quiverrep import PRESETS
from hallforge.simpcomb import MonotoneMap, hcomb_map, hcomb_object
from hallforge.twosegal import enumerate_decompositions, hgeo_square_check, two_segal_report
from hallforge.waldhausen import Waldhausen, s_level, spine_comparison

A1, A2 = PRESETS["A1"], PRESETS["A2"]

S2 = s_level(A1, 2, 2, (2,))
print(S2.name, "objects", len(S2.objects()), "cardinality", S2.cardinality())

# the combinatorial side
print("H(<2>) faces", hcomb_object(2).maximal_faces())
print("H(<2> -> <1>)", hcomb_map(MonotoneMap.onto_point(2)).apex.maximal_faces())

# limits over spines split into products of S_1
F = spine_comparison(2, A2, 2, (1, 1))
print("spine comparison:", is_equivalence(F).ok)

print("decompositions of the pentagon:", len(enumerate_decompositions(5)))
for r in two_segal_report(A2, 2, 4, (1, 1)):
    print(r.decomposition, "pass" if r.ok else "fail")

# a corrupted S_3 breaks both the polygon and the square
W = Waldhausen(A2, 2, corrupt=(3, (1, 1), 0))
for v in hgeo_square_check(MonotoneMap(3, 2, (0, 0, 1)), A2, 2, (1, 1), W):
    print(v.gamma, "square", v.square_ok, "polygon", v.polygon_ok, v.witness)
