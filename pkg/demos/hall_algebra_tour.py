# A short tour of the Hall algebra of A2 over small prime fields.
from hallforge import hall
from hallforge.hall import HallElement, LaurentPoly
from hallforge.quiverrep import PRESETS, catalog, class_name

A2 = PRESETS["A2"]

# isoclasses of dimension (1,1): the split one and the indecomposable P
for C in catalog(A2, (1, 1), 2).classes:
    print(class_name(C), C.label, "aut", C.aut_order, "orbit", C.orbit_size)

S1 = HallElement.of(A2, 2, "S1")
S2 = HallElement.of(A2, 2, "S2")
print("S1*S2 =", hall.hall_mul(S1, S2))
print("S2*S1 =", hall.hall_mul(S2, S1))

# twisted product: parts of degrees a, b get v^<b,a>
print("S2 o S1 =", hall.twisted_mul(S2, S1))

# coproduct of P, coefficients g * |Aut X| |Aut Y| / |Aut P|
P = HallElement.of(A2, 2, "P")
for names, coeff in hall.comul(P).named_terms():
    print("  ", names, coeff)

# Serre relations vanish once v^2 = q, but only with the twist
for conv in ("right", None):
    ok, parts = hall.serre_check(3, convention=conv)
    print("twist", conv, "Serre vanishes:", ok)

# the A1 Hall polynomial behind S*S = (q+1)[S+S]
fit = hall.hall_poly_fit(PRESETS["A1"], "S1", "S1", "S1⊕S1")
print("g(q) =", fit, " at q=7:", fit.predicted, "counted:", fit.actual)
