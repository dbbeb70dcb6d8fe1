# Which power of v makes the coproduct multiplicative, and where it comes from.
import itertools

from hallforge import hall
from hallforge.quiverrep import PRESETS

A1, A2 = PRESETS["A1"], PRESETS["A2"]

# scan the family v^(c1<b,c> + c2<c,b>) on the tensor square
for Q, cap in ((A1, (3,)), (A2, (2, 2))):
    for product in ("right", "hall"):
        inner = hall.green_conventions(Q, 2, cap, product, "inner")
        outer = hall.green_conventions(Q, 2, cap, product, "outer")
        print(Q.name, product, "inner", sorted(inner), "outer", sorted(outer))

# the same power read off point counts of the grid stack
for corners in [((1, 0), (0, 1), (1, 0), (0, 1)), ((0, 1), (1, 0), (0, 0), (1, 0))]:
    geo = hall.green_exponent(A2, *corners)
    alg = hall.implied_green_power(A2, (1, 1), *corners)
    print(corners, "geometric", geo, "algebraic", alg)

# stack dimensions from point counts over F_2, F_3, F_5
for a in [(1, 0), (1, 1), (2, 1), (2, 2)]:
    print("dim Ob", a, "=", hall.stack_dim(A2, hall.StackSpec.ob(a)))
