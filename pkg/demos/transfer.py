# Pull-push along S1 x S1 <- S2 -> S1 reproduces the Hall product.
from hallforge import hall
from hallforge.quiverrep import PRESETS, class_name
from hallforge.hall import class_of

A1 = PRESETS["A1"]
table = hall.transfer_table(A1, 2, (1,), (1,))
for (x, y), row in table.items():
    for z, v in row.items():
        names = [class_name(class_of(A1, 2, l)) for l in (x, y, z)]
        print(names, "transfer", v)

report = hall.transfer_mul_compare(A1, 2, (2,))
print("rescalings that match hall_mul:", report.rescalings, "checked", report.checked)
