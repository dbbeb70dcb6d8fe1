"""
hallforge: Hall algebras of quivers over prime fields, the Waldhausen
construction at F_q-points, and exact checks of the 2-Segal condition.

Everything is exact: counts are integers, cardinalities are Fractions and
twisted coefficients are Laurent polynomials in v with v^2 = q.
"""

from .ffq import CapExceeded, Caps, DEFAULT_CAPS, gaussian_binomial, gl_order
from .quiverrep import (
    PRESETS,
    Quiver,
    Rep,
    RepClass,
    catalog,
    class_name,
    enumerate_rep_classes,
    euler_form,
    find_class,
    hall_number,
    load_quiver,
)
from .hall import (
    HallElement,
    LaurentPoly,
    comul,
    green_check,
    green_exponent,
    hall_mul,
    hall_poly_fit,
    serre_check,
    stack_dim,
    transfer_mul_compare,
    twisted_mul,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "Caps", "DEFAULT_CAPS", "gaussian_binomial", "gl_order",
    "PRESETS", "Quiver", "Rep", "RepClass", "catalog", "class_name", "enumerate_rep_classes",
    "euler_form", "find_class", "hall_number", "load_quiver",
    "HallElement", "LaurentPoly", "comul", "green_check", "green_exponent", "hall_mul",
    "hall_poly_fit", "serre_check", "stack_dim", "transfer_mul_compare", "twisted_mul",
]
