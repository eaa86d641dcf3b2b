"""Three-point scalar inequalities: Popoviciu, Hlawka and the GG-convex variant."""

from __future__ import annotations

import math

from ..errors import DomainViolation, NonPositiveFunction
from ..functions import ScalarFunction
from .instance import TermBreakdown


def _in_domain(f: ScalarFunction, *pts: float):
    for p in pts:
        if not f.domain.contains(p):
            raise DomainViolation(f"{p} is outside the domain of {f.name}")


def scalar_popoviciu(x: float, y: float, z: float, f: ScalarFunction, concave: bool = False,
                     claim_id: str = "EQ1.5") -> TermBreakdown:
    """Convex three-point inequality, both sides as named terms.

    With ``concave`` the sides swap so that the gap is still asserted >= 0.
    """
    _in_domain(f, x, y, z)
    big = [
        ("f((x+y+z)/3)", f((x + y + z) / 3.0)),
        ("(f(x)+f(y)+f(z))/3", (f(x) + f(y) + f(z)) / 3.0),
    ]
    small = [
        ("2/3 f((x+z)/2)", 2.0 / 3.0 * f((x + z) / 2.0)),
        ("2/3 f((y+z)/2)", 2.0 / 3.0 * f((y + z) / 2.0)),
        ("2/3 f((x+y)/2)", 2.0 / 3.0 * f((x + y) / 2.0)),
    ]
    if concave:
        big, small = small, big
    return TermBreakdown(claim_id, big, small)


def scalar_hlawka(x: float, y: float, z: float) -> TermBreakdown:
    big = [("|x|", abs(x)), ("|y|", abs(y)), ("|z|", abs(z)), ("|x+y+z|", abs(x + y + z))]
    small = [("|x+z|", abs(x + z)), ("|z+y|", abs(z + y)), ("|x+y|", abs(x + y))]
    return TermBreakdown("HLAWKA-SCALAR", big, small)


def scalar_gg_popoviciu(x: float, y: float, z: float, f: ScalarFunction) -> TermBreakdown:
    """Geometric-mean variant, compared in logarithms."""
    if min(x, y, z) <= 0:
        raise DomainViolation("GG-Popoviciu needs positive arguments")
    _in_domain(f, x, y, z)
    pts = {
        "cbrt": (x * y * z) ** (1.0 / 3.0),
        "x": x, "y": y, "z": z,
        "xz": math.sqrt(x * z), "yz": math.sqrt(y * z), "xy": math.sqrt(x * y),
    }
    vals = {k: f(v) for k, v in pts.items()}
    if min(vals.values()) <= 0:
        raise NonPositiveFunction(f"{f.name} is not positive at the sample points")
    big = [
        ("3 log f(cbrt(xyz))", 3.0 * math.log(vals["cbrt"])),
        ("log f(x)", math.log(vals["x"])),
        ("log f(y)", math.log(vals["y"])),
        ("log f(z)", math.log(vals["z"])),
    ]
    small = [
        ("2 log f(sqrt(xz))", 2.0 * math.log(vals["xz"])),
        ("2 log f(sqrt(yz))", 2.0 * math.log(vals["yz"])),
        ("2 log f(sqrt(xy))", 2.0 * math.log(vals["xy"])),
    ]
    return TermBreakdown("GG-POP", big, small)
