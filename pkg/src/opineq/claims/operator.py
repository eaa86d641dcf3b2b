"""Evaluators for the operator inequalities.

Each evaluator checks the claim's hypotheses on the instance (raising
``HypothesisViolation`` listing every failure), then returns a
``TermBreakdown`` whose gap the claim asserts to be nonnegative. Claims
stated with a reversed inequality for concave or subquadratic functions
swap the two sides here, so the schema never changes orientation.

All map-based quantities go through the family form ``sum_j Phi_j(M_j)``;
a single unital map is a one-member family.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainViolation, HypothesisViolation, MissingDerivative
from ..functions import ScalarFunction
from ..hermitian import (
    HALF_LINE,
    HermitianMatrix,
    Interval,
    apply_function,
    operator_abs,
    operator_norm,
    quadratic_form,
    spectrum_in,
)
from ..maps import MapFamily, as_family, family_apply
from .instance import Instance, TermBreakdown

UNIT_TOL = 1e-12
ZERO_TOL = 1e-12


class Hypotheses:
    """Accumulates named hypothesis checks for one evaluation."""

    def __init__(self, claim_id: str):
        self.claim_id = claim_id
        self.items: list = []

    def check(self, name: str, ok) -> bool:
        self.items.append((name, bool(ok)))
        return bool(ok)

    def failed(self) -> list:
        return [n for n, ok in self.items if not ok]

    def require(self):
        """Raise now if anything failed (used before computations that need it)."""
        if self.failed():
            raise HypothesisViolation(self.claim_id, self.failed())

    done = require


def f_of_abs(f: ScalarFunction, e: HermitianMatrix) -> HermitianMatrix:
    """``f(|E|)`` in one pass over the spectrum of ``E``."""
    dec = e.spectral()
    values = np.asarray(f.eval(np.abs(dec.eigenvalues)), dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainViolation(f"{f.name} is not finite on |spec(E)|")
    return HermitianMatrix._trusted(dec.reconstruct(values))


class _Ctx:
    """Family, vector and operator lists of an instance, with the state
    ``omega(M_1..M_n) = <sum_j Phi_j(M_j) x, x>``."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.fam: MapFamily = as_family(inst.phi)
        self.x = inst.x

    def ops(self, name: str) -> tuple:
        return self.inst.operators[name]

    def image(self, mats) -> HermitianMatrix:
        return family_apply(self.fam, list(mats))

    def omega(self, mats) -> float:
        return quadratic_form(self.image(mats), self.x)

    def per_member(self, fn, *names):
        return [fn(*mats) for mats in zip(*(self.ops(n) for n in names))]


def _structure(h: Hypotheses, inst: Instance, names, *, family: bool, vector: bool = True):
    """Operators present with matching dimensions, a unital map or family,
    and (optionally) a unit vector. Raises at once on failure, since nothing
    downstream can be computed without these."""
    phi = inst.phi
    if phi is None:
        h.check("map present", False)
        h.require()
    if isinstance(phi, MapFamily):
        if not family:
            h.check("single unital map", len(phi.maps) == 1)
        else:
            h.check("family sums to identity", True)
    else:
        h.check("map unital", getattr(phi, "unital", False))
    n_maps = len(as_family(phi).maps)
    for name in names:
        mats = inst.operators.get(name)
        ok = mats is not None and len(mats) == n_maps and all(m.dim == phi.dim_h for m in mats)
        h.check(f"{name} present with dimension {phi.dim_h}", ok)
    if vector:
        x = inst.x
        ok = x is not None and x.shape == (phi.dim_k,) and abs(np.linalg.norm(x) - 1.0) <= UNIT_TOL
        h.check("x is a unit vector in K", ok)
    h.require()


def _spectra(h: Hypotheses, inst: Instance, names, window: Interval, label: str):
    for name in names:
        h.check(f"{name} {label}", all(spectrum_in(m, window) for m in inst.operators[name]))


def _fn_present(h: Hypotheses, inst: Instance):
    if inst.f is None:
        h.check("function given", False)
        h.require()
    return inst.f


def _direction(h: Hypotheses, f: ScalarFunction, up: str, down: str) -> bool:
    """True when the ``up`` flag holds (assert >=); False for ``down`` (assert <=)."""
    h.check(f"f {up} or {down}", f.has(up) or f.has(down))
    return f.has(up)


def _finish(claim_id, h, big, small, forward: bool) -> TermBreakdown:
    if not forward:
        big, small = small, big
    return TermBreakdown(claim_id, big, small, hypothesis_report=list(h.items))


# --- Jensen-type claims --------------------------------------------------------


def _jensen(inst: Instance, claim_id: str, *, family: bool, with_f0: bool) -> TermBreakdown:
    h = Hypotheses(claim_id)
    f = _fn_present(h, inst)
    _structure(h, inst, ["A"], family=family)
    forward = _direction(h, f, "superquadratic", "subquadratic")
    _spectra(h, inst, ["A"], HALF_LINE, "positive semidefinite")
    h.require()
    c = _Ctx(inst)
    a = c.ops("A")
    s = c.omega(a)
    big = [("<Phi(f(A))x,x>", c.omega([apply_function(f, m) for m in a]))]
    small = [
        ("f(<Phi(A)x,x>)", f(s)),
        ("<Phi(f(|A - s 1|))x,x>", c.omega([f_of_abs(f, m.shift(s)) for m in a])),
    ]
    if with_f0:
        small.append(("f(0)", f(0.0)))
    return _finish(claim_id, h, big, small, forward)


def evaluate_jensen_superquadratic(inst: Instance) -> TermBreakdown:
    """Jensen with the superquadratic correction term ``<Phi(f(|A - s|))x,x>``."""
    return _jensen(inst, "THM1", family=False, with_f0=False)


def evaluate_jensen_refined(inst: Instance) -> TermBreakdown:
    """The Jensen refinement with the extra ``f(0)`` term."""
    return _jensen(inst, "COR2", family=False, with_f0=True)


def evaluate_multimap_jensen(inst: Instance) -> TermBreakdown:
    return _jensen(inst, "COR5-JENSEN", family=True, with_f0=True)


def evaluate_bohr_norm(inst: Instance, direction: str = "super") -> TermBreakdown:
    """Norm form of the refined Jensen inequality (no vector).

    super: ``||Phi(f(|A - ||Phi(A)|| 1|))|| <= ||Phi(f(A))|| - f(||Phi(A)||) - f(0)``;
    sub: the reverse.
    """
    claim_id = "BOHR-SUPER" if direction == "super" else "BOHR-SUB"
    h = Hypotheses(claim_id)
    f = _fn_present(h, inst)
    _structure(h, inst, ["A"], family=False, vector=False)
    flag = "superquadratic" if direction == "super" else "subquadratic"
    h.check(f"f {flag}", f.has(flag))
    _spectra(h, inst, ["A"], HALF_LINE, "positive semidefinite")
    h.require()
    c = _Ctx(inst)
    a = c.ops("A")
    norm_a = operator_norm(c.image(a))
    big = [
        ("||Phi(f(A))||", operator_norm(c.image([apply_function(f, m) for m in a]))),
        ("-f(||Phi(A)||)", -f(norm_a)),
        ("-f(0)", -f(0.0)),
    ]
    small = [("||Phi(f(|A - ||Phi(A)|| 1|))||",
              operator_norm(c.image([f_of_abs(f, m.shift(norm_a)) for m in a])))]
    return _finish(claim_id, h, big, small, direction == "super")


# --- Popoviciu-type claims -----------------------------------------------------


def popoviciu_terms(c: _Ctx, f: ScalarFunction, corrections: bool):
    """Both sides of the operator Popoviciu inequality for operators A, B, D.

    Without ``corrections`` this is the convex form; with them, the six
    superquadratic correction terms join the smaller side.
    """
    a, b, d = c.ops("A"), c.ops("B"), c.ops("D")
    fa = [apply_function(f, m) for m in a]
    fb = [apply_function(f, m) for m in b]
    fd = [apply_function(f, m) for m in d]
    mean_f = c.omega([(x + y + z) / 3.0 for x, y, z in zip(fa, fb, fd)])
    t = c.omega([(x + y + z) / 3.0 for x, y, z in zip(a, b, d)])
    s_ab = c.omega([(x + y) / 2.0 for x, y in zip(a, b)])
    s_bd = c.omega([(y + z) / 2.0 for y, z in zip(b, d)])
    s_ad = c.omega([(x + z) / 2.0 for x, z in zip(a, d)])
    big = [
        ("<Phi((f(A)+f(B)+f(D))/3)x,x>", mean_f),
        ("f(<Phi((A+B+D)/3)x,x>)", f(t)),
    ]
    small = [
        ("2/3 f(<Phi((A+B)/2)x,x>)", 2.0 / 3.0 * f(s_ab)),
        ("2/3 f(<Phi((B+D)/2)x,x>)", 2.0 / 3.0 * f(s_bd)),
        ("2/3 f(<Phi((A+D)/2)x,x>)", 2.0 / 3.0 * f(s_ad)),
    ]
    if corrections:
        u_a = c.omega([(2.0 * x - y - z) / 6.0 for x, y, z in zip(a, b, d)])
        u_d = c.omega([(2.0 * z - x - y) / 6.0 for x, y, z in zip(a, b, d)])
        u_b = c.omega([(2.0 * y - x - z) / 6.0 for x, y, z in zip(a, b, d)])
        small += [
            ("1/3 <Phi(f(|A - s_BD 1|))x,x>", c.omega([f_of_abs(f, m.shift(s_bd)) for m in a]) / 3.0),
            ("1/3 f(|<Phi((2A-B-D)/6)x,x>|)", f(abs(u_a)) / 3.0),
            ("1/3 <Phi(f(|D - s_AB 1|))x,x>", c.omega([f_of_abs(f, m.shift(s_ab)) for m in d]) / 3.0),
            ("1/3 f(|<Phi((2D-A-B)/6)x,x>|)", f(abs(u_d)) / 3.0),
            ("1/3 <Phi(f(|B - s_AD 1|))x,x>", c.omega([f_of_abs(f, m.shift(s_ad)) for m in b]) / 3.0),
            ("1/3 f(|<Phi((2B-A-D)/6)x,x>|)", f(abs(u_b)) / 3.0),
        ]
    return big, small


TRIPLE = ("A", "B", "D")


def _popoviciu_super(inst: Instance, claim_id: str, *, family: bool, flag: str) -> TermBreakdown:
    h = Hypotheses(claim_id)
    f = _fn_present(h, inst)
    _structure(h, inst, TRIPLE, family=family)
    h.check(f"f {flag}", f.has(flag))
    _spectra(h, inst, TRIPLE, HALF_LINE, "positive semidefinite")
    h.require()
    big, small = popoviciu_terms(_Ctx(inst), f, corrections=True)
    return _finish(claim_id, h, big, small, flag == "superquadratic")


def evaluate_popoviciu_superquadratic(inst: Instance) -> TermBreakdown:
    return _popoviciu_super(inst, "THM2.1", family=False, flag="superquadratic")


def evaluate_popoviciu_subquadratic(inst: Instance) -> TermBreakdown:
    return _popoviciu_super(inst, "COR1", family=False, flag="subquadratic")


def evaluate_multimap_popoviciu(inst: Instance) -> TermBreakdown:
    return _popoviciu_super(inst, "COR5-POP", family=True, flag="superquadratic")


def evaluate_popoviciu_convex(inst: Instance, claim_id: str = "PRP1") -> TermBreakdown:
    """Convex operator Popoviciu (no correction terms); the hypothesis set
    depends on ``claim_id``: PRP1, PRP3 or THM3."""
    h = Hypotheses(claim_id)
    f = _fn_present(h, inst)
    _structure(h, inst, TRIPLE, family=(claim_id == "THM3"))
    if claim_id == "PRP1":
        h.check("f superquadratic", f.has("superquadratic"))
        h.check("f nonnegative", f.has("nonnegative"))
        _spectra(h, inst, TRIPLE, HALF_LINE, "positive semidefinite")
        forward = True
    elif claim_id == "PRP3":
        forward = _direction(h, f, "convex", "concave")
        h.check("g(0) = 0", f.domain.contains(0.0) and abs(f(0.0)) <= ZERO_TOL)
        h.check("g defined on [0, inf)", f.domain.covers(HALF_LINE))
        _spectra(h, inst, TRIPLE, HALF_LINE, "positive semidefinite")
    elif claim_id == "THM3":
        forward = _direction(h, f, "convex", "concave")
        win = inst.interval
        h.check("gamma < Gamma", win.lo < win.hi)
        h.check("f defined on [gamma, Gamma]", f.domain.covers(win))
        _spectra(h, inst, TRIPLE, win, "spectrum in [gamma, Gamma]")
    else:
        raise ValueError(f"{claim_id} is not a convex Popoviciu claim")
    h.require()
    big, small = popoviciu_terms(_Ctx(inst), f, corrections=False)
    return _finish(claim_id, h, big, small, forward)


def evaluate_popoviciu_derivative(inst: Instance) -> TermBreakdown:
    """Convex operator Popoviciu applied to f' (f' convex: >=, concave: <=)."""
    claim_id = "PRP2"
    h = Hypotheses(claim_id)
    f = _fn_present(h, inst)
    if f.derivative is None:
        raise MissingDerivative(f"{f.name} has no derivative")
    _structure(h, inst, TRIPLE, family=False)
    forward = _direction(h, f, "derivative_convex", "derivative_concave")
    h.check("f(0) = 0", abs(f(0.0)) <= ZERO_TOL)
    h.check("f'(0) = 0", abs(float(f.derivative(np.asarray(0.0)))) <= ZERO_TOL)
    _spectra(h, inst, TRIPLE, HALF_LINE, "positive semidefinite")
    h.require()
    big, small = popoviciu_terms(_Ctx(inst), f.derivative_function(), corrections=False)
    return _finish(claim_id, h, big, small, forward)


# --- Hlawka-type claims --------------------------------------------------------

HLAWKA = ("A", "B", "C")


def evaluate_hlawka_operator(inst: Instance) -> TermBreakdown:
    """``|<Phi(A+B+C)x,x>| + <Phi(|A|+|B|+|C|)x,x> >= |<Phi(A+C)x,x>| + |<Phi(B+C)x,x>| + |<Phi(A+B)x,x>|``."""
    claim_id = "HLAWKA-OP"
    h = Hypotheses(claim_id)
    _structure(h, inst, HLAWKA, family=False)
    c = _Ctx(inst)
    a, b, cc = c.ops("A"), c.ops("B"), c.ops("C")
    big = [
        ("|<Phi(A+B+C)x,x>|", abs(c.omega([x + y + z for x, y, z in zip(a, b, cc)]))),
        ("<Phi(|A|+|B|+|C|)x,x>",
         c.omega([operator_abs(x) + operator_abs(y) + operator_abs(z) for x, y, z in zip(a, b, cc)])),
    ]
    small = [
        ("|<Phi(A+C)x,x>|", abs(c.omega([x + z for x, z in zip(a, cc)]))),
        ("|<Phi(B+C)x,x>|", abs(c.omega([y + z for y, z in zip(b, cc)]))),
        ("|<Phi(A+B)x,x>|", abs(c.omega([x + y for x, y in zip(a, b)]))),
    ]
    return _finish(claim_id, h, big, small, True)


def evaluate_hlawka_norm(inst: Instance) -> TermBreakdown:
    """Norm form: ``||Phi(A+B+C)|| + ||Phi(|A|+|B|+|C|)|| >= ||Phi(A+C)|| + ||Phi(B+C)|| + ||Phi(A+B)||``."""
    claim_id = "HLAWKA-NORM"
    h = Hypotheses(claim_id)
    _structure(h, inst, HLAWKA, family=False, vector=False)
    c = _Ctx(inst)
    a, b, cc = c.ops("A"), c.ops("B"), c.ops("C")

    def nrm(mats):
        return operator_norm(c.image(mats))

    big = [
        ("||Phi(A+B+C)||", nrm([x + y + z for x, y, z in zip(a, b, cc)])),
        ("||Phi(|A|+|B|+|C|)||",
         nrm([operator_abs(x) + operator_abs(y) + operator_abs(z) for x, y, z in zip(a, b, cc)])),
    ]
    small = [
        ("||Phi(A+C)||", nrm([x + z for x, z in zip(a, cc)])),
        ("||Phi(B+C)||", nrm([y + z for y, z in zip(b, cc)])),
        ("||Phi(A+B)||", nrm([x + y for x, y in zip(a, b)])),
    ]
    return _finish(claim_id, h, big, small, True)


def evaluate_popoviciu_norm(inst: Instance) -> TermBreakdown:
    """Popoviciu extension of the Hlawka norm inequality for convex increasing g."""
    claim_id = "POP-NORM"
    h = Hypotheses(claim_id)
    g = _fn_present(h, inst)
    _structure(h, inst, HLAWKA, family=False, vector=False)
    h.check("g convex", g.has("convex"))
    h.check("g increasing", g.has("increasing"))
    h.check("g defined on [0, inf)", g.domain.covers(HALF_LINE))
    _spectra(h, inst, HLAWKA, g.domain, "spectrum in the domain of g")
    h.require()
    c = _Ctx(inst)
    a, b, cc = c.ops("A"), c.ops("B"), c.ops("C")

    def nrm(mats):
        return operator_norm(c.image(mats))

    ga = [apply_function(g, m) for m in a]
    gb = [apply_function(g, m) for m in b]
    gc = [apply_function(g, m) for m in cc]
    big = [
        ("g(||Phi((A+B+C)/3)||)", g(nrm([(x + y + z) / 3.0 for x, y, z in zip(a, b, cc)]))),
        ("||Phi((g(A)+g(B)+g(C))/3)||", nrm([(x + y + z) / 3.0 for x, y, z in zip(ga, gb, gc)])),
    ]
    small = [
        ("2/3 g(||Phi((A+C)/2)||)", 2.0 / 3.0 * g(nrm([(x + z) / 2.0 for x, z in zip(a, cc)]))),
        ("2/3 g(||Phi((B+C)/2)||)", 2.0 / 3.0 * g(nrm([(y + z) / 2.0 for y, z in zip(b, cc)]))),
        ("2/3 g(||Phi((A+B)/2)||)", 2.0 / 3.0 * g(nrm([(x + y) / 2.0 for x, y in zip(a, b)]))),
    ]
    return _finish(claim_id, h, big, small, True)
