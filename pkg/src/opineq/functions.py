"""Scalar functions with support constants and class flags.

A ``ScalarFunction`` evaluates vectorized over numpy arrays, carries its
domain, the support constant ``C_x`` used in the superquadratic and
support-line inequalities, an optional closed-form derivative, and the
flags the claim registry checks hypotheses against.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import BadParameter, DomainViolation, MissingDerivative, UnknownFunction
from .hermitian import HALF_LINE, REAL_LINE, Interval

FLAG_NAMES = (
    "superquadratic",
    "subquadratic",
    "convex",
    "concave",
    "nonnegative",
    "increasing",
    "derivative_convex",
    "derivative_concave",
    "gg_convex",
    "positive",
)


@dataclass(frozen=True, eq=False)
class ScalarFunction:
    name: str
    domain: Interval
    eval: Callable[[np.ndarray], np.ndarray]
    derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
    support: Optional[Callable[[np.ndarray], np.ndarray]] = None
    flags: frozenset = field(default_factory=frozenset)

    def __call__(self, t):
        out = self.eval(np.asarray(t, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    def has(self, flag: str) -> bool:
        return flag in self.flags

    def support_constant(self, x):
        """``C_x``: the explicit support slope if one was given, else the
        derivative, else a central difference."""
        x = np.asarray(x, dtype=float)
        if self.support is not None:
            out = self.support(x)
        elif self.derivative is not None:
            out = self.derivative(x)
        else:
            out = central_difference(self, x)
        return float(out) if np.ndim(out) == 0 else out

    def with_support_constant(self, support: Callable) -> "ScalarFunction":
        """Copy of this function using an alternative ``C_x``."""
        return dataclasses.replace(self, support=support)

    def with_flags(self, **changes: bool) -> "ScalarFunction":
        flags = set(self.flags)
        for k, on in changes.items():
            if k not in FLAG_NAMES:
                raise KeyError(k)
            (flags.add if on else flags.discard)(k)
        return dataclasses.replace(self, flags=frozenset(flags))

    def derivative_function(self) -> "ScalarFunction":
        """f' as a ScalarFunction; convexity of f' becomes its convex flag."""
        if self.derivative is None:
            raise MissingDerivative(f"{self.name} has no closed-form derivative")
        flags = set()
        if self.has("derivative_convex"):
            flags.add("convex")
        if self.has("derivative_concave"):
            flags.add("concave")
        return ScalarFunction(f"d/dt {self.name}", self.domain, self.derivative, flags=frozenset(flags))

    def __repr__(self):
        return f"ScalarFunction({self.name!r})"


def central_difference(f: ScalarFunction, x: np.ndarray) -> np.ndarray:
    h = 1e-6 * np.maximum(1.0, np.abs(x))
    lo, hi = x - h, x + h
    # one-sided at a closed domain boundary
    left = np.where(lo < f.domain.lo, x, lo)
    right = np.where(hi > f.domain.hi, x, hi)
    return (f.eval(right) - f.eval(left)) / (right - left)


def _pow(p: float) -> ScalarFunction:
    if not p >= 1:
        raise BadParameter(f"pow needs p >= 1, got {p}")
    flags = {"convex", "nonnegative", "increasing", "gg_convex"}
    if p >= 2:
        flags |= {"superquadratic", "derivative_convex"}
    if p <= 2:
        flags |= {"subquadratic", "derivative_concave"}
    if p == 1:
        flags |= {"concave"}

    def ev(t):
        return np.power(t, p)

    def d(t):
        return p * np.power(t, p - 1)

    return ScalarFunction(f"pow:{p:g}", HALF_LINE, ev, d, flags=frozenset(flags))


def _square_minus_c(c: float) -> ScalarFunction:
    if not c >= 0:
        raise BadParameter(f"sqmc needs c >= 0, got {c}")
    # the superquadratic residual of t^2 - c is identically c
    flags = {"superquadratic", "convex", "increasing", "derivative_convex", "derivative_concave"}
    if c == 0:
        flags |= {"subquadratic", "nonnegative"}
    return ScalarFunction(f"sqmc:{c:g}", HALF_LINE, lambda t: t * t - c, lambda t: 2.0 * t,
                          flags=frozenset(flags))


def _abs() -> ScalarFunction:
    # subdifferential at 0 is [-1, 1]; 0 is the symmetric pick
    return ScalarFunction("abs", REAL_LINE, np.abs, support=np.sign,
                          flags=frozenset({"convex", "nonnegative"}))


def _identity() -> ScalarFunction:
    return ScalarFunction("id", REAL_LINE, lambda t: t * 1.0, lambda t: np.ones_like(t, dtype=float),
                          flags=frozenset({"convex", "concave", "increasing", "gg_convex"}))


def _exp_centered() -> ScalarFunction:
    return ScalarFunction("expc", HALF_LINE, lambda t: np.expm1(t) - t, np.expm1,
                          flags=frozenset({"superquadratic", "convex", "nonnegative", "increasing",
                                           "derivative_convex"}))


def _exp() -> ScalarFunction:
    return ScalarFunction("exp", REAL_LINE, np.exp, np.exp,
                          flags=frozenset({"convex", "nonnegative", "positive", "increasing",
                                           "gg_convex", "derivative_convex"}))


def _relu_power(p: float) -> ScalarFunction:
    if not p >= 2:
        raise BadParameter(f"relupow needs p >= 2, got {p}")

    def ev(t):
        return np.power(np.maximum(t, 0.0), p)

    def d(t):
        return p * np.power(np.maximum(t, 0.0), p - 1)

    # on [0, inf) it coincides with pow(p), which is where superquadraticity lives
    flags = {"convex", "nonnegative", "increasing", "superquadratic", "derivative_convex"}
    if p == 2:
        flags.add("subquadratic")
    return ScalarFunction(f"relupow:{p:g}", REAL_LINE, ev, d, flags=frozenset(flags))


_CATALOG = {
    "pow": (_pow, 1),
    "sqmc": (_square_minus_c, 1),
    "abs": (_abs, 0),
    "id": (_identity, 0),
    "identity": (_identity, 0),
    "expc": (_exp_centered, 0),
    "exp": (_exp, 0),
    "relupow": (_relu_power, 1),
}


def builtin(name: str, *params: float) -> ScalarFunction:
    try:
        factory, arity = _CATALOG[name]
    except KeyError:
        raise UnknownFunction(name) from None
    if len(params) != arity:
        raise BadParameter(f"{name} takes {arity} parameter(s), got {len(params)}")
    f = factory(*(float(p) for p in params))
    _check_lemma1(f)
    return f


def parse_function(spec: str) -> ScalarFunction:
    """Parse strings like ``"pow:3"``, ``"abs"``, ``"sqmc:1"``."""
    name, _, rest = spec.strip().partition(":")
    params = []
    if rest:
        try:
            params = [float(p) for p in rest.split(",")]
        except ValueError:
            raise BadParameter(f"bad parameter in {spec!r}") from None
    f = builtin(name, *params)
    return dataclasses.replace(f, name=spec.strip())


def _check_lemma1(f: ScalarFunction):
    if f.has("superquadratic"):
        assert f(0.0) <= 0.0, f"{f.name}: superquadratic with f(0) > 0"


@dataclass
class DefinitionCheckReport:
    function: str
    grid: str
    violations: list
    max_residual: float
    min_residual: float

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return f"{self.function}: no violation found on grid ({self.grid})"
        return f"{self.function}: {len(self.violations)} violation(s) on grid ({self.grid})"


def _grid_check(f, xs, ts, residual, tol_def, domain: Interval, label: str) -> DefinitionCheckReport:
    xs = np.asarray(xs, dtype=float).reshape(-1)
    ts = np.asarray(ts, dtype=float).reshape(-1)
    for g in (xs, ts):
        if g.size and (g.min() < domain.lo or g.max() > domain.hi):
            raise DomainViolation(f"grid leaves [{domain.lo}, {domain.hi}]")
    x, t = np.meshgrid(xs, ts, indexing="ij")
    r = residual(x, t)
    bad = np.argwhere(r < -tol_def)
    violations = [(float(x[i, j]), float(t[i, j]), float(r[i, j])) for i, j in bad]
    grid = f"{label}: {xs.size} x {ts.size}"
    return DefinitionCheckReport(f.name, grid, violations, float(r.max()), float(r.min()))


def superquadratic_residual(f: ScalarFunction, x, t):
    """``f(t) - f(x) - C_x (t - x) - f(|t - x|)``."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    return f.eval(t) - f.eval(x) - f.support_constant(x) * (t - x) - f.eval(np.abs(t - x))


def support_residual(f: ScalarFunction, x, t):
    """``f(t) - f(x) - C_x (t - x)``."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    return f.eval(t) - f.eval(x) - f.support_constant(x) * (t - x)


def check_superquadratic_grid(f: ScalarFunction, xs, ts, tol_def: float = 1e-9) -> DefinitionCheckReport:
    domain = Interval(max(0.0, f.domain.lo), f.domain.hi)
    return _grid_check(f, xs, ts, lambda x, t: superquadratic_residual(f, x, t), tol_def, domain,
                       "superquadratic")


def check_convex_support(f: ScalarFunction, xs, ts, tol_def: float = 1e-9) -> DefinitionCheckReport:
    return _grid_check(f, xs, ts, lambda x, t: support_residual(f, x, t), tol_def, f.domain,
                       "support line")


def midpoint_convexity_residual(f: ScalarFunction, xs) -> float:
    """min over grid pairs of ``(f(a) + f(b))/2 - f((a + b)/2)``."""
    xs = np.asarray(xs, dtype=float)
    a, b = np.meshgrid(xs, xs, indexing="ij")
    return float(np.min(0.5 * (f.eval(a) + f.eval(b)) - f.eval(0.5 * (a + b))))


def log_grid(lo: float, hi: float, n: int) -> np.ndarray:
    return np.geomspace(lo, hi, n)


def describe(f: ScalarFunction) -> dict:
    return {"name": f.name, "domain": f.domain.to_json(), "flags": sorted(f.flags),
            "f(0)": f(0.0) if f.domain.contains(0.0) else math.nan}
