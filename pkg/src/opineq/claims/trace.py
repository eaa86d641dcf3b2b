"""Step-by-step replay of the superquadratic operator Popoviciu argument.

The argument applies the superquadratic inequality six times, each with
its own support constant, then replaces the three constants by their
minimum before discarding the bracket they multiply (whose coefficients
sum to zero). The tracer evaluates every one of those steps on a concrete
instance and records its slack, so a negative overall gap can be pinned on
the step that lost it.

Step labels and what they check (``s_1, s_2, s_3`` are the quadratic forms
of ``(B+D)/2``, ``(A+B)/2``, ``(A+D)/2``; ``t`` that of ``(A+B+D)/3``):

* ``2.2/2.4``, ``2.2/2.5``, ``2.2/2.6``: the operator superquadratic
  inequality for ``A`` at ``s_1``, ``D`` at ``s_2`` and ``B`` at ``s_3``.
* ``minC-2.8``: replacing each ``C_{s_i}`` by ``C = min C_{s_i}`` in the
  one-third-weighted sum of ``C_{s_i} t_i`` with the half-weight
  coefficients ``t_i``; ``dropped`` is ``(1/3) sum (C_{s_i} - C) t_i``.
* ``1.4/2.9``, ``1.4/2.10``, ``1.4/2.11``: the scalar superquadratic
  inequality at the point ``t`` against ``s_1``, ``s_2``, ``s_3``. Each
  constant is paired with the point it was taken at, which makes every
  step sound; the coefficient of ``C_{s_i}`` is then ``t - s_i``.
* ``minC-2.13``: the same replacement for the sixth-weight coefficients.
* ``combine-2.3``: the final inequality (its slack is the claim's gap).

Summing, ``gap = (sum of the six step slacks)/3 + both drops`` up to the
roundoff in the two vanishing coefficient sums.
"""

from __future__ import annotations

import math

from ..hermitian import HALF_LINE, apply_function
from .instance import Instance, StepRecord, StepTrace
from .operator import TRIPLE, Hypotheses, _Ctx, _fn_present, _spectra, _structure, f_of_abs, popoviciu_terms

OPERATOR_STEPS = ("2.2/2.4", "2.2/2.5", "2.2/2.6")
SCALAR_STEPS = ("1.4/2.9", "1.4/2.10", "1.4/2.11")
SOUND_STEPS = OPERATOR_STEPS + SCALAR_STEPS


def trace_popoviciu(inst: Instance, claim_id: str = "THM2.1") -> StepTrace:
    h = Hypotheses(claim_id)
    f = _fn_present(h, inst)
    _structure(h, inst, TRIPLE, family=(claim_id == "COR5-POP"))
    h.check("f superquadratic", f.has("superquadratic"))
    _spectra(h, inst, TRIPLE, HALF_LINE, "positive semidefinite")
    h.require()

    c = _Ctx(inst)
    a, b, d = c.ops("A"), c.ops("B"), c.ops("D")
    s1 = c.omega([(y + z) / 2.0 for y, z in zip(b, d)])
    s2 = c.omega([(x + y) / 2.0 for x, y in zip(a, b)])
    s3 = c.omega([(x + z) / 2.0 for x, z in zip(a, d)])
    t = c.omega([(x + y + z) / 3.0 for x, y, z in zip(a, b, d)])
    s = (s1, s2, s3)
    cs = tuple(float(f.support_constant(si)) for si in s)
    cmin = min(cs)

    halves = (
        c.omega([(2.0 * x - y - z) / 2.0 for x, y, z in zip(a, b, d)]),
        c.omega([(2.0 * z - x - y) / 2.0 for x, y, z in zip(a, b, d)]),
        c.omega([(2.0 * y - x - z) / 2.0 for x, y, z in zip(a, b, d)]),
    )
    sixths = (
        c.omega([(2.0 * x - y - z) / 6.0 for x, y, z in zip(a, b, d)]),
        c.omega([(2.0 * z - x - y) / 6.0 for x, y, z in zip(a, b, d)]),
        c.omega([(2.0 * y - x - z) / 6.0 for x, y, z in zip(a, b, d)]),
    )

    steps = []
    for label, ops, si, ci, ti in zip(OPERATOR_STEPS, (a, d, b), s, cs, halves):
        lhs = c.omega([apply_function(f, m) for m in ops])
        corr = c.omega([f_of_abs(f, m.shift(si)) for m in ops])
        steps.append(StepRecord(label, lhs, math.fsum([f(si), ci * ti, corr])))
    steps.append(_min_step("minC-2.8", cs, cmin, halves))
    for label, si, ci, ui in zip(SCALAR_STEPS, s, cs, sixths):
        steps.append(StepRecord(label, f(t), math.fsum([f(si), ci * ui, f(abs(ui))])))
    steps.append(_min_step("minC-2.13", cs, cmin, sixths))

    big, small = popoviciu_terms(c, f, corrections=True)
    steps.append(StepRecord("combine-2.3", math.fsum(v for _, v in big), math.fsum(v for _, v in small)))
    return StepTrace(claim_id, steps, s, cs, cmin, halves, sixths)


def _min_step(label, cs, cmin, coeffs) -> StepRecord:
    lhs = math.fsum(ci * ti for ci, ti in zip(cs, coeffs)) / 3.0
    rhs = cmin * math.fsum(coeffs) / 3.0
    dropped = math.fsum((ci - cmin) * ti for ci, ti in zip(cs, coeffs)) / 3.0
    return StepRecord(label, lhs, rhs, dropped)


def decomposition_residual(trace: StepTrace) -> float:
    """gap minus (six slacks / 3 + both drops); zero up to roundoff."""
    six = math.fsum(trace.step(l).slack for l in SOUND_STEPS) / 3.0
    drops = trace.step("minC-2.8").dropped + trace.step("minC-2.13").dropped
    return trace.step("combine-2.3").slack - (six + drops)
