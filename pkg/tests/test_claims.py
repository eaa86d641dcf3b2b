import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from opineq.claims import (
    REGISTRY,
    Instance,
    evaluate,
    get_claim,
    list_claims,
    scalar_gg_popoviciu,
    scalar_hlawka,
    scalar_popoviciu,
    violation_threshold,
)
from opineq.errors import DomainViolation, HypothesisViolation, NonPositiveFunction, UnknownClaim
from opineq.fixtures import load_fixture
from opineq.functions import builtin, parse_function
from opineq.harness import build_instance, CampaignConfig, gen_hermitian, gen_map, gen_unit_vector, gen_unitary
from opineq.hermitian import HermitianMatrix, Interval, diag, identity, zeros
from opineq.maps import MapFamily, make_identity, make_kraus, make_trace_average
from oracles import hlawka_scalar, jensen_gap, popoviciu_scalar, popoviciu_super_scalar, power

seeds = st.integers(min_value=0, max_value=2**32 - 1)
R = 1 / math.sqrt(2)
ALL_IDS = ["EQ1.5", "HLAWKA-SCALAR", "GG-POP", "THM1", "THM2.1", "COR1", "COR2", "BOHR-SUPER", "BOHR-SUB",
           "COR5-POP", "COR5-JENSEN", "PRP1", "PRP2", "PRP3", "THM3", "HLAWKA-OP", "HLAWKA-NORM", "POP-NORM"]


def scalar_triple(claim, a, b, d, f, interval=None, name_c="D"):
    one = make_identity(1)
    ops = {"A": HermitianMatrix([[a]]), "B": HermitianMatrix([[b]]), name_c: HermitianMatrix([[d]])}
    kw = {} if interval is None else {"interval": interval}
    return Instance.make(claim, phi=one, x=[1.0], f=f, **kw, **ops)


# --- registry ---------------------------------------------------------------

def test_registry_contents():
    assert [c.claim_id for c in list_claims()] == ALL_IDS
    assert len(REGISTRY) == 18
    assert get_claim("THM2.1").hypothesis == "A,B,D PSD; Phi unital; f superquadratic"
    with pytest.raises(UnknownClaim):
        get_claim("THM9")
    for c in list_claims():
        info = c.describe()
        assert info["claim"] == c.claim_id and info["shape"]


# --- scalar claims ----------------------------------------------------------

def test_scalar_popoviciu_examples():
    ident = builtin("id")
    assert scalar_popoviciu(1.3, -2.0, 7.5, ident).gap == pytest.approx(0.0, abs=1e-14)
    br = scalar_popoviciu(0, 0, 3, builtin("pow", 2))
    assert (br.lhs, br.rhs, br.gap) == pytest.approx((4.0, 3.0, 1.0))
    assert len(br.lhs_terms) + len(br.rhs_terms) == 5
    assert scalar_popoviciu(1, 1, 1, builtin("pow", 2)).gap == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DomainViolation):
        scalar_popoviciu(-1, 0, 1, builtin("pow", 2))


def test_scalar_hlawka_examples():
    assert scalar_hlawka(1, 1, -1).gap == 2
    assert scalar_hlawka(0, 0, 0).gap == 0
    assert scalar_hlawka(1, 1, 1).gap == 0


def test_scalar_gg_examples():
    assert scalar_gg_popoviciu(0.7, 2.0, 5.0, builtin("id")).gap == pytest.approx(0.0, abs=1e-12)
    assert scalar_gg_popoviciu(2.0, 2.0, 2.0, builtin("exp")).gap == pytest.approx(0.0, abs=1e-12)
    e = math.exp
    want = 3 * math.log(e(4 ** (1 / 3))) + 1 + 1 + 4 - 2 * (2 + 2 + 1)
    got = scalar_gg_popoviciu(1, 1, 4, builtin("exp")).gap
    assert got == pytest.approx(want, abs=1e-12)
    assert got >= 0
    with pytest.raises(DomainViolation):
        scalar_gg_popoviciu(0, 1, 2, builtin("exp"))
    with pytest.raises(NonPositiveFunction):
        scalar_gg_popoviciu(1, 2, 3, builtin("sqmc", 100))


def test_scalar_claims_through_registry():
    inst = Instance.make("EQ1.5", f="pow:2", scalars=(0, 0, 3))
    assert evaluate("EQ1.5", inst).gap == pytest.approx(1.0)
    concave = Instance.make("EQ1.5", f="pow:1", scalars=(0, 1, 3))
    assert evaluate("EQ1.5", concave).gap == pytest.approx(0.0, abs=1e-15)
    assert evaluate("HLAWKA-SCALAR", Instance.make(scalars=(1, 1, -1))).gap == 2
    assert evaluate("GG-POP", Instance.make(f="exp", scalars=(1, 1, 4))).gap >= 0
    with pytest.raises(HypothesisViolation):
        evaluate("GG-POP", Instance.make(f="abs", scalars=(1, 1, 4)))
    with pytest.raises(HypothesisViolation):
        evaluate("EQ1.5", Instance.make(f="pow:2"))


@given(x=st.floats(0, 10), y=st.floats(0, 10), z=st.floats(0, 10), p=st.sampled_from([1.5, 2, 3, 4]))
def test_scalar_popoviciu_matches_oracle(x, y, z, p):
    big, small = popoviciu_scalar(x, y, z, power(p))
    br = scalar_popoviciu(x, y, z, builtin("pow", p))
    assert br.gap == pytest.approx(big - small, abs=1e-9 * max(1.0, big))
    assert br.gap >= violation_threshold(br.lhs, br.rhs)


# --- Jensen-type claims -----------------------------------------------------

def test_thm1_examples():
    for name in ("jensen_dim2.json", "jensen_trace_average.json"):
        br = evaluate("THM1", load_fixture(name))
        assert br.lhs == pytest.approx(2.0, abs=1e-12)
        assert br.term("f(<Phi(A)x,x>)") == pytest.approx(1.0, abs=1e-12)
        assert br.term("<Phi(f(|A - s 1|))x,x>") == pytest.approx(1.0, abs=1e-12)
        assert br.gap == pytest.approx(0.0, abs=1e-12)
    rng = np.random.default_rng(0)
    for kind in ("random_kraus:3", "trace_average", "unitary"):
        phi = gen_map(rng, kind, 3)
        inst = Instance.make("THM1", phi=phi, x=gen_unit_vector(rng, 3), f="pow:3", A=2.5 * identity(3))
        assert evaluate("THM1", inst).gap == pytest.approx(0.0, abs=1e-12)


def test_thm1_hypothesis_failures_are_listed():
    inst = Instance.make("THM1", phi=make_identity(2), x=[1, 0], f="abs", A=diag([-1, 2]))
    with pytest.raises(HypothesisViolation) as exc:
        evaluate("THM1", inst)
    assert "A positive semidefinite" in exc.value.failed
    assert "f superquadratic or subquadratic" in exc.value.failed
    with pytest.raises(HypothesisViolation):
        evaluate("THM1", inst.replace(x=np.array([1.0, 1.0]), f=builtin("pow", 3), operators={"A": (diag([0, 1]),)}))


@given(seed=seeds, n=st.integers(1, 5), p=st.sampled_from([2.0, 3.0]))
def test_thm1_matches_oracle_with_identity_map(seed, n, p):
    rng = np.random.default_rng(seed)
    a = gen_hermitian(rng, n, Interval(0, 4))
    x = gen_unit_vector(rng, n)
    br = evaluate("THM1", Instance.make("THM1", phi=make_identity(n), x=x, f=f"pow:{p:g}", A=a))
    assert br.gap == pytest.approx(jensen_gap(power(p), a.data, x), abs=1e-9)


def test_subquadratic_reverses_orientation():
    inst = load_fixture("jensen_dim2.json").replace(f=builtin("pow", 1.5))
    br = evaluate("THM1", inst)
    assert br.lhs_terms[0][0] == "f(<Phi(A)x,x>)"
    assert br.gap == pytest.approx(br.lhs - br.rhs)


def test_cor2_examples():
    br = evaluate("COR2", load_fixture("refined_jensen_sqmc.json"))
    assert br.gap == pytest.approx(2.0, abs=1e-12)
    thm1 = load_fixture("jensen_dim2.json")
    assert evaluate("COR2", thm1).gap == evaluate("THM1", thm1).gap
    inst = Instance.make("COR2", phi=make_trace_average(2), x=[R, R], f="sqmc:1", A=3.0 * identity(2))
    assert evaluate("COR2", inst).gap == pytest.approx(-2 * builtin("sqmc", 1)(0.0), abs=1e-12)


def test_bohr_examples():
    br = evaluate("BOHR-SUPER", load_fixture("witness_bohr.json"))
    assert br.term("||Phi(f(|A - ||Phi(A)|| 1|))||") == pytest.approx(1.0, abs=1e-12)
    assert br.term("||Phi(f(A))||") + br.term("-f(||Phi(A)||)") == pytest.approx(0.0, abs=1e-12)
    assert br.gap == pytest.approx(-1.0, abs=1e-12)
    assert br.violated()
    for r in (2, 3, 4):
        inst = Instance.make("BOHR-SUPER", phi=make_identity(2), f=f"pow:{r}", A=identity(2))
        assert evaluate("BOHR-SUPER", inst).gap == pytest.approx(0.0, abs=1e-12)
    inst = Instance.make("BOHR-SUPER", phi=make_identity(3), f="pow:3", A=1.7 * identity(3))
    assert evaluate("BOHR-SUPER", inst).gap == pytest.approx(0.0, abs=1e-12)
    sub = Instance.make("BOHR-SUB", phi=make_identity(2), f="pow:1.5", A=identity(2))
    assert evaluate("BOHR-SUB", sub).gap == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(HypothesisViolation):
        evaluate("BOHR-SUB", load_fixture("witness_bohr.json").replace(f=builtin("pow", 3)))


# --- Popoviciu-type claims --------------------------------------------------

def test_thm21_witness():
    br = evaluate("THM2.1", load_fixture("witness_thm21.json"))
    assert br.lhs == pytest.approx(4 / 9, abs=1e-12)
    assert br.rhs == pytest.approx(8 / 9, abs=1e-12)
    assert br.gap == pytest.approx(-4 / 9, abs=1e-12)
    assert len(br.lhs_terms) + len(br.rhs_terms) == 11
    big, small = popoviciu_super_scalar(1.0, 0.0, 0.0, power(2))
    assert (br.lhs, br.rhs) == pytest.approx((big, small), abs=1e-15)


def test_thm21_symmetric_collapse():
    for a in (0.0, 0.4, 2.5):
        inst = scalar_triple("THM2.1", a, a, a, "pow:2")
        assert evaluate("THM2.1", inst).gap == pytest.approx(0.0, abs=1e-12)


def test_thm21_rejects_non_superquadratic():
    inst = load_fixture("witness_thm21.json")
    for spec in ("id", "pow:1.5", "abs"):
        with pytest.raises(HypothesisViolation):
            evaluate("THM2.1", inst.replace(f=parse_function(spec)))


def test_cor1_examples():
    inst = load_fixture("cor1_dim1.json")
    big, small = popoviciu_super_scalar(1.0, 0.0, 0.0, power(1.5))
    assert evaluate("COR1", inst).gap == pytest.approx(small - big, abs=1e-12)
    sym = scalar_triple("COR1", 0.8, 0.8, 0.8, "pow:1.5")
    assert evaluate("COR1", sym).gap == pytest.approx(-2 * 0.0 / 3, abs=1e-12)
    with pytest.raises(HypothesisViolation):
        evaluate("COR1", inst.replace(f=builtin("pow", 3)))


def test_multimap_examples(rng):
    fam_inst = load_fixture("family_halves_dim1.json")
    br = evaluate("COR5-POP", fam_inst)
    wit = evaluate("THM2.1", load_fixture("witness_thm21.json"))
    assert (br.lhs, br.rhs, br.gap) == pytest.approx((wit.lhs, wit.rhs, wit.gap), abs=1e-12)

    phi = gen_map(rng, "random_kraus:3", 3)
    x = gen_unit_vector(rng, 3)
    ops = {k: gen_hermitian(rng, 3, Interval(0, 4)) for k in "ABD"}
    single = Instance.make("THM2.1", phi=phi, x=x, f="pow:3", **ops)
    fam = single.replace(phi=MapFamily((phi,)))
    assert evaluate("COR5-POP", fam).gap == pytest.approx(evaluate("THM2.1", single).gap, abs=1e-12)
    one_a = Instance.make("THM1", phi=phi, x=x, f="pow:3", A=ops["A"])
    assert evaluate("COR5-JENSEN", one_a.replace(phi=MapFamily((phi,)))).gap == pytest.approx(
        evaluate("COR2", one_a).gap, abs=1e-12)

    half = make_kraus([R * np.eye(2)], require_unital=False)
    c = 1.3
    inst = Instance.make("COR5-JENSEN", phi=MapFamily((half, half)), x=[1, 0], f="sqmc:1",
                         A=[c * identity(2), c * identity(2)])
    # scalar collapse: both the correction term and the explicit term equal f(0)
    assert evaluate("COR5-JENSEN", inst).gap == pytest.approx(-2 * builtin("sqmc", 1)(0.0), abs=1e-12)


def test_prp1_examples():
    br = evaluate("PRP1", load_fixture("prp1_dim1.json"))
    assert br.gap == pytest.approx(4 / 9 - 1 / 3, abs=1e-12)
    rng = np.random.default_rng(4)
    a = gen_hermitian(rng, 2, Interval(0, 4))
    x = gen_unit_vector(rng, 2)
    inst = Instance.make("PRP1", phi=make_identity(2), x=x, f="pow:2", A=a, B=a, D=a)
    thm1 = evaluate("THM1", Instance.make("THM1", phi=make_identity(2), x=x, f="pow:2", A=a))
    # with A = B = D the convex form reduces to <A^2 x,x> - <Ax,x>^2, the variance term of THM1
    assert evaluate("PRP1", inst).gap == pytest.approx(thm1.term("<Phi(f(|A - s 1|))x,x>"), abs=1e-12)
    assert evaluate("PRP1", inst).gap >= 0
    with pytest.raises(HypothesisViolation):
        evaluate("PRP1", inst.replace(f=builtin("sqmc", 1)))


def test_thm3_identity_is_equality(rng):
    for _ in range(5):
        phi = gen_map(rng, "random_kraus:2", 3)
        ops = {k: gen_hermitian(rng, 3, Interval(-3, 3)) for k in "ABD"}
        inst = Instance.make("THM3", phi=phi, x=gen_unit_vector(rng, 3), f="id", interval=Interval(-3, 3), **ops)
        assert evaluate("THM3", inst).gap == pytest.approx(0.0, abs=1e-12)


def test_thm3_window_hypotheses():
    inst = scalar_triple("THM3", -2.0, 1.0, 0.5, "abs", Interval(-3, 3))
    assert evaluate("THM3", inst).gap >= 0
    with pytest.raises(HypothesisViolation):
        evaluate("THM3", inst.replace(interval=Interval(0, 3)))
    with pytest.raises(HypothesisViolation):
        evaluate("THM3", inst.replace(f=builtin("pow", 2)))


def test_prp3_needs_g0_zero():
    inst = scalar_triple("PRP3", 1.0, 2.0, 0.5, "exp")
    with pytest.raises(HypothesisViolation) as exc:
        evaluate("PRP3", inst)
    assert "g(0) = 0" in exc.value.failed
    assert evaluate("PRP3", inst.replace(f=builtin("abs"))).gap >= 0


def test_prp2_examples(rng):
    phi = gen_map(rng, "random_kraus:3", 3)
    x = gen_unit_vector(rng, 3)
    ops = {k: gen_hermitian(rng, 3, Interval(0, 4)) for k in "ABD"}
    base = Instance.make("PRP2", phi=phi, x=x, f="pow:3", **ops)
    assert evaluate("PRP2", base).gap == pytest.approx(3 * evaluate("PRP1", base.replace(f=builtin("pow", 2))).gap,
                                                       rel=1e-10, abs=1e-12)
    assert evaluate("PRP2", base.replace(f=builtin("pow", 2))).gap == pytest.approx(0.0, abs=1e-12)
    assert evaluate("PRP2", base.replace(f=builtin("expc"))).gap >= -1e-10
    with pytest.raises(HypothesisViolation):
        evaluate("PRP2", base.replace(f=builtin("sqmc", 1)))


# --- Hlawka-type claims -----------------------------------------------------

def test_hlawka_examples(rng):
    br = evaluate("HLAWKA-OP", load_fixture("hlawka_dim1.json"))
    assert br.gap == 2.0
    phi = gen_map(rng, "random_kraus:3", 2)
    x = gen_unit_vector(rng, 2)
    zero = Instance.make("HLAWKA-OP", phi=phi, x=x, A=zeros(2), B=zeros(2), C=zeros(2))
    assert evaluate("HLAWKA-OP", zero).gap == 0.0
    ops = {k: gen_hermitian(rng, 2, Interval(0, 3)) for k in "ABC"}
    psd = Instance.make("HLAWKA-OP", phi=phi, x=x, **ops)
    br = evaluate("HLAWKA-OP", psd)
    assert br.gap == pytest.approx(0.0, abs=1e-9)


def test_norm_variants(rng):
    ops = {k: gen_hermitian(rng, 3, Interval(-3, 3)) for k in "ABC"}
    phi = gen_map(rng, "random_kraus:2", 3)
    br = evaluate("HLAWKA-NORM", Instance.make("HLAWKA-NORM", phi=phi, **ops))
    assert br.gap == pytest.approx(br.lhs - br.rhs)
    psd = {k: gen_hermitian(rng, 3, Interval(0, 3)) for k in "ABC"}
    br = evaluate("POP-NORM", Instance.make("POP-NORM", phi=phi, f="pow:2", **psd))
    assert len(br.lhs_terms) == 2 and len(br.rhs_terms) == 3
    with pytest.raises(HypothesisViolation):
        evaluate("POP-NORM", Instance.make("POP-NORM", phi=phi, f="abs", **psd))


# --- cross-cutting properties -----------------------------------------------

@given(seed=seeds, claim=st.sampled_from(ALL_IDS))
def test_breakdown_consistency(seed, claim):
    info = get_claim(claim)
    kinds = ("family:2",) if info.shape.startswith("family") else ("random_kraus:2", "unitary")
    cfg = CampaignConfig(claim, 1, dims=(1, 2, 3), map_kinds=kinds, master_seed=seed)
    inst = build_instance(cfg, info, 0)
    br = evaluate(claim, inst)
    assert br.lhs == pytest.approx(math.fsum(v for _, v in br.lhs_terms), rel=1e-12, abs=1e-15)
    assert br.rhs == pytest.approx(math.fsum(v for _, v in br.rhs_terms), rel=1e-12, abs=1e-15)
    assert br.gap == pytest.approx(br.lhs - br.rhs, rel=1e-12, abs=1e-15)
    assert all(ok for _, ok in br.hypothesis_report)


@given(a=st.floats(0, 4), b=st.floats(0, 4), d=st.floats(0, 4), p=st.sampled_from([2, 3]))
def test_dimension_one_oracles(a, b, d, p):
    f = power(p)
    big, small = popoviciu_super_scalar(a, b, d, f)
    br = evaluate("THM2.1", scalar_triple("THM2.1", a, b, d, f"pow:{p}"))
    assert br.gap == pytest.approx(big - small, abs=1e-12 * max(1.0, big))
    big, small = popoviciu_scalar(a, b, d, f)
    for claim, iv in (("PRP1", None), ("PRP3", None), ("THM3", Interval(0, 4))):
        br = evaluate(claim, scalar_triple(claim, a, b, d, f"pow:{p}", iv))
        assert br.gap == pytest.approx(big - small, abs=1e-12 * max(1.0, big))


@given(a=st.floats(-3, 3), b=st.floats(-3, 3), c=st.floats(-3, 3))
def test_hlawka_dimension_one_oracle(a, b, c):
    br = evaluate("HLAWKA-OP", scalar_triple("HLAWKA-OP", a, b, c, None, name_c="C"))
    assert br.gap == pytest.approx(hlawka_scalar(a, b, c), abs=1e-12)


@given(seed=seeds, claim=st.sampled_from(["THM1", "THM2.1", "PRP1", "PRP3", "COR2", "HLAWKA-OP"]))
def test_unitary_invariance(seed, claim):
    rng = np.random.default_rng(seed)
    info = get_claim(claim)
    n = 3
    phi = gen_map(rng, "random_kraus:3", n)
    x = gen_unit_vector(rng, n)
    names = {"single": "A", "triple": "ABD", "hlawka": "ABC"}[info.shape]
    ops = {k: gen_hermitian(rng, n, info.default_interval) for k in names}
    inst = Instance.make(claim, phi=phi, x=x, f=info.default_f, interval=info.default_interval, **ops)
    u = gen_unitary(rng, n)
    rotated = {k: HermitianMatrix(u @ m.data @ u.conj().T) for k, m in ops.items()}
    # Phi'(M) = Phi(U^H M U) has Kraus operators U V_j
    phi_u = make_kraus([u @ v for v in phi.kraus])
    inst_u = Instance.make(claim, phi=phi_u, x=x, f=info.default_f, interval=info.default_interval, **rotated)
    assert evaluate(claim, inst_u).gap == pytest.approx(evaluate(claim, inst).gap, abs=1e-9)


@given(seed=seeds, claim=st.sampled_from(ALL_IDS))
def test_instance_json_round_trip(seed, claim):
    import json

    info = get_claim(claim)
    kinds = ("family:3",) if info.shape.startswith("family") else ("compression", "random_kraus:2")
    inst = build_instance(CampaignConfig(claim, 1, dims=(1, 3), map_kinds=kinds, master_seed=seed), info, 0)
    back = Instance.from_json(json.loads(json.dumps(inst.to_json())))
    assert back.to_json() == inst.to_json()
    assert evaluate(claim, back).gap == evaluate(claim, inst).gap
