import random

import pytest

from seqcalc.builders import (
    ax, cut_node, exists_node, par_node, tensor_node, vexists_node,
    vforall_node, fresh_param,
)
from seqcalc.calculi import (
    ALV, IK_OMEGA, LL, PremiseTemplate, UTS, check, is_cut_free,
)
from seqcalc.corpus import (
    gen_ale_proof, gen_ik_cut, gen_uts_cut, identity_finitary, identity_ik,
    rand_ik_formula,
)
from seqcalc.errors import TransformError
from seqcalc.measures import omega_height, uts_height
from seqcalc.sequents import EMPTY, OMEGA, mset, seq
from seqcalc.syntax import (
    EnumTerm, Exists, Forall, IndexParam, Lit, Par, Tensor, Var, lit, neg,
    nlit,
)
from seqcalc.transforms import (
    CutInstance, contract_exists_inf, cut_at, eliminate_cut_ik,
    forall_from_single, invert_exists, invert_exists_all, reduce_uts, weaken,
    zardini_flaw_after, zardini_flaw_before,
)

P, Q, R = lit("P"), lit("Q"), lit("R")


# -- weakening ---------------------------------------------------------------

def test_weaken_axiom():
    p = weaken(ax(seq(P, neg(P))), seq(Q))
    assert p.conclusion == seq(P, neg(P), Q)
    assert check(p, UTS).accepted


def test_weaken_identity_on_empty():
    p = ax(seq(P, neg(P)))
    assert weaken(p, EMPTY) is p


def test_weaken_rejects_ll():
    with pytest.raises(TransformError):
        weaken(ax(seq(P, neg(P))), seq(Q), calc=LL)


def test_weaken_preserves_omega_height_on_corpus():
    rng = random.Random(8)
    for _ in range(40):
        ci = gen_ik_cut(rng)
        p = ci.left
        extra = seq(Lit(True, "W", ()), (Lit(False, "W", ()), OMEGA))
        w = weaken(p, extra)
        assert omega_height(w) == omega_height(p)
        assert check(w, IK_OMEGA).accepted
        assert w.conclusion == p.conclusion.union(extra)


def test_weaken_uts_height_preserved():
    rng = random.Random(9)
    for _ in range(40):
        d0, _, _ = gen_uts_cut(rng)
        w = weaken(d0, seq(Lit(True, "W", ())))
        assert uts_height(w) == uts_height(d0)
        assert check(w, UTS).accepted


# -- exists inversion --------------------------------------------------------

def _exists_block(f):
    from seqcalc.sequents import instance_block
    return instance_block(f.body, f.var)


def test_invert_principal_returns_premise():
    f = Exists("x", P)
    base = ax(seq(nlit("P"), (P, OMEGA)))
    p = vexists_node(base, f)
    assert invert_exists(p, f) == base


def test_invert_axiom_adds_block():
    f = Exists("x", Lit(True, "S", (Var("x"),)))
    p = ax(seq(P, neg(P), f))
    out = invert_exists(p, f)
    assert out.rule.name == "in"
    assert out.conclusion.multiplicity(Lit(True, "S", (EnumTerm(4),))) == 1
    assert check(out, ALV).accepted


def test_invert_through_other_rules():
    f = Exists("x", P)
    base = ax(seq(Q, neg(Q), R, f))
    p = par_node(base, Par(Q, neg(Q)))
    out = invert_exists(p, f)
    assert out.conclusion == p.conclusion.remove(f, 1).union(seq((P, OMEGA)))
    assert check(out, ALV).accepted
    assert not omega_height(p) < omega_height(out)


def test_invert_never_increases_height_on_corpus():
    rng = random.Random(21)
    for _ in range(30):
        f = Exists("x", Lit(True, "ss", (Var("x"),)))
        base = identity_ik(rand_ik_formula(rng, 1))
        p = weaken(base, seq(f))
        out = invert_exists(p, f)
        assert check(out, IK_OMEGA).accepted
        assert not omega_height(p) < omega_height(out)


def test_invert_finitary_exists_witness():
    body = Lit(True, "S", (Var("x"),))
    f = Exists("x", body)
    prem = ax(seq(Lit(False, "S", (EnumTerm(2),)), Lit(True, "S", (EnumTerm(2),))))
    p = exists_node(prem, f, EnumTerm(2))
    out = invert_exists(p, f)
    assert out.conclusion.multiplicity(Lit(True, "S", (EnumTerm(5),))) == 1
    assert check(out, ALV).accepted


# -- infinitary contraction and the vacuous-forall lemma ---------------------

def test_contract_exists_inf_principal_case():
    f = Exists("x", P)
    base = ax(seq(nlit("P"), (P, OMEGA), (f, OMEGA)))
    p = vexists_node(base, f)
    out = contract_exists_inf(p, f)
    assert out.conclusion == seq(nlit("P"), f)
    assert check(out, ALV).accepted


def test_contract_exists_inf_axiom_case():
    f = Exists("x", P)
    p = ax(seq(P, neg(P), (f, OMEGA)))
    out = contract_exists_inf(p, f)
    assert out.conclusion == seq(P, neg(P), f)
    assert check(out, ALV).accepted


def test_contract_exists_inf_tensor_case():
    f = Exists("x", P)
    left = ax(seq(Q, neg(Q), (f, OMEGA)))
    right = ax(seq(R, neg(R), (f, OMEGA)))
    p = tensor_node(left, right, Tensor(Q, R))
    out = contract_exists_inf(p, f)
    assert out.conclusion.multiplicity(f) == 1
    assert check(out, ALV).accepted


def test_contract_requires_vacuous():
    f = Exists("x", Lit(True, "S", (Var("x"),)))
    p = ax(seq(P, neg(P), (f, OMEGA)))
    with pytest.raises(TransformError):
        contract_exists_inf(p, f)


def test_forall_from_single_empty_context():
    p = ax(seq((P, OMEGA), (nlit("P"), OMEGA)))
    p = vexists_node(p, Exists("y", P))
    p = vexists_node(p, Exists("z", nlit("P")))
    out = forall_from_single(p, Forall("x", Exists("z", nlit("P"))))
    assert check(out, ALV).accepted


def test_forall_from_single_rejects_bad_context():
    p = ax(seq(P, neg(P), Q))
    with pytest.raises(TransformError):
        forall_from_single(p, Forall("x", Q))


# -- atomic cut ---------------------------------------------------------------

def test_cut_at_axiom_weakening_case():
    left = ax(seq(neg(P), P))
    right = ax(seq(R, neg(R), neg(P)))
    out = cut_at(left, right, P)
    assert out.conclusion == seq(neg(P), R, neg(R))
    assert check(out, IK_OMEGA).accepted


def test_cut_at_pair_elsewhere():
    left = ax(seq(Q, neg(Q), P))
    right = ax(seq(R, neg(R), neg(P)))
    out = cut_at(left, right, P)
    assert check(out, IK_OMEGA).accepted
    assert out.conclusion == seq(Q, neg(Q), R, neg(R))


def test_cut_at_permutes_through_par():
    left = par_node(ax(seq(Q, neg(Q), P)), Par(Q, neg(Q)))
    right = ax(seq(R, neg(R), neg(P)))
    out = cut_at(left, right, P)
    assert is_cut_free(out)
    assert check(out, IK_OMEGA).accepted
    assert out.conclusion == seq(Par(Q, neg(Q)), R, neg(R))


def test_cut_at_rejects_compound():
    with pytest.raises(TransformError):
        cut_at(ax(seq(P, neg(P))), ax(seq(P, neg(P))), Par(P, P))


# -- the finitary reduction ---------------------------------------------------

def test_reduce_uts_corpus():
    rng = random.Random(31)
    for _ in range(150):
        d0, d1, f = gen_uts_cut(rng)
        out = reduce_uts(d0, d1, f)
        assert is_cut_free(out)
        assert check(out, UTS).accepted
        assert uts_height(out) <= uts_height(d0) + uts_height(d1)
        want = d0.conclusion.remove(f, 1).union(d1.conclusion.remove(neg(f), 1))
        assert out.conclusion == want


def test_reduce_uts_rejects_cut_input():
    p = cut_node(ax(seq(neg(P), P)), ax(seq(P, neg(P))), P)
    with pytest.raises(TransformError):
        reduce_uts(p, ax(seq(P, neg(P))), P)


# -- the infinitary eliminator -------------------------------------------------

def test_eliminate_corpus():
    rng = random.Random(57)
    for _ in range(80):
        ci = gen_ik_cut(rng)
        node = ci.as_node()
        assert check(node, IK_OMEGA).accepted
        out = eliminate_cut_ik(ci)
        assert is_cut_free(out)
        assert check(out, IK_OMEGA).accepted
        assert out.conclusion == node.conclusion


def test_eliminate_degenerate_empty_phi():
    left = ax(seq(P, neg(P)))
    ci = CutInstance(left, (), ())
    assert eliminate_cut_ik(ci) == left


def test_eliminate_forall_principal_block_cut():
    # |- [~S(t_i)], forall x S  cut against  |- exists x ~S-side identity
    body = Lit(True, "S", (Var("x"),))
    f = Forall("x", body)
    param = fresh_param()
    inst = Lit(True, "S", (IndexParam(param),))
    tmpl = PremiseTemplate(param, (), ax(seq(neg(inst), inst)))
    left = vforall_node(f, tmpl, ())
    rp = identity_ik(neg(f))
    ci = CutInstance(left, ((f, rp),), ())
    out = eliminate_cut_ik(ci)
    assert is_cut_free(out)
    assert check(out, IK_OMEGA).accepted
    assert out.conclusion == ci.as_node().conclusion


def test_eliminate_requires_cut_free_inputs():
    inner = cut_node(ax(seq(neg(P), P)), ax(seq(P, neg(P))), P)
    with pytest.raises(TransformError):
        eliminate_cut_ik(CutInstance(inner, ((P, ax(seq(P, neg(P)))),), ()))


# -- the reduction flaw demo ----------------------------------------------------

def test_zardini_flaw():
    before = zardini_flaw_before()
    assert check(before, IK_OMEGA).accepted
    after = zardini_flaw_after()
    assert not check(after, IK_OMEGA).accepted
