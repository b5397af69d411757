import pytest

from seqcalc.builders import (
    ax, cut_node, exists_node, forall_node, fresh_param, par_node, plus_node,
    tensor_node, vexists_node, vforall_node, with_node,
)
from seqcalc.calculi import (
    AL, ALV, CL, IK_OMEGA, LL, PremiseTemplate, Proof, RuleInstance, UTS,
    UTS_K4, check, parse_calculus, rule_table, uts,
)
from seqcalc.sequents import OMEGA, seq
from seqcalc.syntax import (
    Environment, EnumTerm, Exists, Forall, IndexParam, Lit, Par, Plus,
    Tensor, Var, With, lit, neg, nlit,
)

P = lit("P")
Q = lit("Q")


def test_axiom_with_context_accepted_in_al():
    assert check(ax(seq(P, neg(P), Q)), AL)


def test_axiom_requires_dual_pair():
    rep = check(ax(seq(P, Q)), AL)
    assert not rep.accepted
    assert rep.reason


def test_axiom_wrong_pair_rejected():
    rep = check(ax(seq(P, neg(Q))), AL)
    assert not rep.accepted


def test_ll_axiom_strict():
    assert check(ax(seq(P, neg(P))), LL)
    assert not check(ax(seq(P, neg(P), Q)), LL)


def test_par_tensor_round():
    t = Tensor(P, Q)
    p = tensor_node(ax(seq(neg(P), P)), ax(seq(neg(Q), Q)), t)
    assert check(p, AL)
    f = Par(neg(P), neg(Q))
    q = par_node(p, f)
    assert check(q, AL)
    assert q.conclusion == seq(t, f)


def test_with_plus():
    w = With(P, Q)
    p = with_node(ax(seq(neg(P), P)), ax(seq(neg(P), Q)), w)
    assert not check(p, AL)  # contexts differ
    p2 = with_node(ax(seq(neg(P), neg(Q), P)), ax(seq(neg(P), neg(Q), Q)), w)
    assert check(p2, AL)
    pl = plus_node(ax(seq(neg(P), P)), Plus(P, Q), 1)
    assert check(pl, AL)


def test_forall_eigenvariable_condition():
    body = Lit(True, "R", (Var("x"),))
    f = Forall("x", body)
    good = forall_node(ax(seq(Lit(False, "R", (Var("y"),)),
                              Lit(True, "R", (Var("y"),)))), f, "y")
    # eigenvariable occurs in the remaining context: rejected
    assert not check(good, AL)
    ok = forall_node(
        exists_node(ax(seq(Lit(False, "R", (Var("y"),)),
                           Lit(True, "R", (Var("y"),)))),
                    Exists("z", Lit(False, "R", (Var("z"),))), Var("y")),
        f, "y")
    assert check(ok, AL)


def test_exists_witness():
    f = Exists("x", Lit(True, "R", (Var("x"),)))
    p = exists_node(ax(seq(Lit(False, "R", (EnumTerm(3),)),
                           Lit(True, "R", (EnumTerm(3),)))), f, EnumTerm(3))
    assert check(p, AL)


def test_vexists_vacuous():
    base = ax(seq((P, OMEGA), (nlit("P"), OMEGA)))
    p = vexists_node(base, Exists("x", P))
    assert check(p, ALV)
    assert not check(p, AL)  # infinite sequents are not AL


def test_vforall_template():
    body = Lit(True, "P", (Var("x"),))
    f = Forall("x", body)
    param = fresh_param()
    leaf = ax(seq(Lit(False, "P", (IndexParam(param),)),
                  Lit(True, "P", (IndexParam(param),))))
    p = vforall_node(f, PremiseTemplate(param, (), leaf), ())
    assert check(p, IK_OMEGA)
    assert p.conclusion.multiplicity(Lit(False, "P", (EnumTerm(9),))) == 1


def test_vforall_without_template_rejected():
    f = Forall("x", Lit(True, "P", (Var("x"),)))
    leaf = ax(seq(Lit(False, "P", (EnumTerm(1),)),
                  Lit(True, "P", (EnumTerm(1),))))
    bad = Proof(seq(Lit(False, "P", (EnumTerm(1),)), f),
                RuleInstance("vforall", (f,), indices=(1,)), (leaf,))
    rep = check(bad, IK_OMEGA)
    assert not rep.accepted


def test_vforall_explicit_plus_template():
    body = Lit(True, "P", (Var("x"),))
    f = Forall("x", body)
    param = fresh_param()
    leaf = ax(seq(Lit(False, "P", (IndexParam(param),)),
                  Lit(True, "P", (IndexParam(param),))))
    expl = ax(seq(Q, Lit(False, "P", (EnumTerm(2),)),
                  Lit(True, "P", (EnumTerm(2),))))
    p = vforall_node(f, PremiseTemplate(param, (2,), leaf), [(2, expl)])
    assert check(p, IK_OMEGA)
    assert p.conclusion.multiplicity(Q) == 1


def test_cut_checks_in_ik():
    p = cut_node(ax(seq(neg(P), P)), ax(seq(P, neg(P), Q)), P)
    assert p.conclusion == seq(neg(P), P, Q)
    assert check(p, IK_OMEGA)
    assert not check(p, ALV)  # ALV is cut-free by definition


def test_rule_tables():
    al_rules = {e["rule"] for e in rule_table(AL)}
    assert {"with", "plus1", "plus2"} <= al_rules
    ik_rules = {e["rule"] for e in rule_table(IK_OMEGA)}
    assert "with" not in ik_rules and "plus1" not in ik_rules
    ll_in = [e for e in rule_table(LL) if e["rule"] == "in"][0]
    assert "Gamma" not in ll_in["schema"]
    sat = [e for e in rule_table(UTS) if e["rule"] == "sat"][0]
    assert sat["restriction"] == "all n, m"
    sat10 = [e for e in rule_table(uts(1, 0)) if e["rule"] == "sat"][0]
    assert sat10["restriction"] == "n=1, m=0"


def test_parse_calculus():
    assert parse_calculus("IKw") == IK_OMEGA
    assert parse_calculus("UTS(1,0)") == uts(1, 0)
    assert parse_calculus("al") == AL
    with pytest.raises(Exception):
        parse_calculus("nope")


def test_language_enforcement():
    from seqcalc.syntax import Bang
    p = ax(seq(Bang(P), P, neg(P)))
    bad = Proof(p.conclusion,
                RuleInstance("par", (Par(P, neg(P)),)), (p,))
    rep = check(bad, IK_OMEGA)
    assert not rep.accepted
