import random

import pytest

from seqcalc.errors import IllFormedError, UnboundNameError
from seqcalc.syntax import (
    Bang, Box, DefConst, Diamond, EnumTerm, Environment, Exists, Forall,
    IndexParam, LambdaName, Lit, Par, Plus, Quest, SatAtom, Tensor, TruthAtom,
    Var, With, alpha_eq, enum, free_vars, lit, neg, nlit, ntruth, quote,
    subst, subst_index, truth,
)

P = lit("P")
Q = lit("Q")


def rand_formula(rng, depth):
    if depth == 0:
        name = rng.choice(["P", "Q", "R"])
        args = tuple(enum(rng.randint(1, 3)) for _ in range(rng.randint(0, 2)))
        return Lit(rng.random() < 0.5, name, args)
    kind = rng.randint(0, 7)
    if kind < 4:
        ctor = [Tensor, Par, Plus, With][kind]
        return ctor(rand_formula(rng, depth - 1), rand_formula(rng, depth - 1))
    if kind < 6:
        ctor = [Forall, Exists][kind - 4]
        v = rng.choice(["x", "y"])
        body = rand_formula(rng, depth - 1)
        if rng.random() < 0.5:
            body = Lit(True, "S", (Var(v),))
        return ctor(v, body)
    ctor = [Box, Diamond, Bang, Quest][kind - 6 if kind < 8 else 0]
    return ctor(rand_formula(rng, depth - 1))


def test_neg_flips_polarity():
    assert neg(P) == nlit("P")
    assert neg(nlit("P")) == P


def test_neg_duality_table():
    f = Forall("x", Lit(True, "P", (Var("x"),)))
    assert neg(f) == Exists("x", Lit(False, "P", (Var("x"),)))
    assert neg(Tensor(P, Q)) == Par(neg(P), neg(Q))
    assert neg(Plus(P, Q)) == With(neg(P), neg(Q))
    assert neg(Box(P)) == Diamond(neg(P))


def test_neg_bang_truth():
    l = DefConst("l")
    assert neg(Bang(truth(l))) == Quest(ntruth(l))


def test_neg_involution_random():
    rng = random.Random(7)
    for _ in range(300):
        f = rand_formula(rng, rng.randint(0, 3))
        assert neg(neg(f)) == f


def test_subst_basic():
    f = Lit(True, "P", (Var("x"),))
    assert subst(f, "x", enum(3)) == Lit(True, "P", (enum(3),))


def test_subst_binder_untouched():
    f = Exists("y", Lit(True, "Q", (Var("x"), Var("y"))))
    g = subst(f, "x", enum(1))
    assert g == Exists("y", Lit(True, "Q", (enum(1), Var("y"))))


def test_subst_vacuous():
    f = Lit(True, "P", (Var("y"),))
    assert subst(f, "x", enum(1)) is f


def test_subst_capture_avoided():
    f = Exists("y", Lit(True, "Q", (Var("x"), Var("y"))))
    g = subst(f, "x", Var("y"))
    assert isinstance(g, Exists)
    assert g.var != "y"
    assert Var("y") in g.body.args


def test_subst_commutes_with_neg():
    rng = random.Random(13)
    for _ in range(200):
        f = rand_formula(rng, rng.randint(0, 3))
        t = enum(rng.randint(1, 4))
        assert neg(subst(f, "x", t)) == subst(neg(f), "x", t)


def test_alpha_eq():
    a = Forall("x", Lit(True, "P", (Var("x"),)))
    b = Forall("y", Lit(True, "P", (Var("y"),)))
    assert alpha_eq(a, b)
    assert not alpha_eq(P, neg(P))


def test_alpha_eq_no_unfold():
    env = Environment({"l": quote(Quest(ntruth(DefConst("l"))))})
    assert not alpha_eq(truth(DefConst("l")), Quest(ntruth(DefConst("l"))))
    assert env.unfold(DefConst("l")) == quote(Quest(ntruth(DefConst("l"))))


def test_unfold_errors():
    env = Environment()
    with pytest.raises(UnboundNameError):
        env.unfold(DefConst("l"))
    env2 = Environment({"c": enum(1)})
    assert env2.unfold(DefConst("c")) == enum(1)


def test_environment_requires_closed_definitions():
    with pytest.raises(IllFormedError):
        Environment({"c": Var("x")})


def test_sat_wellformedness_enforced():
    lam = LambdaName(("x",), Lit(True, "P", (Var("x"),)))
    SatAtom(True, 1, 1, lam, (enum(1),))
    with pytest.raises(IllFormedError):
        SatAtom(True, 2, 1, lam, (enum(1), enum(2)))
    with pytest.raises(IllFormedError):
        SatAtom(True, 1, 0, lam, (enum(1),))


def test_lambda_free_vars():
    lam = LambdaName(("x",), Lit(True, "P", (Var("x"), Var("y"))))
    from seqcalc.syntax import term_free_vars
    assert term_free_vars(lam) == frozenset({"y"})


def test_enum_index_positive():
    with pytest.raises(IllFormedError):
        EnumTerm(0)


def test_subst_index():
    f = Lit(True, "P", (IndexParam("i"),))
    assert subst_index(f, "i", enum(5)) == Lit(True, "P", (enum(5),))
    assert subst_index(f, "j", enum(5)) == f
