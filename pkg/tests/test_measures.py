import random

import pytest

from seqcalc.builders import (
    ax, par_node, plus_node, sat_node, tensor_node, with_node,
)
from seqcalc.errors import MeasureError
from seqcalc.measures import degree, depth, omega_height, uts_height
from seqcalc.ordinals import fin
from seqcalc.sequents import Family, mset, seq
from seqcalc.syntax import (
    EMPTY_ENV, Exists, Forall, IndexParam, LambdaName, Lit, Par, Plus,
    SatAtom, Tensor, Var, With, enum, lit, neg, nlit,
)

P, Q = lit("P"), lit("Q")


def test_depth_examples():
    assert depth(P) == 0
    assert depth(Tensor(P, neg(Q))) == 1
    assert depth(Forall("x", Par(Lit(True, "P", (Var("x"),)), Q))) == 2
    lam = LambdaName(("x",), Lit(True, "P", (Var("x"),)))
    assert depth(SatAtom(True, 1, 1, lam, (enum(1),))) == 0


def test_depth_neg_invariant():
    rng = random.Random(5)
    from seqcalc.corpus import rand_uts_formula
    for _ in range(200):
        f = rand_uts_formula(rng, rng.randint(0, 3))
        assert depth(neg(f)) == depth(f)


def test_uts_height_clauses():
    axm = ax(seq(P, neg(P)))
    assert uts_height(axm) == 1
    t = tensor_node(ax(seq(neg(P), P)), ax(seq(neg(Q), Q)), Tensor(P, Q))
    assert uts_height(t) == 2  # sum of premise heights
    w = with_node(ax(seq(neg(P), neg(Q), P)), ax(seq(neg(P), neg(Q), Q)),
                  With(P, Q))
    assert uts_height(w) == 2  # max + 1
    lam = LambdaName(("x",), P)
    satf = SatAtom(True, 1, 0, lam, (enum(1),))
    s = sat_node(ax(seq(neg(P), P)), satf, EMPTY_ENV)
    assert uts_height(s) == 2  # +1 in all other cases
    pl = plus_node(ax(seq(neg(P), P)), Plus(P, Q), 1)
    assert uts_height(pl) == 2


def test_uts_height_rejects_templates():
    from seqcalc.demos import build_demo
    zb = build_demo("zardini_flaw_before")
    with pytest.raises(MeasureError):
        uts_height(zb.proof)


def test_omega_height():
    axm = ax(seq(P, neg(P)))
    assert omega_height(axm) == fin(1)
    from seqcalc.demos import build_demo
    zb = build_demo("zardini_flaw_before")
    assert omega_height(zb.proof) == fin(2)
    tower = par_node(ax(seq(P, neg(P), Q, neg(Q))), Par(P, neg(P)))
    tower = par_node(tower, Par(Q, neg(Q)))
    assert omega_height(tower) == fin(3)


def test_omega_height_strictly_monotone_on_corpus():
    import random
    from seqcalc.corpus import gen_ik_cut
    rng = random.Random(2)
    def walk(p):
        h = omega_height(p)
        for q in p.premises:
            assert omega_height(q) < h
            walk(q)
        for t in p.templates:
            assert omega_height(t.body) < h
            walk(t.body)
    for _ in range(20):
        walk(gen_ik_cut(rng).as_node())


def test_degree():
    blk = Family(Lit(True, "P", (IndexParam("·"),)), 1, ())
    assert degree(mset([], [blk])) == fin(1)
    assert degree(mset()) == fin(1)
    assert degree(seq(P, Tensor(P, Par(P, Q)))) == fin(3)
