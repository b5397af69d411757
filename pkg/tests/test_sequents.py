import pytest

from seqcalc.errors import IllFormedError
from seqcalc.sequents import (
    EMPTY, Family, OMEGA, PARAM, family, family_union, instance_block, mset,
    seq,
)
from seqcalc.syntax import Exists, IndexParam, Lit, Var, enum, lit, neg, nlit

P = lit("P")
Q = lit("Q")
A = lit("A")


def blk(pred="P", **kw):
    return family(Lit(True, pred, (IndexParam("i"),)), "i", **kw)


def test_union_counts():
    m = seq(P).union(seq(P))
    assert m.multiplicity(P) == 2


def test_union_omega_absorbs():
    m = seq((A, OMEGA)).union(seq(A))
    assert m.multiplicity(A) == OMEGA
    assert m == seq((A, OMEGA))


def test_family_union_builds_block():
    # union of {P̄(t_i)} over all i
    m = family_union(seq(nlit("P", IndexParam("i"))), "i", ())
    assert m.multiplicity(nlit("P", enum(7))) == 1
    assert m.multiplicity(nlit("P", enum(1000))) == 1
    assert m.families


def test_multiplicity_block_instance():
    m = mset([], [blk()])
    assert m.multiplicity(lit("P", enum(7))) == 1
    assert m.multiplicity(lit("P", enum(2))) == 1
    assert m.multiplicity(Q) == 0


def test_multiplicity_omega_block():
    m = seq((A, OMEGA))
    assert m.multiplicity(A) == OMEGA


def test_instantiate_block():
    b = blk()
    assert b.instantiate(3) == lit("P", enum(3))
    b2 = blk(exceptions=[(2, 0)])
    with pytest.raises(IllFormedError):
        b2.instantiate(2)


def test_constant_family_becomes_omega_point():
    # A family whose template ignores the index is just A^infty
    with pytest.raises(IllFormedError):
        family(A, "i")


def test_remove_point():
    m = seq(P, Q)
    assert m.remove(P, 1) == seq(Q)


def test_remove_omega_all():
    m = seq((A, OMEGA))
    assert m.remove(A, OMEGA) == EMPTY


def test_remove_finite_from_omega():
    m = seq((A, OMEGA))
    assert m.remove(A, 3) == m


def test_remove_insufficient():
    with pytest.raises(IllFormedError):
        seq(P).remove(P, 2)


def test_remove_block_instance():
    m = mset([], [blk()])
    out = m.remove(lit("P", enum(2)), 1)
    assert out.multiplicity(lit("P", enum(2))) == 0
    assert out.multiplicity(lit("P", enum(3))) == 1


def test_point_folds_into_family():
    m = mset([(lit("P", enum(2)), 1)], [blk(exceptions=[(2, 0)])])
    assert m == mset([], [blk()])


def test_union_commutative_associative():
    m1 = mset([(P, 1)], [blk()])
    m2 = seq(Q, (A, OMEGA))
    m3 = seq(P)
    assert m1.union(m2) == m2.union(m1)
    assert m1.union(m2.union(m3)) == m1.union(m2).union(m3)
    assert m1.union(EMPTY) == m1


def test_remove_then_multiplicity():
    m = mset([(P, 2), (Q, 1)], [blk()])
    for f, k in [(P, 1), (P, 2), (Q, 1), (lit("P", enum(5)), 1)]:
        before = m.multiplicity(f)
        out = m.remove(f, k)
        after = out.multiplicity(f)
        assert after == (0 if before == k else before - k)


def test_diff_family():
    m = mset([(Q, 1)], [blk()])
    out = m.diff(mset([], [blk()]))
    assert out == seq(Q)


def test_diff_family_partial():
    m = mset([], [blk(eventual=2)])
    out = m.diff(mset([], [blk()]))
    assert out == mset([], [blk()])


def test_contains():
    m = mset([(P, 1)], [blk()])
    assert m.contains(seq(P))
    assert m.contains(mset([], [blk()]))
    assert not m.contains(seq(P, P))


def test_canonical_idempotent():
    m = mset([(P, 1), (lit("P", enum(4)), 2)], [blk(), blk(exceptions=[(4, 0)])])
    again = mset(list(m.points), list(m.families))
    assert m == again


def test_is_finite():
    assert seq(P, Q).is_finite()
    assert not seq((A, OMEGA)).is_finite()
    assert not mset([], [blk()]).is_finite()


def test_instance_block_vacuous_vs_not():
    vac = instance_block(P, "x")
    assert vac == seq((P, OMEGA))
    inst = instance_block(Lit(True, "P", (Var("x"),)), "x")
    assert inst.families and inst.multiplicity(lit("P", enum(9))) == 1


def test_family_union_omega_multiplicity():
    inner = mset([], [blk()])
    out = family_union(inner, "j", ())
    fam = out.families[0]
    assert fam.eventual == OMEGA


def test_symbolic_instance_multiplicity():
    m = mset([], [blk()])
    symbolic = lit("P", IndexParam("k"))
    assert m.multiplicity(symbolic) == 1
