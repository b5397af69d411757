import random

import pytest

from seqcalc.errors import IllFormedError
from seqcalc.ordinals import (
    ONE, OMEGA_ORD, ZERO, Ordinal, fin, hessenberg, omega_power,
    ordinal_str, parse_ordinal, succ, sup,
)


def rand_ordinal(rng, max_exp=3):
    # random CNF ordinal with exponents <= max_exp (so below w^(max_exp+1))
    terms = []
    for e in range(max_exp, -1, -1):
        if rng.random() < 0.5:
            terms.append((fin(e), rng.randint(1, 4)))
    return Ordinal(tuple(terms))


def test_zero_unit():
    a = omega_power(fin(2), 3)
    assert hessenberg(ZERO, a) == a
    assert hessenberg(a, ZERO) == a


def test_simple_sums():
    assert hessenberg(OMEGA_ORD, ONE) == parse_ordinal("w + 1")
    assert hessenberg(parse_ordinal("w + 1"), OMEGA_ORD) == parse_ordinal("w*2 + 1")
    assert hessenberg(fin(2), fin(3)) == fin(5)


def test_commutative_associative_monotone():
    rng = random.Random(42)
    for _ in range(1000):
        a, b, c = (rand_ordinal(rng) for _ in range(3))
        assert hessenberg(a, b) == hessenberg(b, a)
        assert hessenberg(a, hessenberg(b, c)) == hessenberg(hessenberg(a, b), c)
        if not b.is_zero():
            assert a < hessenberg(a, b)


def test_comparison_total():
    rng = random.Random(43)
    for _ in range(300):
        a, b = rand_ordinal(rng), rand_ordinal(rng)
        assert (a < b) + (b < a) + (a == b) == 1


def test_succ_strictly_increases():
    rng = random.Random(44)
    for _ in range(100):
        a = rand_ordinal(rng)
        assert a < succ(a)


def test_sup():
    assert sup([]) == ZERO
    assert sup([fin(1), OMEGA_ORD, fin(5)]) == OMEGA_ORD


def test_cnf_invariants_enforced():
    with pytest.raises(IllFormedError):
        Ordinal(((ZERO, 0),))
    with pytest.raises(IllFormedError):
        Ordinal(((ZERO, 1), (ONE, 1)))


def test_text_roundtrip():
    for text in ["0", "5", "w", "w + 1", "w^2*3 + w + 5", "w^(w) + 2"]:
        o = parse_ordinal(text)
        assert parse_ordinal(ordinal_str(o)) == o
    assert ordinal_str(parse_ordinal("w^2*3 + w + 5")) == "w^2*3 + w + 5"
