"""Cantor-normal-form ordinals below epsilon_0 with the Hessenberg sum.

An ordinal is a sorted tuple of (exponent, coefficient) pairs with strictly
decreasing ordinal exponents and positive integer coefficients; the empty
tuple is 0.  Only comparison, successor, finite sup and the natural
(Hessenberg) sum are provided: that is all the height/degree bookkeeping
needs.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering

from .errors import IllFormedError, ParseError


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: tuple[tuple["Ordinal", int], ...] = ()

    def __post_init__(self):
        prev = None
        for exp, coeff in self.terms:
            if not isinstance(coeff, int) or coeff < 1:
                raise IllFormedError(f"coefficient must be a positive integer: {coeff!r}")
            if prev is not None and not exp < prev:
                raise IllFormedError("exponents must be strictly decreasing")
            prev = exp

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def to_int(self) -> int:
        if self.is_zero():
            return 0
        if not self.is_finite():
            raise IllFormedError(f"{self} is not finite")
        return self.terms[0][1]

    def __lt__(self, other: "Ordinal") -> bool:
        for (e1, c1), (e2, c2) in zip(self.terms, other.terms):
            if e1 != e2:
                return e1 < e2
            if c1 != c2:
                return c1 < c2
        return len(self.terms) < len(other.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, coeff in self.terms:
            if exp.is_zero():
                parts.append(str(coeff))
                continue
            if exp == ONE:
                base = "w"
            elif exp.is_finite():
                base = f"w^{exp.to_int()}"
            else:
                base = f"w^({exp})"
            parts.append(base if coeff == 1 else f"{base}*{coeff}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Ordinal<{self}>"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA_ORD = Ordinal(((ONE, 1),))


def fin(n: int) -> Ordinal:
    if n < 0:
        raise IllFormedError("ordinals are non-negative")
    return Ordinal(((ZERO, n),)) if n else ZERO


def omega_power(exp: Ordinal, coeff: int = 1) -> Ordinal:
    return Ordinal(((exp, coeff),))


def hessenberg(a: Ordinal, b: Ordinal) -> Ordinal:
    """Natural sum: merge CNF terms, adding coefficients of equal exponents."""
    merged: list[tuple[Ordinal, int]] = []
    i = j = 0
    ta, tb = a.terms, b.terms
    while i < len(ta) and j < len(tb):
        (e1, c1), (e2, c2) = ta[i], tb[j]
        if e1 == e2:
            merged.append((e1, c1 + c2))
            i += 1
            j += 1
        elif e2 < e1:
            merged.append((e1, c1))
            i += 1
        else:
            merged.append((e2, c2))
            j += 1
    merged.extend(ta[i:])
    merged.extend(tb[j:])
    return Ordinal(tuple(merged))


def hessenberg_all(ordinals) -> Ordinal:
    out = ZERO
    for o in ordinals:
        out = hessenberg(out, o)
    return out


def succ(a: Ordinal) -> Ordinal:
    return hessenberg(a, ONE)


def sup(ordinals) -> Ordinal:
    """Supremum (maximum) of finitely many ordinals; sup of nothing is 0."""
    out = ZERO
    for o in ordinals:
        if out < o:
            out = o
    return out


# ---------------------------------------------------------------------------
# Text form: `w^2*3 + w + 5`

def ordinal_str(a: Ordinal) -> str:
    return str(a)


def parse_ordinal(text: str) -> Ordinal:
    out = ZERO
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ParseError("empty ordinal term")
        out = hessenberg(out, _parse_term(chunk))
    return out


def _parse_term(chunk: str) -> Ordinal:
    coeff = 1
    if "*" in chunk:
        base, _, c = chunk.rpartition("*")
        chunk = base.strip()
        try:
            coeff = int(c.strip())
        except ValueError:
            raise ParseError(f"bad coefficient in ordinal term {chunk!r}") from None
    if chunk == "w":
        return omega_power(ONE, coeff)
    if chunk.startswith("w^("):
        if not chunk.endswith(")"):
            raise ParseError(f"unbalanced parentheses in {chunk!r}")
        return omega_power(parse_ordinal(chunk[3:-1]), coeff)
    if chunk.startswith("w^"):
        try:
            return omega_power(fin(int(chunk[2:])), coeff)
        except ValueError:
            raise ParseError(f"bad exponent in {chunk!r}") from None
    try:
        n = int(chunk)
    except ValueError:
        raise ParseError(f"bad ordinal term {chunk!r}") from None
    if coeff != 1:
        raise ParseError("a finite term takes no coefficient")
    return fin(n)
