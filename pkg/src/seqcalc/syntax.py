"""Terms and negation-normal formulas for one-sided (Tait-style) calculi.

Negation is not a constructor: `neg` computes the De Morgan dual and is an
involution on every formula.  Self-referential names live in an
`Environment` mapping defined constants to terms; `unfold` performs exactly
one definition step.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

from .errors import IllFormedError, UnboundNameError

# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class EnumTerm:
    """t_i from the fixed exhaustive enumeration of closed terms (i >= 1)."""

    index: int

    def __post_init__(self):
        if self.index < 1:
            raise IllFormedError(f"enumeration index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class IndexParam:
    """Opaque index standing for t_i with i symbolic (schematic families)."""

    name: str


@dataclass(frozen=True)
class DefConst:
    """A defined constant, resolved through an Environment."""

    name: str


@dataclass(frozen=True)
class LambdaName:
    """The name-forming operator: lambda x1...xn . A is a term, not a function."""

    binders: tuple[str, ...]
    body: "Formula"


Term = Union[EnumTerm, Var, IndexParam, DefConst, LambdaName]

# ---------------------------------------------------------------------------
# Formulas (negation normal form; duality handled by `neg`)

@dataclass(frozen=True)
class Lit:
    positive: bool
    pred: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class SatAtom:
    """Sat^n_m(lam x1..xn A, t1..tn); `mfree` is the free-variable count of A."""

    positive: bool
    arity: int
    mfree: int
    abstraction: Term
    args: tuple[Term, ...]

    def __post_init__(self):
        if len(self.args) != self.arity:
            raise IllFormedError(
                f"Sat expects {self.arity} argument terms, got {len(self.args)}")
        if isinstance(self.abstraction, LambdaName):
            check_sat_abstraction(self.abstraction, self.arity, self.mfree)


@dataclass(frozen=True)
class TruthAtom:
    """T(t): the (1,0) satisfaction predicate applied to a sentence name."""

    positive: bool
    arg: Term


@dataclass(frozen=True)
class Tensor:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Par:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Plus:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class With:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Box:
    body: "Formula"


@dataclass(frozen=True)
class Diamond:
    body: "Formula"


@dataclass(frozen=True)
class Bang:
    body: "Formula"


@dataclass(frozen=True)
class Quest:
    body: "Formula"


Formula = Union[
    Lit, SatAtom, TruthAtom, Tensor, Par, Plus, With,
    Forall, Exists, Box, Diamond, Bang, Quest,
]

BINARY = (Tensor, Par, Plus, With)
QUANTIFIERS = (Forall, Exists)
UNARY = (Box, Diamond, Bang, Quest)
ATOMS = (Lit, SatAtom, TruthAtom)

_DUAL_BIN = {Tensor: Par, Par: Tensor, Plus: With, With: Plus}
_DUAL_Q = {Forall: Exists, Exists: Forall}
_DUAL_UN = {Box: Diamond, Diamond: Box, Bang: Quest, Quest: Bang}


def check_sat_abstraction(lam: LambdaName, arity: int, mfree: int) -> None:
    if len(lam.binders) != arity:
        raise IllFormedError(
            f"Sat abstraction binds {len(lam.binders)} variables, expected {arity}")
    nfree = len(free_vars(lam.body))
    if nfree != mfree:
        raise IllFormedError(
            f"Sat body has {nfree} free variables, expected {mfree}")


# ---------------------------------------------------------------------------
# Environment for self-referential names

class Environment:
    """Map from defined-constant names to closed terms; cycles permitted."""

    def __init__(self, defs: dict[str, Term] | None = None):
        self._defs: dict[str, Term] = dict(defs or {})
        for name, term in self._defs.items():
            if term_free_vars(term):
                raise IllFormedError(f"definition of {name} is not closed")

    def define(self, name: str, term: Term) -> None:
        if term_free_vars(term):
            raise IllFormedError(f"definition of {name} is not closed")
        self._defs[name] = term

    def unfold(self, t: Term) -> Term:
        """One definition step; errors on unbound names."""
        if not isinstance(t, DefConst):
            raise IllFormedError(f"unfold expects a defined constant, got {t!r}")
        try:
            return self._defs[t.name]
        except KeyError:
            raise UnboundNameError(f"undefined constant {t.name!r}") from None

    def resolve(self, t: Term) -> Term:
        """Unfold at most once, so DefConst abstractions expose their lambda."""
        return self.unfold(t) if isinstance(t, DefConst) else t

    def names(self) -> Iterator[str]:
        return iter(self._defs)

    def items(self):
        return self._defs.items()

    def __contains__(self, name: str) -> bool:
        return name in self._defs

    def __eq__(self, other):
        return isinstance(other, Environment) and self._defs == other._defs


EMPTY_ENV = Environment()

# ---------------------------------------------------------------------------
# Negation (De Morgan dual)

def neg(f: Formula) -> Formula:
    if isinstance(f, Lit):
        return Lit(not f.positive, f.pred, f.args)
    if isinstance(f, SatAtom):
        return SatAtom(not f.positive, f.arity, f.mfree, f.abstraction, f.args)
    if isinstance(f, TruthAtom):
        return TruthAtom(not f.positive, f.arg)
    if isinstance(f, BINARY):
        return _DUAL_BIN[type(f)](neg(f.left), neg(f.right))
    if isinstance(f, QUANTIFIERS):
        return _DUAL_Q[type(f)](f.var, neg(f.body))
    if isinstance(f, UNARY):
        return _DUAL_UN[type(f)](neg(f.body))
    raise IllFormedError(f"not a formula: {f!r}")


def is_atom(f: Formula) -> bool:
    return isinstance(f, ATOMS)


def dual_atoms(a: Formula, b: Formula) -> bool:
    """True when a and b are atoms of opposite polarity and equal otherwise."""
    return is_atom(a) and is_atom(b) and alpha_eq(neg(a), b)


# ---------------------------------------------------------------------------
# Free variables

@lru_cache(maxsize=None)
def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Lit):
        return frozenset().union(*[term_free_vars(t) for t in f.args]) if f.args else frozenset()
    if isinstance(f, SatAtom):
        out = term_free_vars(f.abstraction)
        for t in f.args:
            out |= term_free_vars(t)
        return out
    if isinstance(f, TruthAtom):
        return term_free_vars(f.arg)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    if isinstance(f, UNARY):
        return free_vars(f.body)
    raise IllFormedError(f"not a formula: {f!r}")


@lru_cache(maxsize=None)
def term_free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, LambdaName):
        return free_vars(t.body) - set(t.binders)
    return frozenset()


@lru_cache(maxsize=None)
def has_index_param(f: Formula | Term, name: str | None = None) -> bool:
    """Whether `f` mentions an IndexParam (with the given name, if any)."""
    if isinstance(f, IndexParam):
        return name is None or f.name == name
    for child in _children(f):
        if has_index_param(child, name):
            return True
    return False


def _children(x: Formula | Term):
    if isinstance(x, Lit):
        return x.args
    if isinstance(x, SatAtom):
        return (x.abstraction, *x.args)
    if isinstance(x, TruthAtom):
        return (x.arg,)
    if isinstance(x, BINARY):
        return (x.left, x.right)
    if isinstance(x, QUANTIFIERS) or isinstance(x, UNARY):
        return (x.body,)
    if isinstance(x, LambdaName):
        return (x.body,)
    return ()


# ---------------------------------------------------------------------------
# Substitution (capture-avoiding)

_fresh_counter = itertools.count()


def fresh_var(avoid: frozenset[str] | set[str], stem: str = "z") -> str:
    base = stem.rstrip("0123456789") or "z"
    for i in itertools.count():
        cand = f"{base}{i}"
        if cand not in avoid:
            return cand
    raise AssertionError


def subst(f: Formula, var: str, t: Term) -> Formula:
    """Replace free occurrences of `var` by `t`, renaming binders as needed."""
    if var not in free_vars(f):
        return f
    tfv = term_free_vars(t)
    if isinstance(f, Lit):
        return Lit(f.positive, f.pred, tuple(term_subst(a, var, t) for a in f.args))
    if isinstance(f, SatAtom):
        return SatAtom(f.positive, f.arity, f.mfree,
                       term_subst(f.abstraction, var, t),
                       tuple(term_subst(a, var, t) for a in f.args))
    if isinstance(f, TruthAtom):
        return TruthAtom(f.positive, term_subst(f.arg, var, t))
    if isinstance(f, BINARY):
        return type(f)(subst(f.left, var, t), subst(f.right, var, t))
    if isinstance(f, QUANTIFIERS):
        if f.var == var:
            return f
        if f.var in tfv:
            newv = fresh_var(free_vars(f.body) | tfv | {var}, f.var)
            body = subst(f.body, f.var, Var(newv))
            return type(f)(newv, subst(body, var, t))
        return type(f)(f.var, subst(f.body, var, t))
    if isinstance(f, UNARY):
        return type(f)(subst(f.body, var, t))
    raise IllFormedError(f"not a formula: {f!r}")


def term_subst(x: Term, var: str, t: Term) -> Term:
    if isinstance(x, Var):
        return t if x.name == var else x
    if isinstance(x, LambdaName):
        if var in x.binders or var not in free_vars(x.body):
            return x
        tfv = term_free_vars(t)
        binders = list(x.binders)
        body = x.body
        if tfv & set(binders):
            for i, b in enumerate(binders):
                if b in tfv:
                    newb = fresh_var(free_vars(body) | tfv | set(binders) | {var}, b)
                    body = subst(body, b, Var(newb))
                    binders[i] = newb
        return LambdaName(tuple(binders), subst(body, var, t))
    return x


def subst_many(f: Formula, pairs: list[tuple[str, Term]]) -> Formula:
    """Simultaneous substitution via staging through fresh intermediate names."""
    if not pairs:
        return f
    avoid = set(free_vars(f))
    for v, t in pairs:
        avoid |= term_free_vars(t)
        avoid.add(v)
    temps = []
    for v, _ in pairs:
        tmp = fresh_var(avoid, "subst_tmp")
        avoid.add(tmp)
        temps.append(tmp)
    for (v, _), tmp in zip(pairs, temps):
        f = subst(f, v, Var(tmp))
    for (_, t), tmp in zip(pairs, temps):
        f = subst(f, tmp, t)
    return f


def subst_index(x: Formula | Term, name: str, t: Term):
    """Replace IndexParam(name) by `t` everywhere (no binding to respect)."""
    if isinstance(x, IndexParam):
        return t if x.name == name else x
    if isinstance(x, Lit):
        return Lit(x.positive, x.pred, tuple(subst_index(a, name, t) for a in x.args))
    if isinstance(x, SatAtom):
        return SatAtom(x.positive, x.arity, x.mfree,
                       subst_index(x.abstraction, name, t),
                       tuple(subst_index(a, name, t) for a in x.args))
    if isinstance(x, TruthAtom):
        return TruthAtom(x.positive, subst_index(x.arg, name, t))
    if isinstance(x, BINARY):
        return type(x)(subst_index(x.left, name, t), subst_index(x.right, name, t))
    if isinstance(x, QUANTIFIERS):
        return type(x)(x.var, subst_index(x.body, name, t))
    if isinstance(x, UNARY):
        return type(x)(subst_index(x.body, name, t))
    if isinstance(x, LambdaName):
        return LambdaName(x.binders, subst_index(x.body, name, t))
    return x


def rename_free_var(f: Formula, old: str, new: str) -> Formula:
    return subst(f, old, Var(new))


# ---------------------------------------------------------------------------
# Alpha equivalence via canonical renaming of bound variables

_CANON_STEM = "β"  # bound variables renamed to β0, β1, ... positionally


@lru_cache(maxsize=None)
def alpha_key(f: Formula) -> Formula:
    """Canonical representative of the alpha-class of `f` (no unfolding)."""
    return _canon(f, {}, [0])


def _canon(f: Formula, ren: dict[str, str], counter: list[int]) -> Formula:
    if isinstance(f, Lit):
        return Lit(f.positive, f.pred, tuple(_canon_term(t, ren, counter) for t in f.args))
    if isinstance(f, SatAtom):
        return SatAtom(f.positive, f.arity, f.mfree,
                       _canon_term(f.abstraction, ren, counter),
                       tuple(_canon_term(t, ren, counter) for t in f.args))
    if isinstance(f, TruthAtom):
        return TruthAtom(f.positive, _canon_term(f.arg, ren, counter))
    if isinstance(f, BINARY):
        return type(f)(_canon(f.left, ren, counter), _canon(f.right, ren, counter))
    if isinstance(f, QUANTIFIERS):
        name = f"{_CANON_STEM}{counter[0]}"
        counter[0] += 1
        inner = dict(ren)
        inner[f.var] = name
        return type(f)(name, _canon(f.body, inner, counter))
    if isinstance(f, UNARY):
        return type(f)(_canon(f.body, ren, counter))
    raise IllFormedError(f"not a formula: {f!r}")


def _canon_term(t: Term, ren: dict[str, str], counter: list[int]) -> Term:
    if isinstance(t, Var):
        return Var(ren.get(t.name, t.name))
    if isinstance(t, LambdaName):
        inner = dict(ren)
        names = []
        for b in t.binders:
            name = f"{_CANON_STEM}{counter[0]}"
            counter[0] += 1
            inner[b] = name
            names.append(name)
        return LambdaName(tuple(names), _canon(t.body, inner, counter))
    return t


def alpha_eq(a: Formula, b: Formula) -> bool:
    return a == b or alpha_key(a) == alpha_key(b)


# ---------------------------------------------------------------------------
# Convenience constructors

def lit(name: str, *args: Term) -> Lit:
    return Lit(True, name, tuple(args))


def nlit(name: str, *args: Term) -> Lit:
    return Lit(False, name, tuple(args))


def truth(t: Term) -> TruthAtom:
    return TruthAtom(True, t)


def ntruth(t: Term) -> TruthAtom:
    return TruthAtom(False, t)


def quote(f: Formula, binder: str = "v0") -> LambdaName:
    """The canonical name of a sentence: lambda v0 . A with v0 vacuous."""
    return LambdaName((binder,), f)


def enum(i: int) -> EnumTerm:
    return EnumTerm(i)
