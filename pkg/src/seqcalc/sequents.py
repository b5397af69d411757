"""Finitely presented, possibly infinite multisets of formulas.

A multiset is kept in a canonical form with two layers:

* ``points``: formulas with an explicit multiplicity in N u {omega};
* ``families``: uniform blocks ``[T(t_i) | i in N+]`` given by a template
  with one index parameter, an eventual per-index multiplicity, and finitely
  many exceptional indices.  Index sets are always cofinite.

Formula identity inside multisets is alpha-equivalence without definitional
unfolding.  ``omega - k = omega`` and ``omega - omega = 0`` (block-consuming
removal only); canonicalization is idempotent and union/diff work pointwise
on multiplicities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Union

from .errors import IllFormedError
from .syntax import (
    EnumTerm, Formula, IndexParam, alpha_eq, alpha_key, has_index_param,
    subst_index,
)

OMEGA = math.inf
Count = Union[int, float]

PARAM = "·"  # canonical family parameter; templates use IndexParam(PARAM)


def is_omega(c: Count) -> bool:
    return c == OMEGA


def add_count(a: Count, b: Count) -> Count:
    return OMEGA if (is_omega(a) or is_omega(b)) else a + b


def sub_count(a: Count, b: Count) -> Count:
    """a - b with omega - finite = omega and omega - omega = 0."""
    if is_omega(a):
        return 0 if is_omega(b) else OMEGA
    if is_omega(b) or b > a:
        raise IllFormedError(f"cannot remove {b} copies from {a}")
    return a - b


def count_str(c: Count) -> str:
    return "w" if is_omega(c) else str(int(c))


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Family:
    """Uniform block: template instantiated at every index i >= 1.

    ``exceptions`` lists the finitely many indices whose multiplicity
    differs from ``eventual`` (possibly 0, i.e. excluded).
    """

    template: Formula
    eventual: Count = 1
    exceptions: tuple[tuple[int, Count], ...] = ()

    def instantiate(self, i: int) -> Formula:
        if self.count_at(i) == 0:
            raise IllFormedError(f"index {i} is excluded from the family")
        return subst_index(self.template, PARAM, EnumTerm(i))

    def count_at(self, i: int) -> Count:
        for j, c in self.exceptions:
            if j == i:
                return c
        return self.eventual

    def excluded_indices(self) -> tuple[int, ...]:
        return tuple(i for i, c in self.exceptions if c == 0)


def family(template: Formula, param: str = PARAM, *, eventual: Count = 1,
           exceptions: Iterable[tuple[int, Count]] = ()) -> Family:
    """Build a family, renaming the index parameter to the canonical one."""
    if param != PARAM:
        template = subst_index(template, param, IndexParam(PARAM))
    if not has_index_param(template, PARAM):
        raise IllFormedError("family template does not use its index parameter")
    return Family(alpha_key(template), eventual, tuple(sorted(exceptions)))


def _match_instance(template: Formula, f: Formula) -> Optional[int]:
    """The unique i with template[i] alpha-equal to f, if any."""
    path = _param_path(template)
    node = alpha_key(f)
    for step in path:
        try:
            node = _child_at(node, step)
        except (AttributeError, IndexError, TypeError):
            return None
    if not isinstance(node, EnumTerm):
        return None
    i = node.index
    if alpha_key(subst_index(template, PARAM, EnumTerm(i))) == alpha_key(f):
        return i
    return None


@lru_cache(maxsize=None)
def _param_path(template: Formula) -> tuple:
    """Field path from the template root to one occurrence of the parameter."""
    found = _search_param(template, ())
    if found is None:
        raise IllFormedError("template has no index parameter")
    return found


def _search_param(x, path):
    if isinstance(x, IndexParam) and x.name == PARAM:
        return path
    for name, child in _branches(x):
        hit = _search_param(child, path + (name,))
        if hit is not None:
            return hit
    return None


def _branches(x):
    from . import syntax as s
    if isinstance(x, s.Lit):
        return [(("args", i), a) for i, a in enumerate(x.args)]
    if isinstance(x, s.SatAtom):
        return [(("abstraction",), x.abstraction)] + [(("args", i), a) for i, a in enumerate(x.args)]
    if isinstance(x, s.TruthAtom):
        return [(("arg",), x.arg)]
    if isinstance(x, s.BINARY):
        return [(("left",), x.left), (("right",), x.right)]
    if isinstance(x, s.QUANTIFIERS) or isinstance(x, s.UNARY):
        return [(("body",), x.body)]
    if isinstance(x, s.LambdaName):
        return [(("body",), x.body)]
    return []


def _child_at(x, step):
    name = step[0]
    child = getattr(x, name)
    if len(step) == 2:
        return child[step[1]]
    return child


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OmegaMultiset:
    """Canonical possibly-infinite multiset; use `mset` to construct."""

    points: tuple[tuple[Formula, Count], ...] = ()
    families: tuple[Family, ...] = ()

    # -- queries ----------------------------------------------------------
    def multiplicity(self, f: Formula) -> Count:
        key = alpha_key(f)
        total: Count = 0
        for g, c in self.points:
            if g == key:
                total = add_count(total, c)
        for fam in self.families:
            i = _match_instance(fam.template, key)
            if i is not None:
                total = add_count(total, fam.count_at(i))
            elif _symbolic_member(fam.template, key):
                total = add_count(total, fam.eventual)
        return total

    def is_empty(self) -> bool:
        return not self.points and not self.families

    def is_finite(self) -> bool:
        return not self.families and all(not is_omega(c) for _, c in self.points)

    def total_finite_size(self) -> int:
        if not self.is_finite():
            raise IllFormedError("multiset is not finite")
        return sum(int(c) for _, c in self.points)

    def point_formulas(self) -> Iterator[Formula]:
        for f, _ in self.points:
            yield f

    def support(self) -> Iterator[Formula]:
        """One representative per point class plus each family template."""
        for f, _ in self.points:
            yield f
        for fam in self.families:
            yield fam.template

    def find_family(self, template: Formula) -> Optional[Family]:
        key = alpha_key(template)
        for fam in self.families:
            if fam.template == key:
                return fam
        return None

    # -- arithmetic --------------------------------------------------------
    def union(self, other: "OmegaMultiset") -> "OmegaMultiset":
        return mset(list(self.points) + list(other.points),
                    list(self.families) + list(other.families))

    def add(self, f: Formula, k: Count = 1) -> "OmegaMultiset":
        return mset(list(self.points) + [(f, k)], self.families)

    def remove(self, f: Formula, k: Count = 1) -> "OmegaMultiset":
        """Remove k copies of f; k may be omega (whole-block removal)."""
        if k == 0:
            return self
        key = alpha_key(f)
        have = self.multiplicity(key)
        if (is_omega(k) and not is_omega(have)) or (not is_omega(k) and k > have):
            raise IllFormedError(
                f"insufficient multiplicity: removing {count_str(k)} of a formula "
                f"with multiplicity {count_str(have)}")
        points = []
        remaining = k
        for g, c in self.points:
            if remaining != 0 and g == key:
                take = c if is_omega(remaining) else min(c, remaining)
                remaining = 0 if (is_omega(remaining) and is_omega(c)) else sub_count_clip(remaining, take, c)
                left = sub_count(c, take)
                if left:
                    points.append((g, left))
            else:
                points.append((g, c))
        families = list(self.families)
        if remaining:
            for pos, fam in enumerate(families):
                i = _match_instance(fam.template, key)
                if i is None:
                    continue
                c = fam.count_at(i)
                take = c if is_omega(remaining) else min(c, remaining)
                if take == 0:
                    continue
                remaining = 0 if is_omega(remaining) and is_omega(c) else sub_count_clip(remaining, take, c)
                exc = dict(fam.exceptions)
                exc[i] = sub_count(c, take)
                families[pos] = Family(fam.template, fam.eventual, tuple(sorted(exc.items())))
                if remaining == 0:
                    break
        if remaining:
            raise IllFormedError("removal bookkeeping failed")  # pragma: no cover
        return mset(points, families)

    def diff(self, other: "OmegaMultiset") -> "OmegaMultiset":
        """Pointwise difference; requires other <= self per class and index."""
        out = self
        for f, c in other.points:
            out = out.remove(f, c)
        for fam in other.families:
            out = _remove_family(out, fam)
        return out

    def contains(self, other: "OmegaMultiset") -> bool:
        try:
            self.diff(other)
            return True
        except IllFormedError:
            return False

    def scale_omega(self) -> "OmegaMultiset":
        """Every nonzero multiplicity becomes omega (union of omega copies)."""
        points = [(f, OMEGA) for f, _ in self.points]
        families = [Family(fam.template, OMEGA,
                           tuple((i, 0) for i, c in fam.exceptions if c == 0))
                    for fam in self.families]
        return mset(points, families)

    def __str__(self):
        from .sexpr import sequent_str
        return sequent_str(self)


def sub_count_clip(remaining: Count, take: Count, available: Count) -> Count:
    if is_omega(remaining):
        return OMEGA  # removing omega copies: keep consuming whole classes
    return remaining - take


def _remove_family(m: OmegaMultiset, fam: Family) -> OmegaMultiset:
    mine = m.find_family(fam.template)
    if mine is None:
        # fall back to removing each exceptional instance plus failing on the rest
        raise IllFormedError("no matching family to remove from")
    indices = {i for i, _ in mine.exceptions} | {i for i, _ in fam.exceptions}
    if is_omega(fam.eventual) and not is_omega(mine.eventual):
        raise IllFormedError("family removal exceeds multiplicity")
    new_eventual = sub_count(mine.eventual, fam.eventual)
    exc = []
    for i in sorted(indices):
        left = sub_count(mine.count_at(i), fam.count_at(i))
        if left != new_eventual:
            exc.append((i, left))
    rest = [f for f in m.families if f.template != mine.template]
    if new_eventual == 0:
        points = list(m.points)
        for i, c in exc:
            if c:
                points.append((subst_index(mine.template, PARAM, EnumTerm(i)), c))
        return mset(points, rest)
    return mset(list(m.points), rest + [Family(mine.template, new_eventual, tuple(exc))])


def _symbolic_member(template: Formula, key: Formula) -> bool:
    """Whether `key` is the template instantiated at some opaque index."""
    if not has_index_param(key):
        return False
    path = _param_path(template)
    node = key
    for step in path:
        try:
            node = _child_at(node, step)
        except (AttributeError, IndexError, TypeError):
            return False
    if not isinstance(node, IndexParam):
        return False
    return alpha_key(subst_index(template, PARAM, node)) == key


# ---------------------------------------------------------------------------
# Canonicalization

def _sort_key(f: Formula):
    return repr(f)


def mset(points: Iterable[tuple[Formula, Count] | Formula] = (),
         families: Iterable[Family] = ()) -> OmegaMultiset:
    """Canonicalize: merge classes, fold instances into families, sort."""
    acc: dict[Formula, Count] = {}
    for item in points:
        f, c = item if isinstance(item, tuple) else (item, 1)
        if c == 0:
            continue
        if c != OMEGA and (not isinstance(c, int) or c < 0):
            raise IllFormedError(f"bad multiplicity {c!r}")
        key = alpha_key(f)
        acc[key] = add_count(acc.get(key, 0), c)

    fam_acc: dict[Formula, dict] = {}
    for fam in families:
        key = alpha_key(fam.template)
        if not has_index_param(key, PARAM):
            raise IllFormedError("family template lost its parameter")
        slot = fam_acc.setdefault(key, {"eventual": 0, "exc": {}})
        indices = {i for i, _ in fam.exceptions} | set(slot["exc"])
        for i in indices:
            prev = slot["exc"].get(i, slot["eventual"])
            slot["exc"][i] = add_count(prev, fam.count_at(i))
        slot["eventual"] = add_count(slot["eventual"], fam.eventual)

    # fold point instances of a family into its exceptions
    if fam_acc:
        for key in list(acc):
            for tkey, slot in fam_acc.items():
                i = _match_instance(tkey, key)
                if i is not None:
                    slot["exc"][i] = add_count(slot["exc"].get(i, slot["eventual"]), acc.pop(key))
                    break

    out_fams = []
    for tkey, slot in fam_acc.items():
        ev = slot["eventual"]
        exc = {i: c for i, c in slot["exc"].items() if c != ev}
        if ev == 0:
            for i, c in exc.items():
                if c:
                    inst = alpha_key(subst_index(tkey, PARAM, EnumTerm(i)))
                    acc[inst] = add_count(acc.get(inst, 0), c)
            continue
        out_fams.append(Family(tkey, ev, tuple(sorted(exc.items()))))

    pts = tuple(sorted(((f, c) for f, c in acc.items() if c != 0),
                       key=lambda it: _sort_key(it[0])))
    fams = tuple(sorted(out_fams, key=lambda fam: _sort_key(fam.template)))
    return OmegaMultiset(pts, fams)


def seq(*formulas: Formula | tuple[Formula, Count],
        families: Iterable[Family] = ()) -> OmegaMultiset:
    """Convenience sequent constructor (a sequent is its multiset body)."""
    return mset(list(formulas), families)


EMPTY = OmegaMultiset()

# The one-sided sequent "|- Gamma" is represented by its body.
Sequent = OmegaMultiset


def family_union(m: OmegaMultiset, param: str, excluded: Iterable[int]) -> OmegaMultiset:
    """The union over all admissible indices i of m[param := t_i].

    Points mentioning the parameter become families; parameter-free content
    is multiplied by omega.  Families inside m must not mention the
    parameter (no two-dimensional blocks).
    """
    excl = tuple(sorted(set(excluded)))
    points: list[tuple[Formula, Count]] = []
    fams: list[Family] = []
    for f, c in m.points:
        if has_index_param(f, param):
            tpl = subst_index(f, param, IndexParam(PARAM))
            if has_index_param(tpl, param):  # pragma: no cover
                raise IllFormedError("nested parameter confusion")
            fams.append(Family(alpha_key(tpl), c, tuple((i, 0) for i in excl)))
        else:
            points.append((f, OMEGA))
    for fam in m.families:
        if has_index_param(fam.template, param):
            raise IllFormedError("two-dimensional family blocks are unsupported")
        fams.append(Family(fam.template, OMEGA,
                           tuple((i, 0) for i, c in fam.exceptions if c == 0)))
    return mset(points, fams)


def instantiate_multiset(m: OmegaMultiset, param: str, i: int) -> OmegaMultiset:
    points = [(subst_index(f, param, EnumTerm(i)), c) for f, c in m.points]
    for fam in m.families:
        if has_index_param(fam.template, param):
            raise IllFormedError("two-dimensional family blocks are unsupported")
    return mset(points, m.families)


def instance_block(body: Formula, var: str) -> OmegaMultiset:
    """The multiset [A(t_i/x) | i >= 1] with one copy per index."""
    from .syntax import subst as fsubst
    inst = fsubst(body, var, IndexParam(PARAM))
    if has_index_param(inst, PARAM):
        return mset([], [Family(alpha_key(inst), 1, ())])
    return mset([(inst, OMEGA)])
