"""Formula depth, proof heights and multiset degree.

Two height notions coexist: the nonstandard finitary height used by the
reduction lemma (axioms count 1, tensor adds the premise heights, the
additive conjunction takes max + 1, every other rule adds 1), and an
ordinal height for well-founded infinitely branching proofs (sup of
premise heights, plus one).  Template premises are measured once with an
opaque index, so family heights are index-independent by construction.
"""
from __future__ import annotations

from .errors import MeasureError
from .ordinals import Ordinal, ZERO, fin, hessenberg, succ, sup
from .sequents import OmegaMultiset
from .syntax import ATOMS, BINARY, Formula, QUANTIFIERS, UNARY


def depth(f: Formula) -> int:
    """Number of connectives and quantifiers; every atom has depth 0."""
    if isinstance(f, ATOMS):
        return 0
    if isinstance(f, BINARY):
        return 1 + depth(f.left) + depth(f.right)
    if isinstance(f, (*QUANTIFIERS, *UNARY)):
        return 1 + depth(f.body)
    raise MeasureError(f"not a formula: {f!r}")


def degree(m: OmegaMultiset) -> Ordinal:
    """sup of member depths, plus one; uniform blocks contribute their
    template depth, so instance families have finite degree."""
    best = 0
    for f, _ in m.points:
        best = max(best, depth(f))
    for fam in m.families:
        best = max(best, depth(fam.template))
    if m.is_empty():
        return fin(1)
    return fin(best + 1)


_UTS_SUM = "tensor"
_UTS_MAX = "with"


def uts_height(p) -> int:
    """The nonstandard height driving the finitary reduction lemma."""
    if p.templates:
        raise MeasureError("uts height is defined for finitary proofs only")
    name = p.rule.name
    if name == "in":
        return 1
    heights = [uts_height(q) for q in p.premises]
    if not heights:
        raise MeasureError(f"rule {name} has no premises and is not an axiom")
    if name == _UTS_SUM:
        return heights[0] + heights[1]
    if name == _UTS_MAX:
        return max(heights) + 1
    return heights[0] + 1 if len(heights) == 1 else max(heights) + 1


def omega_height(p) -> Ordinal:
    """Ordinal height: strictly monotone along every edge, templates
    measured once symbolically."""
    parts = [omega_height(q) for q in p.premises]
    parts.extend(omega_height(t.body) for t in p.templates)
    return succ(sup(parts))


def premise_heights_sum(p) -> Ordinal:
    out = ZERO
    for q in p.premises:
        out = hessenberg(out, omega_height(q))
    for t in p.templates:
        out = hessenberg(out, omega_height(t.body))
    return out
