"""Naive enumeration oracle for propositional affine-logic provability.

Implemented independently of the package's backward search: a weight-
ordered dynamic program over every sub-multiset decomposition.  Kept
deliberately simple and slow; it is the reference the real decision
procedure is compared against.
"""
from itertools import product

from seqcalc.sequents import OmegaMultiset, mset
from seqcalc.syntax import Lit, Par, Plus, Tensor, With, neg


def _size(f) -> int:
    if isinstance(f, Lit):
        return 1
    return 1 + _size(f.left) + _size(f.right)


def _items(m: OmegaMultiset):
    out = []
    for f, c in m.points:
        out.extend([f] * int(c))
    return tuple(sorted(out, key=repr))


def _splits(items):
    seen = set()
    for bits in product((0, 1), repeat=len(items)):
        left = tuple(f for f, b in zip(items, bits) if b)
        right = tuple(f for f, b in zip(items, bits) if not b)
        if (left, right) in seen:
            continue
        seen.add((left, right))
        yield left, right


def oracle_provable_al(s: OmegaMultiset) -> bool:
    memo: dict = {}

    def prov(items) -> bool:
        if items in memo:
            return memo[items]
        memo[items] = False
        result = False
        bag = list(items)
        for f in bag:
            if isinstance(f, Lit) and neg(f) in bag:
                result = True
                break
        if not result:
            for i, f in enumerate(items):
                rest = items[:i] + items[i + 1:]
                if isinstance(f, Par):
                    if prov(_norm(rest + (f.left, f.right))):
                        result = True
                        break
                elif isinstance(f, Plus):
                    if prov(_norm(rest + (f.left,))) or \
                            prov(_norm(rest + (f.right,))):
                        result = True
                        break
                elif isinstance(f, With):
                    if prov(_norm(rest + (f.left,))) and \
                            prov(_norm(rest + (f.right,))):
                        result = True
                        break
                elif isinstance(f, Tensor):
                    for left, right in _splits(rest):
                        if prov(_norm(left + (f.left,))) and \
                                prov(_norm(right + (f.right,))):
                            result = True
                            break
                    if result:
                        break
        memo[items] = result
        return result

    return prov(_items(s))


def _norm(items):
    return tuple(sorted(items, key=repr))
