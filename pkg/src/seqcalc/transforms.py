"""Admissible-rule constructors and both cut-elimination engines.

Everything here is pure tree rewriting: inputs are never mutated, outputs
re-check in their target calculus (the test suite enforces this on the
whole corpus).  The infinitary eliminator asserts at run time that its
lexicographic measure (cut-multiset degree, Hessenberg sum of premise
heights) strictly decreases at every recursive call.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .builders import (
    ax, cut_node, cutinf_node, exists_node, forall_node, fresh_param,
    par_node, plus_node, quest_node, questc_node, sat_node, tensor_node,
    truth_node, vexists_node, vforall_node, with_node,
)
from .calculi import (
    BlockSpec, CalculusId, LL, PremiseTemplate, Proof, RuleInstance,
    is_cut_free, phi_multiset,
)
from .errors import TransformError
from .measures import degree, omega_height, uts_height
from .ordinals import Ordinal, ZERO, hessenberg, hessenberg_all
from .sequents import (
    EMPTY, Family, OMEGA, PARAM, OmegaMultiset, family_union, instance_block,
    is_omega, mset, seq, sub_count,
)
from .syntax import (
    Environment, EMPTY_ENV, EnumTerm, Exists, Forall, Formula, IndexParam,
    Lit, Par, Plus, SatAtom, Tensor, TruthAtom, Var, With, alpha_eq,
    alpha_key, free_vars, fresh_var, has_index_param, is_atom, neg, subst,
    subst_index, term_free_vars,
)

sys.setrecursionlimit(40000)

_CONTEXT_SHARING = {"with", "and"}
_SLACK_RULES = {"nec", "bang"}


# ---------------------------------------------------------------------------
# Structural helpers

def instantiate_proof(p: Proof, param: str, term) -> Proof:
    """Substitute an index parameter throughout a proof."""
    def msub(m: OmegaMultiset) -> OmegaMultiset:
        return mset([(subst_index(f, param, term), c) for f, c in m.points],
                    m.families)
    def fsub(f):
        return subst_index(f, param, term)
    def tsub(t):
        return subst_index(t, param, term) if t is not None else None
    def go(q: Proof) -> Proof:
        r = q.rule
        rule = RuleInstance(
            r.name,
            tuple(fsub(f) for f in r.principal),
            tsub(r.term), r.var,
            tuple(fsub(f) for f in r.context) if r.context is not None else None,
            r.indices,
            tuple(fsub(f) for f in r.phi_points),
            tuple(BlockSpec(subst_index(b.template, param, term), b.excluded)
                  for b in r.phi_blocks),
            r.note)
        temps = tuple(PremiseTemplate(t.param, t.excluded, go(t.body))
                      for t in q.templates)
        return Proof(msub(q.conclusion), rule,
                     tuple(go(x) for x in q.premises), temps)
    return go(p)


def instantiate_template(t: PremiseTemplate, i: int) -> Proof:
    if i in t.excluded:
        raise TransformError(f"index {i} is excluded from the template")
    return instantiate_proof(t.body, t.param, EnumTerm(i))


def subst_proof(p: Proof, var: str, term) -> Proof:
    """Substitute a term for a free variable throughout a proof."""
    def touched(m: OmegaMultiset) -> bool:
        return any(var in free_vars(f) for f in m.support())
    def msub(m):
        return mset([(subst(f, var, term), c) for f, c in m.points],
                    tuple(Family(subst(fam.template, var, term), fam.eventual,
                                 fam.exceptions) for fam in m.families))
    def go(q: Proof) -> Proof:
        if not touched(q.conclusion) and all(
                not touched(x.conclusion) for x in q.premises) and all(
                not touched(t.body.conclusion) for t in q.templates):
            return q
        r = q.rule
        rule = RuleInstance(
            r.name,
            tuple(subst(f, var, term) for f in r.principal),
            r.term, r.var,
            tuple(subst(f, var, term) for f in r.context)
            if r.context is not None else None,
            r.indices,
            tuple(subst(f, var, term) for f in r.phi_points),
            tuple(BlockSpec(subst(b.template, var, term), b.excluded)
                  for b in r.phi_blocks),
            r.note)
        temps = tuple(PremiseTemplate(t.param, t.excluded, go(t.body))
                      for t in q.templates)
        return Proof(msub(q.conclusion), rule,
                     tuple(go(x) for x in q.premises), temps)
    return go(p)


def rename_eigenvariable(p: Proof, fresh: str) -> Proof:
    """Rename the eigenvariable of a finitary-forall node."""
    if p.rule.var is None:
        raise TransformError("node has no eigenvariable")
    prem = subst_proof(p.premises[0], p.rule.var, Var(fresh))
    return Proof(p.conclusion, replace(p.rule, var=fresh), (prem,), p.templates)


def _min_free_index(excluded: Iterable[int]) -> int:
    used = set(excluded)
    i = 1
    while i in used:
        i += 1
    return i


def _explicit_pairs(p: Proof) -> list[tuple[int, Proof]]:
    return list(zip(p.rule.indices, p.premises))


# ---------------------------------------------------------------------------
# Weakening (height-preserving admissible)

def weaken(p: Proof, extra: OmegaMultiset | Sequence[Formula],
           calc: CalculusId | None = None,
           env: Environment = EMPTY_ENV) -> Proof:
    """Proof of `conclusion u extra`; omega_height is unchanged."""
    if calc is not None and calc.kind == "LL":
        raise TransformError("weakening is not admissible in LL")
    if not isinstance(extra, OmegaMultiset):
        extra = mset(list(extra))
    if extra.is_empty():
        return p
    return _weaken(p, extra, env)


def _weaken(p: Proof, extra: OmegaMultiset, env: Environment) -> Proof:
    name = p.rule.name
    concl = p.conclusion.union(extra)
    if name == "in":
        return Proof(concl, p.rule)
    if name in _SLACK_RULES:
        rule = p.rule
        if name == "nec":
            if not extra.is_finite():
                raise TransformError("nec carries only finite slack")
            more = []
            for f, c in extra.points:
                more.extend([f] * int(c))
            rule = replace(rule, context=(rule.context or ()) + tuple(more))
        return Proof(concl, rule, p.premises, p.templates)
    if name in _CONTEXT_SHARING:
        kids = tuple(_weaken(q, extra, env) for q in p.premises)
        return Proof(concl, p.rule, kids, p.templates)
    if name in {"forall", "forallcl"}:
        y = p.rule.var
        if any(y in free_vars(f) for f in extra.support()):
            p = rename_eigenvariable(
                p, fresh_var(set().union(*[free_vars(f) for f in extra.support()])
                             | {y}, y))
        return Proof(concl, p.rule, (_weaken(p.premises[0], extra, env),),
                     p.templates)
    if name in {"vforall", "forallinfcl"}:
        return _weaken_omega(p, extra, env)
    if p.premises:
        kids = (_weaken(p.premises[0], extra, env),) + p.premises[1:]
        return Proof(concl, p.rule, kids, p.templates)
    raise TransformError(f"cannot weaken a {name} node")


def _weaken_omega(p: Proof, extra: OmegaMultiset, env: Environment) -> Proof:
    f = p.rule.principal[0]
    if p.rule.name == "forallinfcl":
        # classical infinitary rule shares its context with every premise
        kids = tuple(_weaken(q, extra, env) for q in p.premises)
        t = p.templates[0]
        temps = (PremiseTemplate(t.param, t.excluded, _weaken(t.body, extra, env)),)
        return Proof(p.conclusion.union(extra), p.rule, kids, temps)
    # multiplicative omega-forall: route the extra into one fresh instance
    t = p.templates[0]
    if any(has_index_param(g, t.param) for g in extra.support()):
        raise TransformError("weakening formulas capture a template parameter")
    k = _min_free_index(t.excluded)
    inst = _weaken(instantiate_template(t, k), extra, env)
    tmpl = PremiseTemplate(t.param, t.excluded + (k,), t.body)
    explicit = _explicit_pairs(p) + [(k, inst)]
    return vforall_node(f, tmpl, explicit)


# ---------------------------------------------------------------------------
# Exists-inversion (height-preserving) and infinitary contraction

def invert_exists(p: Proof, f: Exists, env: Environment = EMPTY_ENV) -> Proof:
    """From |- G, exists x A derive |- G, A(t1/x), A(t2/x), ...;
    omega_height never increases."""
    if not isinstance(f, Exists):
        raise TransformError("inversion needs an existential formula")
    if p.conclusion.multiplicity(f) < 1:
        raise TransformError(f"{f} does not occur in the conclusion")
    return _invert(p, f, 1, env)


def invert_exists_all(p: Proof, f: Exists, env: Environment = EMPTY_ENV) -> Proof:
    k = p.conclusion.multiplicity(f)
    return _invert(p, f, k, env)


def _inv_target(m: OmegaMultiset, f: Exists, k) -> OmegaMultiset:
    block = instance_block(f.body, f.var)
    out = m.remove(f, k)
    if is_omega(k):
        return out.union(block.scale_omega())
    for _ in range(int(k)):
        out = out.union(block)
    return out


def _invert(p: Proof, f: Exists, k, env: Environment) -> Proof:
    if k == 0:
        return p
    key = alpha_key(f)
    name = p.rule.name
    if name in {"cut", "cutinf"}:
        raise TransformError("inversion expects cut-free input")
    if name == "in":
        return ax(_inv_target(p.conclusion, f, k))
    principal = p.rule.principal[0] if p.rule.principal else None
    if name == "vexists" and principal is not None and alpha_key(principal) == key:
        return _invert(p.premises[0], f, sub_count(k, 1), env)
    if name == "exists" and principal is not None and alpha_key(principal) == key:
        t = p.rule.term
        if isinstance(t, Var):
            raise TransformError("cannot invert an exists with a variable witness")
        prem = _invert(p.premises[0], f, sub_count(k, 1), env)
        missing = _inv_target(p.conclusion, f, k).diff(prem.conclusion)
        return weaken(prem, missing, env=env)
    if name in {"vforall", "forallinfcl"}:
        return _invert_omega(p, f, k, env)
    if name in _CONTEXT_SHARING:
        kids = tuple(_invert(q, f, k, env) for q in p.premises)
        return _reassemble(p, kids, p.templates, env)
    if name in {"tensor", "boxtensor"}:
        head = p.rule.principal[0]
        kids = []
        remaining = k
        for q, factor in zip(p.premises, (head.left, head.right)):
            used = 1 if alpha_eq(factor, f) else 0
            avail = sub_count_guard(q.conclusion.multiplicity(f), used)
            take = avail if is_omega(k) else (
                avail if (not is_omega(avail) and avail <= remaining) else remaining)
            kids.append(_invert(q, f, take, env))
            remaining = _burn(remaining, take)
        if not is_omega(k) and remaining != 0:
            raise TransformError("lost track of occurrences during inversion")
        return _reassemble(p, tuple(kids), p.templates, env)
    if len(p.premises) == 1:
        # unary rule whose principal is not the inverted formula: every
        # conclusion copy survives from the premise context
        return _reassemble(p, (_invert(p.premises[0], f, k, env),),
                           p.templates, env)
    raise TransformError(f"inversion cannot cross a {name} node")


def sub_count_guard(a, b):
    try:
        return sub_count(a, b)
    except Exception:
        return 0


def _burn(remaining, take):
    if is_omega(remaining):
        return 0 if is_omega(take) else OMEGA
    return remaining - take


def _invert_omega(p: Proof, f: Exists, k, env: Environment) -> Proof:
    r = p.rule
    if r.name == "forallinfcl":
        raise TransformError("inversion targets multiplicative omega-rules only")
    head = r.principal[0]
    t = p.templates[0]
    inst_sym = subst(head.body, head.var, IndexParam(t.param))
    ctx_counts = []
    for i, q in zip(r.indices, p.premises):
        inst = subst(head.body, head.var, EnumTerm(i))
        used = 1 if alpha_eq(inst, f) else 0
        ctx_counts.append(sub_count_guard(q.conclusion.multiplicity(f), used))
    t_used = 1 if alpha_eq(inst_sym, f) else 0
    t_count = sub_count_guard(t.body.conclusion.multiplicity(f), t_used)
    if is_omega(k):
        kids = tuple(_invert(q, f, c, env)
                     for q, c in zip(p.premises, ctx_counts))
        body = _invert(t.body, f, t_count, env)
        tmpl = PremiseTemplate(t.param, t.excluded, body)
        explicit = list(zip(r.indices, kids))
        return vforall_node(head, tmpl, explicit)
    kids = list(p.premises)
    remaining = k
    for j, c in enumerate(ctx_counts):
        if remaining == 0:
            break
        take = remaining if is_omega(c) else min(c, remaining)
        if take:
            kids[j] = _invert(kids[j], f, take, env)
            remaining -= take
    explicit = list(zip(r.indices, kids))
    tmpl = PremiseTemplate(t.param, t.excluded, t.body)
    while remaining > 0:
        if t_count == 0:
            raise TransformError("lost track of occurrences during inversion")
        i = _min_free_index(tmpl.excluded)
        take = remaining if is_omega(t_count) else min(t_count, remaining)
        inst = _invert(instantiate_template(tmpl, i), f, take, env)
        explicit.append((i, inst))
        tmpl = PremiseTemplate(tmpl.param, tmpl.excluded + (i,), tmpl.body)
        remaining -= take
    return vforall_node(head, tmpl, explicit)


def _reassemble(p: Proof, premises: tuple[Proof, ...],
                templates: tuple[PremiseTemplate, ...],
                env: Environment) -> Proof:
    """Recompute a node's conclusion from rebuilt children (same rule)."""
    name, r = p.rule.name, p.rule
    f = r.principal[0] if r.principal else None
    if name == "par":
        return par_node(premises[0], f)
    if name == "tensor":
        return tensor_node(premises[0], premises[1], f)
    if name == "plus1":
        return plus_node(premises[0], f, 1)
    if name == "plus2":
        return plus_node(premises[0], f, 2)
    if name in {"with", "and"}:
        return with_node(premises[0], premises[1], f, rule=name)
    if name in {"forall", "forallcl"}:
        return forall_node(premises[0], f, r.var, rule=name)
    if name == "exists":
        return exists_node(premises[0], f, r.term)
    if name == "vexists":
        return vexists_node(premises[0], f)
    if name == "or":
        from .builders import or_node
        return or_node(premises[0], f)
    if name == "vforall":
        return vforall_node(f, templates[0], list(zip(r.indices, premises)))
    if name == "quest":
        return quest_node(premises[0], f)
    if name == "questc":
        return questc_node(premises[0], f)
    if name in {"t", "tbar"}:
        return truth_node(premises[0], f, env)
    if name in {"sat", "satbar"}:
        return sat_node(premises[0], f, env)
    if name == "alias":
        return Proof(premises[0].conclusion, r, premises)
    raise TransformError(f"cannot reassemble a {name} node")


# ---------------------------------------------------------------------------
# Infinitary contraction (exinf) and the vacuous-forall lemma (bang)

def contract_exists_inf(p: Proof, f: Exists,
                        env: Environment = EMPTY_ENV) -> Proof:
    """From |- G, (exists x A)^infty derive |- G, exists x A (x vacuous)."""
    if f.var in free_vars(f.body):
        raise TransformError(
            "infinitary exists-contraction needs a vacuous quantifier")
    if not is_omega(p.conclusion.multiplicity(f)):
        raise TransformError("contraction needs omega copies of the formula")
    inverted = invert_exists_all(p, f, env)
    out = vexists_node(inverted, f)
    # a context copy of A is swallowed when the whole omega class of A is
    # consumed; weakening restores it
    want = p.conclusion.remove(f, OMEGA).add(f)
    missing = _deficit(want, out.conclusion)
    return weaken(out, missing, env=env) if not missing.is_empty() else out


def _deficit(want: OmegaMultiset, have: OmegaMultiset) -> OmegaMultiset:
    """want - have clipped at zero, pointwise (no families)."""
    pts = []
    for f, c in want.points:
        h = have.multiplicity(f)
        if is_omega(c) and not is_omega(h):
            pts.append((f, OMEGA))
        elif not is_omega(c) and not is_omega(h) and h < c:
            pts.append((f, c - h))
    return mset(pts)


def forall_from_single(p: Proof, f: Forall,
                       env: Environment = EMPTY_ENV) -> Proof:
    """From |- Ey G, A derive |- Ey G, forall x A (x vacuous, context
    existentially prefixed with vacuous quantifiers)."""
    if f.var in free_vars(f.body):
        raise TransformError("the introduced quantifier must be vacuous")
    context = p.conclusion.remove(f.body, 1)
    for g in context.support():
        if not (isinstance(g, Exists) and g.var not in free_vars(g.body)):
            raise TransformError(
                "context must consist of vacuously quantified formulas")
    tmpl = PremiseTemplate(fresh_param(), (), p)
    q = vforall_node(f, tmpl, ())
    for g in list(dict.fromkeys(context.point_formulas())):
        q = contract_exists_inf(q, g, env)
    missing = context.union(seq(f)).diff(q.conclusion)
    return weaken(q, missing, env=env)


# ---------------------------------------------------------------------------
# Occurrence tracking inside cut-free IK proofs

def _locate_context_copy(p: Proof, f: Formula):
    """Which child holds a surviving copy of f: ('prem', i) or
    ('template', i) or None (p is an axiom)."""
    name, r = p.rule.name, p.rule
    key = alpha_key(f)
    if name == "in":
        return None
    if name in {"par", "vexists"}:
        return ("prem", 0)
    if name == "tensor":
        head = r.principal[0]
        for i, (q, factor) in enumerate(zip(p.premises, (head.left, head.right))):
            used = 1 if alpha_eq(factor, f) else 0
            if sub_count_guard(q.conclusion.multiplicity(f), used) >= 1:
                return ("prem", i)
        raise TransformError("occurrence lost at a tensor node")
    if name == "vforall":
        head = r.principal[0]
        for i, (label, q) in enumerate(_explicit_pairs(p)):
            inst = subst(head.body, head.var, EnumTerm(label))
            used = 1 if alpha_eq(inst, f) else 0
            if sub_count_guard(q.conclusion.multiplicity(f), used) >= 1:
                return ("prem", i)
        return ("template", 0)
    raise TransformError(f"cannot trace occurrences through a {name} node")


def _explicitize(p: Proof, ti: int) -> tuple[Proof, int]:
    """Materialize one fresh template instance as an explicit premise."""
    t = p.templates[ti]
    k = _min_free_index(t.excluded)
    inst = instantiate_template(t, k)
    tmpl = PremiseTemplate(t.param, t.excluded + (k,), t.body)
    explicit = _explicit_pairs(p) + [(k, inst)]
    head = p.rule.principal[0]
    return vforall_node(head, tmpl, explicit), len(explicit) - 1


def delete_passive(p: Proof, f: Formula, env: Environment = EMPTY_ENV) -> Proof:
    """Remove one occurrence of f that is never principal below p."""
    loc = _locate_context_copy(p, f)
    if loc is None:
        rest = p.conclusion.remove(f, 1)
        if not _axiom_ok(rest):
            raise TransformError("removing the occurrence breaks the axiom")
        return ax(rest)
    if loc[0] == "template":
        p, j = _explicitize(p, loc[1])
        head = p.rule.principal[0]
        inst = subst(head.body, head.var, EnumTerm(p.rule.indices[j]))
        used = 1 if alpha_eq(inst, f) else 0
        if sub_count_guard(p.premises[j].conclusion.multiplicity(f), used) < 1:
            raise TransformError("occurrence lost while widening a template")
        loc = ("prem", j)
    i = loc[1]
    kids = list(p.premises)
    kids[i] = delete_passive(kids[i], f, env)
    return _reassemble(p, tuple(kids), p.templates, env)


def _axiom_ok(m: OmegaMultiset) -> bool:
    cands = [g for g, _ in m.points if is_atom(g)]
    cands += [fam.template for fam in m.families if is_atom(fam.template)]
    return any(m.multiplicity(g) >= 1 and m.multiplicity(neg(g)) >= 1
               for g in cands)


def graft_at_principal(p: Proof, f: Formula, handler,
                       env: Environment = EMPTY_ENV):
    """Walk one occurrence of f up to the node where it is principal and
    replace that node by handler(node); conclusions along the path are
    recomputed from the rebuilt children.  Returns None when the
    occurrence is never principal on its branch."""
    r = p.rule
    if r.principal and alpha_eq(r.principal[0], f) and r.name in {
            "par", "tensor", "vexists", "vforall"}:
        return handler(p)
    loc = _locate_context_copy(p, f)
    if loc is None:
        return None
    if loc[0] == "template":
        p, j = _explicitize(p, loc[1])
        loc = ("prem", j)
    i = loc[1]
    sub = graft_at_principal(p.premises[i], f, handler, env)
    if sub is None:
        return None
    kids = list(p.premises)
    kids[i] = sub
    return _reassemble(p, tuple(kids), p.templates, env)


# ---------------------------------------------------------------------------
# Atomic cut (admissible in IK_omega)

def cut_at(left: Proof, right: Proof, literal: Formula,
           env: Environment = EMPTY_ENV) -> Proof:
    """Cut-free proof of |- G, D from |- G, P and |- D, ~P, P a literal."""
    if not is_atom(literal):
        raise TransformError("cut_at expects a literal cut formula")
    if left.conclusion.multiplicity(literal) < 1:
        raise TransformError("cut literal missing from the left premise")
    gamma = left.conclusion.remove(literal, 1)
    if left.rule.name == "in":
        if _axiom_ok(gamma):
            delta = right.conclusion.remove(neg(literal), 1)
            return ax(gamma.union(delta))
        # the literal was half of the axiom pair, so its dual is in gamma
        return weaken(right, gamma.remove(neg(literal), 1), env=env)
    loc = _locate_context_copy(left, literal)
    if loc is None:  # pragma: no cover - axioms handled above
        raise TransformError("untracked occurrence")
    if loc[0] == "template":
        left, j = _explicitize(left, loc[1])
        loc = ("prem", j)
    i = loc[1]
    kids = list(left.premises)
    kids[i] = cut_at(kids[i], right, literal, env)
    return _reassemble(left, tuple(kids), left.templates, env)


# ---------------------------------------------------------------------------
# Reduction lemma for UTS (finitary, nonstandard height)

def reduce_uts(d0: Proof, d1: Proof, f: Formula,
               env: Environment = EMPTY_ENV) -> Proof:
    """Cut-free proof of |- G, D from cut-free proofs of |- G, A and
    |- D, ~A with uts_height bounded by the sum of the input heights."""
    if not (is_cut_free(d0) and is_cut_free(d1)):
        raise TransformError("reduction expects cut-free inputs")
    return _reduce(d0, d1, f, env, None)


def _reduce(d0: Proof, d1: Proof, f: Formula, env, parent_sum) -> Proof:
    cur = uts_height(d0) + uts_height(d1)
    if parent_sum is not None and cur >= parent_sum:
        raise TransformError("height measure failed to decrease")  # bug trap
    fbar = neg(f)
    if d0.rule.name == "in":
        gamma = d0.conclusion.remove(f, 1)
        delta = d1.conclusion.remove(fbar, 1)
        if _axiom_ok(gamma.union(delta)):
            return ax(gamma.union(delta))
        return weaken(d1, gamma.remove(fbar, 1), env=env)
    if d1.rule.name == "in":
        gamma = d0.conclusion.remove(f, 1)
        delta = d1.conclusion.remove(fbar, 1)
        if _axiom_ok(gamma.union(delta)):
            return ax(gamma.union(delta))
        return weaken(d0, delta.remove(f, 1), env=env)
    left_main = bool(d0.rule.principal) and alpha_eq(d0.rule.principal[0], f)
    right_main = bool(d1.rule.principal) and alpha_eq(d1.rule.principal[0], fbar)
    if not left_main:
        return _permute_reduce(d0, d1, f, env, cur, flip=False)
    if not right_main:
        return _permute_reduce(d1, d0, fbar, env, cur, flip=True)
    return _principal_reduce(d0, d1, f, env, cur)


def _permute_reduce(da: Proof, db: Proof, f: Formula, env, cur, flip: bool):
    """Push the reduction into the premises of `da` (the side where the
    cut formula is passive); `flip` records argument order for recursion."""
    def rec(prem):
        return (_reduce(db, prem, neg(f), env, cur) if flip
                else _reduce(prem, db, f, env, cur))
    name = da.rule.name
    if name in _CONTEXT_SHARING:
        kids = tuple(rec(q) for q in da.premises)
        return _reassemble(da, kids, (), env)
    if name in {"tensor", "boxtensor"}:
        head = da.rule.principal[0]
        for i, factor in ((0, head.left), (1, head.right)):
            q = da.premises[i]
            used = 1 if alpha_eq(factor, f) else 0
            if sub_count_guard(q.conclusion.multiplicity(f), used) >= 1:
                kids = list(da.premises)
                kids[i] = rec(q)
                return _reassemble(da, tuple(kids), (), env)
        raise TransformError("cut formula lost at a tensor node")
    if name in {"forall", "forallcl"}:
        y = da.rule.var
        other = db.conclusion
        if any(y in free_vars(g) for g in other.support()):
            avoid = set().union(*(free_vars(g) for g in other.support()))
            avoid |= set().union(*(free_vars(g) for g in da.conclusion.support()))
            da = rename_eigenvariable(da, fresh_var(avoid | {y}, y))
        return _reassemble(da, (rec(da.premises[0]),), (), env)
    if len(da.premises) == 1:
        return _reassemble(da, (rec(da.premises[0]),), (), env)
    raise TransformError(f"no permutation step for a {name} node")


def _principal_reduce(d0: Proof, d1: Proof, f: Formula, env, cur) -> Proof:
    from .syntax import subst_many
    if isinstance(f, Tensor):
        p00, p01 = d0.premises
        p10 = d1.premises[0]
        r1 = _reduce(p00, p10, f.left, env, cur)
        return _reduce(p01, r1, f.right, env, cur)
    if isinstance(f, Par):
        p00 = d0.premises[0]
        p10, p11 = d1.premises
        r1 = _reduce(p00, p10, f.left, env, cur)
        return _reduce(r1, p11, f.right, env, cur)
    if isinstance(f, Plus):
        side = 1 if d0.rule.name == "plus1" else 2
        piece = f.left if side == 1 else f.right
        return _reduce(d0.premises[0], d1.premises[side - 1], piece, env, cur)
    if isinstance(f, With):
        side = 1 if d1.rule.name == "plus1" else 2
        piece = f.left if side == 1 else f.right
        return _reduce(d0.premises[side - 1], d1.premises[0], piece, env, cur)
    if isinstance(f, Forall):
        t = d1.rule.term
        s = subst_proof(d0.premises[0], d0.rule.var, t)
        return _reduce(s, d1.premises[0], subst(f.body, f.var, t), env, cur)
    if isinstance(f, Exists):
        t = d0.rule.term
        s = subst_proof(d1.premises[0], d1.rule.var, t)
        return _reduce(d0.premises[0], s, subst(f.body, f.var, t), env, cur)
    if isinstance(f, SatAtom):
        lam = env.resolve(f.abstraction)
        inst = subst_many(lam.body, list(zip(lam.binders, f.args)))
        piece = inst if f.positive else neg(inst)
        return _reduce(d0.premises[0], d1.premises[0], piece, env, cur)
    if isinstance(f, TruthAtom):
        lam = env.resolve(f.arg)
        piece = lam.body if f.positive else neg(lam.body)
        return _reduce(d0.premises[0], d1.premises[0], piece, env, cur)
    raise TransformError(f"no principal reduction for {type(f).__name__}")


# ---------------------------------------------------------------------------
# Infinitary cut elimination for IK_omega

@dataclass(frozen=True)
class CutInstance:
    """A simultaneous cut: `left` proves |- G, Phi; each point entry pairs
    one cut-formula copy with a proof of |- D_f, ~f; each block entry pairs
    a uniform family of cut formulas with an index-parameterized right
    premise template."""

    left: Proof
    points: tuple[tuple[Formula, Proof], ...] = ()
    blocks: tuple[tuple[BlockSpec, PremiseTemplate], ...] = ()

    def as_node(self) -> Proof:
        return cutinf_node(self.left, self.points, self.blocks)

    def phi(self) -> OmegaMultiset:
        rule = RuleInstance("cutinf",
                            phi_points=tuple(f for f, _ in self.points),
                            phi_blocks=tuple(s for s, _ in self.blocks))
        return phi_multiset(rule)


def _delta_of(points, blocks) -> OmegaMultiset:
    out = EMPTY
    for f, q in points:
        out = out.union(q.conclusion.remove(neg(f), 1))
    for spec, t in blocks:
        cutf = subst_index(spec.template, PARAM, IndexParam(t.param))
        ctx = t.body.conclusion.remove(neg(cutf), 1)
        out = out.union(family_union(ctx, t.param, t.excluded))
    return out


def _pop_right(points, blocks, f: Formula):
    """One right premise for a single copy of f, plus the leftover entries."""
    key = alpha_key(f)
    for i, (g, q) in enumerate(points):
        if alpha_key(g) == key:
            return q, list(points[:i]) + list(points[i + 1:]), list(blocks)
    for i, (spec, t) in enumerate(blocks):
        if not has_index_param(spec.template, PARAM):
            if alpha_key(spec.template) == key:
                k = _min_free_index(spec.excluded)
                right = instantiate_proof(t.body, t.param, EnumTerm(k))
                rest = (BlockSpec(spec.template, spec.excluded + (k,)),
                        PremiseTemplate(t.param, t.excluded + (k,), t.body))
                return right, list(points), list(blocks[:i]) + [rest] + list(blocks[i + 1:])
            continue
        from .sequents import _match_instance
        k = _match_instance(spec.template, key)
        if k is not None and k not in spec.excluded:
            right = instantiate_proof(t.body, t.param, EnumTerm(k))
            rest = (BlockSpec(spec.template, spec.excluded + (k,)),
                    PremiseTemplate(t.param, t.excluded + (k,), t.body))
            return right, list(points), list(blocks[:i]) + [rest] + list(blocks[i + 1:])
    raise TransformError(f"no right premise available for {f}")


def _lex_less(a, b) -> bool:
    return a[0] < b[0] or (a[0] == b[0] and a[1] < b[1])


def eliminate_cut_ik(ci: CutInstance, env: Environment = EMPTY_ENV) -> Proof:
    """Cut-free IK_omega proof of |- G, D.  Asserts the lexicographic
    measure (degree of the cut multiset, height of the left premise)
    strictly decreases at every recursive invocation."""
    for _, q in ci.points:
        if not is_cut_free(q):
            raise TransformError("right premises must be cut-free")
    if not is_cut_free(ci.left):
        raise TransformError("the left premise must be cut-free")
    return _elim(ci, None, env)


def _measure(ci: CutInstance):
    return (degree(ci.phi()), omega_height(ci.left))


def _elim(ci: CutInstance, prev, env: Environment) -> Proof:
    meas = _measure(ci)
    if prev is not None and not _lex_less(meas, prev):
        raise TransformError(
            f"cut-elimination measure failed to decrease: {meas} !< {prev}")
    left = ci.left
    phi = ci.phi()
    if phi.is_empty():
        if ci.points or ci.blocks:
            raise TransformError("rights without cut formulas")
        return left
    name = left.rule.name
    if name in {"cut", "cutinf"}:
        raise TransformError("left premise must be cut-free")
    if name == "in":
        return _elim_axiom(ci, phi, meas, env)
    principal = left.rule.principal[0] if left.rule.principal else None
    fully_cut = (principal is not None and
                 phi.multiplicity(principal) ==
                 left.conclusion.multiplicity(principal))
    if not fully_cut:
        return _elim_permute(ci, meas, env)
    if isinstance(principal, Par):
        return _elim_par(ci, principal, meas, env)
    if isinstance(principal, Tensor):
        return _elim_tensor(ci, principal, meas, env)
    if isinstance(principal, Exists):
        return _elim_exists(ci, principal, meas, env)
    if isinstance(principal, Forall):
        return _elim_forall(ci, principal, meas, env)
    raise TransformError(
        f"cut elimination does not cover a principal {type(principal).__name__}")


def _elim_axiom(ci: CutInstance, phi, meas, env) -> Proof:
    left = ci.left
    gamma = left.conclusion.diff(phi)
    delta = _delta_of(ci.points, ci.blocks)
    if _axiom_ok(gamma.union(delta)):
        return ax(gamma.union(delta))
    # one active cut formula: its dual remains in gamma
    for f in _phi_support(ci):
        if is_atom(f) and gamma.multiplicity(neg(f)) >= 1:
            right, pts, blks = _pop_right(ci.points, ci.blocks, f)
            extra = gamma.remove(neg(f), 1).union(_delta_of(pts, blks))
            return weaken(right, extra, env=env)
    # both halves of the axiom pair are cut: close with the atomic cut
    for f in _phi_support(ci):
        if is_atom(f) and phi.multiplicity(neg(f)) >= 1:
            r1, pts, blks = _pop_right(ci.points, ci.blocks, f)
            r2, pts, blks = _pop_right(pts, blks, neg(f))
            merged = cut_at(r2, r1, f, env)
            return weaken(merged, gamma.union(_delta_of(pts, blks)), env=env)
    raise TransformError("initial-sequent case could not resolve the axiom pair")


def _phi_support(ci: CutInstance):
    """Finitely many candidate cut-formula copies for the axiom case."""
    seen = set()
    def emit(f):
        k = alpha_key(f)
        if k not in seen:
            seen.add(k)
            yield f
    for f, _ in ci.points:
        yield from emit(f)
    probe: set[int] = set()
    for g, _ in ci.left.conclusion.points:
        from .sequents import _match_instance
        for spec, _ in ci.blocks:
            if has_index_param(spec.template, PARAM):
                i = _match_instance(spec.template, alpha_key(neg(g)))
                if i is not None:
                    probe.add(i)
                i = _match_instance(spec.template, alpha_key(g))
                if i is not None:
                    probe.add(i)
    for spec, _ in ci.blocks:
        if not has_index_param(spec.template, PARAM):
            yield from emit(spec.template)
        else:
            for k in sorted(probe) + [_min_free_index(spec.excluded)]:
                if k not in spec.excluded:
                    yield from emit(subst_index(spec.template, PARAM, EnumTerm(k)))


def _proof_mentions_param(p: Proof, name: str) -> bool:
    def in_mset(m):
        return any(has_index_param(f, name) for f in m.support())
    if in_mset(p.conclusion):
        return True
    r = p.rule
    pieces = list(r.principal) + list(r.phi_points)
    if r.context:
        pieces += list(r.context)
    if any(has_index_param(f, name) for f in pieces):
        return True
    if r.term is not None and has_index_param(r.term, name):
        return True
    if any(has_index_param(b.template, name) for b in r.phi_blocks):
        return True
    return (any(_proof_mentions_param(q, name) for q in p.premises) or
            any(_proof_mentions_param(t.body, name) for t in p.templates))


def _split_entries(points, blocks, ctx: OmegaMultiset):
    """Greedily route cut entries into a premise with context `ctx`;
    whatever does not fit stays for the other side."""
    from .sequents import _match_instance
    cap = ctx
    pts0, blks0 = [], []
    pts1, blks1 = [], []
    for f, q in points:
        if cap.multiplicity(f) >= 1:
            cap = cap.remove(f, 1)
            pts0.append((f, q))
        else:
            pts1.append((f, q))
    for spec, t in blocks:
        if not has_index_param(spec.template, PARAM):
            c = cap.multiplicity(spec.template)
            if is_omega(c):
                cap = cap.remove(spec.template, OMEGA)
                blks0.append((spec, t))
            elif c >= 1:
                if _proof_mentions_param(t.body, t.param):
                    raise TransformError(
                        "splitting an omega block with index-dependent "
                        "right premises is unsupported")
                cap = cap.remove(spec.template, c)
                excl = list(spec.excluded)
                for _ in range(int(c)):
                    k = _min_free_index(excl)
                    excl.append(k)
                    pts0.append((spec.template, t.body))
                rest = (BlockSpec(spec.template, tuple(sorted(excl))),
                        PremiseTemplate(t.param, tuple(sorted(excl)), t.body))
                blks1.append(rest)
            else:
                blks1.append((spec, t))
            continue
        fam = cap.find_family(spec.template)
        if fam is not None:
            holes = [i for i, c in fam.exceptions
                     if c == 0 and i not in spec.excluded]
            mine = BlockSpec(spec.template,
                             tuple(sorted(set(spec.excluded) | set(holes))))
            blks0.append((mine, PremiseTemplate(t.param, mine.excluded, t.body)))
            cap = cap.diff(mset([], [Family(spec.template, 1,
                                            tuple((i, 0) for i in mine.excluded))]))
            for k in sorted(holes):
                inst = subst_index(spec.template, PARAM, EnumTerm(k))
                pts1.append((inst, instantiate_proof(t.body, t.param, EnumTerm(k))))
        else:
            ks = []
            for g, c in cap.points:
                i = _match_instance(spec.template, g)
                if i is not None and i not in spec.excluded and i not in ks:
                    ks.append(i)
            excl = list(spec.excluded)
            for k in sorted(ks):
                inst = subst_index(spec.template, PARAM, EnumTerm(k))
                cap = cap.remove(inst, 1)
                pts0.append((inst, instantiate_proof(t.body, t.param, EnumTerm(k))))
                excl.append(k)
            blks1.append((BlockSpec(spec.template, tuple(sorted(excl))),
                          PremiseTemplate(t.param, tuple(sorted(excl)), t.body)))
    return tuple(pts0), tuple(blks0), tuple(pts1), tuple(blks1)


def _explicitize_at(p: Proof, k: int) -> Proof:
    """Materialize template index k of an omega-forall node."""
    t = p.templates[0]
    if k in t.excluded:
        return p
    inst = instantiate_template(t, k)
    tmpl = PremiseTemplate(t.param, t.excluded + (k,), t.body)
    explicit = _explicit_pairs(p) + [(k, inst)]
    return vforall_node(p.rule.principal[0], tmpl, explicit)


def _vforall_children(left: Proof, points, blocks, meas, env):
    """Distribute cut entries over an omega-forall node's premises and
    eliminate them there.  Returns the rebuilt explicit premise list and
    the rebuilt template (both cut-free)."""
    head = left.rule.principal[0]
    node = left
    for spec, _ in blocks:
        if has_index_param(spec.template, PARAM):
            for i in spec.excluded:
                if i not in node.rule.indices:
                    node = _explicitize_at(node, i)
    t = node.templates[0]
    pool_pts, pool_blks = list(points), list(blocks)
    assignments = []  # (index, premise, pts, blks)
    for i, prem in _explicit_pairs(node):
        inst = subst(head.body, head.var, EnumTerm(i))
        ctx = prem.conclusion.remove(inst, 1)
        pts_i, blks_i, rest_p, rest_b = _split_entries(pool_pts, pool_blks, ctx)
        assignments.append((i, prem, pts_i, blks_i))
        pool_pts, pool_blks = list(rest_p), list(rest_b)
    inst_sym = subst(head.body, head.var, IndexParam(t.param))
    ctx_t = t.body.conclusion.remove(inst_sym, 1)
    t_pts, t_blks = [], []
    stray_pts = []
    for f, q in pool_pts:
        stray_pts.append((f, q))
    for spec, bt in pool_blks:
        if has_index_param(spec.template, PARAM):
            sym = subst_index(spec.template, PARAM, IndexParam(t.param))
            if ctx_t.multiplicity(sym) >= 1:
                right_sym = instantiate_proof(bt.body, bt.param,
                                              IndexParam(t.param))
                t_pts.append((sym, right_sym))
            elif ctx_t.find_family(spec.template) is not None:
                t_blks.append((spec, bt))
            else:
                raise TransformError("cut block not found in the forall premises")
        else:
            c = ctx_t.multiplicity(spec.template)
            if c < 1:
                raise TransformError("cut formulas not found in the forall premises")
            if _proof_mentions_param(bt.body, bt.param):
                raise TransformError(
                    "splitting an omega block with index-dependent right "
                    "premises across an omega rule is unsupported")
            if is_omega(c):
                t_blks.append((spec, bt))
            else:
                t_pts.extend([(spec.template, bt.body)] * int(c))
    # single stray copies each get their own materialized instance
    tmpl_excluded = list(t.excluded)
    for f, q in stray_pts:
        if ctx_t.multiplicity(f) < 1:
            raise TransformError("cut formula not found in the forall premises")
        k = _min_free_index(tmpl_excluded)
        tmpl_excluded.append(k)
        prem = instantiate_proof(t.body, t.param, EnumTerm(k))
        inst_pts = [(subst_index(f0, t.param, EnumTerm(k)),
                     instantiate_proof(q0, t.param, EnumTerm(k)))
                    for f0, q0 in t_pts]
        inst_pts.append((f, q))
        assignments.append((k, prem, tuple(inst_pts), tuple(t_blks)))
    results = []
    for i, prem, pts_i, blks_i in assignments:
        if pts_i or blks_i:
            r_i = _elim(CutInstance(prem, tuple(pts_i), tuple(blks_i)), meas, env)
        else:
            r_i = prem
        results.append((i, r_i))
    if t_pts or t_blks:
        r_t = _elim(CutInstance(t.body, tuple(t_pts), tuple(t_blks)), meas, env)
    else:
        r_t = t.body
    new_tmpl = PremiseTemplate(t.param, tuple(sorted(tmpl_excluded)), r_t)
    return results, new_tmpl




def _elim_permute(ci: CutInstance, meas, env) -> Proof:
    left = ci.left
    name = left.rule.name
    if name in {"par", "vexists"}:
        sub = _elim(CutInstance(left.premises[0], ci.points, ci.blocks),
                    meas, env)
        return _reassemble(left, (sub,), left.templates, env)
    if name == "tensor":
        head = left.rule.principal[0]
        ctx0 = left.premises[0].conclusion.remove(head.left, 1)
        pts0, blks0, pts1, blks1 = _split_entries(ci.points, ci.blocks, ctx0)
        q0 = (_elim(CutInstance(left.premises[0], pts0, blks0), meas, env)
              if (pts0 or blks0) else left.premises[0])
        q1 = (_elim(CutInstance(left.premises[1], pts1, blks1), meas, env)
              if (pts1 or blks1) else left.premises[1])
        return tensor_node(q0, q1, head)
    if name == "vforall":
        head = left.rule.principal[0]
        results, new_tmpl = _vforall_children(left, ci.points, ci.blocks,
                                              meas, env)
        return vforall_node(head, new_tmpl, results)
    raise TransformError(f"no permutation step for a {name} node")


def _elim_par(ci: CutInstance, p: Par, meas, env) -> Proof:
    left = ci.left
    rp, pts, blks = _pop_right(ci.points, ci.blocks, p)
    r = (_elim(CutInstance(left.premises[0], tuple(pts), tuple(blks)), meas, env)
         if (pts or blks) else left.premises[0])

    def handler(n: Proof) -> Proof:
        inner = CutInstance(r, ((p.left, n.premises[0]),
                                (p.right, n.premises[1])), ())
        return _elim(inner, meas, env)

    res = graft_at_principal(rp, neg(p), handler, env)
    if res is None:
        base = delete_passive(rp, neg(p), env)
        extra = ci.left.conclusion.diff(ci.phi()).union(_delta_of(pts, blks))
        return weaken(base, extra, env=env)
    return res


def _elim_tensor(ci: CutInstance, p: Tensor, meas, env) -> Proof:
    left = ci.left
    rp, pts, blks = _pop_right(ci.points, ci.blocks, p)
    ctx0 = left.premises[0].conclusion.remove(p.left, 1)
    pts0, blks0, pts1, blks1 = _split_entries(pts, blks, ctx0)
    r0 = (_elim(CutInstance(left.premises[0], pts0, blks0), meas, env)
          if (pts0 or blks0) else left.premises[0])
    r1 = (_elim(CutInstance(left.premises[1], pts1, blks1), meas, env)
          if (pts1 or blks1) else left.premises[1])

    def handler(n: Proof) -> Proof:
        inner = CutInstance(n.premises[0], ((neg(p.left), r0),
                                            (neg(p.right), r1)), ())
        return _elim(inner, meas, env)

    res = graft_at_principal(rp, neg(p), handler, env)
    if res is None:
        base = delete_passive(rp, neg(p), env)
        extra = ci.left.conclusion.diff(ci.phi()).union(_delta_of(pts, blks))
        return weaken(base, extra, env=env)
    return res


def _elim_exists(ci: CutInstance, p: Exists, meas, env) -> Proof:
    left = ci.left
    rp, pts, blks = _pop_right(ci.points, ci.blocks, p)
    r = (_elim(CutInstance(left.premises[0], tuple(pts), tuple(blks)), meas, env)
         if (pts or blks) else left.premises[0])

    def handler(n: Proof) -> Proof:
        npts = []
        for i, prem in zip(n.rule.indices, n.premises):
            npts.append((subst(p.body, p.var, EnumTerm(i)), prem))
        nt = n.templates[0]
        tplf = subst(p.body, p.var, IndexParam(PARAM))
        spec = BlockSpec(alpha_key(tplf), tuple(sorted(nt.excluded)))
        inner = CutInstance(r, tuple(npts), ((spec, nt),))
        return _elim(inner, meas, env)

    res = graft_at_principal(rp, neg(p), handler, env)
    if res is None:
        base = delete_passive(rp, neg(p), env)
        extra = ci.left.conclusion.diff(ci.phi()).union(_delta_of(pts, blks))
        return weaken(base, extra, env=env)
    return res


def _elim_forall(ci: CutInstance, p: Forall, meas, env) -> Proof:
    left = ci.left
    rp, pts, blks = _pop_right(ci.points, ci.blocks, p)
    results, new_tmpl = _vforall_children(left, pts, blks, meas, env)
    inv = invert_exists(rp, neg(p), env)
    nbody = neg(p.body)
    npts = tuple((subst(nbody, p.var, EnumTerm(i)), r_i) for i, r_i in results)
    tplf = subst(nbody, p.var, IndexParam(PARAM))
    spec = BlockSpec(alpha_key(tplf), new_tmpl.excluded)
    inner = CutInstance(inv, npts, ((spec, new_tmpl),))
    return _elim(inner, meas, env)


# ---------------------------------------------------------------------------
# The reduction step Zardini's algorithm prescribes does not preserve
# provability: the before-proof checks, the transformed object does not.

def zardini_flaw_before() -> Proof:
    """The omega-branching proof of |- [~P(t_i) : i], forall x P(x)."""
    f = Forall("x", Lit(True, "P", (Var("x"),)))
    param = fresh_param()
    leaf = ax(seq(Lit(False, "P", (IndexParam(param),)),
                  Lit(True, "P", (IndexParam(param),))))
    return vforall_node(f, PremiseTemplate(param, (), leaf), ())


def zardini_flaw_after() -> Proof:
    """The object the prescribed reduction produces: a forall inference
    fed from a single premise.  It is not locally correct and its
    conclusion |- ~P(t1), forall x P(x) is not cut-free provable."""
    f = Forall("x", Lit(True, "P", (Var("x"),)))
    leaf = ax(seq(Lit(False, "P", (EnumTerm(1),)),
                  Lit(True, "P", (EnumTerm(1),))))
    concl = seq(Lit(False, "P", (EnumTerm(1),)), f)
    return Proof(concl, RuleInstance("vforall", (f,), indices=(1,)), (leaf,))


def zardini_flaw_demo():
    """(checkable before-proof, refutation certificate for the after-sequent)."""
    from .prover import refute_schematic
    before = zardini_flaw_before()
    after_target = seq(Lit(False, "P", (EnumTerm(1),)),
                       Forall("x", Lit(True, "P", (Var("x"),))))
    cert = refute_schematic(after_target)
    return before, cert
