"""Seed-deterministic generators: random checkable proofs and cut
instances for the elimination suites.

Everything grows out of identity proofs |- ~A, A, which exist in every
calculus here; junk wrapping (weakening plus harmless connective steps)
varies the shapes so both principal and permutation cases of the
reductions get exercised.
"""
from __future__ import annotations

import random
from typing import Optional

from .builders import (
    ax, bang_node, exists_node, forall_node, fresh_param, par_node,
    plus_node, quest_node, tensor_node, vexists_node, vforall_node,
    with_node,
)
from .calculi import (
    BlockSpec, PremiseTemplate, Proof, RuleInstance,
)
from .errors import TransformError
from .sequents import (
    Family, OMEGA, PARAM, OmegaMultiset, family, instance_block, mset, seq,
)
from .syntax import (
    Bang, EMPTY_ENV, EnumTerm, Environment, Exists, Forall, Formula,
    IndexParam, LambdaName, Lit, Par, Plus, Quest, SatAtom, Tensor,
    TruthAtom, Var, With, fresh_var, lit, neg, nlit, quote, subst,
)
from .transforms import CutInstance, weaken

ATOM_NAMES = ("P", "Q", "R")


def rand_atom(rng: random.Random, arity_terms: bool = False) -> Lit:
    name = rng.choice(ATOM_NAMES)
    args: tuple = ()
    if arity_terms and rng.random() < 0.5:
        args = (EnumTerm(rng.randint(1, 3)),)
        name = name.lower() * 2  # keep applied predicates apart from 0-ary
    return Lit(rng.random() < 0.5, name, args)


def rand_uts_formula(rng: random.Random, depth: int) -> Formula:
    """Formulas over the UTS language: multiplicatives, additives,
    finitary quantifiers, satisfaction and truth atoms."""
    if depth <= 0:
        roll = rng.random()
        if roll < 0.70:
            return rand_atom(rng)
        if roll < 0.85:
            body = rand_atom(rng)
            lam = LambdaName(("x",), body)
            return SatAtom(rng.random() < 0.5, 1, len_free(body), lam,
                           (EnumTerm(rng.randint(1, 3)),))
        return TruthAtom(rng.random() < 0.5, quote(rand_atom(rng)))
    kind = rng.randint(0, 6)
    if kind == 0:
        return Tensor(rand_uts_formula(rng, depth - 1),
                      rand_uts_formula(rng, depth - 1))
    if kind == 1:
        return Par(rand_uts_formula(rng, depth - 1),
                   rand_uts_formula(rng, depth - 1))
    if kind == 2:
        return Plus(rand_uts_formula(rng, depth - 1),
                    rand_uts_formula(rng, depth - 1))
    if kind == 3:
        return With(rand_uts_formula(rng, depth - 1),
                    rand_uts_formula(rng, depth - 1))
    if kind == 4:
        v = fresh_var(frozenset(), "u")
        body = Lit(rng.random() < 0.5, rng.choice(ATOM_NAMES).lower() * 2,
                   (Var(v),))
        inner = rand_uts_formula(rng, depth - 2) if depth > 1 else None
        shaped = body if inner is None or rng.random() < 0.5 else \
            Par(body, inner)
        return Forall(v, shaped) if rng.random() < 0.5 else Exists(v, shaped)
    if kind == 5:
        body = rand_uts_formula(rng, min(depth - 1, 1))
        lam = LambdaName(("x",), body)
        return SatAtom(rng.random() < 0.5, 1, len_free(body), lam,
                       (EnumTerm(rng.randint(1, 3)),))
    return rand_uts_formula(rng, depth - 1)


def len_free(f: Formula) -> int:
    from .syntax import free_vars
    return len(free_vars(f))


def rand_ik_formula(rng: random.Random, depth: int) -> Formula:
    """Multiplicative-quantifier formulas for the infinitary system."""
    if depth <= 0:
        return rand_atom(rng, arity_terms=True)
    kind = rng.randint(0, 3)
    if kind == 0:
        return Tensor(rand_ik_formula(rng, depth - 1),
                      rand_ik_formula(rng, depth - 1))
    if kind == 1:
        return Par(rand_ik_formula(rng, depth - 1),
                   rand_ik_formula(rng, depth - 1))
    v = fresh_var(frozenset(), "u")
    body = Lit(rng.random() < 0.5, rng.choice(ATOM_NAMES).lower() * 2,
               (Var(v),))
    if depth > 1 and rng.random() < 0.4:
        body = Par(body, rand_ik_formula(rng, depth - 2))
    return Forall(v, body) if kind == 2 else Exists(v, body)


def rand_ale_formula(rng: random.Random, depth: int) -> Formula:
    """Multiplicative-exponential formulas (the circ fragment)."""
    if depth <= 0:
        return rand_atom(rng)
    kind = rng.randint(0, 3)
    if kind == 0:
        return Tensor(rand_ale_formula(rng, depth - 1),
                      rand_ale_formula(rng, depth - 1))
    if kind == 1:
        return Par(rand_ale_formula(rng, depth - 1),
                   rand_ale_formula(rng, depth - 1))
    if kind == 2:
        return Quest(rand_ale_formula(rng, depth - 1))
    return Bang(rand_ale_formula(rng, depth - 1))


def rand_cl_formula(rng: random.Random, depth: int) -> Formula:
    if depth <= 0:
        return rand_atom(rng)
    ctor = With if rng.random() < 0.5 else Plus
    return ctor(rand_cl_formula(rng, depth - 1),
                rand_cl_formula(rng, depth - 1))


# ---------------------------------------------------------------------------
# Identity proofs |- ~A, A

def identity_finitary(f: Formula, env: Environment = EMPTY_ENV) -> Proof:
    """Cut-free proof of |- ~f, f with finitary rules (AL/UTS/ALE)."""
    fbar = neg(f)
    if isinstance(f, (Lit, SatAtom, TruthAtom)):
        return ax(seq(fbar, f))
    if isinstance(f, Tensor):
        p = tensor_node(identity_finitary(f.left, env),
                        identity_finitary(f.right, env), f)
        return par_node(p, fbar)
    if isinstance(f, Par):
        p = tensor_node(identity_finitary(neg(f.left), env),
                        identity_finitary(neg(f.right), env), fbar)
        return par_node(p, f)
    if isinstance(f, Plus):
        l = plus_node(identity_finitary(f.left, env), f, 1)
        r = plus_node(identity_finitary(f.right, env), f, 2)
        return with_node(l, r, fbar)
    if isinstance(f, With):
        l = plus_node(identity_finitary(neg(f.left), env), fbar, 1)
        r = plus_node(identity_finitary(neg(f.right), env), fbar, 2)
        return with_node(l, r, f)
    if isinstance(f, Forall):
        y = fresh_var(frozenset(), "y")
        inst = subst(f.body, f.var, Var(y))
        p = identity_finitary(inst, env)
        p = exists_node(p, neg(f), Var(y))
        return forall_node(p, f, y)
    if isinstance(f, Exists):
        return forall_to_exists_identity(f, env)
    if isinstance(f, Quest):
        p = identity_finitary(f.body, env)         # |- ~A, A
        p = quest_node(p, f)                       # |- ?A... wrong side
        return bang_node(p, neg(f))                # |- !~A, ?A
    if isinstance(f, Bang):
        p = identity_finitary(f.body, env)
        p = quest_node(p, neg(f))
        return bang_node(p, f)
    raise TransformError(f"no finitary identity for {f!r}")


def forall_to_exists_identity(f: Exists, env) -> Proof:
    y = fresh_var(frozenset(), "y")
    inst = subst(neg(f.body), f.var, Var(y))
    p = identity_finitary(inst, env)
    p = exists_node(p, f, Var(y))
    return forall_node(p, neg(f), y)


def identity_ik(f: Formula) -> Proof:
    """Cut-free IK_omega proof of |- ~f, f (omega-branching quantifiers)."""
    fbar = neg(f)
    if isinstance(f, Lit):
        return ax(seq(fbar, f))
    if isinstance(f, Tensor):
        p = tensor_node(identity_ik(f.left), identity_ik(f.right), f)
        return par_node(p, fbar)
    if isinstance(f, Par):
        p = tensor_node(identity_ik(neg(f.left)), identity_ik(neg(f.right)),
                        fbar)
        return par_node(p, f)
    if isinstance(f, Forall):
        param = fresh_param()
        inst = subst(f.body, f.var, IndexParam(param))
        body = identity_ik(inst)                   # |- ~inst, inst
        tmpl = PremiseTemplate(param, (), body)
        p = vforall_node(f, tmpl, ())              # |- [~inst_i], forall
        return vexists_node(p, fbar)
    if isinstance(f, Exists):
        return neg_of(identity_ik(neg(f)))
    raise TransformError(f"no infinitary identity for {f!r}")


def neg_of(p: Proof) -> Proof:
    return p  # |- ~g, g is symmetric in its conclusion


# ---------------------------------------------------------------------------
# Junk wrapping: keep conclusions interesting without losing checkability

def wrap_junk(p: Proof, rng: random.Random, rounds: int = 2,
              env: Environment = EMPTY_ENV) -> Proof:
    for _ in range(rng.randint(0, rounds)):
        roll = rng.random()
        if roll < 0.5:
            p = weaken(p, seq(rand_atom(rng)), env=env)
        elif roll < 0.8:
            a, b = rand_atom(rng), rand_atom(rng)
            p = weaken(p, seq(a, b), env=env)
            p = par_node(p, Par(a, b))
        else:
            a = rand_atom(rng)
            p = weaken(p, seq(a), env=env)
            p = plus_node(p, Plus(a, rand_atom(rng)), 1)
    return p


# ---------------------------------------------------------------------------
# Cut-instance generators

def gen_uts_cut(rng: random.Random, max_depth: int = 4,
                env: Environment = EMPTY_ENV):
    """A single-cut UTS instance: cut-free d0 |- G,A and d1 |- D,~A."""
    f = rand_uts_formula(rng, rng.randint(0, max_depth))
    d0 = wrap_junk(identity_finitary(f, env), rng, env=env)
    d1 = wrap_junk(identity_finitary(neg(f), env), rng, env=env)
    return d0, d1, f


def gen_ale_proof(rng: random.Random, max_depth: int = 3,
                  env: Environment = EMPTY_ENV) -> Proof:
    """A checkable ALE proof over the multiplicative-exponential fragment,
    guaranteed to exercise quest; bang and questc appear frequently."""
    f = rand_ale_formula(rng, rng.randint(1, max_depth))
    p = identity_finitary(Quest(f), env)   # forces quest+bang structure
    if rng.random() < 0.7:
        g = Quest(rand_ale_formula(rng, 1))
        p = weaken(p, seq(g, g), env=env)
        from .builders import questc_node
        p = questc_node(p, g)
    return wrap_junk(p, rng, env=env)


def gen_ik_cut(rng: random.Random) -> CutInstance:
    """A CUT/CUT_INF instance in IK_omega: point cut formulas plus
    optionally a uniform block, with forall/exists-principal shapes."""
    style = rng.randint(0, 3)
    if style == 0:
        # plain points
        points = []
        fs = [rand_ik_formula(rng, rng.randint(0, 2))
              for _ in range(rng.randint(1, 2))]
        left = identity_ik(fs[0])
        for g in fs[1:]:
            left = weaken(left, seq(g))
        for g in fs:
            points.append((g, wrap_ik_junk(identity_ik(neg(g)), rng)))
        return CutInstance(left, tuple(points), ())
    if style == 1:
        # a uniform block of literal instances
        name = rng.choice(ATOM_NAMES).lower() * 2
        tpl = Lit(True, name, (IndexParam(PARAM),))
        block = BlockSpec(tpl, ())
        left = ax(seq(lit("P"), nlit("P")))
        left = weaken(left, mset([], [Family(tpl, 1, ())]))
        param = fresh_param()
        inst = Lit(True, name, (IndexParam(param),))
        right_body = wrap_ik_junk(ax(seq(neg(inst), inst)), rng)
        tmpl = PremiseTemplate(param, (), right_body)
        return CutInstance(left, (), ((block, tmpl),))
    if style == 2:
        # forall-principal: the left proof introduces the cut formula
        v = "u"
        body = Lit(True, rng.choice(ATOM_NAMES).lower() * 2, (Var(v),))
        f = Forall(v, body)
        param = fresh_param()
        inst = subst(body, v, IndexParam(param))
        tmpl = PremiseTemplate(param, (), identity_ik(inst))
        left = vforall_node(f, tmpl, ())          # |- [~inst_i], forall
        rp = identity_ik(neg(f))                  # |- forall x body, exists-dual
        return CutInstance(left, ((f, rp),), ())
    # exists-principal
    v = "u"
    body = Lit(True, rng.choice(ATOM_NAMES).lower() * 2, (Var(v),))
    f = Exists(v, body)
    dual = Forall(v, neg(body))
    base = ax(mset([], [Family(subst(body, v, IndexParam(PARAM)), 1, ()),
                        Family(subst(neg(body), v, IndexParam(PARAM)), 1, ())]))
    left = vexists_node(base, f)                  # |- [~inst_i], exists
    param = fresh_param()
    inst = subst(neg(body), v, IndexParam(param))
    tmpl = PremiseTemplate(param, (), identity_ik(inst))
    rp = vforall_node(dual, tmpl, ())             # |- [inst_i], forall ~
    return CutInstance(left, ((f, rp),), ())


def wrap_ik_junk(p: Proof, rng: random.Random) -> Proof:
    if rng.random() < 0.5:
        a = rand_atom(rng, arity_terms=True)
        p = weaken(p, seq(a))
    if rng.random() < 0.3:
        a, b = rand_atom(rng), rand_atom(rng)
        p = weaken(p, seq(a, b))
        p = par_node(p, Par(a, b))
    return p


def gen_cl_sequent(rng: random.Random, max_depth: int = 3) -> OmegaMultiset:
    n = rng.randint(1, 2)
    return mset([(rand_cl_formula(rng, rng.randint(0, max_depth)), 1)
                 for _ in range(n)])
