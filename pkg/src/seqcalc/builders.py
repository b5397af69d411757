"""Node constructors that derive each conclusion from the premises.

Transforms and generators build proofs through these, so a conclusion can
only be wrong if the construction itself is; the checker stays the
independent judge.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .calculi import BlockSpec, PremiseTemplate, Proof, RuleInstance
from .errors import TransformError
from .sequents import (
    EMPTY, OMEGA, PARAM, OmegaMultiset, Sequent, family_union, instance_block,
    mset, seq,
)
from .syntax import (
    Bang, Box, Diamond, EnumTerm, Environment, Exists, Forall, Formula,
    IndexParam, LambdaName, Par, Plus, Quest, SatAtom, Tensor, Term,
    TruthAtom, Var, With, neg, subst, subst_index, subst_many,
)


def ax(concl: Sequent) -> Proof:
    return Proof(concl, RuleInstance("in"))


def par_node(prem: Proof, f: Par) -> Proof:
    concl = prem.conclusion.remove(f.left).remove(f.right).add(f)
    return Proof(concl, RuleInstance("par", (f,)), (prem,))


def tensor_node(p0: Proof, p1: Proof, f: Tensor, rule: str = "tensor") -> Proof:
    concl = (p0.conclusion.remove(f.left)
             .union(p1.conclusion.remove(f.right)).add(f))
    return Proof(concl, RuleInstance(rule, (f,)), (p0, p1))


def plus_node(prem: Proof, f: Plus, side: int) -> Proof:
    piece = f.left if side == 1 else f.right
    concl = prem.conclusion.remove(piece).add(f)
    return Proof(concl, RuleInstance(f"plus{side}", (f,)), (prem,))


def with_node(p0: Proof, p1: Proof, f: With, rule: str = "with") -> Proof:
    concl = p0.conclusion.remove(f.left).add(f)
    return Proof(concl, RuleInstance(rule, (f,)), (p0, p1))


def forall_node(prem: Proof, f: Forall, eigen: str, rule: str = "forall") -> Proof:
    inst = subst(f.body, f.var, Var(eigen))
    concl = prem.conclusion.remove(inst).add(f)
    return Proof(concl, RuleInstance(rule, (f,), var=eigen), (prem,))


def exists_node(prem: Proof, f: Exists, witness: Term) -> Proof:
    inst = subst(f.body, f.var, witness)
    concl = prem.conclusion.remove(inst).add(f)
    return Proof(concl, RuleInstance("exists", (f,), term=witness), (prem,))


def vexists_node(prem: Proof, f: Exists) -> Proof:
    block = instance_block(f.body, f.var)
    concl = prem.conclusion.diff(block).add(f)
    return Proof(concl, RuleInstance("vexists", (f,)), (prem,))


def vforall_node(f: Forall, template: PremiseTemplate,
                 explicit: Sequence[tuple[int, Proof]] = ()) -> Proof:
    indices = tuple(i for i, _ in explicit)
    if set(indices) != set(template.excluded):
        raise TransformError("explicit premises must cover the template gaps")
    total = EMPTY
    for i, q in explicit:
        inst = subst(f.body, f.var, EnumTerm(i))
        total = total.union(q.conclusion.remove(inst))
    inst = subst(f.body, f.var, IndexParam(template.param))
    ctx = template.body.conclusion.remove(inst)
    total = total.union(family_union(ctx, template.param, template.excluded))
    concl = total.add(f)
    return Proof(concl, RuleInstance("vforall", (f,), indices=indices),
                 tuple(q for _, q in explicit), (template,))


def sat_node(prem: Proof, f: SatAtom, env: Environment) -> Proof:
    lam = env.resolve(f.abstraction)
    if not isinstance(lam, LambdaName):
        raise TransformError("sat abstraction must resolve to a lambda name")
    inst = subst_many(lam.body, list(zip(lam.binders, f.args)))
    if not f.positive:
        inst = neg(inst)
    concl = prem.conclusion.remove(inst).add(f)
    return Proof(concl, RuleInstance("sat" if f.positive else "satbar", (f,)),
                 (prem,))


def truth_node(prem: Proof, f: TruthAtom, env: Environment) -> Proof:
    lam = env.resolve(f.arg)
    if not isinstance(lam, LambdaName):
        raise TransformError("truth argument must resolve to a lambda name")
    inst = lam.body if f.positive else neg(lam.body)
    concl = prem.conclusion.remove(inst).add(f)
    return Proof(concl, RuleInstance("t" if f.positive else "tbar", (f,)),
                 (prem,))


def nec_node(prem: Proof, f: Box, gamma: Sequence[Formula],
             delta: Sequence[Formula] = ()) -> Proof:
    concl = mset([Diamond(g) for g in gamma] + list(delta)).add(f)
    return Proof(concl, RuleInstance("nec", (f,), context=tuple(delta)), (prem,))


def boxtensor_node(p0: Proof, p1: Proof, f: Tensor,
                   shared: Sequence[Formula]) -> Proof:
    sh = mset(list(shared))
    c0 = p0.conclusion.diff(sh).remove(f.left)
    c1 = p1.conclusion.diff(sh).remove(f.right)
    concl = sh.union(c0).union(c1).add(f)
    return Proof(concl, RuleInstance("boxtensor", (f,), context=tuple(shared)),
                 (p0, p1))


def bang_node(prem: Proof, f: Bang, delta: Sequence[Formula] = ()) -> Proof:
    concl = prem.conclusion.remove(f.body).add(f).union(mset(list(delta)))
    return Proof(concl, RuleInstance("bang", (f,)), (prem,))


def quest_node(prem: Proof, f: Quest) -> Proof:
    concl = prem.conclusion.remove(f.body).add(f)
    return Proof(concl, RuleInstance("quest", (f,)), (prem,))


def questc_node(prem: Proof, f: Quest) -> Proof:
    concl = prem.conclusion.remove(f, 2).add(f)
    return Proof(concl, RuleInstance("questc", (f,)), (prem,))


def cut_node(p0: Proof, p1: Proof, f: Formula) -> Proof:
    concl = p0.conclusion.remove(f).union(p1.conclusion.remove(neg(f)))
    return Proof(concl, RuleInstance("cut", (f,)), (p0, p1))


def cutinf_node(left: Proof, points: Sequence[tuple[Formula, Proof]] = (),
                blocks: Sequence[tuple[BlockSpec, PremiseTemplate]] = ()) -> Proof:
    from .calculi import phi_multiset
    rule = RuleInstance("cutinf",
                        phi_points=tuple(f for f, _ in points),
                        phi_blocks=tuple(s for s, _ in blocks))
    gamma = left.conclusion.diff(phi_multiset(rule))
    delta = EMPTY
    for f, q in points:
        delta = delta.union(q.conclusion.remove(neg(f)))
    for spec, t in blocks:
        cutf = subst_index(spec.template, PARAM, IndexParam(t.param))
        ctx = t.body.conclusion.remove(neg(cutf))
        delta = delta.union(family_union(ctx, t.param, t.excluded))
    return Proof(gamma.union(delta), rule,
                 (left, *(q for _, q in points)), tuple(t for _, t in blocks))


def alias_node(prem: Proof, note: str) -> Proof:
    return Proof(prem.conclusion, RuleInstance("alias", note=note), (prem,))


def or_node(prem: Proof, f: Plus) -> Proof:
    concl = prem.conclusion.remove(f.left).remove(f.right).add(f)
    return Proof(concl, RuleInstance("or", (f,)), (prem,))


def and_node(p0: Proof, p1: Proof, f: With) -> Proof:
    return with_node(p0, p1, f, rule="and")


def existscl_node(prem: Proof, f: Exists, witness: Term) -> Proof:
    inst = subst(f.body, f.var, witness)
    concl = prem.conclusion.remove(inst)
    return Proof(concl, RuleInstance("existscl", (f,), term=witness), (prem,))


def forallcl_node(prem: Proof, f: Forall, eigen: str) -> Proof:
    return forall_node(prem, f, eigen, rule="forallcl")


def forallinfcl_node(f: Forall, template: PremiseTemplate,
                     explicit: Sequence[tuple[int, Proof]] = ()) -> Proof:
    indices = tuple(i for i, _ in explicit)
    if set(indices) != set(template.excluded):
        raise TransformError("explicit premises must cover the template gaps")
    inst = subst(f.body, f.var, IndexParam(template.param))
    concl = template.body.conclusion.remove(inst).add(f)
    return Proof(concl, RuleInstance("forallinfcl", (f,), indices=indices),
                 tuple(q for _, q in explicit), (template,))


_PARAM_NAMES = iter(())


def fresh_param(counter=[0]) -> str:
    counter[0] += 1
    return f"π{counter[0]}"  # π1, π2, ...
