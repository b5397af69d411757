"""Translations between calculi and their proof-level transports.

* star: classical logic into vacuous-quantifier affine logic, with the
  forward transport star_proof and the backward extraction
  extract_classical;
* circ: exponentials as vacuous quantifiers, with circ_proof and
  extract_ale;
* tau: membership atoms into satisfaction predicates;
* demodalize: boxes dissolved into a designated tautology guard.

Vacuous quantifiers introduced here always bind the reserved variable
name below, so freshness is syntactically guaranteed.
"""
from __future__ import annotations

from .builders import (
    and_node, ax, bang_node, exists_node, forall_node, forallcl_node,
    forallinfcl_node, fresh_param, or_node, par_node, plus_node, quest_node,
    questc_node, tensor_node, truth_node, vexists_node, vforall_node,
    with_node,
)
from .calculi import PremiseTemplate, Proof, RuleInstance
from .errors import TransformError
from .sequents import (
    EMPTY, OMEGA, OmegaMultiset, PARAM, Sequent, is_omega, mset, seq,
)
from .syntax import (
    ATOMS, Bang, Box, Diamond, Environment, EMPTY_ENV, EnumTerm, Exists,
    Forall, Formula, IndexParam, LambdaName, Lit, Par, Plus, Quest, SatAtom,
    Tensor, Term, TruthAtom, Var, With, alpha_eq, free_vars, is_atom, neg,
    quote, subst, term_free_vars,
)
from .transforms import (
    contract_exists_inf, forall_from_single, instantiate_proof,
    instantiate_template, invert_exists, invert_exists_all, subst_proof,
    weaken,
)

VAC = "%v"  # reserved name for vacuous binders


def _no_reserved(f: Formula) -> None:
    if VAC in free_vars(f):
        raise TransformError(f"source formula uses the reserved variable {VAC}")


# ---------------------------------------------------------------------------
# star: classical -> ALV

def star_formula(f: Formula) -> Formula:
    """(P)* = P, (A&B)* = Ex A* (x) Ex B*, (A|B)* = Ex A* par Ex B*,
    quantifier clauses add an inner vacuous existential."""
    _no_reserved(f)
    if isinstance(f, Lit):
        return f
    if isinstance(f, With):
        return Tensor(Exists(VAC, star_formula(f.left)),
                      Exists(VAC, star_formula(f.right)))
    if isinstance(f, Plus):
        return Par(Exists(VAC, star_formula(f.left)),
                   Exists(VAC, star_formula(f.right)))
    if isinstance(f, Forall):
        return Forall(f.var, Exists(VAC, star_formula(f.body)))
    if isinstance(f, Exists):
        return Exists(f.var, Exists(VAC, star_formula(f.body)))
    raise TransformError(f"not a classical formula: {f}")


def star_image(f: Formula) -> Formula:
    """The sequent-level image: a vacuous existential over the star."""
    return Exists(VAC, star_formula(f))


def star_sequent(m: Sequent) -> Sequent:
    return mset([(star_image(f), c) for f, c in m.points])


def star_inverse(f: Formula) -> Formula:
    """Partial inverse of star_formula (image shapes only)."""
    if isinstance(f, Lit):
        return f
    if isinstance(f, Tensor) and _vac_ex(f.left) and _vac_ex(f.right):
        return With(star_inverse(f.left.body), star_inverse(f.right.body))
    if isinstance(f, Par) and _vac_ex(f.left) and _vac_ex(f.right):
        return Plus(star_inverse(f.left.body), star_inverse(f.right.body))
    if isinstance(f, Forall) and _vac_ex(f.body):
        return Forall(f.var, star_inverse(f.body.body))
    raise TransformError(f"not a star image: {f}")


def _vac_ex(f: Formula) -> bool:
    return isinstance(f, Exists) and f.var not in free_vars(f.body)


# -- forward transport -------------------------------------------------------

def star_proof(p: Proof, env: Environment = EMPTY_ENV) -> Proof:
    """ALV proof of the image sequent from a CL or CL_INF proof."""
    name = p.rule.name
    if name == "in":
        images = [(star_image(f), int(c)) for f, c in p.conclusion.points]
        base = mset([(star_formula(g.body), OMEGA) for g, _ in images])
        cur = ax(base)
        for g, c in images:
            for _ in range(c):
                cur = _wrap_vac_exists(cur, g, env)
        return cur
    if name == "and":
        f = p.rule.principal[0]
        img = star_image(f)
        q0 = star_proof(p.premises[0], env)
        q1 = star_proof(p.premises[1], env)
        inner = Tensor(Exists(VAC, star_formula(f.left)),
                       Exists(VAC, star_formula(f.right)))
        cur = tensor_node(q0, q1, inner)
        ctx = star_sequent(p.conclusion.remove(f, 1))
        for d in dict.fromkeys(ctx.point_formulas()):
            cur = _contract_to(cur, d, ctx.multiplicity(d), env)
        return _wrap_vac_exists(cur, img, env)
    if name == "or":
        f = p.rule.principal[0]
        q = star_proof(p.premises[0], env)
        inner = Par(Exists(VAC, star_formula(f.left)),
                    Exists(VAC, star_formula(f.right)))
        cur = par_node(q, inner)
        return _wrap_vac_exists(cur, star_image(f), env)
    if name == "existscl":
        return _star_exists_case(p, env)
    if name in {"forallcl", "forallinfcl"}:
        return _star_forall_case(p, env)
    raise TransformError(f"no star transport for a {name} node")


def _wrap_vac_exists(cur: Proof, img: Exists, env) -> Proof:
    """Close omega copies of the body into one vacuous existential."""
    body = img.body
    have = cur.conclusion.multiplicity(body)
    if not is_omega(have):
        cur = weaken(cur, mset([(body, OMEGA)]), env=env)
    return vexists_node(cur, img)


def _contract_to(cur: Proof, f: Formula, count, env) -> Proof:
    """Contract however many copies of the vacuous existential f down to
    `count` via weakening plus the infinitary contraction."""
    cur = weaken(cur, mset([(f, OMEGA)]), env=env)
    cur = contract_exists_inf(cur, f, env)
    if count > 1:
        cur = weaken(cur, mset([(f, int(count) - 1)]), env=env)
    return cur


def _star_exists_case(p: Proof, env) -> Proof:
    f = p.rule.principal[0]          # exists x A, stays in the premise
    t = p.rule.term
    if not isinstance(t, EnumTerm):
        raise TransformError("star transport needs enumerated witnesses")
    q = star_proof(p.premises[0], env)
    img = star_image(f)              # Ex%v Ex x Ex%v A*
    inner = Exists(f.var, Exists(VAC, star_formula(f.body)))
    inst = subst(Exists(VAC, star_formula(f.body)), f.var, t)
    # q: |- ..., img, inst ; fill in the remaining instances and rebuild
    from .sequents import instance_block
    block = instance_block(Exists(VAC, star_formula(f.body)), f.var)
    missing = block.remove(inst, 1)
    cur = weaken(q, missing, env=env)
    cur = vexists_node(cur, inner)
    cur = weaken(cur, mset([(inner, OMEGA)]), env=env)
    cur = vexists_node(cur, img)     # a second copy of the image appears
    return _contract_to(cur, img, p.conclusion.multiplicity(f), env)


def _star_forall_case(p: Proof, env) -> Proof:
    f = p.rule.principal[0]
    inner_body = Exists(VAC, star_formula(f.body))
    head = Forall(f.var, inner_body)
    ctx = star_sequent(p.conclusion.remove(f, 1))
    if p.rule.name == "forallcl":
        q = star_proof(p.premises[0], env)
        param = fresh_param()
        body = subst_proof(q, p.rule.var, IndexParam(param))
        tmpl = PremiseTemplate(param, (), body)
        cur = vforall_node(head, tmpl, ())
    else:
        t = p.templates[0]
        body = star_proof(t.body, env)
        tmpl = PremiseTemplate(t.param, t.excluded, body)
        explicit = [(i, star_proof(q, env))
                    for i, q in zip(p.rule.indices, p.premises)]
        cur = vforall_node(head, tmpl, explicit)
    for d in dict.fromkeys(ctx.point_formulas()):
        cur = _contract_to(cur, d, ctx.multiplicity(d), env)
    return _wrap_vac_exists(cur, star_image(f), env)


# -- backward extraction -----------------------------------------------------

def extract_classical(p: Proof, env: Environment = EMPTY_ENV) -> Proof:
    """CL (or CL_INF) proof of |- A1,...,An from an ALV proof of
    |- A1*^infty, ..., An*^infty."""
    target, blocks = _image_split(p.conclusion)
    name = p.rule.name
    if name == "in":
        return ax(target)
    if name == "tensor":
        return _extract_tensor(p, target, blocks, env)
    if name == "par":
        return _extract_par(p, target, blocks, env)
    if name == "vforall":
        return _extract_forall(p, target, blocks, env)
    raise TransformError(f"extraction does not cover a {name} node")


def _image_split(m: Sequent):
    if m.families:
        raise TransformError("conclusion is not in the image shape")
    items = []
    for f, c in m.points:
        if not is_omega(c):
            raise TransformError("image copies must come in omega blocks")
        items.append((star_inverse(f), f))
    target = mset([(g, 1) for g, _ in items])
    return target, items


def _normalize_blocks(q: Proof, blocks, extra, env) -> Proof:
    """Weaken a premise so every image block is fully present."""
    want = mset([(f, OMEGA) for _, f in blocks] + list(extra))
    missing = want.diff(_cap(want, q.conclusion))
    return weaken(q, missing, env=env) if not missing.is_empty() else q


def _cap(want: OmegaMultiset, have: OmegaMultiset) -> OmegaMultiset:
    pts = []
    for f, c in want.points:
        h = have.multiplicity(f)
        take = h if (not is_omega(c) and not is_omega(h) and h < c) or \
            (is_omega(c) and not is_omega(h)) else c
        if take:
            pts.append((f, take))
    return mset(pts)


def _extract_tensor(p: Proof, target, blocks, env) -> Proof:
    head = p.rule.principal[0]
    cls = star_inverse(head)
    lefts = Exists(VAC, star_formula(cls.left))
    rights = Exists(VAC, star_formula(cls.right))
    q0 = _normalize_blocks(p.premises[0], blocks, [(lefts, 1)], env)
    q1 = _normalize_blocks(p.premises[1], blocks, [(rights, 1)], env)
    r0 = extract_classical(invert_exists_all(q0, lefts, env), env)
    r1 = extract_classical(invert_exists_all(q1, rights, env), env)
    out = and_node(r0, r1, cls)
    return contract_classical(out, cls, env)


def _extract_par(p: Proof, target, blocks, env) -> Proof:
    head = p.rule.principal[0]
    cls = star_inverse(head)
    lefts = Exists(VAC, star_formula(cls.left))
    rights = Exists(VAC, star_formula(cls.right))
    q = _normalize_blocks(p.premises[0], blocks,
                          [(lefts, 1), (rights, 1)], env)
    q = invert_exists_all(q, lefts, env)
    q = invert_exists_all(q, rights, env)
    r = extract_classical(q, env)
    out = or_node(r, cls)
    return contract_classical(out, cls, env)


def _extract_forall(p: Proof, target, blocks, env) -> Proof:
    head = p.rule.principal[0]          # forall x Ex%v A*
    cls = star_inverse(head)            # forall x A
    inner = head.body                   # Ex%v A*
    t = p.templates[0]
    sym_inst = subst(inner, head.var, IndexParam(t.param))
    body = _normalize_blocks(t.body, blocks, [(sym_inst, 1)], env)
    body = invert_exists_all(body, sym_inst, env)
    rbody = extract_classical(body, env)
    tmpl = PremiseTemplate(t.param, t.excluded, rbody)
    explicit = []
    for i, q in zip(p.rule.indices, p.premises):
        inst = subst(inner, head.var, EnumTerm(i))
        qq = _normalize_blocks(q, blocks, [(inst, 1)], env)
        qq = invert_exists_all(qq, inst, env)
        explicit.append((i, extract_classical(qq, env)))
    out = forallinfcl_node(cls, tmpl, explicit)
    return contract_classical(out, cls, env)


# -- classical contraction (admissible, used by the extractions) ------------

def contract_classical(p: Proof, f: Formula,
                       env: Environment = EMPTY_ENV) -> Proof:
    """From |- G, f, f build |- G, f in the classical calculi."""
    if p.conclusion.multiplicity(f) < 2:
        raise TransformError("nothing to contract")
    if isinstance(f, Lit):
        return _contract_lit(p, f, env)
    if isinstance(f, With):
        pa = contract_or_single(_cl_invert_and(p, f, 1, env), f.left, env)
        pb = contract_or_single(_cl_invert_and(p, f, 2, env), f.right, env)
        return and_node(pa, pb, f)
    if isinstance(f, Plus):
        q = _cl_invert_or(_cl_invert_or(p, f, env), f, env)
        q = contract_or_single(q, f.left, env)
        q = contract_or_single(q, f.right, env)
        return or_node(q, f)
    if isinstance(f, Forall):
        return _contract_forall_cl(p, f, env)
    if isinstance(f, Exists):
        return _contract_exists_cl(p, f, env)
    raise TransformError(f"no classical contraction for {f}")


def contract_or_single(p: Proof, f: Formula, env) -> Proof:
    return (contract_classical(p, f, env)
            if p.conclusion.multiplicity(f) >= 2 else p)


def _contract_lit(p: Proof, f: Lit, env) -> Proof:
    name = p.rule.name
    if name == "in":
        return ax(p.conclusion.remove(f, 1))
    kids = tuple(_contract_lit(q, f, env) for q in p.premises)
    temps = tuple(PremiseTemplate(t.param, t.excluded,
                                  _contract_lit(t.body, f, env))
                  for t in p.templates)
    return _cl_rebuild(p, kids, temps)


def _cl_invert_and(p: Proof, f: With, side: int, env) -> Proof:
    """From |- D, A&B recover |- D, A (side 1) or |- D, B (side 2)."""
    piece = f.left if side == 1 else f.right
    name = p.rule.name
    if name == "in":
        return ax(p.conclusion.remove(f, 1).add(piece))
    if name == "and" and alpha_eq(p.rule.principal[0], f):
        return p.premises[side - 1]
    kids = tuple(_cl_invert_and(q, f, side, env) for q in p.premises)
    temps = tuple(PremiseTemplate(t.param, t.excluded,
                                  _cl_invert_and(t.body, f, side, env))
                  for t in p.templates)
    return _cl_rebuild(p, kids, temps)


def _cl_invert_or(p: Proof, f: Plus, env) -> Proof:
    """From |- D, A|B recover |- D, A, B."""
    name = p.rule.name
    if name == "in":
        return ax(p.conclusion.remove(f, 1).add(f.left).add(f.right))
    if name == "or" and alpha_eq(p.rule.principal[0], f):
        return p.premises[0]
    kids = tuple(_cl_invert_or(q, f, env) for q in p.premises)
    temps = tuple(PremiseTemplate(t.param, t.excluded,
                                  _cl_invert_or(t.body, f, env))
                  for t in p.templates)
    return _cl_rebuild(p, kids, temps)


def _cl_invert_forall_at(p: Proof, f: Forall, witness: Term, env) -> Proof:
    """From |- D, forall x A recover |- D, A(witness/x)."""
    name = p.rule.name
    inst = subst(f.body, f.var, witness)
    if name == "in":
        return ax(p.conclusion.remove(f, 1).add(inst))
    if p.rule.principal and alpha_eq(p.rule.principal[0], f):
        if name == "forallcl":
            return subst_proof(p.premises[0], p.rule.var, witness)
        if name == "forallinfcl":
            if not isinstance(witness, EnumTerm):
                raise TransformError(
                    "omega-rule inversion needs an enumerated witness")
            i = witness.index
            for j, q in zip(p.rule.indices, p.premises):
                if j == i:
                    return q
            return instantiate_template(p.templates[0], i)
    kids = tuple(_cl_invert_forall_at(q, f, witness, env) for q in p.premises)
    temps = tuple(PremiseTemplate(t.param, t.excluded,
                                  _cl_invert_forall_at(t.body, f, witness, env))
                  for t in p.templates)
    return _cl_rebuild(p, kids, temps)


def _contract_forall_cl(p: Proof, f: Forall, env) -> Proof:
    name = p.rule.name
    if name == "in":
        return ax(p.conclusion.remove(f, 1))
    if p.rule.principal and alpha_eq(p.rule.principal[0], f) and \
            name in {"forallcl", "forallinfcl"}:
        if name == "forallcl":
            prem = p.premises[0]
            inst = subst(f.body, f.var, Var(p.rule.var))
            q = _cl_invert_forall_at(prem, f, Var(p.rule.var), env)
            q = contract_or_single(q, inst, env)
            return forallcl_node(q, f, p.rule.var)
        explicit = []
        for i, prem in zip(p.rule.indices, p.premises):
            inst = subst(f.body, f.var, EnumTerm(i))
            q = _cl_invert_forall_at(prem, f, EnumTerm(i), env)
            explicit.append((i, contract_or_single(q, inst, env)))
        t = p.templates[0]
        sym = IndexParam(t.param)
        inst = subst(f.body, f.var, sym)
        body = _cl_invert_forall_at(t.body, f, sym, env)
        body = contract_or_single(body, inst, env)
        return forallinfcl_node(f, PremiseTemplate(t.param, t.excluded, body),
                                explicit)
    kids = tuple(_contract_forall_cl(q, f, env) for q in p.premises)
    temps = tuple(PremiseTemplate(t.param, t.excluded,
                                  _contract_forall_cl(t.body, f, env))
                  for t in p.templates)
    return _cl_rebuild(p, kids, temps)


def _contract_exists_cl(p: Proof, f: Exists, env) -> Proof:
    name = p.rule.name
    if name == "in":
        return ax(p.conclusion.remove(f, 1))
    if p.rule.principal and alpha_eq(p.rule.principal[0], f) and \
            name == "existscl":
        q = _contract_exists_cl(p.premises[0], f, env)
        return exists_cl_node_like(p, q, f)
    kids = tuple(_contract_exists_cl(q, f, env) for q in p.premises)
    temps = tuple(PremiseTemplate(t.param, t.excluded,
                                  _contract_exists_cl(t.body, f, env))
                  for t in p.templates)
    return _cl_rebuild(p, kids, temps)


def exists_cl_node_like(p: Proof, q: Proof, f: Exists) -> Proof:
    from .builders import existscl_node
    return existscl_node(q, f, p.rule.term)


def _cl_rebuild(p: Proof, kids, temps) -> Proof:
    from .transforms import _reassemble
    name = p.rule.name
    if name == "forallinfcl":
        return forallinfcl_node(p.rule.principal[0], temps[0],
                                list(zip(p.rule.indices, kids)))
    if name == "existscl":
        from .builders import existscl_node
        return existscl_node(kids[0], p.rule.principal[0], p.rule.term)
    return _reassemble(p, kids, temps, EMPTY_ENV)


_cl_invert_forall = _cl_invert_forall_at


def _vac_forall(f: Formula) -> bool:
    return isinstance(f, Forall) and f.var not in free_vars(f.body)


# ---------------------------------------------------------------------------
# circ: ALE -> ALV

def circ_formula(f: Formula) -> Formula:
    _no_reserved(f)
    if isinstance(f, Lit):
        return f
    if isinstance(f, Tensor):
        return Tensor(circ_formula(f.left), circ_formula(f.right))
    if isinstance(f, Par):
        return Par(circ_formula(f.left), circ_formula(f.right))
    if isinstance(f, Quest):
        return Exists(VAC, circ_formula(f.body))
    if isinstance(f, Bang):
        return Forall(VAC, circ_formula(f.body))
    raise TransformError(
        f"circ covers the multiplicative-exponential fragment, not {f}")


def circ_inverse(f: Formula) -> Formula:
    if isinstance(f, Lit):
        return f
    if isinstance(f, Tensor):
        return Tensor(circ_inverse(f.left), circ_inverse(f.right))
    if isinstance(f, Par):
        return Par(circ_inverse(f.left), circ_inverse(f.right))
    if _vac_ex(f):
        return Quest(circ_inverse(f.body))
    if _vac_forall(f):
        return Bang(circ_inverse(f.body))
    raise TransformError(f"not a circ image: {f}")


def circ_sequent(m: Sequent) -> Sequent:
    return mset([(circ_formula(f), c) for f, c in m.points])


def circ_proof(p: Proof, env: Environment = EMPTY_ENV) -> Proof:
    name = p.rule.name
    if name == "in":
        return ax(circ_sequent(p.conclusion))
    if name == "par":
        f = p.rule.principal[0]
        return par_node(circ_proof(p.premises[0], env), circ_formula(f))
    if name == "tensor":
        f = p.rule.principal[0]
        return tensor_node(circ_proof(p.premises[0], env),
                           circ_proof(p.premises[1], env), circ_formula(f))
    if name == "quest":
        f = p.rule.principal[0]
        q = circ_proof(p.premises[0], env)
        img = circ_formula(f)
        q = weaken(q, mset([(img.body, OMEGA)]), env=env)
        return vexists_node(q, img)
    if name == "questc":
        f = p.rule.principal[0]
        q = circ_proof(p.premises[0], env)
        img = circ_formula(f)
        q = weaken(q, mset([(img, OMEGA)]), env=env)
        return contract_exists_inf(q, img, env)
    if name == "bang":
        f = p.rule.principal[0]
        q = circ_proof(p.premises[0], env)
        img = circ_formula(f)
        out = forall_from_single(q, img, env)
        delta = p.conclusion.remove(f, 1).diff(
            p.premises[0].conclusion.remove(f.body, 1))
        return weaken(out, circ_sequent(delta), env=env)
    raise TransformError(f"no circ transport for a {name} node")


def extract_ale(p: Proof, env: Environment = EMPTY_ENV) -> Proof:
    """ALE proof of |- G, ?A1, ..., ?An from an ALV proof of
    |- G°, A1°^infty, ..., An°^infty."""
    gamma, blocks = _circ_split(p.conclusion)
    name = p.rule.name
    if name == "in":
        base = ax(mset([(g, c) for g, c in gamma.points]
                       + [(a, 1) for a, _ in blocks]))
        cur = base
        for a, _ in blocks:
            cur = quest_node(cur, Quest(a))
        return cur
    if name == "par":
        head = p.rule.principal[0]
        q = extract_ale(p.premises[0], env)
        return par_node(q, circ_inverse(head))
    if name == "tensor":
        return _extract_ale_tensor(p, gamma, blocks, env)
    if name == "vexists":
        return _extract_ale_exists(p, gamma, blocks, env)
    if name == "vforall":
        return _extract_ale_forall(p, gamma, blocks, env)
    raise TransformError(f"ALE extraction does not cover a {name} node")


def _circ_split(m: Sequent):
    if m.families:
        raise TransformError("conclusion is not in the circ image shape")
    gamma_pts = []
    blocks = []
    for f, c in m.points:
        if is_omega(c):
            blocks.append((circ_inverse(f), f))
        else:
            gamma_pts.append((circ_inverse(f), c))
    return mset(gamma_pts), blocks


def _ale_blocks_full(q: Proof, blocks, extra, env) -> Proof:
    want = mset([(img, OMEGA) for _, img in blocks] + list(extra))
    missing = want.diff(_cap(want, q.conclusion))
    return weaken(q, missing, env=env) if not missing.is_empty() else q


def _extract_ale_tensor(p: Proof, gamma, blocks, env) -> Proof:
    head = p.rule.principal[0]
    cls = circ_inverse(head)
    q0 = _ale_blocks_full(p.premises[0], blocks, [(head.left, 1)], env)
    q1 = _ale_blocks_full(p.premises[1], blocks, [(head.right, 1)], env)
    r0 = extract_ale(q0, env)
    r1 = extract_ale(q1, env)
    out = tensor_node(r0, r1, cls)
    for a, _ in blocks:
        while out.conclusion.multiplicity(Quest(a)) >= 2:
            out = questc_node(out, Quest(a))
    return out


def _extract_ale_exists(p: Proof, gamma, blocks, env) -> Proof:
    head = p.rule.principal[0]          # Ex%v B°
    quest = circ_inverse(head)          # ?B
    inner = head.body
    q = extract_ale(p.premises[0], env)
    # the premise swapped the principal copy for B°^infty, so q ends in ?B
    if p.conclusion.multiplicity(head) >= 1 and \
            not is_omega(p.conclusion.multiplicity(head)):
        # the principal copy came from the finite part: |- G', ?B, ?A-list
        return q
    # the copy came from a block: requote and contract
    q = quest_node(q, Quest(quest))
    while q.conclusion.multiplicity(Quest(quest)) >= 2:
        q = questc_node(q, Quest(quest))
    return q


def _extract_ale_forall(p: Proof, gamma, blocks, env) -> Proof:
    head = p.rule.principal[0]          # Forall %v B°
    bang = circ_inverse(head)           # !B
    t = p.templates[0]
    inst = _ale_blocks_full(instantiate_template(
        t, _free_template_index(p)), blocks, [(head.body, 1)], env)
    want = mset([(img, OMEGA) for _, img in blocks]).add(head.body)
    if inst.conclusion != want:
        raise TransformError(
            "no empty-context premise available for the bang step")
    rec = extract_ale(inst, env)
    from_finite = (p.conclusion.multiplicity(head) >= 1 and
                   not is_omega(p.conclusion.multiplicity(head)))
    delta = [g for g, c in gamma.points for _ in range(int(c))]
    if from_finite:
        delta.remove(bang)
        out = bang_node(rec, bang, delta)
        return out
    out = bang_node(rec, bang, delta)
    out = quest_node(out, Quest(bang))
    while out.conclusion.multiplicity(Quest(bang)) >= 2:
        out = questc_node(out, Quest(bang))
    return out


def _free_template_index(p: Proof) -> int:
    used = set(p.templates[0].excluded)
    i = 1
    while i in used:
        i += 1
    return i


# ---------------------------------------------------------------------------
# tau: membership atoms -> satisfaction predicates

MEMBER_PRED = "in"


def member(t: Term, s: Term) -> Lit:
    return Lit(True, MEMBER_PRED, (t, s))


def tau(f: Formula, env: Environment = EMPTY_ENV) -> Formula:
    """Leaves literals unchanged, commutes with everything, and maps
    t in (lam x A) to the matching unary satisfaction atom."""
    if isinstance(f, Lit) and f.pred == MEMBER_PRED:
        if len(f.args) != 2:
            raise TransformError("membership atoms are binary")
        t, s = f.args
        lam = env.resolve(s) if not isinstance(s, LambdaName) else s
        if not (isinstance(lam, LambdaName) and len(lam.binders) == 1):
            raise TransformError("membership needs a unary abstraction")
        m = len(free_vars(lam.body))
        return SatAtom(f.positive, 1, m, s, (t,))
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, (Tensor, Par, Plus, With)):
        return type(f)(tau(f.left, env), tau(f.right, env))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, tau(f.body, env))
    if isinstance(f, (Box, Diamond, Bang, Quest)):
        return type(f)(tau(f.body, env))
    raise TransformError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# demodalize: dissolve box/diamond into a designated guard atom

def demodalize(f: Formula, designated: str = "P") -> Formula:
    """box A becomes (P par ~P) (x) A', diamond A becomes (~P (x) P) par A';
    the clause pair is chosen so the map commutes with negation."""
    g = Lit(True, designated)
    if isinstance(f, Box):
        return Tensor(Par(g, neg(g)), demodalize(f.body, designated))
    if isinstance(f, Diamond):
        return Par(Tensor(neg(g), g), demodalize(f.body, designated))
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, (Tensor, Par, Plus, With)):
        return type(f)(demodalize(f.left, designated),
                       demodalize(f.right, designated))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, demodalize(f.body, designated))
    if isinstance(f, (Bang, Quest)):
        return type(f)(demodalize(f.body, designated))
    raise TransformError(f"not a formula: {f!r}")
