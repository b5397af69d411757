"""Rule systems, proof trees with schematic omega-branching, and the checker.

A proof node carries its conclusion, a rule instance, finitely many
explicit premises and optionally premise templates: index-parameterized
subproofs standing for cofinitely many premises at once.  Templates are
checked symbolically, treating the index parameter as an opaque fresh
term; instantiating any admissible index then yields a locally correct
premise (all multiset checks are congruences under index substitution).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .errors import IllFormedError, RuleError
from .sequents import (
    EMPTY, Family, OMEGA, PARAM, OmegaMultiset, Sequent, family, family_union,
    instance_block, instantiate_multiset, mset, seq,
)
from .syntax import (
    ATOMS, Bang, Box, Diamond, EMPTY_ENV, EnumTerm, Environment, Exists,
    Forall, Formula, IndexParam, LambdaName, Lit, Par, Plus, Quest, SatAtom,
    Tensor, Term, TruthAtom, Var, With, alpha_eq, check_sat_abstraction,
    free_vars, has_index_param, is_atom, neg, subst, subst_index, subst_many,
)

# ---------------------------------------------------------------------------
# Calculi

@dataclass(frozen=True)
class CalculusId:
    kind: str
    n: Optional[int] = None
    m: Optional[int] = None

    def __str__(self):
        if self.kind == "UTS" and self.n is not None:
            return f"UTS({self.n},{self.m})"
        return self.kind


AL = CalculusId("AL")
LL = CalculusId("LL")
ALV = CalculusId("ALV")
ALE = CalculusId("ALE")
ALE_T = CalculusId("ALE_T")
CL = CalculusId("CL")
CL_INF = CalculusId("CL_INF")
UTS = CalculusId("UTS")
UTS_K4 = CalculusId("UTS_K4")
IZ_OMEGA = CalculusId("IZ_OMEGA")
IK_OMEGA = CalculusId("IK_OMEGA")
IKT_OMEGA = CalculusId("IKT_OMEGA")


def uts(n: int, m: int) -> CalculusId:
    return CalculusId("UTS", n, m)


_ALIASES = {
    "al": AL, "ll": LL, "alv": ALV, "ale": ALE, "ale_t": ALE_T, "alet": ALE_T,
    "cl": CL, "cl_inf": CL_INF, "clw": CL_INF, "uts": UTS, "uts_k4": UTS_K4,
    "utsk4": UTS_K4, "iz_omega": IZ_OMEGA, "izw": IZ_OMEGA,
    "ik_omega": IK_OMEGA, "ikw": IK_OMEGA, "ikt_omega": IKT_OMEGA,
    "iktw": IKT_OMEGA,
}


def parse_calculus(text: str) -> CalculusId:
    t = text.strip()
    low = t.lower().replace("-", "_")
    if low in _ALIASES:
        return _ALIASES[low]
    if low.startswith("uts(") and low.endswith(")"):
        try:
            n, m = (int(x) for x in low[4:-1].split(","))
            return uts(n, m)
        except ValueError:
            pass
    raise RuleError(f"unknown calculus {text!r}")


# Rules available per calculus.  `cut`/`cutinf` appear only where the
# system is not cut-free by definition (UTS_K4, the liar system ALE_T) or
# where cuts arrive as elimination inputs (IK/IKT).
_AL_CORE = frozenset({"in", "par", "tensor", "plus1", "plus2", "with",
                      "forall", "exists"})
_RULESETS: dict[str, frozenset[str]] = {
    "AL": _AL_CORE,
    "LL": _AL_CORE,
    "ALV": _AL_CORE | {"vforall", "vexists"},
    "ALE": _AL_CORE | {"quest", "questc", "bang"},
    "ALE_T": _AL_CORE | {"quest", "questc", "bang", "t", "tbar", "alias", "cut"},
    "CL": frozenset({"in", "and", "or", "existscl", "forallcl"}),
    "CL_INF": frozenset({"in", "and", "or", "existscl", "forallcl", "forallinfcl"}),
    "UTS": _AL_CORE | {"sat", "satbar", "t", "tbar", "alias"},
    "UTS_K4": _AL_CORE | {"sat", "satbar", "t", "tbar", "alias", "nec",
                          "boxtensor", "cut"},
    "IZ_OMEGA": frozenset({"in", "par", "tensor", "vforall", "vexists"}),
    "IK_OMEGA": frozenset({"in", "par", "tensor", "vforall", "vexists",
                           "cut", "cutinf"}),
    "IKT_OMEGA": frozenset({"in", "par", "tensor", "vforall", "vexists",
                            "t", "tbar", "alias", "cut", "cutinf"}),
}

_FINITE_SEQUENTS = {"AL", "LL", "ALE", "ALE_T", "CL", "CL_INF", "UTS", "UTS_K4"}

# Connectives admitted in each calculus's language.
_LANG = {
    "AL": (Lit, Tensor, Par, Plus, With, Forall, Exists),
    "LL": (Lit, Tensor, Par, Plus, With, Forall, Exists),
    "ALV": (Lit, Tensor, Par, Plus, With, Forall, Exists),
    "ALE": (Lit, Tensor, Par, Plus, With, Forall, Exists, Bang, Quest),
    "ALE_T": (Lit, Tensor, Par, Plus, With, Forall, Exists, Bang, Quest, TruthAtom),
    "CL": (Lit, With, Plus, Forall, Exists),
    "CL_INF": (Lit, With, Plus, Forall, Exists),
    "UTS": (Lit, Tensor, Par, Plus, With, Forall, Exists, SatAtom, TruthAtom),
    "UTS_K4": (Lit, Tensor, Par, Plus, With, Forall, Exists, SatAtom,
               TruthAtom, Box, Diamond),
    "IZ_OMEGA": (Lit, Tensor, Par, Forall, Exists, SatAtom),
    "IK_OMEGA": (Lit, Tensor, Par, Forall, Exists),
    "IKT_OMEGA": (Lit, Tensor, Par, Forall, Exists, TruthAtom),
}


def rule_table(calc: CalculusId) -> list[dict]:
    """The closed rule list for a calculus, as schema descriptions."""
    names = sorted(_RULESETS[calc.kind])
    out = []
    for name in names:
        entry = {"rule": name, "schema": _SCHEMAS[name]}
        if name == "in":
            entry["schema"] = ("|- P, ~P" if calc.kind == "LL"
                               else "|- Gamma, P, ~P")
        if name in {"sat", "satbar"}:
            if calc.kind == "UTS" and calc.n is not None:
                entry["restriction"] = f"n={calc.n}, m={calc.m}"
            else:
                entry["restriction"] = "all n, m"
        out.append(entry)
    return out


_SCHEMAS = {
    "in": "|- Gamma, P, ~P",
    "par": "|- G,A,B  =>  |- G, par(A,B)",
    "tensor": "|- G,A  |- D,B  =>  |- G,D, tensor(A,B)",
    "plus1": "|- G,A1  =>  |- G, plus(A1,A2)",
    "plus2": "|- G,A2  =>  |- G, plus(A1,A2)",
    "with": "|- G,A  |- G,B  =>  |- G, with(A,B)",
    "forall": "|- G,A(y/x)  =>  |- G, forall x A   (y fresh)",
    "exists": "|- G,A(t/x)  =>  |- G, exists x A",
    "vforall": "|- G_i, A(t_i/x) for all i  =>  |- U_i G_i, forall x A",
    "vexists": "|- G, A(t_1/x), A(t_2/x), ...  =>  |- G, exists x A",
    "sat": "|- G, A(ts/xs)  =>  |- G, sat+(n,m)(lam xs A, ts)",
    "satbar": "|- G, ~A(ts/xs)  =>  |- G, sat-(n,m)(lam xs A, ts)",
    "t": "|- G, A  =>  |- G, T(<A>)",
    "tbar": "|- G, ~A  =>  |- G, ~T(<A>)",
    "nec": "|- dia G, G, A  =>  |- D, dia G, box A",
    "boxtensor": "|- dia G, D, A  |- dia G, T, B  =>  |- dia G, D, T, tensor(A,B)",
    "bang": "|- ?G, A  =>  |- D, ?G, !A",
    "quest": "|- G, A  =>  |- G, ?A",
    "questc": "|- G, ?A, ?A  =>  |- G, ?A",
    "cut": "|- G,A  |- D,~A  =>  |- G,D",
    "cutinf": "|- G,Phi  { |- D_f, ~f : f in Phi }  =>  |- G, U_f D_f",
    "alias": "|- G  =>  |- G   (notational variant step)",
    "and": "|- G,A  |- G,B  =>  |- G, and(A,B)",
    "or": "|- G,A,B  =>  |- G, or(A,B)",
    "existscl": "|- G, exists x A, A(t/x)  =>  |- G, exists x A",
    "forallcl": "|- G, A(y/x)  =>  |- G, forall x A   (y fresh)",
    "forallinfcl": "|- G, A(t_i/x) for all i  =>  |- G, forall x A",
}

# ---------------------------------------------------------------------------
# Proof objects

@dataclass(frozen=True)
class BlockSpec:
    """One uniform block of cut formulas: `template` at every index not
    excluded; a parameter-free template means omega copies of it."""

    template: Formula
    excluded: tuple[int, ...] = ()


@dataclass(frozen=True)
class RuleInstance:
    name: str
    principal: tuple[Formula, ...] = ()
    term: Optional[Term] = None
    var: Optional[str] = None
    context: Optional[tuple[Formula, ...]] = None
    indices: tuple[int, ...] = ()            # explicit premise indices (omega rules)
    phi_points: tuple[Formula, ...] = ()
    phi_blocks: tuple[BlockSpec, ...] = ()
    note: str = ""


@dataclass(frozen=True)
class PremiseTemplate:
    param: str
    excluded: tuple[int, ...]
    body: "Proof"


@dataclass(frozen=True)
class Proof:
    conclusion: Sequent
    rule: RuleInstance
    premises: tuple["Proof", ...] = ()
    templates: tuple[PremiseTemplate, ...] = ()

    def size(self) -> int:
        return (1 + sum(p.size() for p in self.premises)
                + sum(t.body.size() for t in self.templates))


@dataclass(frozen=True)
class CheckReport:
    accepted: bool
    path: Optional[tuple[str, ...]] = None
    reason: Optional[str] = None

    def __bool__(self):
        return self.accepted


def is_cut_free(p: Proof) -> bool:
    if p.rule.name in {"cut", "cutinf"}:
        return False
    return (all(is_cut_free(q) for q in p.premises)
            and all(is_cut_free(t.body) for t in p.templates))


def phi_multiset(r: RuleInstance) -> OmegaMultiset:
    """The multiset of cut formulas of a cutinf instance."""
    fams = []
    points = list(r.phi_points)
    for spec in r.phi_blocks:
        if has_index_param(spec.template, PARAM):
            fams.append(Family(spec.template, 1,
                               tuple((i, 0) for i in spec.excluded)))
        else:
            points.append((spec.template, OMEGA))
    return mset(points, fams)


# ---------------------------------------------------------------------------
# The checker

_ARITY = {
    "in": 0,
    "par": 1, "plus1": 1, "plus2": 1, "exists": 1, "forall": 1, "vexists": 1,
    "quest": 1, "questc": 1, "sat": 1, "satbar": 1, "t": 1, "tbar": 1,
    "alias": 1, "bang": 1, "or": 1, "existscl": 1, "forallcl": 1, "nec": 1,
    "tensor": 2, "with": 2, "and": 2, "cut": 2, "boxtensor": 2,
}


class _Fail(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def check(p: Proof, calc: CalculusId, env: Environment = EMPTY_ENV) -> CheckReport:
    """Local-correctness check of every node, template nodes symbolically."""
    try:
        _check_node(p, calc, env, (), frozenset())
    except _CheckFailure as f:
        return CheckReport(False, f.path, f.reason)
    return CheckReport(True)


class _CheckFailure(Exception):
    def __init__(self, path, reason):
        super().__init__(reason)
        self.path = path
        self.reason = reason


def _fail(path, reason):
    raise _CheckFailure(path, reason)


def _check_node(p: Proof, calc: CalculusId, env: Environment, path, params):
    name = p.rule.name
    if name not in _RULESETS[calc.kind]:
        _fail(path, f"rule {name!r} is not part of {calc}")
    if calc.kind in _FINITE_SEQUENTS and not p.conclusion.is_finite():
        _fail(path, f"{calc} sequents must be finite multisets")
    for f in p.rule.principal:
        if not _language_ok(f, calc.kind):
            _fail(path, f"formula outside the {calc} language: {f}")
    expected = _ARITY.get(name)
    if expected is not None and (len(p.premises) != expected or
                                 (p.templates and name not in _OMEGA_RULES)):
        _fail(path, f"rule {name} expects {expected} premises, "
                    f"got {len(p.premises)} (+{len(p.templates)} templates)")
    try:
        _RULE_CHECKS[name](p, calc, env)
    except _Fail as f:
        _fail(path, f.reason)
    except IllFormedError as e:
        _fail(path, str(e))
    # recurse
    for i, q in enumerate(p.premises):
        _check_node(q, calc, env, path + (f"prem[{i}]",), params)
    for i, t in enumerate(p.templates):
        if t.param in params:
            _fail(path, f"shadowed template parameter {t.param!r}")
        _check_node(t.body, calc, env, path + (f"template[{i}]",),
                    params | {t.param})


_OMEGA_RULES = {"vforall", "forallinfcl", "cutinf"}


def _language_ok(f, kind: str) -> bool:
    allowed = _LANG[kind]
    def walk(g) -> bool:
        if not isinstance(g, allowed):
            return False
        from .syntax import BINARY, QUANTIFIERS, UNARY
        if isinstance(g, BINARY):
            return walk(g.left) and walk(g.right)
        if isinstance(g, (*QUANTIFIERS, *UNARY)):
            return walk(g.body)
        return True
    return walk(f)


def _principal(p: Proof, want=None) -> Formula:
    if len(p.rule.principal) != 1:
        raise _Fail(f"rule {p.rule.name} needs exactly one principal formula")
    f = p.rule.principal[0]
    if want is not None and not isinstance(f, want):
        raise _Fail(f"principal formula of {p.rule.name} has the wrong shape: {f}")
    if p.conclusion.multiplicity(f) < 1:
        raise _Fail(f"principal formula not in the conclusion: {f}")
    return f


def _expect(cond: bool, reason: str):
    if not cond:
        raise _Fail(reason)


def _eq(actual: Sequent, expected: Sequent, what: str):
    if actual != expected:
        raise _Fail(f"{what}: premise should be {expected} but is {actual}")


def _remove1(m: Sequent, f: Formula, what: str) -> Sequent:
    try:
        return m.remove(f, 1)
    except IllFormedError:
        raise _Fail(f"{what}: formula {f} not available in {m}") from None


# -- individual rules -------------------------------------------------------

def _chk_in(p, calc, env):
    concl = p.conclusion
    if calc.kind == "LL":
        _expect(concl.is_finite() and concl.total_finite_size() == 2,
                "linear initial sequents carry no context")
    lits_only = calc.kind in {"CL", "CL_INF"}
    ok = (lambda f: isinstance(f, Lit)) if lits_only else is_atom
    cands = [f for f, _ in concl.points if ok(f)]
    cands += [fam.template for fam in concl.families if ok(fam.template)]
    # dual atoms differ in polarity, so positive multiplicity on both
    # sides already names two distinct occurrences
    for f in cands:
        if concl.multiplicity(f) >= 1 and concl.multiplicity(neg(f)) >= 1:
            return
    raise _Fail("no dual pair of atoms in the initial sequent")


def _try_remove(m, f):
    try:
        return m.remove(f, 1)
    except IllFormedError:
        return None


def _chk_par(p, calc, env):
    f = _principal(p, Par)
    want = _remove1(p.conclusion, f, "par").add(f.left).add(f.right)
    _eq(p.premises[0].conclusion, want, "par")


def _chk_tensor(p, calc, env):
    f = _principal(p, Tensor)
    left = _remove1(p.premises[0].conclusion, f.left, "tensor left")
    right = _remove1(p.premises[1].conclusion, f.right, "tensor right")
    _eq(left.union(right).add(f), p.conclusion, "tensor context split")


def _chk_plus(which):
    def chk(p, calc, env):
        f = _principal(p, Plus)
        piece = f.left if which == 1 else f.right
        want = _remove1(p.conclusion, f, "plus").add(piece)
        _eq(p.premises[0].conclusion, want, "plus")
    return chk


def _chk_with(p, calc, env):
    f = _principal(p, With)
    base = _remove1(p.conclusion, f, "with")
    _eq(p.premises[0].conclusion, base.add(f.left), "with left")
    _eq(p.premises[1].conclusion, base.add(f.right), "with right")


def _chk_forall_fin(p, calc, env):
    f = _principal(p, Forall)
    y = p.rule.var
    _expect(y is not None, "finitary forall needs an eigenvariable")
    for g in _all_support(p.conclusion):
        _expect(y not in free_vars(g),
                f"eigenvariable {y} occurs free in the conclusion")
    want = _remove1(p.conclusion, f, "forall").add(subst(f.body, f.var, Var(y)))
    _eq(p.premises[0].conclusion, want, "forall")


def _all_support(m):
    for f, _ in m.points:
        yield f
    for fam in m.families:
        yield fam.template


def _chk_exists_fin(p, calc, env):
    f = _principal(p, Exists)
    t = p.rule.term
    _expect(t is not None, "finitary exists needs a witness term")
    _expect(isinstance(t, (EnumTerm, IndexParam, Var)),
            "exists witnesses range over the term enumeration")
    want = _remove1(p.conclusion, f, "exists").add(subst(f.body, f.var, t))
    _eq(p.premises[0].conclusion, want, "exists")


def _chk_vexists(p, calc, env):
    f = _principal(p, Exists)
    want = _remove1(p.conclusion, f, "vexists").union(
        instance_block(f.body, f.var))
    _eq(p.premises[0].conclusion, want, "vexists")


def _chk_vforall(p, calc, env):
    f = _principal(p, Forall)
    base = _remove1(p.conclusion, f, "vforall")
    total, covered = _omega_union(p, f.body, f.var, "vforall")
    _eq(total, base, "vforall context union")
    _expect(covered, "omega rule requires a premise template covering "
                     "cofinitely many indices")


def _omega_union(p, body, var, what):
    """Union of premise contexts of an omega-branching introduction."""
    indices = _explicit_indices(p)
    total = EMPTY
    for label, q in zip(indices, p.premises):
        inst = subst(body, var, EnumTerm(label))
        total = total.union(_remove1(q.conclusion, inst, f"{what}[{label}]"))
    covered = False
    for t in p.templates:
        _expect(set(t.excluded) == set(indices),
                f"{what}: template exclusions {t.excluded} must match the "
                f"explicit premise indices {indices}")
        inst = subst(body, var, IndexParam(t.param))
        ctx = _remove1(t.body.conclusion, inst, f"{what}[{t.param}]")
        total = total.union(family_union(ctx, t.param, t.excluded))
        covered = True
    return total, covered


def _explicit_indices(p) -> tuple[int, ...]:
    _expect(len(p.rule.indices) == len(p.premises),
            "omega rules must label each explicit premise with its index")
    _expect(len(set(p.rule.indices)) == len(p.rule.indices),
            "duplicate explicit premise indices")
    return p.rule.indices


def _chk_sat(positive):
    def chk(p, calc, env):
        f = _principal(p, SatAtom)
        _expect(f.positive == positive, "sat rule polarity mismatch")
        if calc.kind == "UTS" and calc.n is not None:
            _expect((f.arity, f.mfree) == (calc.n, calc.m),
                    f"{calc} only carries Sat({calc.n},{calc.m})")
        lam = env.resolve(f.abstraction)
        _expect(isinstance(lam, LambdaName),
                "sat abstraction must be (or unfold to) a lambda name")
        check_sat_abstraction(lam, f.arity, f.mfree)
        inst = subst_many(lam.body, list(zip(lam.binders, f.args)))
        if not positive:
            inst = neg(inst)
        want = _remove1(p.conclusion, f, "sat").add(inst)
        _eq(p.premises[0].conclusion, want, "sat")
    return chk


def _chk_truth(positive):
    def chk(p, calc, env):
        f = _principal(p, TruthAtom)
        _expect(f.positive == positive, "truth rule polarity mismatch")
        lam = env.resolve(f.arg)
        _expect(isinstance(lam, LambdaName) and len(lam.binders) == 1,
                "truth argument must name a sentence (unary lambda)")
        _expect(not free_vars(lam.body),
                "the named formula must be a sentence")
        inst = lam.body if positive else neg(lam.body)
        want = _remove1(p.conclusion, f, "truth").add(inst)
        _eq(p.premises[0].conclusion, want, "truth")
    return chk


def _chk_nec(p, calc, env):
    f = _principal(p, Box)
    _expect(p.rule.context is not None, "nec carries its weakened context")
    delta = mset(list(p.rule.context))
    try:
        diag = p.conclusion.diff(delta).remove(f, 1)
    except IllFormedError:
        raise _Fail("nec conclusion does not contain its declared context") from None
    gammas = []
    for g, c in diag.points:
        _expect(isinstance(g, Diamond), f"nec context member {g} is not diamonded")
        gammas.extend([g.body] * int(c))
    _expect(not diag.families, "nec contexts are finite")
    want = diag.union(mset(gammas)).add(f.body)
    _eq(p.premises[0].conclusion, want, "nec")


def _chk_boxtensor(p, calc, env):
    f = _principal(p, Tensor)
    _expect(p.rule.context is not None, "boxtensor carries its shared context")
    shared = mset(list(p.rule.context))
    for g, _ in shared.points:
        _expect(isinstance(g, Diamond), f"shared context member {g} is not diamonded")
    try:
        c0 = p.premises[0].conclusion.diff(shared).remove(f.left, 1)
        c1 = p.premises[1].conclusion.diff(shared).remove(f.right, 1)
    except IllFormedError:
        raise _Fail("boxtensor premises do not share the declared context") from None
    _eq(shared.union(c0).union(c1).add(f), p.conclusion, "boxtensor")


def _chk_bang(p, calc, env):
    f = _principal(p, Bang)
    prem = p.premises[0].conclusion
    qctx = _remove1(prem, f.body, "bang")
    for g in _all_support(qctx):
        _expect(isinstance(g, Quest), "bang context must be ?-prefixed")
    try:
        p.conclusion.diff(qctx).remove(f, 1)
    except IllFormedError:
        raise _Fail("bang conclusion must contain ?-context and !A") from None


def _chk_quest(p, calc, env):
    f = _principal(p, Quest)
    want = _remove1(p.conclusion, f, "quest").add(f.body)
    _eq(p.premises[0].conclusion, want, "quest")


def _chk_questc(p, calc, env):
    f = _principal(p, Quest)
    _eq(p.premises[0].conclusion, p.conclusion.add(f), "quest contraction")


def _chk_cut(p, calc, env):
    f = _principal_cut(p)
    left = _remove1(p.premises[0].conclusion, f, "cut left")
    right = _remove1(p.premises[1].conclusion, neg(f), "cut right")
    _eq(left.union(right), p.conclusion, "cut")


def _principal_cut(p) -> Formula:
    if len(p.rule.principal) != 1:
        raise _Fail("cut needs its cut formula as principal")
    return p.rule.principal[0]


def _chk_cutinf(p, calc, env):
    _expect(len(p.premises) == 1 + len(p.rule.phi_points),
            "cutinf premise count must match its point cut formulas")
    _expect(len(p.templates) == len(p.rule.phi_blocks),
            "cutinf template count must match its block cut formulas")
    phi = phi_multiset(p.rule)
    left = p.premises[0].conclusion
    try:
        gamma = left.diff(phi)
    except IllFormedError:
        raise _Fail("cut multiset is not contained in the left premise") from None
    delta = EMPTY
    for f, q in zip(p.rule.phi_points, p.premises[1:]):
        delta = delta.union(_remove1(q.conclusion, neg(f), "cutinf right"))
    for spec, t in zip(p.rule.phi_blocks, p.templates):
        _expect(set(spec.excluded) == set(t.excluded),
                "block exclusions must match the template's")
        cutf = subst_index(spec.template, PARAM, IndexParam(t.param))
        ctx = _remove1(t.body.conclusion, neg(cutf), "cutinf right family")
        delta = delta.union(family_union(ctx, t.param, t.excluded))
    _eq(gamma.union(delta), p.conclusion, "cutinf")


def _chk_alias(p, calc, env):
    _eq(p.premises[0].conclusion, p.conclusion, "alias")


def _chk_and(p, calc, env):
    f = _principal(p, With)
    base = _remove1(p.conclusion, f, "and")
    _eq(p.premises[0].conclusion, base.add(f.left), "and left")
    _eq(p.premises[1].conclusion, base.add(f.right), "and right")


def _chk_or(p, calc, env):
    f = _principal(p, Plus)
    want = _remove1(p.conclusion, f, "or").add(f.left).add(f.right)
    _eq(p.premises[0].conclusion, want, "or")


def _chk_existscl(p, calc, env):
    f = _principal(p, Exists)
    t = p.rule.term
    _expect(t is not None, "classical exists needs a witness term")
    want = p.conclusion.add(subst(f.body, f.var, t))
    _eq(p.premises[0].conclusion, want, "classical exists")


def _chk_forallcl(p, calc, env):
    _chk_forall_fin(p, calc, env)


def _chk_forallinfcl(p, calc, env):
    f = _principal(p, Forall)
    base = _remove1(p.conclusion, f, "forallinfcl")
    indices = _explicit_indices(p)
    for label, q in zip(indices, p.premises):
        inst = subst(f.body, f.var, EnumTerm(label))
        _eq(q.conclusion, base.add(inst), f"forallinfcl[{label}]")
    _expect(len(p.templates) == 1, "infinitary classical forall needs a template")
    t = p.templates[0]
    _expect(set(t.excluded) == set(indices),
            "template exclusions must match the explicit premise indices")
    inst = subst(f.body, f.var, IndexParam(t.param))
    _eq(t.body.conclusion, base.add(inst), "forallinfcl template")


_RULE_CHECKS = {
    "in": _chk_in,
    "par": _chk_par,
    "tensor": _chk_tensor,
    "plus1": _chk_plus(1),
    "plus2": _chk_plus(2),
    "with": _chk_with,
    "forall": _chk_forall_fin,
    "exists": _chk_exists_fin,
    "vforall": _chk_vforall,
    "vexists": _chk_vexists,
    "sat": _chk_sat(True),
    "satbar": _chk_sat(False),
    "t": _chk_truth(True),
    "tbar": _chk_truth(False),
    "nec": _chk_nec,
    "boxtensor": _chk_boxtensor,
    "bang": _chk_bang,
    "quest": _chk_quest,
    "questc": _chk_questc,
    "cut": _chk_cut,
    "cutinf": _chk_cutinf,
    "alias": _chk_alias,
    "and": _chk_and,
    "or": _chk_or,
    "existscl": _chk_existscl,
    "forallcl": _chk_forallcl,
    "forallinfcl": _chk_forallinfcl,
}
