"""Terminating proof search and refutation.

* decide_al: complete backward search for propositional AL/LL (and the
  exponential fragment of ALE under a contraction budget);
* search_cl: complete backward search for classical propositional logic;
* decide_k4_cutfree: exhaustive cut-free backward search for the
  quantifier-free modal-truth fragment, with on-path repetition pruning;
* refute_schematic: bounded schematic search over omega-sequents in the
  multiplicative-quantifier system, sound for refutation on the supported
  shapes and `unknown` elsewhere.

Every `provable` verdict carries a proof the checker accepts.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .builders import (
    ax, bang_node, boxtensor_node, nec_node, or_node, and_node, par_node,
    plus_node, quest_node, questc_node, sat_node, tensor_node, truth_node,
    vexists_node, vforall_node, with_node, fresh_param,
)
from .calculi import (
    AL, ALE, CL, CalculusId, IK_OMEGA, LL, PremiseTemplate, Proof, UTS_K4,
    check, uts,
)
from .errors import SearchError, TransformError
from .measures import depth
from .sequents import (
    EMPTY, OMEGA, PARAM, OmegaMultiset, instance_block, is_omega, mset, seq,
)
from .syntax import (
    ATOMS, Bang, Box, Diamond, EMPTY_ENV, EnumTerm, Environment, Exists,
    Forall, Formula, IndexParam, LambdaName, Lit, Par, Plus, Quest, SatAtom,
    Tensor, TruthAtom, Var, With, alpha_eq, alpha_key, free_vars, is_atom,
    neg, subst,
)


@dataclass
class SearchStats:
    nodes: int = 0
    rule_instances: int = 0

    def as_dict(self):
        return {"nodes_visited": self.nodes,
                "rule_instances_tried": self.rule_instances}


@dataclass(frozen=True)
class RefutationCertificate:
    target: OmegaMultiset
    calculus: CalculusId
    search_bound: str
    stats: dict
    verdict: str                      # "refuted" | "provable" | "unknown"
    proof: Optional[Proof] = None

    def as_dict(self):
        return {"target": str(self.target), "calculus": str(self.calculus),
                "search_bound": self.search_bound, "stats": self.stats,
                "verdict": self.verdict}


def _axiom_pair_present(m: OmegaMultiset, lits_only=False) -> bool:
    # dual atoms differ in polarity, so two distinct occurrences are
    # guaranteed whenever both multiplicities are positive
    ok = (lambda f: isinstance(f, Lit)) if lits_only else is_atom
    cands = [f for f, _ in m.points if ok(f)]
    cands += [fam.template for fam in m.families if ok(fam.template)]
    return any(m.multiplicity(f) >= 1 and m.multiplicity(neg(f)) >= 1
               for f in cands)


def _sub_multisets(items: list) -> Iterator[tuple]:
    """All sub-multisets of a list of formulas (as index subsets)."""
    for bits in itertools.product((False, True), repeat=len(items)):
        yield tuple(f for f, b in zip(items, bits) if b)


def _expand(m: OmegaMultiset) -> list:
    out = []
    for f, c in m.points:
        out.extend([f] * int(c))
    return out


# ---------------------------------------------------------------------------
# decide_al: propositional affine/linear logic (+ exponentials with budget)

def decide_al(s: OmegaMultiset, calc: CalculusId = AL,
              quest_budget: int = 4, env: Environment = EMPTY_ENV):
    """Complete decision for finite propositional AL/LL sequents; for ALE a
    per-branch contraction budget bounds the search (sound both ways up to
    that budget, and the refuted verdicts below stay within it)."""
    if calc.kind not in {"AL", "LL", "ALE"}:
        raise SearchError(f"decide_al does not handle {calc}")
    if not s.is_finite():
        raise SearchError("decide_al expects a finite sequent")
    for f, _ in s.points:
        _check_propositional(f, exponentials=calc.kind == "ALE")
    stats = SearchStats()
    memo: dict = {}

    def solve(m: OmegaMultiset, budget: int) -> Optional[Proof]:
        key = (m, budget if calc.kind == "ALE" else 0)
        if key in memo:
            return memo[key]
        memo[key] = None  # cycle guard: treat in-progress goals as failed
        stats.nodes += 1
        out = None
        if calc.kind == "LL":
            if (m.is_finite() and m.total_finite_size() == 2 and
                    _axiom_pair_present(m)):
                out = ax(m)
        elif _axiom_pair_present(m):
            out = ax(m)
        if out is None:
            out = _try_rules(m, budget, solve, calc, stats)
        memo[key] = out
        return out

    proof = solve(s, quest_budget)
    if proof is not None:
        return proof
    cert = RefutationCertificate(
        s, calc, f"exhaustive backward search"
        + (f", contraction budget {quest_budget}" if calc.kind == "ALE" else ""),
        stats.as_dict(), "refuted")
    return cert


def _check_propositional(f: Formula, exponentials: bool):
    if isinstance(f, Lit):
        return
    if isinstance(f, (Tensor, Par, Plus, With)):
        _check_propositional(f.left, exponentials)
        _check_propositional(f.right, exponentials)
        return
    if exponentials and isinstance(f, (Bang, Quest)):
        _check_propositional(f.body, exponentials)
        return
    raise SearchError(f"out of the propositional fragment: {f}")


def _try_rules(m, budget, solve, calc, stats):
    for f in list(dict.fromkeys(g for g, _ in m.points)):
        rest = m.remove(f, 1)
        if isinstance(f, Par):
            stats.rule_instances += 1
            sub = solve(rest.add(f.left).add(f.right), budget)
            if sub:
                return par_node(sub, f)
        elif isinstance(f, Plus):
            for side, piece in ((1, f.left), (2, f.right)):
                stats.rule_instances += 1
                sub = solve(rest.add(piece), budget)
                if sub:
                    return plus_node(sub, f, side)
        elif isinstance(f, With):
            stats.rule_instances += 1
            s0 = solve(rest.add(f.left), budget)
            if s0:
                s1 = solve(rest.add(f.right), budget)
                if s1:
                    return with_node(s0, s1, f)
        elif isinstance(f, Tensor):
            items = _expand(rest)
            for chosen in _sub_multisets(items):
                stats.rule_instances += 1
                left = mset(list(chosen)).add(f.left)
                right = rest.diff(mset(list(chosen))).add(f.right)
                s0 = solve(left, budget)
                if not s0:
                    continue
                s1 = solve(right, budget)
                if s1:
                    return tensor_node(s0, s1, f)
        elif isinstance(f, Quest):
            stats.rule_instances += 1
            sub = solve(rest.add(f.body), budget)
            if sub:
                return quest_node(sub, f)
            if budget > 0:
                stats.rule_instances += 1
                sub = solve(m.add(f), budget - 1)
                if sub:
                    return questc_node(sub, f)
        elif isinstance(f, Bang):
            qctx = mset([(g, c) for g, c in rest.points
                         if isinstance(g, Quest)])
            stats.rule_instances += 1
            sub = solve(qctx.add(f.body), budget)
            if sub:
                return bang_node(sub, f, _expand(rest.diff(qctx)))
    return None


# ---------------------------------------------------------------------------
# search_cl: classical propositional logic (invertible backward rules)

def search_cl(s: OmegaMultiset):
    if not s.is_finite():
        raise SearchError("search_cl expects a finite sequent")
    stats = SearchStats()

    def solve(m: OmegaMultiset) -> Optional[Proof]:
        stats.nodes += 1
        for f, _ in m.points:
            if not isinstance(f, Lit):
                break
        else:
            return ax(m) if _axiom_pair_present(m, lits_only=True) else None
        f = next(g for g, _ in m.points if not isinstance(g, Lit))
        rest = m.remove(f, 1)
        if isinstance(f, With):
            stats.rule_instances += 1
            s0 = solve(rest.add(f.left))
            if not s0:
                return None
            s1 = solve(rest.add(f.right))
            return and_node(s0, s1, f) if s1 else None
        if isinstance(f, Plus):
            stats.rule_instances += 1
            sub = solve(rest.add(f.left).add(f.right))
            return or_node(sub, f) if sub else None
        raise SearchError(f"out of the classical propositional fragment: {f}")

    proof = solve(s)
    if proof is not None:
        return proof
    return RefutationCertificate(s, CL, "complete invertible backward search",
                                 stats.as_dict(), "refuted")


# ---------------------------------------------------------------------------
# decide_k4_cutfree: quantifier-free UTS(1,0)+K4 without cut

def decide_k4_cutfree(s: OmegaMultiset, env: Environment = EMPTY_ENV,
                      node_budget: int = 200_000):
    """Exhaustive backward search over the cut-free rules.  Minimal proofs
    never repeat a sequent along a branch, so on-path repetition pruning
    preserves completeness; the node budget is a hard error, not a verdict."""
    if not s.is_finite():
        raise SearchError("decide_k4_cutfree expects a finite sequent")
    for f, _ in s.points:
        _check_modal_fragment(f)
    stats = SearchStats()
    calc = uts(1, 0)

    def solve(m: OmegaMultiset, path: frozenset) -> Optional[Proof]:
        if m in path:
            return None
        stats.nodes += 1
        if stats.nodes > node_budget:
            raise SearchError("k4 search exceeded its node budget")
        if _axiom_pair_present(m):
            return ax(m)
        path = path | {m}
        for f in list(dict.fromkeys(g for g, _ in m.points)):
            rest = m.remove(f, 1)
            sub = _k4_moves(m, rest, f, path, solve, stats, env)
            if sub is not None:
                return sub
        return None

    proof = solve(s, frozenset())
    if proof is not None:
        return proof
    return RefutationCertificate(
        s, UTS_K4, "exhaustive cut-free backward search with on-path "
        "repetition pruning", stats.as_dict(), "refuted")


def _check_modal_fragment(f: Formula):
    if isinstance(f, (Lit, TruthAtom, SatAtom)):
        return
    if isinstance(f, (Tensor, Par, Plus, With)):
        _check_modal_fragment(f.left)
        _check_modal_fragment(f.right)
        return
    if isinstance(f, (Box, Diamond)):
        _check_modal_fragment(f.body)
        return
    raise SearchError(f"quantifier-free modal fragment only, got: {f}")


def _k4_moves(m, rest, f, path, solve, stats, env):
    if isinstance(f, Par):
        stats.rule_instances += 1
        sub = solve(rest.add(f.left).add(f.right), path)
        if sub:
            return par_node(sub, f)
    elif isinstance(f, Plus):
        for side, piece in ((1, f.left), (2, f.right)):
            stats.rule_instances += 1
            sub = solve(rest.add(piece), path)
            if sub:
                return plus_node(sub, f, side)
    elif isinstance(f, With):
        stats.rule_instances += 1
        s0 = solve(rest.add(f.left), path)
        if s0:
            s1 = solve(rest.add(f.right), path)
            if s1:
                return with_node(s0, s1, f)
    elif isinstance(f, Tensor):
        items = _expand(rest)
        for chosen in _sub_multisets(items):
            stats.rule_instances += 1
            left = mset(list(chosen)).add(f.left)
            right = rest.diff(mset(list(chosen))).add(f.right)
            s0 = solve(left, path)
            if not s0:
                continue
            s1 = solve(right, path)
            if s1:
                return tensor_node(s0, s1, f)
        # the boxed-context tensor: share all diamonds, split the rest
        diamonds = [g for g in _expand(rest) if isinstance(g, Diamond)]
        others = [g for g in _expand(rest) if not isinstance(g, Diamond)]
        if diamonds:
            base = mset(diamonds)
            for chosen in _sub_multisets(others):
                stats.rule_instances += 1
                left = base.union(mset(list(chosen))).add(f.left)
                right = base.union(
                    mset(others).diff(mset(list(chosen)))).add(f.right)
                s0 = solve(left, path)
                if not s0:
                    continue
                s1 = solve(right, path)
                if s1:
                    return boxtensor_node(s0, s1, f, diamonds)
    elif isinstance(f, Box):
        # keeping the full diamond context is complete: premises are
        # monotone under weakening-absorbing axioms
        gammas = [g.body for g, c in rest.points if isinstance(g, Diamond)
                  for _ in range(int(c))]
        delta = [g for g in _expand(rest) if not isinstance(g, Diamond)]
        stats.rule_instances += 1
        prem = mset([Diamond(g) for g in gammas] + gammas + [f.body])
        sub = solve(prem, path)
        if sub:
            return nec_node(sub, f, gammas, delta)
    elif isinstance(f, TruthAtom):
        lam = env.resolve(f.arg) if f.arg is not None else None
        if isinstance(lam, LambdaName) and len(lam.binders) == 1 and \
                not free_vars(lam.body):
            stats.rule_instances += 1
            inst = lam.body if f.positive else neg(lam.body)
            sub = solve(rest.add(inst), path)
            if sub:
                return truth_node(sub, f, env)
    elif isinstance(f, SatAtom):
        lam = env.resolve(f.abstraction)
        if isinstance(lam, LambdaName):
            from .syntax import subst_many
            stats.rule_instances += 1
            inst = subst_many(lam.body, list(zip(lam.binders, f.args)))
            if not f.positive:
                inst = neg(inst)
            sub = solve(rest.add(inst), path)
            if sub:
                return sat_node(sub, f, env)
    return None


# ---------------------------------------------------------------------------
# refute_schematic: cut-free IK_omega over schematic omega-sequents

_SUPPORTED_NOTE = ("schematic backward search: finite part plus literal "
                   "uniform blocks, pigeonhole pruning over generic "
                   "forall premises")


def refute_schematic(s: OmegaMultiset, calc: CalculusId = IK_OMEGA,
                     node_budget: int = 50_000) -> RefutationCertificate:
    """Decide cut-free provability for the supported schematic shapes.

    Refutations are only reported when the candidate space is provably
    exhaustive for the shape: uniform blocks must have literal templates
    (so block members can only ever be used by initial sequents), the
    finite part pigeonholes over the cofinitely many generic premises of
    an omega-forall, and generic premise shares range over the aligned
    instance, a cross-index instance, or nothing.  Anything else returns
    `unknown`, never a wrong refutation.
    """
    stats = SearchStats()
    unknown = [False]

    def risky(m: OmegaMultiset) -> bool:
        if any(not is_atom(fam.template) for fam in m.families):
            return True
        if any(not is_atom(f) and is_omega(c) for f, c in m.points):
            return True
        return False

    def solve(m: OmegaMultiset, path: frozenset, depth_left: int) -> Optional[Proof]:
        stats.nodes += 1
        if stats.nodes > node_budget or depth_left <= 0:
            unknown[0] = True
            return None
        if m in path:
            return None
        if _axiom_pair_present(m):
            return ax(m)
        if risky(m):
            unknown[0] = True
            return None
        path = path | {m}
        for f in list(dict.fromkeys(g for g, _ in m.points)):
            rest = m.remove(f, 1)
            if isinstance(f, Par):
                stats.rule_instances += 1
                sub = solve(rest.add(f.left).add(f.right), path, depth_left - 1)
                if sub:
                    return par_node(sub, f)
            elif isinstance(f, Tensor):
                sub = _schematic_tensor(m, rest, f, path, depth_left, solve, stats, unknown)
                if sub:
                    return sub
            elif isinstance(f, Exists):
                stats.rule_instances += 1
                prem = rest.union(instance_block(f.body, f.var))
                sub = solve(prem, path, depth_left - 1)
                if sub:
                    return vexists_node(sub, f)
            elif isinstance(f, Forall):
                sub = _schematic_forall(m, rest, f, path, depth_left, solve,
                                        stats, unknown)
                if sub:
                    return sub
        return None

    proof = solve(s, frozenset(), 24)
    if proof is not None:
        rep = check(proof, calc)
        if not rep.accepted:
            raise SearchError(f"internal: search produced a bad proof: {rep.reason}")
        return RefutationCertificate(s, calc, _SUPPORTED_NOTE,
                                     stats.as_dict(), "provable", proof)
    verdict = "unknown" if unknown[0] else "refuted"
    return RefutationCertificate(s, calc, _SUPPORTED_NOTE, stats.as_dict(),
                                 verdict)


def _schematic_tensor(m, rest, f, path, depth_left, solve, stats, unknown):
    items = _expand(mset([(g, c) for g, c in rest.points if not is_omega(c)]))
    omega_part = mset([(g, c) for g, c in rest.points if is_omega(c)])
    fams = mset([], rest.families)
    for chosen in _sub_multisets(items):
        finite_left = mset(list(chosen))
        finite_right = mset(items).diff(finite_left)
        for blocks_left in (True, False):
            stats.rule_instances += 1
            extra_l = fams.union(omega_part) if blocks_left else EMPTY
            extra_r = EMPTY if blocks_left else fams.union(omega_part)
            s0 = solve(finite_left.union(extra_l).add(f.left), path,
                       depth_left - 1)
            if not s0:
                continue
            s1 = solve(finite_right.union(extra_r).add(f.right), path,
                       depth_left - 1)
            if s1:
                return tensor_node(s0, s1, f)
    if not fams.is_empty() or not omega_part.is_empty():
        # finer splits of infinite content were not enumerated
        unknown[0] = True
    return None


def _schematic_forall(m, rest, f, path, depth_left, solve, stats, unknown):
    param = fresh_param()
    sym = IndexParam(param)
    inst_sym = subst(f.body, f.var, sym)
    finite_pts = [(g, c) for g, c in rest.points if not is_omega(c)]
    omega_pts = mset([(g, c) for g, c in rest.points if is_omega(c)])
    fams = rest.families
    if any(fam.exceptions or fam.eventual != 1 for fam in fams):
        unknown[0] = True
        return None

    def aligned_share(index_term):
        out = []
        for fam in fams:
            from .syntax import subst_index
            out.append(subst_index(fam.template, PARAM, index_term))
        return out

    # candidate generic obligations (for refutation soundness)
    generic_goals = []
    base = omega_pts.add(inst_sym)
    generic_goals.append(base)                                   # empty share
    if fams:
        generic_goals.append(base.union(mset(aligned_share(sym))))
        cross = IndexParam(fresh_param())
        generic_goals.append(base.union(mset(aligned_share(cross))))
    succeeded = None
    for goal in generic_goals:
        stats.rule_instances += 1
        sub = solve(goal, path, depth_left - 1)
        if sub is not None:
            succeeded = (goal, sub)
            break
    if succeeded is None:
        return None  # every generic premise candidate fails: move refuted
    goal, sub = succeeded
    # build a proof only for the uniform distributions we can represent
    if goal == base.union(mset(aligned_share(sym))) or (not fams and goal == base):
        if not finite_pts:
            tmpl = PremiseTemplate(param, (), sub)
            return vforall_node(f, tmpl, ())
        k = 1
        while any(_mentions_index(g, k) for g, _ in m.points) or \
                any(_mentions_index(fam.template, k) for fam in m.families):
            k += 1
        from .syntax import subst_index
        inst_k = subst(f.body, f.var, EnumTerm(k))
        share_k = mset(aligned_share(EnumTerm(k))) if fams else EMPTY
        goal_k = (mset(finite_pts).union(omega_pts).union(share_k)
                  .add(inst_k))
        stats.rule_instances += 1
        sub_k = solve(goal_k, path, depth_left - 1)
        if sub_k is not None:
            tmpl = PremiseTemplate(param, (k,), sub)
            return vforall_node(f, tmpl, [(k, sub_k)])
        unknown[0] = True
        return None
    unknown[0] = True
    return None


def _mentions_index(f: Formula, k: int) -> bool:
    target = EnumTerm(k)
    def walk(x):
        if x == target:
            return True
        from .sequents import _branches
        return any(walk(child) for _, child in _branches(x))
    return walk(f)
