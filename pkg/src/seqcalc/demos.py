"""Bundled derivations reproduced from the source calculi.

Each demo carries the proof object together with the calculus it lives in
and the definitional environment for its self-referential names, so the
checker can replay it directly.
"""
from __future__ import annotations

from dataclasses import dataclass

from .builders import (
    ax, bang_node, cut_node, fresh_param, nec_node, par_node, quest_node,
    questc_node, tensor_node, truth_node, vexists_node, alias_node,
)
from .calculi import (
    ALE_T, ALV, CalculusId, IK_OMEGA, Proof, UTS_K4, uts,
)
from .sequents import OMEGA, Sequent, seq
from .syntax import (
    Bang, Box, DefConst, Diamond, Environment, Exists, Forall, Lit, Par,
    Quest, Tensor, TruthAtom, Var, lit, neg, nlit, ntruth, quote, truth,
)


@dataclass(frozen=True)
class Demo:
    name: str
    calculus: CalculusId
    env: Environment
    proof: Proof
    description: str
    expect_accepted: bool = True


P = lit("P")
Q = lit("Q")


def _lob_demo() -> Demo:
    # A := par(~P, P) makes the hypothesis |- dia ~A, A derivable, so the
    # whole script closes; C names "box T<C> -> A" via the self-referential
    # constant c.
    A = Par(nlit("P"), lit("P"))
    Abar = neg(A)
    c = DefConst("c")
    Tc, nTc = truth(c), ntruth(c)
    C = Par(Diamond(nTc), A)
    env = Environment({"c": quote(C)})

    n1 = ax(seq(Diamond(nTc), nTc, Tc))
    n2 = nec_node(n1, Box(Tc), [nTc])                     # |- dia ~Tc, box Tc
    ident = par_node(
        tensor_node(ax(seq(nlit("P"), P)), ax(seq(P, nlit("P"))),
                    Tensor(P, nlit("P"))),
        A)                                                # |- tensor(P,~P), A
    n4 = tensor_node(n2, ident, Tensor(Box(Tc), Abar))    # |- dia ~Tc, A, ~C
    n5 = truth_node(n4, nTc, env)                         # |- dia ~Tc, ~Tc, A
    n6 = nec_node(n5, Box(A), [nTc])                      # |- dia ~Tc, box A
    hyp = par_node(ax(seq(Diamond(Abar), nlit("P"), P)), A)   # |- dia ~A, A
    n8 = cut_node(n6, hyp, Box(A))                        # |- dia ~Tc, A
    n9 = par_node(n8, C)                                  # |- C
    n10 = par_node(tensor_node(n2, ident, Tensor(Box(Tc), Abar)), C)  # |- ~C, C
    n11 = cut_node(n9, n10, C)                            # |- C
    n12 = truth_node(n11, Tc, env)                        # |- Tc
    n13 = nec_node(n12, Box(Tc), [])                      # |- box Tc
    n14 = cut_node(n13, n8, Box(Tc))                      # |- A
    return Demo("lob", UTS_K4, env, n14,
                "Loeb-style script: necessitation, truth steps and three "
                "cuts close |- A from the derivable |- dia ~A, A",
                )


def _k4_cut_demo() -> Demo:
    # |- dia(box P (x) ~P), box P: provable with cut, not without.
    c = DefConst("c")
    Tc, nTc = truth(c), ntruth(c)
    C = Par(Diamond(nTc), P)
    env = Environment({"c": quote(C)})
    goal_dia = Diamond(Tensor(Box(P), nlit("P")))

    m1 = ax(seq(Diamond(nTc), nTc, Tc))
    m2 = nec_node(m1, Box(Tc), [nTc])                     # |- dia ~Tc, box Tc
    m3 = ax(seq(nlit("P"), P))
    m4 = tensor_node(m2, m3, Tensor(Box(Tc), nlit("P")))  # |- dia ~Tc, P, ~C
    m5 = truth_node(m4, nTc, env)                         # |- dia ~Tc, P, ~Tc
    m6 = nec_node(m5, Box(P), [nTc])                      # |- dia ~Tc, box P
    m7 = ax(seq(goal_dia, nlit("P"), P))
    m8 = tensor_node(m6, m7, Tensor(Box(P), nlit("P")))
    m9 = par_node(m8, C)                                  # |- goal_dia, ~C-ish, C
    m10 = truth_node(m9, Tc, env)
    m11 = nec_node(m10, Box(Tc), [Tensor(Box(P), nlit("P"))])
    m12 = cut_node(m6, m11, Diamond(nTc))                 # |- goal_dia, box P
    return Demo("k4_cut_sequent", UTS_K4, env, m12,
                "the sequent provable via cut whose cut-free search space "
                "is exhausted empty")


def _liar_demo() -> Demo:
    l = DefConst("l")
    L = Quest(ntruth(l))          # the liar sentence ?~T(l)
    Lbar = Bang(truth(l))
    env = Environment({"l": quote(L)})

    def half() -> Proof:
        b1 = ax(seq(ntruth(l), truth(l)))
        b2 = quest_node(b1, Quest(ntruth(l)))
        b3 = bang_node(b2, Lbar)
        b4 = alias_node(b3, "~L")
        b5 = truth_node(b4, ntruth(l), env)    # |- ?~T(l), ~T(l)
        b6 = quest_node(b5, Quest(ntruth(l)))  # |- ?~T(l), ?~T(l)
        b7 = questc_node(b6, L)                # |- ?~T(l)
        return alias_node(b7, "L")

    right = half()
    r9 = truth_node(right, truth(l), env)      # |- T(l)
    r10 = bang_node(r9, Lbar)                  # |- !T(l)
    r11 = alias_node(r10, "~L")
    empty = cut_node(half(), r11, L)           # |-
    return Demo("exponential_liar", ALE_T, env, empty,
                "the liar sentence yields the empty sequent once "
                "exponentials meet fully disquotational truth")


def _star_axiom_demo() -> Demo:
    base = ax(seq((P, OMEGA), (nlit("P"), OMEGA)))
    s1 = vexists_node(base, Exists("x", P))
    s2 = vexists_node(s1, Exists("x", nlit("P")))
    return Demo("star_axiom_case", ALV, Environment(), s2,
                "|- exists x P, exists x ~P from the axiom with "
                "omega-many copies on both sides")


def _star_and_demo() -> Demo:
    from .translations import star_proof
    from .builders import and_node
    from .calculi import CL
    from .syntax import With
    cl = and_node(ax(seq(nlit("P"), nlit("Q"), P)),
                  ax(seq(nlit("P"), nlit("Q"), Q)),
                  With(P, Q))
    return Demo("star_and_case", ALV, Environment(), star_proof(cl),
                "transport of a classical conjunction step")


def _star_or_demo() -> Demo:
    from .translations import star_proof
    from .builders import or_node
    from .syntax import Plus
    cl = or_node(ax(seq(nlit("P"), P)), Plus(nlit("P"), P))
    return Demo("star_or_case", ALV, Environment(), star_proof(cl),
                "transport of a classical disjunction step")


def _bang_lemma_demo() -> Demo:
    from .transforms import forall_from_single
    base = ax(seq((P, OMEGA), (nlit("P"), OMEGA)))
    s1 = vexists_node(base, Exists("y", nlit("P")))
    s2 = vexists_node(s1, Exists("z", P))      # |- exists y ~P, exists z P
    out = forall_from_single(s2, Forall("x", Exists("z", P)))
    return Demo("bang_lemma_shape", ALV, Environment(), out,
                "vacuous forall from a single premise over an "
                "existentially prefixed context")


def _exinf_demo() -> Demo:
    from .transforms import contract_exists_inf
    f = Exists("x", P)
    base = ax(seq(nlit("P"), (P, OMEGA), (f, OMEGA)))
    src = vexists_node(base, f)    # |- ~P, (exists x P)^infty
    out = contract_exists_inf(src, f)
    return Demo("exinf_shape", ALV, Environment(), out,
                "infinitary contraction of omega copies of a vacuous "
                "existential")


def _zardini_before_demo() -> Demo:
    from .transforms import zardini_flaw_before
    return Demo("zardini_flaw_before", IK_OMEGA, Environment(),
                zardini_flaw_before(),
                "|- [~P(t_i) : i], forall x P(x) via the family of axioms")


def _zardini_after_demo() -> Demo:
    from .transforms import zardini_flaw_after
    return Demo("zardini_flaw_after", IK_OMEGA, Environment(),
                zardini_flaw_after(),
                "the single-premise forall the flawed reduction produces; "
                "rejected by the checker", expect_accepted=False)


_BUILDERS = {
    "lob": _lob_demo,
    "k4_cut_sequent": _k4_cut_demo,
    "exponential_liar": _liar_demo,
    "star_axiom_case": _star_axiom_demo,
    "star_and_case": _star_and_demo,
    "star_or_case": _star_or_demo,
    "bang_lemma_shape": _bang_lemma_demo,
    "exinf_shape": _exinf_demo,
    "zardini_flaw_before": _zardini_before_demo,
    "zardini_flaw_after": _zardini_after_demo,
}

DEMO_NAMES = tuple(_BUILDERS)


def build_demo(name: str) -> Demo:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown demo {name!r}; known: {', '.join(DEMO_NAMES)}")
    return builder()
