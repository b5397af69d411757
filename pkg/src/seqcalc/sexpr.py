"""Canonical S-expression text forms for terms, formulas, sequents and
proof scripts, plus `def name := term` environment files.

print(parse(s)) == s on canonical text; parse(print(x)) == x up to alpha
equivalence.  The predicate name `T` is reserved for the truth predicate.
"""
from __future__ import annotations

from typing import Iterator

from .calculi import BlockSpec, PremiseTemplate, Proof, RuleInstance
from .errors import ParseError
from .sequents import (
    Family, OMEGA, PARAM, OmegaMultiset, count_str, is_omega, mset,
)
from .syntax import (
    Bang, Box, Diamond, DefConst, EnumTerm, Environment, Exists, Forall,
    Formula, IndexParam, LambdaName, Lit, Par, Plus, Quest, SatAtom, Tensor,
    Term, TruthAtom, Var, With, neg, subst_index,
)

# ---------------------------------------------------------------------------
# Tokenizer / reader

def _tokens(text: str) -> Iterator[tuple[str, int]]:
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c in "()":
            yield c, i
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in "();":
            j += 1
        yield text[i:j], i
        i = j


def _read(text: str):
    toks = list(_tokens(text))
    pos = [0]

    def rd():
        if pos[0] >= len(toks):
            raise ParseError("unexpected end of input", len(text))
        tok, at = toks[pos[0]]
        pos[0] += 1
        if tok == "(":
            out = []
            while True:
                if pos[0] >= len(toks):
                    raise ParseError("unbalanced parenthesis", at)
                if toks[pos[0]][0] == ")":
                    pos[0] += 1
                    return out
                out.append(rd())
        if tok == ")":
            raise ParseError("unexpected ')'", at)
        return (tok, at)

    out = rd()
    if pos[0] != len(toks):
        raise ParseError("trailing input", toks[pos[0]][1])
    return out


def _atom(x) -> str:
    if not isinstance(x, tuple):
        raise ParseError("expected an atom, got a list")
    return x[0]


def _at(x) -> int:
    return x[1] if isinstance(x, tuple) else 0


# ---------------------------------------------------------------------------
# Terms

def term_str(t: Term) -> str:
    if isinstance(t, EnumTerm):
        return f"t{t.index}"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, IndexParam):
        return f"${t.name}"
    if isinstance(t, DefConst):
        return f"@{t.name}"
    if isinstance(t, LambdaName):
        return f"(lam ({' '.join(t.binders)}) {formula_str(t.body)})"
    raise ParseError(f"not a term: {t!r}")


def _parse_term(x) -> Term:
    if isinstance(x, tuple):
        tok, at = x
        if tok.startswith("$"):
            return IndexParam(tok[1:])
        if tok.startswith("@"):
            return DefConst(tok[1:])
        if len(tok) > 1 and tok[0] == "t" and tok[1:].isdigit():
            return EnumTerm(int(tok[1:]))
        if tok[0].isalpha() or tok[0] in "%_β":
            return Var(tok)
        raise ParseError(f"bad term {tok!r}", at)
    if x and _atom(x[0]) == "lam":
        if len(x) != 3 or not isinstance(x[1], list):
            raise ParseError("lam expects a binder list and a body", _at(x[0]))
        binders = tuple(_atom(b) for b in x[1])
        return LambdaName(binders, _parse_formula(x[2]))
    raise ParseError("bad term", _at(x[0]) if x else 0)


def parse_term(text: str) -> Term:
    return _parse_term(_read(text))


# ---------------------------------------------------------------------------
# Formulas

_BIN = {"par": Par, "tensor": Tensor, "plus": Plus, "with": With}
_BIN_NAMES = {Par: "par", Tensor: "tensor", Plus: "plus", With: "with"}
_UN = {"box": Box, "dia": Diamond, "bang": Bang, "quest": Quest}
_UN_NAMES = {Box: "box", Diamond: "dia", Bang: "bang", Quest: "quest"}
_Q_NAMES = {Forall: "forall", Exists: "exists"}


def formula_str(f: Formula) -> str:
    if isinstance(f, Lit):
        head = ("" if f.positive else "~") + f.pred
        if not f.args:
            return head
        return f"({head} {' '.join(term_str(a) for a in f.args)})"
    if isinstance(f, TruthAtom):
        head = "T" if f.positive else "~T"
        return f"({head} {term_str(f.arg)})"
    if isinstance(f, SatAtom):
        head = "sat+" if f.positive else "sat-"
        parts = [head, str(f.arity), str(f.mfree), term_str(f.abstraction)]
        parts.extend(term_str(a) for a in f.args)
        return f"({' '.join(parts)})"
    if isinstance(f, (Tensor, Par, Plus, With)):
        return (f"({_BIN_NAMES[type(f)]} {formula_str(f.left)}"
                f" {formula_str(f.right)})")
    if isinstance(f, (Forall, Exists)):
        return f"({_Q_NAMES[type(f)]} {f.var} {formula_str(f.body)})"
    if isinstance(f, (Box, Diamond, Bang, Quest)):
        return f"({_UN_NAMES[type(f)]} {formula_str(f.body)})"
    raise ParseError(f"not a formula: {f!r}")


def _parse_formula(x) -> Formula:
    if isinstance(x, tuple):
        tok, at = x
        positive = not tok.startswith("~")
        name = tok.lstrip("~")
        if not name or not (name[0].isalpha() or name[0] in "_"):
            raise ParseError(f"bad formula atom {tok!r}", at)
        if name == "T":
            raise ParseError("the truth predicate takes an argument", at)
        return Lit(positive, name)
    if not x:
        raise ParseError("empty formula")
    head = _atom(x[0])
    at = _at(x[0])
    if head in _BIN:
        if len(x) != 3:
            raise ParseError(f"{head} expects two subformulas", at)
        return _BIN[head](_parse_formula(x[1]), _parse_formula(x[2]))
    if head in _UN:
        if len(x) != 2:
            raise ParseError(f"{head} expects one subformula", at)
        return _UN[head](_parse_formula(x[1]))
    if head in {"forall", "exists"}:
        if len(x) != 3:
            raise ParseError(f"{head} expects a variable and a body", at)
        ctor = Forall if head == "forall" else Exists
        return ctor(_atom(x[1]), _parse_formula(x[2]))
    if head == "neg":
        return neg(_parse_formula(x[1]))
    if head in {"T", "~T"}:
        if len(x) != 2:
            raise ParseError("T expects one argument term", at)
        return TruthAtom(head == "T", _parse_term(x[1]))
    if head in {"sat+", "sat-"}:
        if len(x) < 4:
            raise ParseError("sat expects arity, free-count, abstraction", at)
        try:
            n, m = int(_atom(x[1])), int(_atom(x[2]))
        except ValueError:
            raise ParseError("sat arity and free-count must be integers", at)
        args = tuple(_parse_term(a) for a in x[4:])
        return SatAtom(head == "sat+", n, m, _parse_term(x[3]), args)
    # applied literal
    positive = not head.startswith("~")
    name = head.lstrip("~")
    if name == "T":
        return TruthAtom(positive, _parse_term(x[1]))
    args = tuple(_parse_term(a) for a in x[1:])
    return Lit(positive, name, args)


def parse_formula(text: str) -> Formula:
    return _parse_formula(_read(text))


# ---------------------------------------------------------------------------
# Sequents

def sequent_str(m: OmegaMultiset) -> str:
    items = []
    for f, c in m.points:
        if is_omega(c):
            items.append(f"(omega {formula_str(f)})")
        elif c == 1:
            items.append(formula_str(f))
        else:
            items.append(f"(rep {int(c)} {formula_str(f)})")
    for fam in m.families:
        items.extend(_family_items(fam))
    return f"(|- {' '.join(items)})" if items else "(|-)"


def _family_items(fam: Family) -> list[str]:
    tpl = subst_index(fam.template, PARAM, IndexParam("i"))
    body = formula_str(tpl)
    zero = sorted(i for i, c in fam.exceptions if c == 0)
    extra = [(i, c) for i, c in fam.exceptions if c != 0]
    skip = sorted(zero + [i for i, _ in extra])
    parts = ["famw" if is_omega(fam.eventual) else "fam", "i"]
    if not is_omega(fam.eventual) and fam.eventual != 1:
        parts.append(f"(* {fam.eventual})")
    if skip:
        parts.append(f"(\\ {' '.join(str(i) for i in skip)})")
    parts.append(body)
    items = [f"({' '.join(parts)})"]
    for i, c in extra:
        inst = formula_str(subst_index(fam.template, PARAM, EnumTerm(i)))
        if is_omega(c):
            items.append(f"(omega {inst})")
        elif c == 1:
            items.append(inst)
        else:
            items.append(f"(rep {int(c)} {inst})")
    return items


def _parse_sequent_list(x) -> OmegaMultiset:
    if not x or _atom(x[0]) != "|-":
        raise ParseError("a sequent starts with |-", _at(x[0]) if x else 0)
    points = []
    fams = []
    for item in x[1:]:
        if isinstance(item, tuple):
            points.append((_parse_formula(item), 1))
            continue
        head = _atom(item[0])
        if head == "omega":
            points.append((_parse_formula(item[1]), OMEGA))
        elif head == "rep":
            points.append((_parse_formula(item[2]), int(_atom(item[1]))))
        elif head in {"fam", "famw"}:
            fams.append(_parse_family(item, head == "famw"))
        else:
            points.append((_parse_formula(item), 1))
    return mset(points, fams)


def _parse_family(item, is_w: bool) -> Family:
    param = _atom(item[1])
    eventual = OMEGA if is_w else 1
    rest = item[2:]
    excluded: list[int] = []
    while rest and isinstance(rest[0], list) and rest[0] and \
            _atom(rest[0][0]) in {"*", "\\"}:
        spec = rest[0]
        if _atom(spec[0]) == "*":
            tok = _atom(spec[1])
            eventual = OMEGA if tok == "w" else int(tok)
        else:
            excluded = [int(_atom(t)) for t in spec[1:]]
        rest = rest[1:]
    if len(rest) != 1:
        raise ParseError("family item needs exactly one template formula")
    tpl = _parse_formula(rest[0])
    tpl = subst_index(tpl, param, IndexParam(PARAM))
    return Family(tpl, eventual, tuple((i, 0) for i in sorted(excluded)))


def parse_sequent(text: str) -> OmegaMultiset:
    return _parse_sequent_list(_read(text))


# ---------------------------------------------------------------------------
# Proof scripts

def proof_str(p: Proof, indent: int = 0) -> str:
    pad = "  " * indent
    r = p.rule
    parts = [f"({r.name}", f"(concl {sequent_str(p.conclusion)})"]
    for f in r.principal:
        parts.append(f"(principal {formula_str(f)})")
    if r.term is not None:
        parts.append(f"(term {term_str(r.term)})")
    if r.var is not None:
        parts.append(f"(var {r.var})")
    if r.context is not None:
        parts.append(f"(ctx {' '.join(formula_str(f) for f in r.context)})")
    if r.note:
        parts.append(f"(note {r.note})")
    for f in r.phi_points:
        parts.append(f"(phi-point {formula_str(f)})")
    for b in r.phi_blocks:
        tpl = formula_str(subst_index(b.template, PARAM, IndexParam("i")))
        excl = (f" (\\ {' '.join(str(i) for i in b.excluded)})"
                if b.excluded else "")
        parts.append(f"(phi-block i{excl} {tpl})")
    head = pad + " ".join(parts)
    lines = [head]
    for i, q in enumerate(p.premises):
        label = (f"(prem-at {r.indices[i]}" if i < len(r.indices) and
                 r.name in {"vforall", "forallinfcl"} else "(prem")
        lines.append(f"{pad}  {label}")
        lines.append(proof_str(q, indent + 2))
        lines.append(f"{pad}  )")
    for t in p.templates:
        excl = (f" (\\ {' '.join(str(i) for i in t.excluded)})"
                if t.excluded else "")
        lines.append(f"{pad}  (template {t.param}{excl}")
        lines.append(proof_str(t.body, indent + 2))
        lines.append(f"{pad}  )")
    lines.append(pad + ")")
    return "\n".join(lines)


def _parse_proof_list(x) -> Proof:
    if isinstance(x, tuple):
        raise ParseError("a proof node must be a list", _at(x))
    name = _atom(x[0])
    concl = None
    principal: list[Formula] = []
    term = None
    var = None
    context = None
    note = ""
    phi_points: list[Formula] = []
    phi_blocks: list[BlockSpec] = []
    premises: list[Proof] = []
    indices: list[int] = []
    templates: list[PremiseTemplate] = []
    for item in x[1:]:
        if isinstance(item, tuple):
            raise ParseError(f"unexpected atom {item[0]!r} in proof node",
                             _at(item))
        head = _atom(item[0])
        if head == "concl":
            concl = _parse_sequent_list(item[1])
        elif head == "principal":
            principal.append(_parse_formula(item[1]))
        elif head == "term":
            term = _parse_term(item[1])
        elif head == "var":
            var = _atom(item[1])
        elif head == "ctx":
            context = tuple(_parse_formula(f) for f in item[1:])
        elif head == "note":
            note = _atom(item[1])
        elif head == "phi-point":
            phi_points.append(_parse_formula(item[1]))
        elif head == "phi-block":
            param = _atom(item[1])
            rest = item[2:]
            excl: tuple[int, ...] = ()
            if rest and isinstance(rest[0], list) and rest[0] and \
                    _atom(rest[0][0]) == "\\":
                excl = tuple(int(_atom(t)) for t in rest[0][1:])
                rest = rest[1:]
            tpl = subst_index(_parse_formula(rest[0]), param,
                              IndexParam(PARAM))
            phi_blocks.append(BlockSpec(tpl, tuple(sorted(excl))))
        elif head == "prem":
            premises.append(_parse_proof_list(item[1]))
        elif head == "prem-at":
            indices.append(int(_atom(item[1])))
            premises.append(_parse_proof_list(item[2]))
        elif head == "template":
            param = _atom(item[1])
            rest = item[2:]
            excl = ()
            if rest and isinstance(rest[0], list) and rest[0] and \
                    _atom(rest[0][0]) == "\\":
                excl = tuple(int(_atom(t)) for t in rest[0][1:])
                rest = rest[1:]
            templates.append(PremiseTemplate(param, tuple(sorted(excl)),
                                             _parse_proof_list(rest[0])))
        else:
            raise ParseError(f"unknown proof field {head!r}", _at(item[0]))
    if concl is None:
        raise ParseError(f"proof node {name!r} lacks a conclusion")
    rule = RuleInstance(name, tuple(principal), term, var, context,
                        tuple(indices), tuple(phi_points),
                        tuple(phi_blocks), note)
    return Proof(concl, rule, tuple(premises), tuple(templates))


def parse_proof(text: str) -> Proof:
    return _parse_proof_list(_read(text))


# ---------------------------------------------------------------------------
# Environment files: one `def name := term` per line

def environment_str(env: Environment) -> str:
    return "".join(f"def {name} := {term_str(term)}\n"
                   for name, term in sorted(env.items()))


def parse_environment(text: str) -> Environment:
    env = Environment()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        if not line.startswith("def "):
            raise ParseError(f"line {lineno}: expected `def name := term`")
        rest = line[4:]
        if ":=" not in rest:
            raise ParseError(f"line {lineno}: missing `:=`")
        name, body = rest.split(":=", 1)
        env.define(name.strip(), parse_term(body.strip()))
    return env
