"""Command-line front end.

Subcommands: check, measure, cut-eliminate, translate, decide, refute,
demo, corpus.  Exit codes: 0 success/provable, 1 rejected/refuted,
2 usage errors or unknown verdicts.  All randomness is seed-controlled.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile

from .calculi import (
    ALV, CL, CalculusId, IK_OMEGA, Proof, UTS, check, is_cut_free,
    parse_calculus, rule_table,
)
from .demos import DEMO_NAMES, build_demo
from .errors import SeqcalcError
from .measures import degree, omega_height, uts_height
from .prover import decide_al, decide_k4_cutfree, refute_schematic, search_cl
from .sexpr import (
    environment_str, formula_str, parse_environment, parse_formula,
    parse_proof, parse_sequent, proof_str, sequent_str,
)
from .syntax import EMPTY_ENV, Environment
from .transforms import CutInstance, eliminate_cut_ik, reduce_uts
from .translations import (
    circ_proof, demodalize, extract_ale, extract_classical, star_proof, tau,
)

METRICS_SCHEMA = "seqcalc-metrics/1"
CERT_SCHEMA = "seqcalc-certificate/1"


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_env(args) -> Environment:
    if getattr(args, "env", None):
        return parse_environment(_read(args.env))
    return EMPTY_ENV


def _rule_counts(p: Proof, acc=None) -> dict:
    acc = acc if acc is not None else {}
    acc[p.rule.name] = acc.get(p.rule.name, 0) + 1
    for q in p.premises:
        _rule_counts(q, acc)
    for t in p.templates:
        _rule_counts(t.body, acc)
    return acc


# ---------------------------------------------------------------------------

def _cmd_check(args) -> int:
    calc = parse_calculus(args.calculus)
    env = _load_env(args)
    proof = parse_proof(_read(args.file))
    rep = check(proof, calc, env)
    if rep.accepted:
        print("checker: accepted")
        return 0
    print(f"checker: rejected at {'/'.join(rep.path or ())}: {rep.reason}",
          file=sys.stderr)
    return 1


def _cmd_measure(args) -> int:
    if args.depth is not None:
        from .measures import depth
        print(depth(parse_formula(args.depth)))
        return 0
    if args.degree is not None:
        print(degree(parse_sequent(args.degree)))
        return 0
    proof = parse_proof(_read(args.file))
    if args.omega_height:
        print(omega_height(proof))
    else:
        print(uts_height(proof))
    return 0


def _cmd_cut_eliminate(args) -> int:
    calc = parse_calculus(args.calculus)
    env = _load_env(args)
    proof = parse_proof(_read(args.file))
    if proof.rule.name not in {"cut", "cutinf"}:
        print("input proof must end with a cut", file=sys.stderr)
        return 2
    metrics = {"schema": METRICS_SCHEMA, "calculus": str(calc),
               "input_rules": _rule_counts(proof)}
    if calc.kind == "UTS" or calc.kind == "AL":
        d0, d1 = proof.premises
        f = proof.rule.principal[0]
        metrics["uts_height_before"] = [uts_height(d0), uts_height(d1)]
        out = reduce_uts(d0, d1, f, env)
        metrics["uts_height_after"] = uts_height(out)
    elif calc.kind in {"IK_OMEGA", "IZ_OMEGA"}:
        ci = _cut_instance_of(proof)
        metrics["omega_height_before"] = str(omega_height(proof))
        out = eliminate_cut_ik(ci, env)
        metrics["omega_height_after"] = str(omega_height(out))
    else:
        print(f"cut elimination targets UTS or IKw, not {calc}",
              file=sys.stderr)
        return 2
    rep = check(out, calc if calc.kind != "AL" else UTS, env)
    metrics["output_rules"] = _rule_counts(out)
    metrics["output_cut_free"] = is_cut_free(out)
    metrics["output_checked"] = rep.accepted
    text = proof_str(out) + "\n"
    if args.out:
        _write_atomic(args.out, text)
    else:
        print(text)
    if args.metrics:
        _write_atomic(args.metrics, json.dumps(metrics, indent=2) + "\n")
    if not rep.accepted:  # pragma: no cover - guarded by the test suite
        print(f"internal error: output failed to re-check: {rep.reason}",
              file=sys.stderr)
        return 1
    return 0


def _cut_instance_of(proof: Proof) -> CutInstance:
    if proof.rule.name == "cut":
        f = proof.rule.principal[0]
        return CutInstance(proof.premises[0],
                           ((f, proof.premises[1]),), ())
    points = tuple(zip(proof.rule.phi_points, proof.premises[1:]))
    blocks = tuple(zip(proof.rule.phi_blocks, proof.templates))
    return CutInstance(proof.premises[0], points, blocks)


def _cmd_translate(args) -> int:
    via = args.via
    env = _load_env(args)
    if via in {"tau", "demodalize"}:
        if not args.formula:
            print(f"--via {via} translates formulas; pass --formula",
                  file=sys.stderr)
            return 2
        f = parse_formula(args.formula)
        out = tau(f, env) if via == "tau" else demodalize(f, args.designated)
        print(formula_str(out))
        return 0
    proof = parse_proof(_read(args.file))
    provenance = {"schema": METRICS_SCHEMA, "via": via,
                  "source": args.file, "input_rules": _rule_counts(proof)}
    if via == "star":
        out = star_proof(proof, env)
        target = ALV
    elif via == "circ":
        out = circ_proof(proof, env)
        target = ALV
    elif via == "unstar":
        out = extract_classical(proof, env)
        target = CL
    elif via == "uncirc":
        out = extract_ale(proof, env)
        from .calculi import ALE
        target = ALE
    else:
        print(f"unknown translation {via!r}", file=sys.stderr)
        return 2
    rep = check(out, target, env)
    provenance["target"] = str(target)
    provenance["output_checked"] = rep.accepted
    text = proof_str(out) + "\n"
    if args.out:
        _write_atomic(args.out, text)
    else:
        print(text)
    if args.provenance:
        _write_atomic(args.provenance, json.dumps(provenance, indent=2) + "\n")
    return 0 if rep.accepted else 1


def _emit_cert(args, payload: dict) -> None:
    if getattr(args, "emit_cert", None):
        payload = {"schema": CERT_SCHEMA, **payload}
        _write_atomic(args.emit_cert, json.dumps(payload, indent=2) + "\n")


def _cmd_decide(args) -> int:
    calc = parse_calculus(args.calculus)
    env = _load_env(args)
    s = parse_sequent(args.sequent)
    if calc.kind in {"AL", "LL", "ALE"}:
        res = decide_al(s, calc, env=env)
    elif calc.kind == "CL":
        res = search_cl(s)
    elif calc.kind == "UTS_K4":
        res = decide_k4_cutfree(s, env)
    else:
        print(f"decide handles AL, LL, ALE, CL, UTS_K4; got {calc}",
              file=sys.stderr)
        return 2
    if isinstance(res, Proof):
        print("provable")
        _emit_cert(args, {"target": sequent_str(s), "calculus": str(calc),
                          "verdict": "provable"})
        if args.proof:
            print(proof_str(res))
        return 0
    print("refuted")
    _emit_cert(args, res.as_dict())
    return 1


def _cmd_refute(args) -> int:
    calc = parse_calculus(args.calculus)
    if calc.kind not in {"IK_OMEGA", "IZ_OMEGA"}:
        print("refute targets the infinitary system IKw", file=sys.stderr)
        return 2
    s = parse_sequent(args.sequent)
    cert = refute_schematic(s, calc)
    print(cert.verdict)
    _emit_cert(args, cert.as_dict())
    if cert.verdict == "provable":
        if args.proof and cert.proof is not None:
            print(proof_str(cert.proof))
        return 0
    return 1 if cert.verdict == "refuted" else 2


def _cmd_demo(args) -> int:
    if args.list:
        for name in DEMO_NAMES:
            print(name)
        return 0
    names = list(DEMO_NAMES) if args.all else [args.name]
    if not names or names == [None]:
        print("name a demo or pass --all / --list", file=sys.stderr)
        return 2
    status = 0
    for name in names:
        demo = build_demo(name)
        rep = check(demo.proof, demo.calculus, demo.env)
        verdict = "accepted" if rep.accepted else "rejected"
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            _write_atomic(os.path.join(args.out, f"{name}.prf"),
                          f"; {demo.description}\n; calculus: {demo.calculus}"
                          f"\n{proof_str(demo.proof)}\n")
            envtext = environment_str(demo.env)
            if envtext:
                _write_atomic(os.path.join(args.out, f"{name}.env"), envtext)
            print(f"{name}: written (checker: {verdict})")
        else:
            print(f"; {name}: {demo.description}")
            print(f"; calculus: {demo.calculus}")
            print(proof_str(demo.proof))
            print(f"checker: {verdict}")
        if rep.accepted != demo.expect_accepted:
            status = 1
    return status


def _cmd_corpus(args) -> int:
    from .corpus import gen_ale_proof, gen_ik_cut, gen_uts_cut
    if args.action == "generate":
        rng = random.Random(args.seed)
        os.makedirs(args.out, exist_ok=True)
        manifest = {"schema": METRICS_SCHEMA, "seed": args.seed, "items": []}
        for i in range(args.uts):
            d0, d1, f = gen_uts_cut(rng)
            from .builders import cut_node
            node = cut_node(d0, d1, f)
            name = f"uts_cut_{i:04d}.prf"
            _write_atomic(os.path.join(args.out, name), proof_str(node) + "\n")
            manifest["items"].append({"file": name, "kind": "uts_cut"})
        for i in range(args.ik):
            ci = gen_ik_cut(rng)
            name = f"ik_cut_{i:04d}.prf"
            _write_atomic(os.path.join(args.out, name),
                          proof_str(ci.as_node()) + "\n")
            manifest["items"].append({"file": name, "kind": "ik_cut"})
        for i in range(args.ale):
            p = gen_ale_proof(rng)
            name = f"ale_{i:04d}.prf"
            _write_atomic(os.path.join(args.out, name), proof_str(p) + "\n")
            manifest["items"].append({"file": name, "kind": "ale"})
        _write_atomic(os.path.join(args.out, "manifest.json"),
                      json.dumps(manifest, indent=2) + "\n")
        print(f"wrote {len(manifest['items'])} items to {args.out}")
        return 0
    # corpus run
    manifest = json.loads(_read(os.path.join(args.dir, "manifest.json")))
    from .calculi import ALE as ALE_ID
    failures = 0
    for item in manifest["items"]:
        path = os.path.join(args.dir, item["file"])
        proof = parse_proof(_read(path))
        if item["kind"] == "uts_cut":
            d0, d1 = proof.premises
            f = proof.rule.principal[0]
            out = reduce_uts(d0, d1, f)
            ok = (check(out, UTS).accepted and is_cut_free(out)
                  and uts_height(out) <= uts_height(d0) + uts_height(d1))
        elif item["kind"] == "ik_cut":
            ci = _cut_instance_of(proof)
            out = eliminate_cut_ik(ci)
            ok = check(out, IK_OMEGA).accepted and is_cut_free(out)
        else:
            ok = check(proof, ALE_ID).accepted
        if not ok:
            failures += 1
            print(f"FAIL {item['file']}", file=sys.stderr)
    print(f"corpus: {len(manifest['items']) - failures} ok, {failures} failed")
    return 1 if failures else 0


def _cmd_rules(args) -> int:
    calc = parse_calculus(args.calculus)
    for entry in rule_table(calc):
        line = f"{entry['rule']:12s} {entry['schema']}"
        if "restriction" in entry:
            line += f"   [{entry['restriction']}]"
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="seqcalc",
        description="workbench for contraction-free sequent calculi")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("check", help="check a proof script")
    p.add_argument("file")
    p.add_argument("--calculus", required=True)
    p.add_argument("--env")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("measure", help="heights, depth and degree")
    p.add_argument("file", nargs="?")
    p.add_argument("--uts-height", action="store_true")
    p.add_argument("--omega-height", action="store_true")
    p.add_argument("--depth", metavar="FORMULA")
    p.add_argument("--degree", metavar="SEQUENT")
    p.set_defaults(fn=_cmd_measure)

    p = sub.add_parser("cut-eliminate", help="run a cut-elimination engine")
    p.add_argument("file")
    p.add_argument("--calculus", required=True)
    p.add_argument("--env")
    p.add_argument("--out")
    p.add_argument("--metrics")
    p.set_defaults(fn=_cmd_cut_eliminate)

    p = sub.add_parser("translate", help="apply a translation")
    p.add_argument("file", nargs="?")
    p.add_argument("--via", required=True,
                   choices=["star", "circ", "unstar", "uncirc", "tau",
                            "demodalize"])
    p.add_argument("--from", dest="source")
    p.add_argument("--to", dest="target")
    p.add_argument("--formula")
    p.add_argument("--designated", default="P")
    p.add_argument("--env")
    p.add_argument("--out")
    p.add_argument("--provenance")
    p.set_defaults(fn=_cmd_translate)

    p = sub.add_parser("decide", help="decide a finite sequent")
    p.add_argument("sequent")
    p.add_argument("--calculus", required=True)
    p.add_argument("--env")
    p.add_argument("--emit-cert")
    p.add_argument("--proof", action="store_true")
    p.set_defaults(fn=_cmd_decide)

    p = sub.add_parser("refute", help="schematic search over omega-sequents")
    p.add_argument("sequent")
    p.add_argument("--calculus", default="IKw")
    p.add_argument("--emit-cert")
    p.add_argument("--proof", action="store_true")
    p.set_defaults(fn=_cmd_refute)

    p = sub.add_parser("demo", help="bundled derivations")
    p.add_argument("name", nargs="?")
    p.add_argument("--all", action="store_true")
    p.add_argument("--list", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_demo)

    p = sub.add_parser("corpus", help="generate or re-run proof corpora")
    p.add_argument("action", choices=["generate", "run"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="corpus_out")
    p.add_argument("--dir", default="corpus_out")
    p.add_argument("--uts", type=int, default=25)
    p.add_argument("--ik", type=int, default=10)
    p.add_argument("--ale", type=int, default=10)
    p.set_defaults(fn=_cmd_corpus)

    p = sub.add_parser("rules", help="print a calculus rule table")
    p.add_argument("--calculus", required=True)
    p.set_defaults(fn=_cmd_rules)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except SeqcalcError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
