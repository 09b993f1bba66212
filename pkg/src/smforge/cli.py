"""Command line entry point: simulate machines, run lemma checks, emit
machines/presentations/diagrams, and evaluate boundary invariants.

Exit codes: 0 success, 1 usage or parse error, 2 stuck computation,
3 io error, 4 failed lemma check.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import zoo, lemmas
from .machine import (StuckAt, emit_machine, load_machine, run_history,
                      check_parameters)
from .words import format_word, NotAdmissible


def _machine_by_name(name: str, args):
    builders = {
        "S": zoo.make_S,
        "LR": lambda: zoo.make_LR(("a", "b")),
        "RL": lambda: zoo.make_RL(("a", "b")),
        "LRm": lambda: zoo.make_LR_m(("a",), args.m),
        "two_part": zoo.make_two_part_example,
    }
    if name in builders:
        return builders[name]()
    pl = zoo.build_pipeline(zoo.ToyRecognizerSpec(args.toy, _toy_mod(args.toy)),
                            args.m)
    return pl.stage(name)


def _toy_mod(name: str) -> int:
    return {"even": 2, "all": 1, "mod3": 3}.get(name, 2)


def _pipeline(args):
    pl = zoo.build_pipeline(
        zoo.ToyRecognizerSpec(args.toy, _toy_mod(args.toy)), args.m)
    if getattr(args, "params", None):
        overrides = {}
        for line in open(args.params).read().splitlines():
            line = line.split("#")[0].strip()
            if not line:
                continue
            name, _, value = line.partition("=")
            overrides[name.strip()] = Fraction(value.strip())
        ints = {f for f, t in (("lam", 0), ("delta", 0))}
        fixed = {}
        for name, v in overrides.items():
            fixed[name] = v if name in ("lam", "delta") else int(v)
        params = pl.params.replace(**fixed)
        bad = check_parameters(params)
        if bad:
            raise SystemExit("parameter overrides violate: %s"
                             % "; ".join(bad))
        pl = zoo.Pipeline(pl.spec, pl.m, pl.m1, pl.m2, pl.m2bar, pl.m3,
                          pl.m4, pl.m5, pl.main, params)
    return pl


def cmd_simulate(args) -> int:
    try:
        if args.machine_file:
            machine = load_machine(open(args.machine_file).read())
        else:
            machine = _machine_by_name(args.machine, args)
        w0 = machine.parse(args.word)
        history = []
        for tok in args.history.split():
            sign = 1
            if tok.endswith("^-1"):
                sign, tok = -1, tok[:-3]
            history.append(machine.rule(tok, sign))
    except (KeyError, NotAdmissible, ValueError) as e:
        print("parse error: %s" % e, file=sys.stderr)
        return 1
    try:
        comp = run_history(machine, w0, history)
    except StuckAt as e:
        print("stuck at step %d: %s" % (e.step, e.violation), file=sys.stderr)
        return 2
    for c in comp.configs:
        print(format_word(c.word))
    return 0


def cmd_lemma(args) -> int:
    if args.name not in lemmas.LEMMA_CHECKS:
        print("unknown lemma key %r; known: %s"
              % (args.name, " ".join(sorted(lemmas.LEMMA_CHECKS))),
              file=sys.stderr)
        return 1
    if args.name == "conj" and args.k is not None:
        return _conj_single(args)
    kwargs = {}
    if args.depth is not None:
        kwargs["depth"] = args.depth
    if args.bound is not None and args.name in ("I6A6", "conj"):
        kwargs["bound"] = args.bound
    if args.beads is not None and args.name.startswith("mixture"):
        kwargs["max_beads"] = args.beads
    if args.samples is not None and args.name == "ochev":
        kwargs["samples"] = args.samples
    if args.len_ is not None and args.name.startswith("prim"):
        kwargs["max_u"] = args.len_
    try:
        rep = lemmas.LEMMA_CHECKS[args.name](**kwargs)
    except TypeError:
        rep = lemmas.LEMMA_CHECKS[args.name]()
    print(json.dumps({"lemma": rep["lemma"], "bounds": rep["bounds"],
                      "instances": rep["instances"],
                      "verdict": "pass" if rep["ok"] else "fail",
                      "violations": [str(v) for v in rep["violations"][:5]]}))
    print("%s: %s (%d instances at %s)"
          % (rep["lemma"], "pass" if rep["ok"] else "FAIL",
             rep["instances"], rep["bounds"]), file=sys.stderr)
    return 0 if rep["ok"] else 4


def _conj_single(args) -> int:
    from .presentation import emit_group_M
    from .diagrams import verify_diagram, emit_diagram_text
    pl = _pipeline(args)
    w = zoo.conjugacy_witness(pl, args.k, args.bound or 5)
    if w.diagram is not None:
        bad = verify_diagram(w.diagram, emit_group_M(pl.main, 1))
        path = args.out if args.out not in (None, "-") \
            else "conj_witness_k%d.txt" % args.k
        open(path, "w").write(emit_diagram_text(w.diagram))
        print(json.dumps({"lemma": "conj", "k": args.k,
                          "verdict": "pass" if not bad else "fail",
                          "witness": path, "cells": w.diagram.area}))
        return 0 if not bad else 4
    print(json.dumps({"lemma": "conj", "k": args.k,
                      "verdict": "pass" if w.certificate["exhausted"]
                      and not w.certificate["reaches_accept"] else "fail",
                      "certificate": w.certificate["statement"],
                      "states": w.certificate["states"]}))
    return 0 if w.certificate["exhausted"] else 4


def cmd_emit(args) -> int:
    out = sys.stdout if args.out == "-" else None
    try:
        if args.presentation:
            from .presentation import (emit_group_M, emit_group_G,
                                       emit_presentation_text)
            if args.presentation == "G":
                P = emit_group_G(_pipeline(args), args.L)
            else:
                P = emit_group_M(_machine_by_name(args.presentation, args),
                                 args.L or 1)
            text = emit_presentation_text(P)
        elif args.machine:
            text = emit_machine(_machine_by_name(args.machine, args))
        elif args.diagram == "fig1":
            from .diagrams import trapezium_from_computation, emit_diagram_text
            S = zoo.make_S()
            H = [S.rule("t1"), S.rule("t2"), S.rule("t1", -1),
                 S.rule("t2", -1)]
            trap = trapezium_from_computation(
                S, S.parse("q^-1 a q a q").word, H, 1)
            text = emit_diagram_text(trap.diagram)
            if args.svg:
                from .diagrams import trapezium_svg
                open(args.svg, "w").write(trapezium_svg(trap))
        else:
            print("nothing to emit", file=sys.stderr)
            return 1
        if out is not None:
            out.write(text)
        else:
            open(args.out, "w").write(text)
    except OSError as e:
        print("io error: %s" % e, file=sys.stderr)
        return 3
    return 0


def cmd_pipeline(args) -> int:
    pl = _pipeline(args)
    stage = pl.stage(args.emit_stage)
    text = emit_machine(stage)
    try:
        if args.out == "-":
            sys.stdout.write(text)
        else:
            open(args.out, "w").write(text)
            side = args.out + ".provenance"
            with open(side, "w") as f:
                f.write("# rule tags for %s\n" % stage.name)
                for r in stage.positive_rules:
                    f.write("%s\t%s\n" % (r.name, dict(r.tags)))
    except OSError as e:
        print("io error: %s" % e, file=sys.stderr)
        return 3
    print("params: %s" % check_parameters(pl.params) or "consistent",
          file=sys.stderr)
    return 0


def cmd_mixture(args) -> int:
    from .metrics import necklace_mixture, WHITE, BLACK, PLAIN
    try:
        tokens = open(args.boundary).read().split() if args.boundary \
            else args.beads.split()
    except OSError as e:
        print("io error: %s" % e, file=sys.stderr)
        return 3
    beads = []
    if all(t in ("w", "white", "b", "black", ".") for t in tokens):
        for t in tokens:
            beads.append(WHITE if t in ("w", "white")
                         else BLACK if t in ("b", "black") else PLAIN)
    else:
        # a boundary word: rule letters are white, state letters black
        pl = _pipeline(args)
        rules = {r.name for r in pl.main.positive_rules}
        qs = {s for slot in pl.main.hardware.slots for s in slot.letters}
        for t in tokens:
            name = t.split("^")[0]
            beads.append(WHITE if name in rules
                         else BLACK if name in qs else PLAIN)
    print(necklace_mixture(beads, args.J))
    return 0


def cmd_design(args) -> int:
    from .metrics import Design, design_check_P, design_ratio
    try:
        lines = [l.split() for l in open(args.infile).read().splitlines()
                 if l.strip() and not l.startswith("#")]
    except OSError as e:
        print("io error: %s" % e, file=sys.stderr)
        return 3
    chords = frozenset(lines[0])
    arcs = tuple(tuple(l) for l in lines[1:])
    d = Design(chords, arcs)
    num, den = args.lam.split("/")
    lam = Fraction(int(num), int(den))
    ok = design_check_P(d, lam, args.n)
    ell, nt, ratio = design_ratio(d)
    print(json.dumps({"P(lambda,n)": ok, "length": ell, "chords": nt,
                      "ratio": str(ratio)}))
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="forge")
    ap.add_argument("--toy", default="even")
    ap.add_argument("--m", type=int, default=2)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("simulate")
    p.add_argument("--machine", default="S")
    p.add_argument("--machine-file")
    p.add_argument("--word", required=True)
    p.add_argument("--history", required=True)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("lemma")
    p.add_argument("name")
    p.add_argument("--depth", type=int)
    p.add_argument("--bound", type=int)
    p.add_argument("--beads", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--len", type=int, dest="len_")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_lemma)

    p = sub.add_parser("emit")
    p.add_argument("--presentation")
    p.add_argument("--machine")
    p.add_argument("--diagram")
    p.add_argument("--L", type=int)
    p.add_argument("--svg")
    p.add_argument("--out", default="-")
    p.set_defaults(fn=cmd_emit)

    p = sub.add_parser("pipeline")
    p.add_argument("--emit-stage", default="m3")
    p.add_argument("--out", default="-")
    p.set_defaults(fn=cmd_pipeline)

    p = sub.add_parser("mixture")
    p.add_argument("--boundary")
    p.add_argument("--beads", default="")
    p.add_argument("--J", type=int, required=True)
    p.set_defaults(fn=cmd_mixture)

    p = sub.add_parser("design")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--lambda", dest="lam", default="1/2")
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(fn=cmd_design)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
