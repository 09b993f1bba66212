"""Concrete machines and the combinator pipeline producing the main machine.

The pipeline starts from a small recognizer (a pluggable "toy" machine whose
accepted inputs al^k are decidable at desk scale, k = 0 mod d by default),
then successively:

  * interleaves history sectors that hold a copy of the planned run,
  * pads every part with running-letter slots,
  * composes with left/right sweep machines into 4m+1 checking stages,
  * doubles the base with an inverted mirror copy and closes it into a
    circle with a separator letter,
  * and finally wraps everything with an input-writing phase, an input
    sweep, a history-writing phase, and an erasing phase, giving the main
    machine with a unique accept configuration.

Every constructed rule carries tags (step, transition, stage) used by step
histories, eligibility and the lemma-check suite; `Pipeline.meta` keeps the
letter provenance needed to assemble canonical configurations and runs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .machine import (Parameters, Rule, RulePart, SMachine, Computation,
                      run_history)
from .words import AdmissibleWord, Hardware, Slot, Word, EMPTY, winv


def _w(hw: Hardware, pairs) -> Word:
    return tuple(hw.y(s, sg) for s, sg in pairs)


def _mk_rule(hw: Hardware, name: str, state: dict, overrides: dict = None,
             declared: dict = None, tags: Sequence = ()) -> Rule:
    """Rule from an identity state map plus per-slot overrides.

    state maps slot name -> letter fixed by the rule; overrides maps slot
    name -> (q_from, a, q_to, b) with a, b lists of (sym, sign).
    """
    overrides = overrides or {}
    declared = declared or {}
    parts = []
    for i, slot in enumerate(hw.slots):
        if slot.name in overrides:
            q_from, a, q_to, b = overrides[slot.name]
            parts.append(RulePart(i, q_from, _w(hw, a), q_to, _w(hw, b)))
        else:
            sym = state[slot.name]
            parts.append(RulePart(i, sym, EMPTY, sym, EMPTY))
    decl = tuple(declared.get(j) for j in range(len(hw.slots)))
    return Rule(name, 1, tuple(parts), decl, tuple(sorted(tags)))


# ---------------------------------------------------------------------------
# The simplest interesting machine: one slot on a circle, two identical
# commands q -> a q on a single state letter.


def make_S() -> SMachine:
    hw = Hardware((Slot("Q", 1, ("q",)),), (("a",),), circular=True)
    rules = [_mk_rule(hw, name, {}, {"Q": ("q", [("a", 1)], "q", [])},
                      tags=(("step", 1),))
             for name in ("t1", "t2")]
    return SMachine("S", hw, rules, start_syms=("q",), end_syms=("q",),
                    meta={"kind": "S"})


def make_two_part_example() -> SMachine:
    """Two state parts on a circle with one rule [q1 -> a^-1 q1' b,
    q2 -> c q2' d]; exercises simultaneous replacement, reduction and
    trimming on words with non-reduced bases."""
    hw = Hardware((Slot("Q1", 1, ("q1", "q1'")), Slot("Q2", 1, ("q2", "q2'"))),
                  (("a", "d"), ("b", "c")), circular=True)
    rule = _mk_rule(hw, "theta", {},
                    {"Q1": ("q1", [("a", -1)], "q1'", [("b", 1)]),
                     "Q2": ("q2", [("c", 1)], "q2'", [("d", 1)])})
    return SMachine("two-part", hw, [rule], meta={"kind": "example"})


# ---------------------------------------------------------------------------
# Running-letter machines.  LR walks a middle letter left and then right
# through the sector before it, converting letters to copies and back; RL is
# the left-right dual.  LR_m repeats the round trip m times.


def make_LR(Y: Sequence[str] = ("a", "b")) -> SMachine:
    hw = Hardware((Slot("Q1", 1, ("q1",)), Slot("P", 1, ("p1", "p2")),
                   Slot("Q2", 1, ("q2",))),
                  ((), tuple(Y), tuple(a + "'" for a in Y)))
    state = {"Q1": "q1", "Q2": "q2"}
    rules = []
    for a in Y:
        rules.append(_mk_rule(hw, "zeta1(%s)" % a, state,
                              {"P": ("p1", [(a, -1)], "p1", [(a + "'", 1)])}))
    rules.append(_mk_rule(hw, "zeta12", state, {"P": ("p1", [], "p2", [])},
                          declared={1: frozenset()}))
    for a in Y:
        rules.append(_mk_rule(hw, "zeta2(%s)" % a, state,
                              {"P": ("p2", [(a, 1)], "p2", [(a + "'", -1)])}))
    return SMachine("LR", hw, rules,
                    start_syms=("q1", "p1", "q2"), end_syms=("q1", "p2", "q2"),
                    meta={"kind": "LR", "Y": tuple(Y)})


def make_RL(Y: Sequence[str] = ("a", "b")) -> SMachine:
    hw = Hardware((Slot("Q1", 1, ("q1",)), Slot("R", 1, ("r1", "r2")),
                   Slot("Q2", 1, ("q2",))),
                  ((), tuple(a + "'" for a in Y), tuple(Y)))
    state = {"Q1": "q1", "Q2": "q2"}
    rules = []
    for a in Y:
        rules.append(_mk_rule(hw, "rho1(%s)" % a, state,
                              {"R": ("r1", [(a + "'", 1)], "r1", [(a, -1)])}))
    rules.append(_mk_rule(hw, "rho12", state, {"R": ("r1", [], "r2", [])},
                          declared={2: frozenset()}))
    for a in Y:
        rules.append(_mk_rule(hw, "rho2(%s)" % a, state,
                              {"R": ("r2", [(a + "'", -1)], "r2", [(a, 1)])}))
    return SMachine("RL", hw, rules,
                    start_syms=("q1", "r1", "q2"), end_syms=("q1", "r2", "q2"),
                    meta={"kind": "RL", "Y": tuple(Y)})


def make_LR_m(Y: Sequence[str], m: int) -> SMachine:
    """m round trips; the middle letter's index climbs to 2m, one step at
    each turnaround."""
    assert m >= 1 and Y
    ps = tuple("p.%d" % i for i in range(1, 2 * m + 1))
    hw = Hardware((Slot("Q1", 1, ("q1",)), Slot("P", 1, ps),
                   Slot("Q2", 1, ("q2",))),
                  ((), tuple(Y), tuple(a + "~" for a in Y)))
    state = {"Q1": "q1", "Q2": "q2"}
    rules = []
    for i in range(1, 2 * m + 1):
        p = "p.%d" % i
        for a in Y:
            if i % 2 == 1:
                rules.append(_mk_rule(hw, "zeta%d(%s)" % (i, a), state,
                                      {"P": (p, [(a, -1)], p, [(a + "~", 1)])}))
            else:
                rules.append(_mk_rule(hw, "zeta%d(%s)" % (i, a), state,
                                      {"P": (p, [(a, 1)], p, [(a + "~", -1)])}))
        if i < 2 * m:
            lock = 1 if i % 2 == 1 else 2
            rules.append(_mk_rule(hw, "zeta(%d,%d)" % (i, i + 1), state,
                                  {"P": (p, [], "p.%d" % (i + 1), [])},
                                  declared={lock: frozenset()}))
    return SMachine("LR_%d" % m, hw, rules,
                    start_syms=("q1", "p.1", "q2"),
                    end_syms=("q1", "p.%d" % (2 * m), "q2"),
                    meta={"kind": "LR_m", "Y": tuple(Y), "m": m})


# ---------------------------------------------------------------------------
# The toy recognizer.  Input al^k in the first sector; k is accepted exactly
# when the middle letter's counter returns to zero mod d, scanning one input
# letter per step.  Three parts so that the later history interleaving has a
# genuine history sector; total insertion per rule is at most one letter.


@dataclass(frozen=True)
class ToyRecognizerSpec:
    name: str
    modulus: int

    def accepts(self, k: int) -> bool:
        return k >= 0 and k % self.modulus == 0


EVEN = ToyRecognizerSpec("even", 2)


def make_toy_M1(spec: ToyRecognizerSpec = EVEN) -> SMachine:
    d = spec.modulus
    assert d >= 1
    ps = tuple("p%d" % i for i in range(d))
    hw = Hardware((Slot("Q0", 1, ("q0s", "q0", "q0e")),
                   Slot("Q1", 1, ("q1s",) + ps + ("q1e",)),
                   Slot("Q2", 1, ("q2s", "q2", "q2e"))),
                  ((), ("al",), ()))
    rules = [_mk_rule(hw, "start", {},
                      {"Q0": ("q0s", [], "q0", []),
                       "Q1": ("q1s", [], "p0", []),
                       "Q2": ("q2s", [], "q2", [])})]
    for i in range(d):
        rules.append(_mk_rule(hw, "del%d" % i, {"Q0": "q0", "Q2": "q2"},
                              {"Q1": ("p%d" % i, [("al", -1)],
                                      "p%d" % ((i + 1) % d), [])}))
    rules.append(_mk_rule(hw, "fin", {},
                          {"Q0": ("q0", [], "q0e", []),
                           "Q1": ("p0", [], "q1e", []),
                           "Q2": ("q2", [], "q2e", [])},
                          declared={1: frozenset()}))
    meta = {"kind": "M1", "spec": spec, "input_junction": 1,
            "start_rule": "start", "end_rule": "fin"}
    return SMachine("M1[%s]" % spec.name, hw, rules,
                    start_syms=("q0s", "q1s", "q2s"),
                    end_syms=("q0e", "q1e", "q2e"), meta=meta)


def m1_accepting_history(m1: SMachine, k: int) -> Optional[list]:
    """Rule names of the canonical accepting run on input al^k, or None."""
    spec = m1.meta["spec"]
    if not spec.accepts(k):
        return None
    names = ["start"]
    for i in range(k):
        names.append("del%d" % (i % spec.modulus))
    names.append("fin")
    return names


def i1_config(m1: SMachine, k: int) -> AdmissibleWord:
    hw = m1.hardware
    w = [hw.q("q0s")] + [hw.y("al")] * k + [hw.q("q1s"), hw.q("q2s")]
    return hw.parse_admissible(tuple(w))


# ---------------------------------------------------------------------------
# Stage 2: history sectors.  Every part of the recognizer splits into a left
# and a right copy; the new sectors between the two copies hold a copy of
# the planned history, scanned one letter per step: the rule copy of theta
# multiplies each history sector by the left-alphabet copy of theta inverse
# on the left and by the right-alphabet copy on the right.


def hl(rule_name: str) -> str:
    return "h(%s).l" % rule_name


def hr(rule_name: str) -> str:
    return "h(%s).r" % rule_name


def add_history_sectors(m1: SMachine) -> SMachine:
    hw1 = m1.hardware
    n = len(hw1.slots) - 1
    assert not hw1.circular
    for r in m1.positive_rules:
        total = sum(len(p.a) + len(p.b) for p in r.parts)
        if total > 1:
            raise ValueError("recognizer must insert at most one letter "
                             "per rule (rule %s inserts %d)" % (r.name, total))
    rule_names = [r.name for r in m1.positive_rules]

    slots = []
    junctions = [()]
    slot_role = []            # ("l", i) / ("r", i) in recognizer part order
    for i in range(n + 1):
        part = hw1.slots[i]
        if i > 0:
            slots.append(Slot(part.name + ".l", 1,
                              tuple(s + ".l" for s in part.letters)))
            slot_role.append(("l", i))
            junctions.append(tuple(s for s in hw1.junctions[i]))
        if i < n:
            if i > 0:
                junctions.append(tuple(hl(x) for x in rule_names) +
                                 tuple(hr(x) for x in rule_names))
            slots.append(Slot(part.name + ".r", 1,
                              tuple(s + ".r" for s in part.letters)))
            slot_role.append(("r", i))
    hw = Hardware(tuple(slots), tuple(junctions))

    history_junctions = [j for j, role in enumerate(slot_role)
                         if role[0] == "r" and j > 0]
    # junction j sits left of slot j; the history junction is left of each
    # ".r" slot other than the first slot.

    rules = []
    for r in m1.positive_rules:
        overrides = {}
        for j, (side, i) in enumerate(slot_role):
            p = r.parts[i]
            sfx = "." + side
            if side == "l":
                b = [(hl(r.name), -1)] if i < n else []
                overrides[hw.slots[j].name] = (
                    p.q_from + sfx,
                    [(x.sym, x.sign) for x in p.a],
                    p.q_to + sfx, b)
            else:
                a = [(hr(r.name), 1)] if i > 0 else []
                overrides[hw.slots[j].name] = (
                    p.q_from + sfx, a, p.q_to + sfx,
                    [(x.sym, x.sign) for x in p.b])
        declared = {}
        # working-sector domains follow the recognizer's
        for j in range(1, len(slots)):
            side, i = slot_role[j]
            if side == "l":
                d = r.declared[i]
                if d is not None:
                    declared[j] = frozenset(d)
        for j in history_junctions:
            if r.name == m1.meta["start_rule"]:
                declared[j] = frozenset(hl(x) for x in rule_names)
            elif r.name == m1.meta["end_rule"]:
                declared[j] = frozenset(hr(x) for x in rule_names)
        rules.append(_mk_rule(hw, r.name + ".h", {}, overrides, declared,
                              tags=(("of", r.name),)))

    def syms(which):
        return tuple((which[i] + "." + side) for (side, i) in slot_role)

    meta = {"kind": "M2", "m1": m1, "slot_role": tuple(slot_role),
            "history_junctions": tuple(history_junctions),
            "input_junction": 1, "rule_names": tuple(rule_names)}
    return SMachine("M2", hw, rules,
                    start_syms=syms(m1.start_syms), end_syms=syms(m1.end_syms),
                    meta=meta)


def i2_config(m2: SMachine, k: int, hnames: Sequence[str],
              alphabet: str = "l") -> AdmissibleWord:
    """Start (left alphabet) or end (right alphabet) configuration with the
    history copy written in every history sector."""
    hw = m2.hardware
    syms = m2.start_syms if alphabet == "l" else m2.end_syms
    h = [(hl if alphabet == "l" else hr)(x) for x in hnames]
    w = []
    for j, sym in enumerate(syms):
        w.append(hw.q(sym))
        if j + 1 < len(syms):
            if j + 1 == m2.meta["input_junction"] and alphabet == "l":
                w.extend(hw.y("al") for _ in range(k))
            if j + 1 in m2.meta["history_junctions"]:
                w.extend(hw.y(x) for x in h)
    return hw.parse_admissible(tuple(w))


def a2_config(m2: SMachine, hnames: Sequence[str]) -> AdmissibleWord:
    return i2_config(m2, 0, hnames, alphabet="r")


# ---------------------------------------------------------------------------
# Stage 3 hardware: triple every part with running-letter slots.  All new
# sectors are locked by every rule of this machine; they come alive in the
# sweep stages of the 4m+1 composition.


def add_running_slots(m2: SMachine) -> SMachine:
    hw2 = m2.hardware
    s = len(hw2.slots)
    slots = []
    junctions = [()]
    for i in range(s):
        if i > 0:
            junctions.append(hw2.junctions[i])     # old sector -> R_{i-1} P_i
        slots.append(Slot("P%d" % i, 1, ("p%d" % i,)))
        junctions.append(())                        # P_i Q_i, always locked
        slots.append(Slot("Q%d" % i, 1, hw2.slots[i].letters))
        junctions.append(())                        # Q_i R_i, always locked
        slots.append(Slot("R%d" % i, 1, ("r%d" % i,)))
    hw = Hardware(tuple(slots), tuple(junctions))

    old_to_new_junction = {i: 3 * i for i in range(1, s)}
    rules = []
    for r in m2.positive_rules:
        overrides = {}
        declared = {}
        for i in range(s):
            p = r.parts[i]
            overrides["P%d" % i] = ("p%d" % i,
                                    [(x.sym, x.sign) for x in p.a],
                                    "p%d" % i, [])
            overrides["Q%d" % i] = (p.q_from, [], p.q_to, [])
            overrides["R%d" % i] = ("r%d" % i, [],
                                    "r%d" % i, [(x.sym, x.sign) for x in p.b])
            declared[3 * i + 1] = frozenset()       # P_i Q_i
            if 3 * i + 2 < len(slots):
                declared[3 * i + 2] = frozenset()   # Q_i R_i
        for old, d in enumerate(r.declared):
            if d is not None and old in old_to_new_junction:
                declared[old_to_new_junction[old]] = d
        rules.append(_mk_rule(hw, r.name, {}, overrides, declared, r.tags))

    def syms(which):
        out = []
        for i in range(s):
            out += ["p%d" % i, which[i], "r%d" % i]
        return tuple(out)

    hist = tuple(old_to_new_junction[j] for j in m2.meta["history_junctions"])
    # (Q-slot, R-slot, P-slot, left flank, history junction, right flank)
    triples = tuple((j - 2, j - 1, j, j - 1, j, j + 1) for j in hist)
    meta = {"kind": "M2bar", "m2": m2,
            "history_junctions": hist,
            "history_triples": triples,
            "input_junction": old_to_new_junction[m2.meta["input_junction"]],
            "junction_map": old_to_new_junction}
    return SMachine("M2bar", hw, rules,
                    start_syms=syms(m2.start_syms),
                    end_syms=syms(m2.end_syms), meta=meta)


def i3_config(m3: SMachine, k: int, hnames: Sequence[str]) -> AdmissibleWord:
    return _m3_phase_config(m3, k, hnames, stage=1)


def _m3_phase_config(m3: SMachine, k: int, hnames, stage: int,
                     alphabet: str = "l") -> AdmissibleWord:
    hw = m3.hardware
    meta = m3.meta
    syms = meta["stage_start"][stage] if alphabet == "l" \
        else meta["stage_end"][stage]
    h = [meta["hist_sym"][x + "." + alphabet] for x in hnames]
    w = []
    for j, sym in enumerate(syms):
        w.append(hw.q(sym))
        if j + 1 < len(syms):
            if j + 1 == meta["input_junction"] and alphabet == "l":
                w.extend(hw.y("al") for _ in range(k))
            if j + 1 in meta["history_junctions"]:
                w.extend(hw.y(x) for x in h)
    return hw.parse_admissible(tuple(w))


def compose_M3(m2bar: SMachine, m: int) -> SMachine:
    """4m+1 stages: sweep the history sectors right-left, execute the
    history, sweep left-right, execute it backwards, and so on; transition
    rules between stages lock everything except history (and, at the
    backward/forward seams, the input sector)."""
    m2 = m2bar.meta["m2"]
    hw2b = m2bar.hardware
    triples = m2bar.meta["history_triples"]
    hist_junctions = m2bar.meta["history_junctions"]
    input_junction = m2bar.meta["input_junction"]
    m1_rules = m2.meta["rule_names"]
    S = 4 * m + 1
    kinds = {s: ("rl", "fwd", "lr", "bwd")[(s - 1) % 4] for s in range(1, S + 1)}

    trip_r = {t[1] for t in triples}
    trip_p = {t[2] for t in triples}
    stg = lambda sym, s: "%s@%d" % (sym, s)

    # per-slot letters and per-stage anchor maps
    q_index = {}                       # Q-slot position -> recognizer part idx
    for idx, slot in enumerate(hw2b.slots):
        if slot.name.startswith("Q"):
            q_index[idx] = int(slot.name[1:])
    letters = {slot.name: [] for slot in hw2b.slots}
    anchors = {}                       # (stage, slot name) -> anchor letter
    stage_start, stage_end = {}, {}
    for s in range(1, S + 1):
        kind = kinds[s]
        start_syms, end_syms = [], []
        for idx, slot in enumerate(hw2b.slots):
            if kind in ("fwd", "bwd") and idx in q_index:
                base = list(hw2b.slots[idx].letters)
                letters[slot.name] += [stg(x, s) for x in base]
                a = m2bar.start_syms[idx] if kind == "fwd" \
                    else m2bar.end_syms[idx]
                b = m2bar.end_syms[idx] if kind == "fwd" \
                    else m2bar.start_syms[idx]
                start_syms.append(stg(a, s))
                end_syms.append(stg(b, s))
                continue
            if kind in ("fwd", "bwd"):
                base = slot.letters[0]
            elif idx in q_index:
                which = m2bar.start_syms if kind == "rl" else m2bar.end_syms
                base = which[idx]
            else:
                base = slot.letters[0]
            run = (kind == "rl" and idx in trip_r) or \
                  (kind == "lr" and idx in trip_p)
            if run:
                letters[slot.name] += [stg(base, s) + ".1", stg(base, s) + ".2"]
                start_syms.append(stg(base, s) + ".1")
                end_syms.append(stg(base, s) + ".2")
            else:
                letters[slot.name].append(stg(base, s))
                anchors[(s, slot.name)] = stg(base, s)
                start_syms.append(stg(base, s))
                end_syms.append(stg(base, s))
        stage_start[s] = tuple(start_syms)
        stage_end[s] = tuple(end_syms)

    # junction alphabets: keep the old ones, add sweep-deposit copies on the
    # flanks of every history sector
    junctions = [list(a) for a in hw2b.junctions]
    depA = {x: "h(%s).A" % x for x in m1_rules}     # right-sweep deposits
    depB = {x: "h(%s).B" % x for x in m1_rules}     # left-sweep deposits
    for (_, _, _, fl, hj, fr) in triples:
        junctions[fl] += [depA[x] for x in m1_rules]
        junctions[fr] += [depB[x] for x in m1_rules]
    hw = Hardware(tuple(s._replace(letters=tuple(letters[s.name]))
                        for s in hw2b.slots),
                  tuple(tuple(a) for a in junctions))

    hist_l = {x: hl(x) for x in m1_rules}
    hist_r = {x: hr(x) for x in m1_rules}
    Xl = frozenset(hist_l.values())
    Xr = frozenset(hist_r.values())

    def state_for(s):
        return {name: anchors[(s, name)] for name in letters
                if (s, name) in anchors}

    rules = []
    for s in range(1, S + 1):
        kind = kinds[s]
        state = state_for(s)
        tags = (("stage", s), ("kind", kind))
        if kind in ("rl", "lr"):
            run_slots = sorted(trip_r if kind == "rl" else trip_p)
            names = [hw2b.slots[i].name for i in run_slots]
            bases = {nm: stg(hw2b.slots[i].letters[0], s)
                     for nm, i in zip(names, run_slots)}
            for x in m1_rules:
                ov = {}
                for nm in names:
                    if kind == "rl":
                        ov[nm] = (bases[nm] + ".1", [(depA[x], 1)],
                                  bases[nm] + ".1", [(hist_l[x], -1)])
                    else:
                        ov[nm] = (bases[nm] + ".1", [(hist_r[x], -1)],
                                  bases[nm] + ".1", [(depB[x], 1)])
                rules.append(_mk_rule(hw, "%s%d.fwd(%s)" % (kind, s, x),
                                      state, ov, tags=tags))
            ov = {nm: (bases[nm] + ".1", [], bases[nm] + ".2", [])
                  for nm in names}
            rules.append(_mk_rule(hw, "%s%d.turn" % (kind, s), state, ov,
                                  declared={hj: frozenset()
                                            for hj in hist_junctions},
                                  tags=tags))
            for x in m1_rules:
                ov = {}
                for nm in names:
                    if kind == "rl":
                        ov[nm] = (bases[nm] + ".2", [(depA[x], -1)],
                                  bases[nm] + ".2", [(hist_l[x], 1)])
                    else:
                        ov[nm] = (bases[nm] + ".2", [(hist_r[x], 1)],
                                  bases[nm] + ".2", [(depB[x], -1)])
                rules.append(_mk_rule(hw, "%s%d.back(%s)" % (kind, s, x),
                                      state, ov, tags=tags))
        else:
            for r in m2bar.positive_rules:
                fwd = kind == "fwd"
                parts = r.parts if fwd else \
                    tuple(RulePart(p.slot, p.q_to, winv(p.a), p.q_from,
                                   winv(p.b)) for p in r.parts)
                ov = {}
                for p in parts:
                    nm = hw2b.slots[p.slot].name
                    ov[nm] = (stg(p.q_from, s),
                              [(x.sym, x.sign) for x in p.a],
                              stg(p.q_to, s),
                              [(x.sym, x.sign) for x in p.b])
                declared = {j: d for j, d in enumerate(r.declared)
                            if d is not None}
                rules.append(_mk_rule(hw, "c%d.%s%s" % (s, r.name,
                                                        "" if fwd else "~"),
                                      {}, ov, declared, tags=tags))
        if s < S:
            # transition rule into the next stage
            ov = {hw2b.slots[i].name: (stage_end[s][i], [],
                                       stage_start[s + 1][i], [])
                  for i in range(len(hw2b.slots))}
            declared = {j: frozenset() for j in range(1, len(hw2b.slots))}
            restrict = Xl if kinds[s] in ("bwd", "rl") else Xr
            for hj in hist_junctions:
                declared[hj] = restrict
            if kinds[s] in ("rl", "bwd"):
                declared.pop(input_junction)
            rules.append(_mk_rule(hw, "chi(%d,%d)" % (s, s + 1), {}, ov,
                                  declared,
                                  tags=(("stage", s), ("chi", (s, s + 1)))))

    hist_sym = {}
    for x in m1_rules:
        hist_sym[x + ".l"] = hist_l[x]
        hist_sym[x + ".r"] = hist_r[x]
    meta = {"kind": "M3", "m2bar": m2bar, "m2": m2, "m": m, "stages": S,
            "stage_kinds": kinds, "stage_start": stage_start,
            "stage_end": stage_end,
            "history_junctions": hist_junctions,
            "history_triples": triples,
            "input_junction": input_junction,
            "hist_sym": hist_sym, "m1_rules": m1_rules}
    return SMachine("M3", hw, rules, start_syms=stage_start[1],
                    end_syms=stage_end[S], meta=meta)


# ---------------------------------------------------------------------------
# Mirror copy and circular closure.


def _prime(sym: str) -> str:
    return sym + "'"


def mirror_and_circularize(m3: SMachine):
    hw3 = m3.hardware
    K = len(hw3.slots)

    # --- M4: double the base with an inverted mirror copy -----------------
    slots4 = list(hw3.slots)
    for u in range(K):
        orig = hw3.slots[K - 1 - u]
        slots4.append(Slot(_prime(orig.name), -1,
                           tuple(_prime(x) for x in orig.letters)))
    junctions4 = [list(a) for a in hw3.junctions] + [()]     # middle at K
    for j in range(K + 1, 2 * K):
        junctions4.append(tuple(_prime(x) for x in hw3.junctions[2 * K - j]))
    hw4 = Hardware(tuple(slots4), tuple(tuple(a) for a in junctions4))

    def mirror_rule(hw, r: Rule) -> Rule:
        parts = []
        for p in r.parts:
            parts.append(RulePart(p.slot, p.q_from,
                                  tuple(hw.y(x.sym, x.sign) for x in p.a),
                                  p.q_to,
                                  tuple(hw.y(x.sym, x.sign) for x in p.b)))
            parts.append(RulePart(
                2 * K - 1 - p.slot, _prime(p.q_from),
                tuple(hw.y(_prime(x.sym), x.sign) for x in p.a),
                _prime(p.q_to),
                tuple(hw.y(_prime(x.sym), x.sign) for x in p.b)))
        parts.sort(key=lambda p: p.slot)
        declared = [None] * len(hw.slots)
        for j, d in enumerate(r.declared):
            if d is None:
                continue
            declared[j] = d
            declared[2 * K - j] = frozenset(_prime(x) for x in d)
        return Rule(r.name, 1, tuple(parts), tuple(declared), r.tags)

    rules4 = [mirror_rule(hw4, r) for r in m3.positive_rules]
    start4 = tuple(m3.start_syms) + tuple(_prime(x)
                                          for x in reversed(m3.start_syms))
    end4 = tuple(m3.end_syms) + tuple(_prime(x) for x in reversed(m3.end_syms))
    meta4 = {"kind": "M4", "m3": m3}
    m4 = SMachine("M4", hw4, rules4, start4, end4, meta4)

    # --- M5: one separator slot, circular base -----------------------------
    slots5 = (Slot("T", 1, ("tt",)),) + hw4.slots
    junctions5 = ((), ()) + hw4.junctions[1:]
    hw5 = Hardware(slots5, junctions5, circular=True)
    rules5 = []
    for r in m4.positive_rules:
        parts = (RulePart(0, "tt", EMPTY, "tt", EMPTY),) + tuple(
            RulePart(p.slot + 1, p.q_from,
                     tuple(hw5.y(x.sym, x.sign) for x in p.a), p.q_to,
                     tuple(hw5.y(x.sym, x.sign) for x in p.b))
            for p in r.parts)
        declared = (None,) + r.declared
        rules5.append(Rule(r.name, 1, parts, declared, r.tags))
    shift = lambda j: j + 1
    meta5 = {"kind": "M5", "m3": m3, "m4": m4,
             "input_junctions": (shift(m3.meta["input_junction"]),
                                 2 * K + 2 - shift(m3.meta["input_junction"])),
             "history_junctions": tuple(
                 shift(j) for j in m3.meta["history_junctions"]) + tuple(
                 2 * K + 2 - shift(j) for j in m3.meta["history_junctions"]),
             "mirror_junction": lambda j: 2 * K + 2 - j,
             "K3": K}
    m5 = SMachine("M5", hw5, rules5, ("tt",) + start4, ("tt",) + end4, meta5)
    return m4, m5


# ---------------------------------------------------------------------------
# The main machine.  Five rule sets: write the input, sweep it, write the
# history, run the checking machine, erase; one accept rule.


def build_main_M(m5: SMachine, m: int) -> SMachine:
    hw5 = m5.hardware
    K5 = len(hw5.slots)
    in_j, in_j_mir = m5.meta["input_junctions"]
    hist_js = m5.meta["history_junctions"]
    orig_hist = [j for j in hist_js if j <= K5 // 2]
    mir_hist = [j for j in hist_js if j > K5 // 2]
    m3 = m5.meta["m3"]
    m1_rules = m3.meta["m1_rules"]
    hist_l = {x: hl(x) for x in m1_rules}
    Xl = frozenset(hist_l.values())
    Xl_mir = frozenset(_prime(x) for x in Xl)

    in_p_slot = in_j                      # P-slot right of the input junction
    in_p_slot_mir = K5 - in_j             # its mirror (circular count)
    dep_j, dep_j_mir = in_j + 1, K5 + 1 - (in_j + 1)

    def setname(slot: Slot, tag: str) -> str:
        return slot.name.lower() + "!" + tag

    slots = []
    for i, slot in enumerate(hw5.slots):
        if slot.name == "T":
            slots.append(slot)
            continue
        extra = [setname(slot, "1")]
        if i in (in_p_slot, in_p_slot_mir):
            extra += [setname(slot, "2.%d" % u) for u in range(1, 2 * m + 1)]
        else:
            extra += [setname(slot, "2")]
        extra += [setname(slot, "3"), setname(slot, "5"), setname(slot, "e")]
        slots.append(slot._replace(letters=slot.letters + tuple(extra)))
    junctions = [list(a) for a in hw5.junctions]
    junctions[dep_j].append("al~")
    junctions[dep_j_mir].append("al~'")
    hw = Hardware(tuple(slots), tuple(tuple(a) for a in junctions),
                  circular=True)

    def phase_state(tag: str) -> dict:
        return {s.name: (setname(s, tag) if s.name != "T" else "tt")
                for s in hw.slots}

    def phase_syms(tag: str) -> tuple:
        return tuple(phase_state(tag)[s.name] for s in hw.slots)

    lock_all_except = lambda keep: {j: (keep[j] if j in keep else frozenset())
                                    for j in range(K5)}
    IN = {in_j: frozenset(["al"]), in_j_mir: frozenset(["al'"])}
    HIST = {j: Xl for j in orig_hist}
    HIST.update({j: Xl_mir for j in mir_hist})

    rules = []
    sup = lambda *pairs: tuple(pairs)

    # Set 1: insert the input letter next to the left of the input P-letter
    # (and its mirror image next to the right of the inverted copy).
    p1 = hw.slots[in_p_slot].name
    p1m = hw.slots[in_p_slot_mir].name
    st1 = phase_state("1")
    rules.append(_mk_rule(
        hw, "ins(al)", st1,
        {p1: (st1[p1], [("al", 1)], st1[p1], []),
         p1m: (st1[p1m], [("al'", 1)], st1[p1m], [])},
        declared=lock_all_except(IN),
        tags=sup(("step", 1), ("template", "super"))))

    st2 = phase_state("2")
    st2[p1] = setname(hw.slots[in_p_slot], "2.1")
    st2[p1m] = setname(hw.slots[in_p_slot_mir], "2.1")
    rules.append(_mk_rule(
        hw, "theta(12)", st1,
        {s.name: (st1[s.name], [], st2[s.name], []) for s in hw.slots
         if s.name != "T"},
        declared=lock_all_except(IN),
        tags=sup(("transition", (1, 2)), ("template", "super"))))

    # Set 2: the input sweep, m round trips in the input sector and its
    # mirror image in parallel.
    for u in range(1, 2 * m + 1):
        pu = setname(hw.slots[in_p_slot], "2.%d" % u)
        pum = setname(hw.slots[in_p_slot_mir], "2.%d" % u)
        s2 = dict(st2, **{p1: pu, p1m: pum})
        if u % 2 == 1:
            ov = {p1: (pu, [("al", -1)], pu, [("al~", 1)]),
                  p1m: (pum, [("al'", -1)], pum, [("al~'", 1)])}
        else:
            ov = {p1: (pu, [("al", 1)], pu, [("al~", -1)]),
                  p1m: (pum, [("al'", 1)], pum, [("al~'", -1)])}
        rules.append(_mk_rule(hw, "sweep%d(al)" % u, s2, ov,
                              tags=sup(("step", 2), ("template", "super"))))
        if u < 2 * m:
            locked = (in_j, in_j_mir) if u % 2 == 1 else (dep_j, dep_j_mir)
            rules.append(_mk_rule(
                hw, "sweep(%d,%d)" % (u, u + 1), s2,
                {p1: (pu, [], setname(hw.slots[in_p_slot], "2.%d" % (u + 1)), []),
                 p1m: (pum, [], setname(hw.slots[in_p_slot_mir],
                                        "2.%d" % (u + 1)), [])},
                declared={j: frozenset() for j in locked},
                tags=sup(("step", 2), ("template", "super"))))

    st2end = dict(st2)
    st2end[p1] = setname(hw.slots[in_p_slot], "2.%d" % (2 * m))
    st2end[p1m] = setname(hw.slots[in_p_slot_mir], "2.%d" % (2 * m))
    st3 = phase_state("3")
    rules.append(_mk_rule(
        hw, "theta(23)", st2end,
        {s.name: (st2end[s.name], [], st3[s.name], []) for s in hw.slots
         if s.name != "T"},
        declared=lock_all_except(IN),
        tags=sup(("transition", (2, 3)), ("template", "erase"))))

    # Set 3: write a history word into every history sector, one letter per
    # step, next to the right of the R-letter (so the word grows leftward).
    hist_r_slots = [j - 1 for j in orig_hist]     # R-slot left of the sector
    hist_r_slots_mir = [j for j in mir_hist]      # inverted R'-slot
    for x in m1_rules:
        ov = {}
        for i in hist_r_slots:
            nm = hw.slots[i].name
            ov[nm] = (st3[nm], [], st3[nm], [(hist_l[x], 1)])
        for i in hist_r_slots_mir:
            nm = hw.slots[i].name
            ov[nm] = (st3[nm], [], st3[nm], [(_prime(hist_l[x]), 1)])
        rules.append(_mk_rule(hw, "write(%s)" % x, st3, ov,
                              declared={**HIST, **IN},
                              tags=sup(("step", 3), ("template", "plain"))))

    st4 = {hw5.slots[i].name: m5.start_syms[i] for i in range(K5)}
    rules.append(_mk_rule(
        hw, "theta(34)", st3,
        {s.name: (st3[s.name], [], st4[s.name], []) for s in hw.slots
         if s.name != "T"},
        declared=lock_all_except({**HIST, **IN}),
        tags=sup(("transition", (3, 4)), ("template", "plain"))))

    # Set 4: the checking machine, embedded with its domains pinned to its
    # own alphabets.
    for r in m5.positive_rules:
        declared = tuple(r.declared[j] if r.declared[j] is not None
                         else frozenset(hw5.junctions[j])
                         for j in range(K5))
        rules.append(Rule(r.name, 1, r.parts, declared,
                          r.tags + (("step", 4), ("template", "plain"))))

    st5 = phase_state("5")
    st4end = {hw5.slots[i].name: m5.end_syms[i] for i in range(K5)}
    rules.append(_mk_rule(
        hw, "theta(45)", st4end,
        {s.name: (st4end[s.name], [], st5[s.name], []) for s in hw.slots
         if s.name != "T"},
        declared=lock_all_except({**HIST, **IN}),
        tags=sup(("transition", (4, 5)), ("template", "plain"))))

    # Set 5: erase the history sectors one letter per step, then the input
    # sector and its mirror image.
    for x in m1_rules:
        ov = {}
        for i in hist_r_slots:
            nm = hw.slots[i].name
            ov[nm] = (st5[nm], [], st5[nm], [(hist_l[x], -1)])
        for i in hist_r_slots_mir:
            nm = hw.slots[i].name
            ov[nm] = (st5[nm], [], st5[nm], [(_prime(hist_l[x]), -1)])
        rules.append(_mk_rule(hw, "erase(%s)" % x, st5, ov,
                              declared={**HIST, **IN},
                              tags=sup(("step", 5), ("template", "plain"))))
    rules.append(_mk_rule(
        hw, "erase.in", st5,
        {p1: (st5[p1], [("al", -1)], st5[p1], []),
         p1m: (st5[p1m], [("al'", -1)], st5[p1m], [])},
        declared={**HIST, **IN},
        tags=sup(("step", 5), ("template", "plain"))))

    ste = phase_state("e")
    rules.append(_mk_rule(
        hw, "theta0", st5,
        {s.name: (st5[s.name], [], ste[s.name], []) for s in hw.slots
         if s.name != "T"},
        declared=lock_all_except({}),
        tags=sup(("step", 5), ("template", "plain"), ("accept", True))))

    meta = {"kind": "M", "m5": m5, "m": m, "m1_rules": m1_rules,
            "input_junctions": (in_j, in_j_mir),
            "deposit_junctions": (dep_j, dep_j_mir),
            "history_junctions": tuple(hist_js),
            "orig_history": tuple(orig_hist), "mirror_history": tuple(mir_hist),
            "input_p_slots": (in_p_slot, in_p_slot_mir),
            "hist_l": hist_l, "N": len(hw.slots)}
    return SMachine("M", hw, rules, start_syms=phase_syms("1"),
                    end_syms=phase_syms("e"), meta=meta)


# ---------------------------------------------------------------------------
# The pipeline bundle and its canonical configurations and runs.


@dataclass
class Pipeline:
    spec: ToyRecognizerSpec
    m: int
    m1: SMachine
    m2: SMachine
    m2bar: SMachine
    m3: SMachine
    m4: SMachine
    m5: SMachine
    main: SMachine
    params: Parameters

    def stage(self, name: str) -> SMachine:
        return {"m1": self.m1, "m2": self.m2, "m2bar": self.m2bar,
                "m3": self.m3, "m4": self.m4, "m5": self.m5,
                "m": self.main, "main": self.main}[name]


_PIPELINES: dict = {}


def build_pipeline(spec: ToyRecognizerSpec = EVEN, m: int = 2) -> Pipeline:
    key = (spec, m)
    if key in _PIPELINES:
        return _PIPELINES[key]
    m1 = make_toy_M1(spec)
    m2 = add_history_sectors(m1)
    m2bar = add_running_slots(m2)
    m3 = compose_M3(m2bar, m)
    m4, m5 = mirror_and_circularize(m3)
    main = build_main_M(m5, m)
    params = Parameters.default(N=len(main.hardware.slots), m=m)
    pl = Pipeline(spec, m, m1, m2, m2bar, m3, m4, m5, main, params)
    _PIPELINES[key] = pl
    return pl


def w_st(pl: Pipeline) -> AdmissibleWord:
    """The start configuration: all step-1 state letters, no tape letters."""
    return pl.main.start_configuration()


s1_config = w_st


def w_ac(pl: Pipeline) -> AdmissibleWord:
    return pl.main.end_configuration()


def w_kk(pl: Pipeline, k: int, kp: Optional[int] = None) -> AdmissibleWord:
    """The words w1 al^k w2 al'^-k' w3 admissible for the inverse of the
    set-2/set-3 transition rule; w1 starts with the separator letter."""
    if kp is None:
        kp = k
    hw = pl.main.hardware
    in_j, in_j_mir = pl.main.meta["input_junctions"]
    w = []
    for i, slot in enumerate(hw.slots):
        sym = "tt" if slot.name == "T" else slot.name.lower() + "!3"
        w.append(hw.q(sym, slot.sign))
        nxt = i + 1
        if nxt == in_j:
            w.extend(hw.y("al") for _ in range(k))
        if nxt == in_j_mir:
            w.extend(hw.y("al'", -1) for _ in range(kp))
    return hw.parse_admissible(tuple(w))


def i6_config(pl: Pipeline, k: int, hnames: Sequence[str]) -> AdmissibleWord:
    """Start of the checking phase: input written, history copies in every
    history sector and its mirror."""
    hw = pl.main.hardware
    meta = pl.main.meta
    in_j, in_j_mir = meta["input_junctions"]
    st4 = pl.m5.start_syms
    h = [hl(x) for x in hnames]
    w = []
    for i, slot in enumerate(hw.slots):
        w.append(hw.q(st4[i], slot.sign))
        nxt = i + 1
        if nxt == in_j:
            w.extend(hw.y("al") for _ in range(k))
        if nxt == in_j_mir:
            w.extend(hw.y("al'", -1) for _ in range(k))
        if nxt in meta["orig_history"]:
            w.extend(hw.y(x) for x in h)
        if nxt in meta["mirror_history"]:
            w.extend(hw.y(_prime(x), -1) for x in reversed(h))
    return hw.parse_admissible(tuple(w))


def _stage_run_names(pl: Pipeline, s: int, hnames: Sequence[str]) -> list:
    kind = pl.m3.meta["stage_kinds"][s]
    if kind == "rl":
        return (["rl%d.fwd(%s)" % (s, x) for x in hnames]
                + ["rl%d.turn" % s]
                + ["rl%d.back(%s)" % (s, x) for x in reversed(hnames)])
    if kind == "lr":
        return (["lr%d.fwd(%s)" % (s, x) for x in reversed(hnames)]
                + ["lr%d.turn" % s]
                + ["lr%d.back(%s)" % (s, x) for x in hnames])
    if kind == "fwd":
        return ["c%d.%s.h" % (s, x) for x in hnames]
    return ["c%d.%s.h~" % (s, x) for x in reversed(hnames)]


def accepting_run_names(pl: Pipeline, k: int) -> Optional[list]:
    """Rule names of the canonical computation W(k,k) -> ... -> W_ac; avoids
    the input-writing and input-sweeping rule sets entirely."""
    hnames = m1_accepting_history(pl.m1, k)
    if hnames is None:
        return None
    S = pl.m3.meta["stages"]
    names = ["write(%s)" % x for x in reversed(hnames)]
    names.append("theta(34)")
    for s in range(1, S + 1):
        names += _stage_run_names(pl, s, hnames)
        if s < S:
            names.append("chi(%d,%d)" % (s, s + 1))
    names.append("theta(45)")
    names += ["erase(%s)" % x for x in hnames]
    names += ["erase.in"] * k
    names.append("theta0")
    return names


def start_to_wkk_names(pl: Pipeline, k: int) -> list:
    names = ["ins(al)"] * k + ["theta(12)"]
    for u in range(1, 2 * pl.m + 1):
        names += ["sweep%d(al)" % u] * k
        if u < 2 * pl.m:
            names.append("sweep(%d,%d)" % (u, u + 1))
    names.append("theta(23)")
    return names


def full_accepting_run(pl: Pipeline, k: int) -> Optional[Computation]:
    """Verified canonical computation from the start configuration through
    W(k,k) to the accept configuration, or None if k is not accepted."""
    tail = accepting_run_names(pl, k)
    if tail is None:
        return None
    names = start_to_wkk_names(pl, k) + tail
    rules = [pl.main.rule(n) for n in names]
    comp = run_history(pl.main, w_st(pl), rules)
    assert comp.wt.word == w_ac(pl).word
    return comp


# ---------------------------------------------------------------------------
# Accessibility and conjugacy.


@dataclass
class AccessResult:
    computation: Optional[Computation]   # witness, if found
    direction: Optional[str]             # "from_start" | "to_accept"
    exhausted: bool                      # search covered everything <= bound


def is_accessible(pl: Pipeline, W, bound: int = 50,
                  node_budget: Optional[int] = 200000) -> AccessResult:
    """Bounded search for a computation connecting W to the start
    configuration or to the accept configuration.

    Canonical runs are tried first (any witness found is verified by
    replay); a miss falls back to breadth-first search, and `exhausted`
    reports whether that search genuinely covered every computation of
    length up to the bound."""
    from .machine import find_path, reachable_states
    M = pl.main
    W = M.parse(W)
    for k in itertools.count():
        if not pl.spec.accepts(k):
            if k > bound:
                break
            continue
        comp = full_accepting_run(pl, k)
        if comp is None or len(comp) > 2 * bound + len(comp.configs[0].word):
            break
        for n, cfg in enumerate(comp.configs):
            if cfg.word == W.word:
                pre = Computation(M, comp.configs[:n + 1], comp.history[:n])
                post = Computation(M, comp.configs[n:], comp.history[n:])
                if len(pre) <= bound:
                    return AccessResult(pre, "from_start", True)
                if len(post) <= bound:
                    return AccessResult(post, "to_accept", True)
    targets = [w_st(pl), w_ac(pl)]
    comp = find_path(M, W, targets, bound)
    if comp is not None:
        direction = "from_start" if comp.wt.word == w_st(pl).word \
            else "to_accept"
        if direction == "from_start":
            # reverse: a computation from the start configuration to W
            hist = tuple(M.inverse(r) for r in reversed(comp.history))
            comp = Computation(M, tuple(reversed(comp.configs)), hist)
        return AccessResult(comp, direction, True)
    dist, exhausted = reachable_states(M, W, bound, node_budget=node_budget)
    return AccessResult(None, None, exhausted)


def disk_diagram(pl: Pipeline, W, bound: int = 50,
                 L: Optional[int] = None):
    """Disk certificate for an accessible configuration: one hub and L
    trapezia; the boundary projects to W^L."""
    from .diagrams import disk_from_accessible, DiagramError
    if L is None:
        L = pl.params.L
    res = is_accessible(pl, W, bound)
    if res.computation is None:
        raise DiagramError("no accessible computation found within bound")
    hub_at = "bottom" if res.direction == "from_start" else "top"
    return disk_from_accessible(pl.main, res.computation, L, hub_at)


@dataclass
class ConjugacyWitness:
    k: int
    diagram: object                     # annular diagram, when accepted
    certificate: Optional[dict]         # bound-exhaustion data, when not


def conjugacy_witness(pl: Pipeline, k: int, bound: int = 5) -> ConjugacyWitness:
    """For an accepted input: a verified annular diagram with boundary
    labels W(k,k) and the accept word.  Otherwise: a certificate that no
    eligible computation of length <= bound avoiding the input-writing and
    input-sweeping sets and the set-2/3 seam rule reaches the accept word.
    """
    from .diagrams import annular_from_computation
    from .machine import reachable_states
    M = pl.main
    names = accepting_run_names(pl, k)
    if names is not None:
        rules = [M.rule(n) for n in names]
        ann = annular_from_computation(M, w_kk(pl, k).word, rules, L=1)
        return ConjugacyWitness(k, ann, None)
    flt = lambda r: (r.tag("step") in (3, 4, 5)
                     or r.tag("transition") in ((3, 4), (4, 5)))
    dist, exhausted = reachable_states(M, w_kk(pl, k), bound, rule_filter=flt)
    cert = {"k": k, "bound": bound, "states": len(dist),
            "exhausted": exhausted,
            "reaches_accept": w_ac(pl).word in dist,
            "statement": "no eligible computation of length <= %d avoiding "
                         "the input-writing/sweeping sets and the seam rule "
                         "reaches the accept configuration" % bound}
    return ConjugacyWitness(k, None, cert)
