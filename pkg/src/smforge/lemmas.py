"""Exhaustive and bounded checks for the computation lemmas.

Every check returns a report dict with the bounds it ran at, how many
instances it covered, and a list of violations (empty = pass).  The checks
enumerate computations by brute force and compare against independently
computed expectations, so they double as oracles for the test suite and as
the engine behind the command-line lemma runner.
"""

from __future__ import annotations

import itertools
from typing import Optional, Sequence

from .machine import (Computation, Rule, SMachine, enumerate_computations,
                      reachable_states, find_path, run_history)
from .words import AdmissibleWord, Letter, free_reduce, winv, y_length

from . import zoo


def _report(name: str, bounds: dict, instances: int, violations: list,
            **extra) -> dict:
    rep = {"lemma": name, "bounds": bounds, "instances": instances,
           "violations": violations[:20], "ok": not violations}
    rep.update(extra)
    return rep


def _ylen(adm: AdmissibleWord) -> int:
    return y_length(adm.word)


def _reduced_words(alphabet: Sequence, max_len: int):
    """All reduced words over the signed alphabet, shortest first."""
    letters = [(a, 1) for a in alphabet] + [(a, -1) for a in alphabet]
    out = [()]
    layer = [()]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for a, s in letters:
                if w and w[-1][0] == a and w[-1][1] == -s:
                    continue
                nxt.append(w + ((a, s),))
        out += nxt
        layer = nxt
    return out


# ---------------------------------------------------------------------------
# Sweep-machine lemma: levels never dip in the middle, turnaround runs are
# rigid, and a full left-right traverse has length exactly 2k+1.


def check_prim(max_u: int = 3, depth: int = 4, Y=("a", "b")) -> dict:
    lr = zoo.make_LR(Y)
    hw = lr.hardware
    violations = []
    instances = 0

    def seed(u, p, side="left"):
        if side == "left":
            content = tuple(hw.y(a, s) for a, s in u)
            w = (hw.q("q1"),) + content + (hw.q(p), hw.q("q2"))
        else:
            content = tuple(hw.y(a + "'", s) for a, s in u)
            w = (hw.q("q1"), hw.q(p)) + content + (hw.q("q2"),)
        return hw.parse_admissible(w)

    us = [u for u in _reduced_words(Y, max_u)]
    # clause (3): the traverse from p1-by-content to p2 exists, has length
    # exactly 2k+1, keeps the tape length constant, locks the first sector
    # at the turnaround, and is the only reduced computation between the
    # two given configurations.
    for u in us:
        instances += 1
        k = len(u)
        w0 = seed(u, "p1")
        # the traverse ends as q1 v p2 q2 with v == u
        vtarget = seed(u, "p2")
        comp = find_path(lr, w0, [vtarget], 2 * k + 3)
        if comp is None or len(comp) != 2 * k + 1:
            violations.append(("prim3-length", u, None if comp is None
                               else len(comp)))
            continue
        if any(_ylen(c) != k for c in comp.configs):
            violations.append(("prim3-constant-length", u))
        if comp.history[k].name != "zeta12":
            violations.append(("prim3-lock", u))
        found = [c for c in enumerate_computations(lr, w0, 2 * k + 1)
                 if len(c) >= 1 and c.wt.word == vtarget.word]
        if len(found) != 1:
            violations.append(("prim3-unique", u, len(found)))

    # clauses (1), (2), (4), (5) over all reduced computations of bounded
    # depth from seeds of each shape
    shapes = [("p1", "left"), ("p1", "right"), ("p2", "left"), ("p2", "right")]
    for u in [u for u in us if len(u) <= 2]:
        for p, side in shapes:
            w0 = seed(u, p, side)
            for comp in enumerate_computations(lr, w0, depth):
                instances += 1
                ys = comp.y_lengths()
                for i in range(1, len(ys) - 1):
                    if ys[i] > ys[i - 1] and not ys[i + 1] > ys[i]:
                        violations.append(("prim1", u, p, side,
                                           [r.name for r in comp.history]))
                if max(ys) > max(ys[0], ys[-1]):
                    violations.append(("prim2", u, p, side,
                                       [r.name for r in comp.history]))
                if min(ys) < ys[0]:
                    violations.append(("prim5", u, p, side))
    return _report("prim", {"max_u": max_u, "depth": depth, "Y": list(Y)},
                   instances, violations)


def check_prim4(depth: int = 6, Y=("a",)) -> dict:
    """Clause (4): between two configurations with the sweep letter at the
    same end, the only reduced computation is the empty one."""
    lr = zoo.make_LR(Y)
    hw = lr.hardware
    violations = []
    instances = 0
    for u in _reduced_words(Y, 2):
        for p in ("p1", "p2"):
            content = tuple(hw.y(a, s) for a, s in u)
            w0 = hw.parse_admissible((hw.q("q1"),) + content
                                     + (hw.q(p), hw.q("q2")))
            for comp in enumerate_computations(lr, w0, depth):
                instances += 1
                if len(comp) == 0:
                    continue
                wt = comp.wt.word
                if wt[-2].kind == "q" and wt[-2].sym == p:
                    violations.append(("prim4", u, p,
                                       [r.name for r in comp.history]))
    return _report("prim4", {"depth": depth, "Y": list(Y)}, instances,
                   violations)


def check_r_prim(m: int = 2, max_k: int = 2) -> dict:
    """The m-fold sweep analogue: a full traverse takes 2mk + 2m - 1 steps."""
    lrm = zoo.make_LR_m(("a",), m)
    hw = lrm.hardware
    violations = []
    instances = 0
    for k in range(max_k + 1):
        instances += 1
        content = tuple(hw.y("a") for _ in range(k))
        w0 = hw.parse_admissible((hw.q("q1"),) + content
                                 + (hw.q("p.1"), hw.q("q2")))
        wt = hw.parse_admissible((hw.q("q1"),) + content
                                 + (hw.q("p.%d" % (2 * m)), hw.q("q2")))
        t = 2 * m * k + 2 * m - 1
        comp = find_path(lrm, w0, [wt], t + 2)
        if comp is None or len(comp) != t:
            violations.append(("r-prim-length", k,
                               None if comp is None else len(comp)))
    return _report("r-prim", {"m": m, "max_k": max_k}, instances, violations)


# ---------------------------------------------------------------------------
# One-sided and two-sided insertion lemmas on two-letter bases.


def _inserted_letter(machine: SMachine, r: Rule, junction: int):
    """The single tape letter rule r adds to the given junction, if any."""
    out = []
    for p in r.parts:
        for x in p.a + p.b:
            if x.part == junction:
                out.append(x)
    assert len(out) <= 1
    return out[0] if out else None


def check_gen(depth: int = 4, max_u: int = 2) -> dict:
    """One-sided insertions: the history is a copy of the reduced quotient
    of the endpoint contents, read backwards; lengths are controlled."""
    pl = zoo.build_pipeline()
    M = pl.main
    hw = M.hardware
    meta = M.meta
    hist_j = meta["orig_history"][0]
    r_slot = hist_j - 1
    rs = hw.slots[r_slot].name.lower() + "!3"
    ps = hw.slots[hist_j].name.lower() + "!3"
    letters = sorted(meta["hist_l"].values())
    writes = [M.rule("write(%s)" % x) for x in meta["m1_rules"]]
    allowed = set(writes) | {M.inverse(r) for r in writes}
    violations = []
    instances = 0
    for u in _reduced_words(letters, max_u):
        content = tuple(hw.y(a, s) for a, s in u)
        w0 = hw.parse_admissible((hw.q(rs),) + content + (hw.q(ps),))
        for comp in enumerate_computations(M, w0, depth,
                                           rule_filter=allowed.__contains__):
            instances += 1
            u0 = tuple(x for x in comp.w0.word if x.kind == "y")
            ut = tuple(x for x in comp.wt.word if x.kind == "y")
            q = free_reduce(ut + winv(u0))
            hist_letters = [_inserted_letter(M, r, hist_j)
                            for r in comp.history]
            expect = tuple(reversed(hist_letters))
            if q != expect:
                violations.append(("gen-a", u,
                                   [r.name for r in comp.history]))
            if len(comp) > len(u0) + len(ut):
                violations.append(("gen-b", u))
            if any(_ylen(c) > max(len(u0), len(ut)) for c in comp.configs):
                violations.append(("gen-c", u))
    return _report("gen", {"depth": depth, "max_u": max_u}, instances,
                   violations)


def check_gen1(depth: int = 6, max_u: int = 2) -> dict:
    """Two-sided insertions from disjoint alphabets: intermediate words never
    exceed the endpoints and the history is at most half the content sum."""
    pl = zoo.build_pipeline()
    m2 = pl.m2
    hw = m2.hardware
    violations = []
    instances = 0
    seeds = _two_letter_seeds(m2, ("Q1.l", "Q1.r"), max_u)
    for w0 in seeds:
        for comp in enumerate_computations(m2, w0, depth):
            instances += 1
            lens = [len(c.word) for c in comp.configs]
            if max(lens) > max(lens[0], lens[-1]):
                violations.append(("gen1-a", str(w0)))
            if 2 * len(comp) > _ylen(comp.w0) + _ylen(comp.wt):
                violations.append(("gen1-b", str(w0),
                                   [r.name for r in comp.history]))
    return _report("gen1", {"depth": depth, "max_u": max_u}, instances,
                   violations)


def _two_letter_seeds(m2: SMachine, slot_names, max_u: int,
                      alphabet: Optional[str] = None):
    """Admissible words x u y over the sector between the two given slots,
    over every state-letter pair that some rule accepts."""
    hw = m2.hardware
    i1 = hw.slot_index(slot_names[0])
    i2 = hw.slot_index(slot_names[1])
    pairs = set()
    for r in m2.rules:
        pairs.add((r.parts[i1].q_from, r.parts[i2].q_from))
    junction = i2 if i2 == i1 + 1 else None
    assert junction is not None
    alph = [a for a in hw.junctions[junction]
            if alphabet is None or a.endswith(alphabet)]
    seeds = []
    for x, y in sorted(pairs):
        for u in _reduced_words(alph, max_u):
            content = tuple(hw.y(a, s) for a, s in u)
            try:
                seeds.append(hw.parse_admissible(
                    (hw.q(x),) + content + (hw.q(y),)))
            except Exception:
                pass
    return seeds


def check_gen2_wi(depth: int = 6, max_u: int = 2) -> dict:
    """Turnaround bases x u x^-1: histories factor as H1 H2^k H3 with the
    stated length bounds, and intermediate tape lengths obey the inequality
    |w_i| <= |w_0| + |w_t| + 2|H1| + 3|H2| + 2|H3|."""
    pl = zoo.build_pipeline()
    m2 = pl.m2
    hw = m2.hardware
    i1 = hw.slot_index("Q1.l")
    violations = []
    instances = 0
    seen_nontrivial = 0
    syms = sorted({r.parts[i1].q_from for r in m2.rules})
    alph = list(hw.junctions[2])
    for x in syms:
        for u in _reduced_words(alph, max_u):
            if not u:
                continue        # the lemma assumes nonempty content
            content = tuple(hw.y(a, s) for a, s in u)
            try:
                w0 = hw.parse_admissible(
                    (hw.q(x),) + content + (hw.q(x, -1),))
            except Exception:
                continue
            for comp in enumerate_computations(m2, w0, depth):
                if len(comp) == 0:
                    continue
                instances += 1
                fac = _factor_h1h2h3(comp, _ylen(comp.w0) - 0,
                                     _ylen(comp.wt) - 0)
                if fac is None:
                    violations.append(("gen2", str(w0),
                                       [r.name for r in comp.history]))
                    continue
                d1, d2, d3 = fac
                seen_nontrivial += 1
                bound = (_ylen(comp.w0) + _ylen(comp.wt)
                         + 2 * d1 + 3 * d2 + 2 * d3)
                if any(_ylen(c) > bound for c in comp.configs):
                    violations.append(("wi", str(w0)))
    return _report("gen2+wi", {"depth": depth, "max_u": max_u}, instances,
                   violations, nontrivial=seen_nontrivial)


def _factor_h1h2h3(comp: Computation, nu: int, nup: int):
    """Factor the history as H1 H2^k H3 with |H1| <= |u|/2, |H3| <= |u'|/2,
    |H2| <= min(|u|, |u'|); returns (|H1|, |H2|, |H3|) or None."""
    H = comp.history
    t = len(H)
    for d1 in range(0, nu // 2 + 1):
        for d3 in range(0, nup // 2 + 1):
            rest = t - d1 - d3
            if rest < 0:
                continue
            if rest == 0:
                return (d1, 0, d3)
            for d2 in range(1, min(nu, nup) + 1):
                if rest % d2:
                    continue
                body = H[d1:t - d3]
                period = body[:d2]
                if body == period * (rest // d2):
                    return (d1, d2, d3)
    return None


# ---------------------------------------------------------------------------
# History-sector lemmas of the two-copy machine.


def check_w(depth: int = 8, max_u: int = 2) -> dict:
    """From one-alphabet contents, the history is at most the final tape
    length, and the tape never shrinks below the start."""
    pl = zoo.build_pipeline()
    m2 = pl.m2
    violations = []
    instances = 0
    for alphabet in (".l", ".r"):
        for w0 in _two_letter_seeds(m2, ("Q1.l", "Q1.r"), max_u, alphabet):
            for comp in enumerate_computations(m2, w0, depth):
                if len(comp) == 0:
                    continue
                instances += 1
                if len(comp) > _ylen(comp.wt):
                    violations.append(("w-history", str(w0),
                                       [r.name for r in comp.history]))
                if _ylen(comp.w0) > _ylen(comp.wt):
                    violations.append(("w-start", str(w0),
                                       [r.name for r in comp.history]))
    return _report("w", {"depth": depth, "max_u": max_u}, instances,
                   violations)


def check_nine(depth: int = 6, max_u: int = 1) -> dict:
    """Bases of length three containing one history sector: intermediate
    tape lengths are at most 9 (|W_0|_Y + |W_t|_Y)."""
    pl = zoo.build_pipeline()
    m2 = pl.m2
    hw = m2.hardware
    violations = []
    instances = 0
    state_triples = sorted({(r.parts[0].q_from, r.parts[1].q_from,
                             r.parts[2].q_from) for r in m2.rules})
    inputs = _reduced_words(["al"], max_u)
    hists = _reduced_words(sorted(hw.junctions[2]), max_u)
    for x, y, z in state_triples:
        for u in inputs:
            for v in hists:
                w = (hw.q(x),) + tuple(hw.y(a, s) for a, s in u) + \
                    (hw.q(y),) + tuple(hw.y(a, s) for a, s in v) + (hw.q(z),)
                try:
                    w0 = hw.parse_admissible(w)
                except Exception:
                    continue
                for comp in enumerate_computations(m2, w0, depth):
                    instances += 1
                    bound = 9 * (_ylen(comp.w0) + _ylen(comp.wt))
                    if any(_ylen(c) > bound for c in comp.configs):
                        violations.append(("nine", str(w0),
                                           [r.name for r in comp.history]))
    return _report("nine", {"depth": depth, "max_u": max_u}, instances,
                   violations)


# ---------------------------------------------------------------------------
# Stage-composition lemmas.


def check_m31(depth: int = 4, max_u: int = 1) -> dict:
    """With a history sector in the base, each stage transition occurs at
    most once (in either direction) in any reduced history.  Seeds sit at
    the stage boundaries, where transition rules are in reach."""
    pl = zoo.build_pipeline()
    m3 = pl.m3
    hw = m3.hardware
    tr = m3.meta["history_triples"][0]
    q_slot, r_slot, p_slot = tr[0], tr[1], tr[2]
    slots = (q_slot, r_slot, p_slot, p_slot + 1)
    violations = []
    instances = 0
    # The flanking slots must be part of the base: without them a sweep
    # rule's deposit letter is trimmed away at the word end and the
    # transition locks cannot see it (see the decisions ledger).
    quads = sorted({tuple(r.parts[i].q_from for i in slots)
                    for r in m3.rules if r.tag("chi")})
    one = m3.meta["m1_rules"][0]
    hist_alph = [zoo.hl(one), zoo.hr(one)]
    for quad in quads:
        for u in _reduced_words(hist_alph, max_u):
            w = (hw.q(quad[0]), hw.q(quad[1])) \
                + tuple(hw.y(a, s) for a, s in u) \
                + (hw.q(quad[2]), hw.q(quad[3]))
            try:
                w0 = hw.parse_admissible(w)
            except Exception:
                continue
            for comp in enumerate_computations(m3, w0, depth):
                instances += 1
                counts: dict = {}
                for r in comp.history:
                    chi = r.tag("chi")
                    if chi:
                        counts[chi] = counts.get(chi, 0) + 1
                if any(c > 1 for c in counts.values()):
                    violations.append(("m31", str(w0),
                                       [r.name for r in comp.history]))
    return _report("M31", {"depth": depth, "max_u": max_u,
                           "seeds": len(quads)}, instances, violations)


def check_i2a2(ks=(0, 1, 2, 3), hist_len: int = 3, depth: int = 10) -> dict:
    """Accepted inputs have a verified run from the written-history start
    configuration to the end configuration; rejected inputs reach no end
    configuration within the bound, for any written history up to the
    given length."""
    pl = zoo.build_pipeline()
    m2, m1 = pl.m2, pl.m1
    names = [r.name for r in m1.positive_rules]
    violations = []
    instances = 0
    for k in ks:
        accepted = pl.spec.accepts(k)
        if accepted:
            h = zoo.m1_accepting_history(m1, k)
            comp = run_history(m2, zoo.i2_config(m2, k, h),
                               [m2.rule(x + ".h") for x in h])
            instances += 1
            if comp.wt.word != zoo.a2_config(m2, h).word:
                violations.append(("i2a2-fwd", k))
        else:
            end_states = set(m2.end_syms)
            for t in range(hist_len + 1):
                for h in itertools.product(names, repeat=t):
                    instances += 1
                    w0 = zoo.i2_config(m2, k, list(h))
                    dist, exhausted = reachable_states(m2, w0, depth)
                    assert exhausted
                    for word in dist:
                        if {x.sym for x in word if x.kind == "q"} \
                                <= end_states:
                            violations.append(("i2a2-rev", k, list(h)))
    return _report("I2A2", {"ks": list(ks), "hist_len": hist_len,
                            "depth": depth}, instances, violations)


def check_forbidden_step_histories(depth: int = 4) -> dict:
    """No reduced computation of the main machine has step history
    (34)(4)(43), (54)(4)(45) (with a history sector in the base),
    (23)(3)(32), (12)(2)(21) or (32)(2)(23)."""
    from .machine import step_history
    pl = zoo.build_pipeline()
    M = pl.main
    bad = {("(34)", "(4)", "(43)"), ("(54)", "(4)", "(45)"),
           ("(23)", "(3)", "(32)"), ("(12)", "(2)", "(21)"),
           ("(32)", "(2)", "(23)")}
    seeds = [zoo.w_st(pl), zoo.w_kk(pl, 0), zoo.w_kk(pl, 2),
             zoo.i6_config(pl, 0, zoo.m1_accepting_history(pl.m1, 0)),
             zoo.i6_config(pl, 2, zoo.m1_accepting_history(pl.m1, 2))]
    run = zoo.full_accepting_run(pl, 2)
    seeds += [run.configs[i] for i in (1, 5, 9, 13, 20, 40, 60, 90)]
    violations = []
    instances = 0
    for w0 in seeds:
        for comp in enumerate_computations(M, w0, depth):
            instances += 1
            sh = step_history(comp.history)
            for i in range(len(sh) - 2):
                if sh[i:i + 3] in bad:
                    violations.append((sh, [r.name for r in comp.history]))
    return _report("212+121", {"depth": depth, "seeds": len(seeds)},
                   instances, violations)


def check_sh_dichotomy(depth: int = 4) -> dict:
    """Every eligible standard-base step history either contains one of the
    four (A)-words or is a subword of one of the six (B)-words."""
    from .machine import step_history
    pl = zoo.build_pipeline()
    M = pl.main
    A = [("(34)", "(4)", "(45)"), ("(54)", "(4)", "(43)"),
         ("(12)", "(2)", "(23)"), ("(32)", "(2)", "(21)")]
    B = ["(4)(45)(5)(54)(4)", "(4)(43)(3)(34)(4)", "(2)(23)(3)(34)(4)",
         "(4)(43)(3)(32)(2)", "(2)(21)(1)(12)(2)", "(2)(23)(32)(2)"]
    run = zoo.full_accepting_run(pl, 2)
    seeds = [zoo.w_st(pl), zoo.w_kk(pl, 2)] + \
        [run.configs[i] for i in (3, 7, 11, 30, 50, 80, len(run) - 2)]
    violations = []
    instances = 0
    for w0 in seeds:
        for comp in enumerate_computations(M, w0, depth, mode="eligible"):
            instances += 1
            sh = step_history(comp.history)
            if any(_contains(sh, a) for a in A):
                continue
            flat = "".join(sh)
            if any(flat in b for b in B):
                continue
            violations.append((sh, [r.name for r in comp.history]))
    return _report("SH", {"depth": depth, "seeds": len(seeds)}, instances,
                   violations)


def _contains(seq, sub) -> bool:
    n, m = len(seq), len(sub)
    return any(tuple(seq[i:i + m]) == tuple(sub) for i in range(n - m + 1))


def check_i6a6(ks=(0, 2), reject_ks=(1, 3), bound: int = 5) -> dict:
    """Accepted k: a verified computation W(k,k) -> accept word avoiding the
    input-writing and input-sweeping sets.  Rejected k: exhaustive search to
    the bound reaches no accept word."""
    pl = zoo.build_pipeline()
    M = pl.main
    violations = []
    instances = 0
    for k in ks:
        instances += 1
        names = zoo.accepting_run_names(pl, k)
        comp = run_history(M, zoo.w_kk(pl, k), [M.rule(n) for n in names])
        if comp.wt.word != zoo.w_ac(pl).word:
            violations.append(("i6a6-fwd", k))
        if any(r.tag("step") in (1, 2) for r in comp.history):
            violations.append(("i6a6-uses-input-sets", k))
    flt = lambda r: (r.tag("step") in (3, 4, 5)
                     or r.tag("transition") in ((3, 4), (4, 5)))
    target = zoo.w_ac(pl).word
    for k in reject_ks:
        instances += 1
        dist, exhausted = reachable_states(M, zoo.w_kk(pl, k), bound,
                                           rule_filter=flt)
        if not exhausted or target in dist:
            violations.append(("i6a6-rev", k))
    return _report("I6A6", {"ks": list(ks), "reject_ks": list(reject_ks),
                            "bound": bound}, instances, violations)


# ---------------------------------------------------------------------------
# Invariant checks: mixture, modified length, designs, conjugacy.


def check_mixture(max_beads: int = 8, J_max: int = 4) -> dict:
    """Clauses (a)-(d) of the bead-mixture lemma, exhaustively over all
    two-colored necklaces with at most the given number of beads."""
    from .metrics import necklace_mixture, all_necklaces, WHITE, BLACK
    violations = []
    instances = 0
    for beads in all_necklaces(max_beads):
        n = sum(1 for b in beads if b == WHITE)
        for J in range(1, J_max + 1):
            instances += 1
            mu = necklace_mixture(beads, J)
            if mu > J * (n * n - n):
                violations.append(("mixture-a", beads, J))
            for i in range(len(beads)):
                rest = beads[:i] + beads[i + 1:]
                if necklace_mixture(rest, J) > mu:
                    violations.append(("mixture-bc", beads, i, J))
            # clause (d): removing the middle of three black beads whose
            # clockwise span holds at most J black beads drops the mixture
            # by at least the product of the white counts of the two arcs
            blacks = [i for i, b in enumerate(beads) if b == BLACK]
            size = len(beads)
            for v1 in blacks:
                for v3 in blacks:
                    if v1 == v3:
                        continue
                    arc = []
                    s = (v1 + 1) % size
                    while s != v3:
                        arc.append(s)
                        s = (s + 1) % size
                    inner_blacks = [i for i in arc if beads[i] == BLACK]
                    if len(inner_blacks) > J:
                        continue
                    for v2 in inner_blacks:
                        m1 = 0
                        s = (v1 + 1) % size
                        while s != v2:
                            m1 += beads[s] == WHITE
                            s = (s + 1) % size
                        m2 = 0
                        s = (v2 + 1) % size
                        while s != v3:
                            m2 += beads[s] == WHITE
                            s = (s + 1) % size
                        rest = beads[:v2] + beads[v2 + 1:]
                        if necklace_mixture(rest, J) > mu - m1 * m2:
                            violations.append(("mixture-d", beads, (v1, v2, v3), J))
    return _report("mixture", {"max_beads": max_beads, "J_max": J_max},
                   instances, violations)


def check_ochev(samples: int = 100000, seed: int = 7) -> dict:
    """Modified-length bounds on random words: the letter-count lower bound
    and near-additivity under concatenation."""
    import random
    from .metrics import modified_length, length_lower_bound
    from .words import Letter
    pl = zoo.build_pipeline()
    delta = pl.params.delta
    rng = random.Random(seed)
    letters = ([Letter("q", 0, "q%d" % i, 1) for i in range(3)]
               + [Letter("y", 1, "y%d" % i, 1) for i in range(4)]
               + [Letter("t", 0, "t%d" % i, 1) for i in range(3)])
    violations = []
    instances = 0
    words = []
    for _ in range(samples // 2):
        n = rng.randint(0, 12)
        w = tuple(rng.choice(letters)._replace(sign=rng.choice((1, -1)))
                  for _ in range(n))
        words.append(w)
        instances += 1
        if modified_length(w, delta) < length_lower_bound(w, delta):
            violations.append(("ochev-a", w))
    for _ in range(samples - samples // 2):
        instances += 1
        w1 = rng.choice(words)
        w2 = rng.choice(words)
        l1, l2 = modified_length(w1, delta), modified_length(w2, delta)
        l12 = modified_length(w1 + w2, delta)
        if not (l1 + l2 >= l12 >= l1 + l2 - delta):
            violations.append(("ochev-c", w1, w2))
    return _report("ochev", {"samples": samples, "seed": seed,
                             "delta": str(delta)}, instances, violations)


def check_conj(accept_ks=(0, 2), reject_ks=(1, 3), bound: int = 5) -> dict:
    """Accepted inputs give verified annular conjugacy diagrams; rejected
    inputs give exhausted-bound certificates."""
    from .presentation import emit_group_M
    from .diagrams import verify_diagram, cyclic_equal
    pl = zoo.build_pipeline()
    P = emit_group_M(pl.main, 1)
    violations = []
    instances = 0
    for k in accept_ks:
        instances += 1
        w = zoo.conjugacy_witness(pl, k, bound)
        if w.diagram is None:
            violations.append(("conj-accept-missing", k))
            continue
        bad = verify_diagram(w.diagram, P)
        if bad:
            violations.append(("conj-verify", k, bad[:3]))
        if not cyclic_equal(w.diagram.boundary_word(0), zoo.w_kk(pl, k).word):
            violations.append(("conj-b0", k))
        if not cyclic_equal(w.diagram.boundary_word(1), zoo.w_ac(pl).word):
            violations.append(("conj-b1", k))
    for k in reject_ks:
        instances += 1
        w = zoo.conjugacy_witness(pl, k, bound)
        if w.diagram is not None or not w.certificate["exhausted"] \
                or w.certificate["reaches_accept"]:
            violations.append(("conj-reject", k))
    return _report("conj", {"accept_ks": list(accept_ks),
                            "reject_ks": list(reject_ks), "bound": bound},
                   instances, violations)


LEMMA_CHECKS = {
    "prim": check_prim,
    "prim4": check_prim4,
    "r_prim": check_r_prim,
    "gen": check_gen,
    "gen1": check_gen1,
    "gen2": check_gen2_wi,
    "wi": check_gen2_wi,
    "w": check_w,
    "nine": check_nine,
    "M31": check_m31,
    "I2A2": check_i2a2,
    "I6A6": check_i6a6,
    "SH": check_sh_dichotomy,
    "212": check_forbidden_step_histories,
    "121": check_forbidden_step_histories,
    "mixture": check_mixture,
    "mixture_a": check_mixture,
    "mixture_b": check_mixture,
    "mixture_c": check_mixture,
    "mixture_d": check_mixture,
    "ochev": check_ochev,
    "conj": check_conj,
}
