"""Acceptance criteria, one test per criterion, each printing a verdict
line.  Bounds and tolerances are pinned here; every expected value is either
a frozen small constant checked against an independent computation or an
exhaustive-enumeration result.

Run with `pytest tests/test_acceptance.py -v -s`.
"""

import time
from fractions import Fraction

import pytest

from smforge import lemmas, zoo
from smforge.diagrams import (area_of_word, cyclic_equal,
                              disk_from_accessible, extract_bands,
                              trapezium_from_computation, verify_diagram)
from smforge.machine import Computation, check_parameters, run_history
from smforge.presentation import (GroupPresentation, emit_group_G,
                                  emit_group_M, lift_config, project_empty)
from smforge.words import Letter, format_word


def _verdict(n, ok, text):
    print("ACCEPTANCE %2d: %s - %s" % (n, "PASS" if ok else "FAIL", text))
    assert ok, text


def test_01_five_word_chain(S):
    t0 = time.perf_counter()
    w0 = S.parse("q^-1 a q a q")
    H = [S.rule("t1"), S.rule("t2"), S.rule("t1", -1), S.rule("t2", -1)]
    comp = run_history(S, w0, H)
    elapsed = time.perf_counter() - t0
    chain = [format_word(c.word) for c in comp.configs]
    ok = chain == ["q^-1 a q a q", "q^-1 a q a a q", "q^-1 a q a a a q",
                   "q^-1 a q a a q", "q^-1 a q a q"] and elapsed < 0.001
    _verdict(1, ok, "the five-word chain, exact, %.3f ms" % (elapsed * 1e3))


def test_02_worked_rule_application():
    M = zoo.make_two_part_example()
    out = M.apply(M.rule("theta"), M.parse("q1 b^-1 q2 d q2^-1 q1^-1"))
    ok = format_word(out.word) == "q1' c q2' d q2'^-1 c^-1 b^-1 q1'^-1"
    _verdict(2, ok, "two-part worked example, exact")


def test_03_prim_traverses():
    t0 = time.perf_counter()
    rep = lemmas.check_prim(max_u=3, depth=4)
    rep2 = lemmas.check_prim4()
    rep3 = lemmas.check_r_prim(m=2, max_k=2)
    elapsed = time.perf_counter() - t0
    ok = rep["ok"] and rep2["ok"] and rep3["ok"] and elapsed < 10
    _verdict(3, ok, "sweep lemma clauses (1)-(5), t = 2k+1 and "
                    "t = 2mk+2m-1, %.1f s" % elapsed)


def test_04_nine():
    rep = lemmas.check_nine(depth=6, max_u=1)
    _verdict(4, rep["ok"] and rep["instances"] > 0,
             "|W_i|_Y <= 9(|W_0|_Y + |W_t|_Y) on %d instances"
             % rep["instances"])


def test_05_m31():
    rep = lemmas.check_m31(depth=4)
    _verdict(5, rep["ok"], "at most one stage transition each way, %d "
                           "histories" % rep["instances"])


def test_06_mixture_suite():
    t0 = time.perf_counter()
    rep = lemmas.check_mixture(max_beads=8, J_max=4)
    elapsed = time.perf_counter() - t0
    ok = rep["ok"] and elapsed < 30
    _verdict(6, ok, "mixture clauses (a)-(d), all necklaces <= 8 beads, "
                    "J <= 4, %.1f s" % elapsed)


def test_07_modified_length():
    rep = lemmas.check_ochev(samples=100000)
    _verdict(7, rep["ok"] and rep["instances"] == 100000,
             "length bounds on 10^5 random words, exact delta = %s"
             % rep["bounds"]["delta"])


def test_08_trapezium_roundtrip(pipeline):
    import random
    from smforge.machine import pair_allowed
    M = pipeline.main
    L = 4
    P = emit_group_M(M, L)
    rng = random.Random(1009)
    full = zoo.full_accepting_run(pipeline, 2)
    seeds = [full.configs[i] for i in range(0, len(full.configs), 5)]
    done = 0
    trials = 0
    while done < 100 and trials < 1200:
        trials += 1
        w0 = rng.choice(seeds)
        history = []
        cur = w0
        for _ in range(rng.randint(1, 6)):
            cands = [r for r in M.candidate_rules(cur)
                     if (not history
                         or pair_allowed(history[-1], r, "eligible"))
                     and M.try_apply(r, cur) is not None]
            if not cands:
                break
            r = rng.choice(cands)
            history.append(r)
            cur = M.apply(r, cur)
        if not history:
            continue
        needs_sup = any(r.tag("template") in ("super", "erase")
                        and r.sign > 0 or
                        (r.tag("template") == "super" and r.sign < 0)
                        for r in history)
        lift = lift_config(M, w0.word, rng.randint(1, L) if needs_sup
                           else None, L)
        try:
            trap = trapezium_from_computation(M, lift, history, L)
        except Exception:
            continue
        done += 1
        assert verify_diagram(trap.diagram, P) == []
        for w, r, t in zip(trap.row_bottoms, trap.history, trap.row_tops):
            adm = M.parse(project_empty(w))
            assert project_empty(t) == M.apply(r, adm).word
        offs = set()
        for w in trap.row_bottoms + [trap.row_tops[-1]]:
            qs = [x for x in w if x.kind == "q"]
            if qs[0].sup is not None and qs[-1].sup is not None:
                offs.add((qs[-1].sup - qs[0].sup) % L)
        assert len(offs) <= 1
        for kind in ("theta", "q", "y"):
            assert not any(b.is_annulus
                           for b in extract_bands(trap.diagram, kind))
    _verdict(8, done >= 100,
             "%d random eligible trapezia verified (rows, offsets, "
             "no annuli)" % done)


def test_09_disk_words(pipeline):
    M = pipeline.main
    L = 6
    PG = emit_group_G(pipeline, L)
    full = zoo.full_accepting_run(pipeline, 0)
    checked = 0
    for n in range(len(full.configs)):
        if n <= 50:
            comp = Computation(M, full.configs[:n + 1], full.history[:n])
            hub_at = "bottom"
        elif len(full) - n <= 50:
            comp = Computation(M, full.configs[n:], full.history[n:])
            hub_at = "top"
        else:
            continue
        W = full.configs[n]
        disk = disk_from_accessible(M, comp, L, hub_at)
        assert cyclic_equal(project_empty(disk.boundary_word()), W.word * L)
        assert verify_diagram(disk, PG) == []
        assert sum(1 for c in disk.cells if c.kind == "hub") == 1
        checked += 1
    _verdict(9, checked == len(full.configs),
             "%d accessible words at bound 50: V^0 = W^L and V = 1 "
             "certified over the hub presentation" % checked)


def test_10_conjugacy(pipeline):
    rep = lemmas.check_conj(accept_ks=(0, 2), reject_ks=(1, 3), bound=5)
    _verdict(10, rep["ok"], "verified annuli for k in {0, 2}; exhausted "
                            "certificates at bound 5 for k in {1, 3}")


def test_11_quadratic_lower_bound_witness():
    a = Letter("y", 0, "a", 1)
    th = Letter("t", 0, "th", 1)
    rel = (a, th, a.inv(), th.inv())
    P = GroupPresentation("comm", (a, th), ((rel, "theta_a", "th"),), None, 1)
    t0 = time.perf_counter()
    areas = {}
    for n in (1, 2, 3):
        w = (a,) * n + (th,) * n + (a.inv(),) * n + (th.inv(),) * n
        areas[n] = area_of_word(w, P, bound=n * n + 2)
    elapsed = time.perf_counter() - t0
    ok = areas == {1: 1, 2: 4, 3: 9} and elapsed < 60
    _verdict(11, ok, "area(a^n th^n a^-n th^-n) = n^2 for n = 1, 2, 3 "
                     "(%.1f s)" % elapsed)


def test_12_parameter_sanity(pipeline):
    p = pipeline.params
    ok = check_parameters(p) == []
    bad1 = check_parameters(p.replace(delta=Fraction(1, p.J)))
    bad2 = check_parameters(p.replace(K=2 * p.K0))
    bad3 = check_parameters(p.replace(L=4, L0=3))
    ok = ok and any("J*delta" in b for b in bad1) \
        and any("K > 2*K0" in b for b in bad2) \
        and any("L > 4" in b for b in bad3)
    _verdict(12, ok, "defaults consistent; J*delta >= 1, K <= 2K0, L <= 4 "
                     "each rejected by name")
