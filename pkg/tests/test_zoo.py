from smforge import zoo
from smforge.machine import run_history
from smforge.words import format_word, y_length


def test_S_has_two_identical_rules(S):
    assert len(S.positive_rules) == 2
    r1, r2 = S.positive_rules
    assert r1.parts == r2.parts
    # inserting left of the leading state letter gets trimmed away
    out = S.apply(S.rule("t2"), S.parse("q"))
    assert format_word(out.word) == "q"


def test_LR_rule_count():
    for Y in (("a",), ("a", "b"), ("a", "b", "c")):
        lr = zoo.make_LR(Y)
        assert len(lr.positive_rules) == 2 * len(Y) + 1


def test_LR_traverse_length(LR):
    # t = 2k+1 for the full sweep
    w0 = LR.parse("q1 a b p1 q2")
    names = ["zeta1(b)", "zeta1(a)", "zeta12", "zeta2(a)", "zeta2(b)"]
    comp = run_history(LR, w0, [LR.rule(n) for n in names])
    assert len(comp) == 2 * 2 + 1
    assert format_word(comp.wt.word) == "q1 a b p2 q2"
    assert all(y_length(c.word) == 2 for c in comp.configs)


def test_LRm_traverse_length():
    m = 2
    lrm = zoo.make_LR_m(("a",), m)
    k = 2
    hw = lrm.hardware
    w0 = hw.parse_admissible((hw.q("q1"),) + (hw.y("a"),) * k
                             + (hw.q("p.1"), hw.q("q2")))
    names = []
    for i in range(1, 2 * m + 1):
        names += ["zeta%d(a)" % i] * k
        if i < 2 * m:
            names.append("zeta(%d,%d)" % (i, i + 1))
    comp = run_history(lrm, w0, [lrm.rule(n) for n in names])
    assert len(comp) == 2 * m * k + 2 * m - 1


def test_toy_m1_accepts_multiples():
    m1 = zoo.make_toy_M1()
    for k in range(5):
        names = zoo.m1_accepting_history(m1, k)
        if k % 2 == 0:
            comp = run_history(m1, zoo.i1_config(m1, k),
                               [m1.rule(n) for n in names])
            assert comp.wt.word == m1.end_configuration().word
        else:
            assert names is None


def test_toy_m1_start_config_shape():
    m1 = zoo.make_toy_M1()
    adm = zoo.i1_config(m1, 3)
    # tape letters only in the first sector
    assert [len(s.content) for s in adm.sectors] == [3, 0]


def test_m2_part_count(pipeline):
    m1, m2 = pipeline.m1, pipeline.m2
    n = len(m1.hardware.slots) - 1
    assert len(m2.hardware.slots) == 2 * n


def test_m2_satisfies_star_not_starstar(pipeline):
    m2 = pipeline.m2
    star = all(len(p.a) <= 1 and len(p.b) <= 1
               for r in m2.positive_rules for p in r.parts)
    starstar = all(sum(len(p.a) + len(p.b) for p in r.parts) <= 1
                   for r in m2.positive_rules)
    assert star and not starstar


def test_m2_history_sector_scan(pipeline):
    """One step rewrites h1 h2 h3 into h2 h3 hbar1 in a history sector."""
    m2 = pipeline.m2
    h = ["start", "del0", "del1"]
    w0 = zoo.i2_config(m2, 2, h)
    comp = run_history(m2, w0, [m2.rule("start.h")])
    sector = [s for s in comp.wt.sectors
              if s.junction in m2.meta["history_junctions"]][0]
    assert [x.sym for x in sector.content] == \
        [zoo.hl("del0"), zoo.hl("del1"), zoo.hr("start")]


def test_i2_to_a2_replay(pipeline):
    m2 = pipeline.m2
    h = zoo.m1_accepting_history(pipeline.m1, 2)
    comp = run_history(m2, zoo.i2_config(m2, 2, h),
                       [m2.rule(x + ".h") for x in h])
    assert comp.wt.word == zoo.a2_config(m2, h).word


def test_m2bar_base_and_locks(pipeline):
    m2, m2b = pipeline.m2, pipeline.m2bar
    assert len(m2b.hardware.slots) == 3 * len(m2.hardware.slots)
    names = [s.name for s in m2b.hardware.slots]
    assert names[:6] == ["P0", "Q0", "R0", "P1", "Q1", "R1"]
    # the new sectors are locked by every rule
    for r in m2b.positive_rules:
        doms = m2b.domains(r)
        for i in range(len(m2.hardware.slots)):
            assert doms[3 * i + 1] == frozenset()
            if 3 * i + 2 < len(m2b.hardware.slots):
                assert doms[3 * i + 2] == frozenset()


def test_m2bar_projection_replays_m2(pipeline):
    """Observing only the original sectors, a triple-slot computation is a
    computation of the two-copy machine."""
    m2, m2b = pipeline.m2, pipeline.m2bar
    h = zoo.m1_accepting_history(pipeline.m1, 2)
    w2 = zoo.i2_config(m2, 2, h)
    w2b = _i2bar(pipeline, 2, h)
    c2 = run_history(m2, w2, [m2.rule(x + ".h") for x in h])
    c2b = run_history(m2b, w2b, [m2b.rule(x + ".h") for x in h])
    for a, b in zip(c2.configs, c2b.configs):
        proj = tuple(x for x in b.word
                     if x.kind == "y" or x.part % 3 == 1)
        assert tuple(x.sym for x in proj) == tuple(x.sym for x in a.word)


def _i2bar(pl, k, h):
    m2b = pl.m2bar
    hw = m2b.hardware
    w = []
    for j, sym in enumerate(m2b.start_syms):
        w.append(hw.q(sym))
        if j + 1 == m2b.meta["input_junction"]:
            w.extend(hw.y("al") for _ in range(k))
        if j + 1 in m2b.meta["history_junctions"]:
            w.extend(hw.y(zoo.hl(x)) for x in h)
    return hw.parse_admissible(tuple(w))


def test_m3_stage_count(pipeline):
    m3 = pipeline.m3
    assert m3.meta["stages"] == 4 * pipeline.m + 1
    kinds = [m3.meta["stage_kinds"][s] for s in range(1, m3.meta["stages"] + 1)]
    assert kinds == ["rl", "fwd", "lr", "bwd"] * pipeline.m + ["rl"]


def test_m4_m5_shape(pipeline):
    m3, m4, m5 = pipeline.m3, pipeline.m4, pipeline.m5
    assert len(m4.hardware.slots) == 2 * len(m3.hardware.slots)
    assert len(m5.hardware.slots) == 2 * len(m3.hardware.slots) + 1
    assert m5.hardware.circular and not m4.hardware.circular
    # mirror slots carry the opposite sign
    K = len(m3.hardware.slots)
    assert all(s.sign == 1 for s in m4.hardware.slots[:K])
    assert all(s.sign == -1 for s in m4.hardware.slots[K:])
    # the middle sector and the separator sectors are empty alphabets
    assert m4.hardware.junctions[K] == ()
    assert m5.hardware.junctions[0] == () and m5.hardware.junctions[1] == ()


def test_m5_standard_computation_mirrors(pipeline):
    """A standard-base run acts identically on the two halves."""
    m5 = pipeline.m5
    h = zoo.m1_accepting_history(pipeline.m1, 0)
    names = []
    for s in range(1, m5.meta["m3"].meta["stages"] + 1):
        names += zoo._stage_run_names(pipeline, s, h)
        if s < m5.meta["m3"].meta["stages"]:
            names.append("chi(%d,%d)" % (s, s + 1))
    w0 = _i5(pipeline, 0, h)
    comp = run_history(m5, w0, [m5.rule(n) for n in names])
    for cfg in comp.configs:
        qs = [x for x in cfg.word if x.kind == "q"]
        K = (len(qs) - 1) // 2
        first, mirror = qs[1:K + 1], qs[K + 1:]
        assert [x.sym for x in mirror] == \
            [x.sym + "'" for x in reversed(first)]


def _i5(pl, k, h):
    m5 = pl.m5
    hw = m5.hardware
    meta = m5.meta
    orig_hist = [j for j in meta["history_junctions"]
                 if j <= len(hw.slots) // 2]
    mir_hist = [j for j in meta["history_junctions"]
                if j > len(hw.slots) // 2]
    in_j, in_j_mir = meta["input_junctions"]
    w = []
    for i, sym in enumerate(m5.start_syms):
        w.append(hw.q(sym, hw.slots[i].sign))
        nxt = i + 1
        if nxt == in_j:
            w.extend(hw.y("al") for _ in range(k))
        if nxt == in_j_mir:
            w.extend(hw.y("al'", -1) for _ in range(k))
        if nxt in orig_hist:
            w.extend(hw.y(zoo.hl(x)) for x in h)
        if nxt in mir_hist:
            w.extend(hw.y(zoo.hl(x) + "'", -1) for x in reversed(h))
    return hw.parse_admissible(tuple(w))


def test_main_machine_canonical_words(pipeline):
    wkk = zoo.w_kk(pipeline, 3, 2)
    assert y_length(wkk.word) == 5
    assert y_length(zoo.w_kk(pipeline, 0).word) == 0
    assert zoo.w_st(pipeline).word[0].sym == "tt"
    # W(k,k') is admissible for the inverse seam rule, any k, k'
    M = pipeline.main
    t23i = M.rule("theta(23)", -1)
    for k, kp in [(0, 0), (1, 2), (3, 3)]:
        assert M.in_domain(t23i, zoo.w_kk(pipeline, k, kp))


def test_theta23_images_are_wkk(pipeline):
    """Applying the seam rule to a reachable sweep-end word gives W(k,k)."""
    M = pipeline.main
    for k in (0, 2):
        names = zoo.start_to_wkk_names(pipeline, k)
        comp = run_history(M, zoo.w_st(pipeline), [M.rule(n) for n in names])
        assert comp.wt.word == zoo.w_kk(pipeline, k).word


def test_full_accepting_runs(pipeline):
    for k in (0, 2, 4):
        comp = zoo.full_accepting_run(pipeline, k)
        assert comp is not None and comp.is_reduced()
        assert comp.wt.word == zoo.w_ac(pipeline).word
    assert zoo.full_accepting_run(pipeline, 1) is None
    assert zoo.full_accepting_run(pipeline, 3) is None


def test_theta0_needs_empty_sectors(pipeline):
    M = pipeline.main
    theta0 = M.rule("theta0")
    # the erase-phase configuration with content is out of domain
    full = zoo.full_accepting_run(pipeline, 2)
    for cfg in full.configs[:-2]:
        assert not M.in_domain(theta0, cfg)
    assert M.in_domain(theta0, full.configs[-2])


def test_accessibility(pipeline):
    res = zoo.is_accessible(pipeline, zoo.w_st(pipeline), bound=5)
    assert res.computation is not None and len(res.computation) == 0
    res = zoo.is_accessible(pipeline, zoo.w_ac(pipeline), bound=5)
    assert res.computation is not None and len(res.computation) == 0
    res = zoo.is_accessible(pipeline, zoo.w_kk(pipeline, 2), bound=60)
    assert res.computation is not None


def test_toy_m1_bounded_search():
    """Accepted inputs are found by bounded search; rejected ones are
    exhausted within the machine's a-priori length bound."""
    from smforge.machine import find_path, reachable_states
    m1 = zoo.make_toy_M1()
    acc = m1.end_configuration()
    comp = find_path(m1, zoo.i1_config(m1, 2), [acc], depth=8)
    assert comp is not None and len(comp) == 4
    dist, exhausted = reachable_states(m1, zoo.i1_config(m1, 1), 10)
    assert exhausted and acc.word not in dist


def test_m2_projects_to_m1():
    """Observed only in working sectors, a history-sector computation
    replays the recognizer with a copied history: drop the history content,
    strip the copy suffixes, and collapse the doubled part letters."""
    pl = zoo.build_pipeline()
    m1, m2 = pl.m1, pl.m2
    h = zoo.m1_accepting_history(m1, 2)
    c2 = run_history(m2, zoo.i2_config(m2, 2, h),
                     [m2.rule(x + ".h") for x in h])
    c1 = run_history(m1, zoo.i1_config(m1, 2), [m1.rule(x) for x in h])
    for a, b in zip(c1.configs, c2.configs):
        syms = [x.sym.split(".")[0] if x.kind == "q" else x.sym
                for x in b.word if not x.sym.startswith("h(")]
        collapsed = [s for i, s in enumerate(syms)
                     if i == 0 or s == "al" or s != syms[i - 1]]
        assert collapsed == [x.sym for x in a.word]


def test_theta23_inverse_domain_is_wkk_shaped(pipeline):
    """Everything admissible for the inverse seam rule is a W(k,k') word:
    the state letters are pinned and only the input sector and its mirror
    admit content."""
    M = pipeline.main
    t23i = M.rule("theta(23)", -1)
    doms = M.domains(t23i)
    in_j, in_mir = M.meta["input_junctions"]
    for j, d in enumerate(doms):
        if j == in_j:
            assert d == frozenset(["al"])
        elif j == in_mir:
            assert d == frozenset(["al'"])
        else:
            assert d == frozenset()
    froms = {p.q_from for p in t23i.parts}
    st3 = {s.name.lower() + "!3" for s in M.hardware.slots
           if s.name != "T"} | {"tt"}
    assert froms == st3


def test_i3_config(pipeline):
    m3 = pipeline.m3
    h = zoo.m1_accepting_history(pipeline.m1, 2)
    adm = zoo.i3_config(m3, 2, h)
    assert y_length(adm.word) == 2 + len(h)
    assert m3.in_domain(m3.rule("rl1.fwd(start)"), adm)
