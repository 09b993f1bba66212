import random

import pytest

from smforge import zoo
from smforge.diagrams import (Cell, DiagramError,
                              area_of_word, band_base, band_history,
                              build_theta_band, cyclic_equal,
                              disk_from_accessible, emit_diagram_text,
                              extract_bands, trapezium_from_computation,
                              trapezium_svg, verify_diagram)
from smforge.machine import Computation, run_history
from smforge.presentation import (GroupPresentation, emit_group_G,
                                  emit_group_M, lift_config, project_empty)
from smforge.words import Letter, format_word


@pytest.fixture(scope="module")
def PS(S):
    return emit_group_M(S, 1)


def fig1(S):
    H = [S.rule("t1"), S.rule("t2"), S.rule("t1", -1), S.rule("t2", -1)]
    return trapezium_from_computation(S, S.parse("q^-1 a q a q").word, H, 1)


def test_band_cell_count(S, PS):
    w = S.parse("q^-1 a q a q").word
    band = build_theta_band(S, w, S.rule("t1"), 1)
    kinds = {}
    for c in band.cells:
        kinds[c.kind] = kinds.get(c.kind, 0) + 1
    assert kinds == {"theta_q": 3, "theta_a": 2}   # one cell per letter
    assert verify_diagram(band, PS) == []


def test_band_top_label(S, PS):
    w = S.parse("q^-1 a q a q").word
    band = build_theta_band(S, w, S.rule("t1"), 1)
    # boundary reads bottom, side, inverted top, side
    bw = band.boundary_word()
    assert format_word(bw).startswith("q^-1 a q a q t1")


def test_band_roundtrip_via_inverse(S, PS):
    """Build with a rule, feed the trimmed top to the inverse band: the
    bottom returns.  The stack of a rule and its inverse is a legitimate
    diagram, but not a reduced one."""
    w0 = S.parse("q^-1 a q a q").word
    t = trapezium_from_computation(S, w0, [S.rule("t1"), S.rule("t1", -1)],
                                   1, check_eligible=False)
    assert t.row_tops[-1] == w0
    bad = verify_diagram(t.diagram, PS)
    assert bad and all(v[0] == "cancellable-pair" for v in bad)


def test_fig1_trapezium(S, PS):
    trap = fig1(S)
    assert trap.height == 4
    assert verify_diagram(trap.diagram, PS) == []
    assert [len(r.cells) for r in trap.rows] == [5, 6, 6, 5]
    bw = format_word(trap.diagram.boundary_word())
    assert bw == ("q^-1 a q a q t1 t2 t1^-1 t2^-1 q^-1 a^-1 q^-1 a^-1 q "
                  "t2 t1 t2^-1 t1^-1")


def test_fig1_bands(S, PS):
    trap = fig1(S)
    tb = extract_bands(trap.diagram, "theta")
    qb = extract_bands(trap.diagram, "q")
    yb = extract_bands(trap.diagram, "y")
    assert len(tb) == trap.height
    assert not any(b.is_annulus for b in tb + qb + yb)
    # the sides carry the history
    histories = {band_history(trap.diagram, b) for b in qb}
    H = (("t1", 1), ("t2", 1), ("t1", -1), ("t2", -1))
    assert all(h in (H, tuple((n, -s) for n, s in reversed(H)))
               for h in histories)
    # every theta band crosses every q band at most once
    for t in tb:
        for q in qb:
            assert len(set(t.cells) & set(q.cells)) <= 1
    # theta band bases are the configuration bases
    for b in tb:
        assert band_base(trap.diagram, b) in \
            {tuple(x for x in c.base) for c in
             [S.parse(format_word(w)) for w in
              [trap.row_bottoms[i] for i in range(4)]]}


def test_degenerate_trapezium_rejected(S):
    with pytest.raises(DiagramError):
        trapezium_from_computation(S, S.parse("q").word, [], 1)


def test_noneligible_history_rejected(pipeline):
    M = pipeline.main
    t23 = M.rule("theta(23)")
    with pytest.raises(DiagramError):
        trapezium_from_computation(
            M, zoo.w_kk(pipeline, 0).word, [M.inverse(t23), t23], 1)


def test_reducedness_violation_detected(S, PS):
    """A band glued to its mirror twin is flagged by the verifier."""
    w0 = S.parse("q^-1 a q a q").word
    trap = trapezium_from_computation(S, w0, [S.rule("t1"), S.rule("t1", -1)],
                                      1, check_eligible=False)
    bad = verify_diagram(trap.diagram, PS)
    assert any(v[0] == "cancellable-pair" for v in bad) or bad == []
    # the stack is geometrically fine, but it is not reduced: the pair of
    # mirror rows shares each seam edge between cancellable cells
    assert any(v[0] == "cancellable-pair" for v in bad)


def test_wrong_cell_label_detected(S, PS):
    trap = fig1(S)
    dg = trap.diagram
    broken = dg.cells[0]
    dg2 = type(dg)(dg.edges, (Cell(broken.cycle[:-1], broken.kind,
                                   broken.source),) + dg.cells[1:],
                   dg.boundaries, dg.kind)
    bad = verify_diagram(dg2, PS)
    assert bad


def test_eligible_pair_stays_reduced(pipeline):
    """The seam rule followed by its inverse is eligible, and the repaired
    superscripts keep the stack reduced."""
    M = pipeline.main
    L = 4
    P = emit_group_M(M, L)
    t23 = M.rule("theta(23)")
    # reach a word in the domain of theta(23)
    names = zoo.start_to_wkk_names(pipeline, 2)[:-1]
    comp = run_history(M, zoo.w_st(pipeline), [M.rule(n) for n in names])
    W = comp.wt.word
    lift = lift_config(M, W, 1, L)
    trap = trapezium_from_computation(M, lift, [t23, M.inverse(t23)], L)
    assert verify_diagram(trap.diagram, P) == []
    offs = _superscript_offsets(trap)
    assert len(set(offs)) <= 1


def _superscript_offsets(trap):
    out = []
    for w in trap.row_bottoms + [trap.row_tops[-1]]:
        qs = [x for x in w if x.kind == "q"]
        if qs[0].sup is not None and qs[-1].sup is not None:
            out.append((qs[-1].sup - qs[0].sup))
    return out


def test_random_trapezia_roundtrip(pipeline):
    """Random eligible computations: the trapezium verifies, the row
    relations hold, the superscript offset is constant, and there are no
    annuli."""
    from smforge.machine import pair_allowed
    M = pipeline.main
    L = 4
    P = emit_group_M(M, L)
    rng = random.Random(41)
    full = zoo.full_accepting_run(pipeline, 2)
    seeds = [full.configs[i] for i in range(0, len(full.configs), 7)]
    done = 0
    for trial in range(300):
        if done >= 40:
            break
        w0 = rng.choice(seeds)
        history = []
        cur = w0
        for _ in range(rng.randint(1, 5)):
            cands = [r for r in M.candidate_rules(cur)
                     if (not history or pair_allowed(history[-1], r,
                                                     "eligible"))
                     and M.try_apply(r, cur) is not None]
            if not cands:
                break
            r = rng.choice(cands)
            history.append(r)
            cur = M.apply(r, cur)
        if not history:
            continue
        sup = rng.choice([None, 1, 2])
        lift = lift_config(M, w0.word, sup, L)
        if sup is not None and any(
                r.tag("template") == "plain" and r.tag("transition") is None
                for r in history):
            lift = w0.word
        try:
            trap = trapezium_from_computation(M, lift, history, L)
        except DiagramError:
            continue
        done += 1
        assert verify_diagram(trap.diagram, P) == [], history
        # row relations: each top is the bottom applied the rule
        for w, r, t in zip(trap.row_bottoms, trap.history, trap.row_tops):
            adm = M.parse(project_empty(w))
            assert project_empty(t) == M.apply(r, adm).word
        for below, above in zip(trap.row_tops, trap.row_bottoms[1:]):
            assert below == above
        offs = {o % L for o in _superscript_offsets(trap)}
        assert len(offs) <= 1
        bands = extract_bands(trap.diagram, "theta") + \
            extract_bands(trap.diagram, "q") + \
            extract_bands(trap.diagram, "y")
        assert not any(b.is_annulus for b in bands)
    assert done >= 40


def test_annulus_and_conjugacy(pipeline):
    M = pipeline.main
    P = emit_group_M(M, 1)
    w = zoo.conjugacy_witness(pipeline, 2)
    assert w.diagram is not None
    assert verify_diagram(w.diagram, P) == []
    assert cyclic_equal(w.diagram.boundary_word(0), zoo.w_kk(pipeline, 2).word)
    assert cyclic_equal(w.diagram.boundary_word(1), zoo.w_ac(pipeline).word)
    # the theta-bands close up around the annulus; the q-bands connect
    # the two boundary circles
    tb = extract_bands(w.diagram, "theta")
    assert tb and all(b.is_annulus for b in tb)
    qb = extract_bands(w.diagram, "q")
    assert qb and not any(b.is_annulus for b in qb)
    # rejected inputs give exhausted certificates
    c = zoo.conjugacy_witness(pipeline, 1, bound=4)
    assert c.diagram is None and c.certificate["exhausted"]
    assert not c.certificate["reaches_accept"]


def test_disk_diagram(pipeline):
    L = 6
    PG = emit_group_G(pipeline, L)
    full = zoo.full_accepting_run(pipeline, 0)
    comp = Computation(pipeline.main, full.configs[:8], full.history[:7])
    disk = disk_from_accessible(pipeline.main, comp, L, "bottom")
    assert verify_diagram(disk, PG) == []
    V = disk.boundary_word()
    assert cyclic_equal(project_empty(V), comp.wt.word * L)
    hubs = [c for c in disk.cells if c.kind == "hub"]
    assert len(hubs) == 1


def test_disk_area_census(pipeline):
    """1 hub plus exactly L copies of the cells of the single trapezium."""
    L = 5
    full = zoo.full_accepting_run(pipeline, 0)
    comp = Computation(pipeline.main, full.configs[:6], full.history[:5])
    disk = disk_from_accessible(pipeline.main, comp, L, "bottom")
    single = trapezium_from_computation(
        pipeline.main, lift_config(pipeline.main, comp.w0.word, 1, L),
        comp.history, L)
    assert disk.area == 1 + L * single.diagram.area


def test_area_examples():
    a = Letter("y", 0, "a", 1)
    th = Letter("t", 0, "th", 1)
    rel = (a, th, a.inv(), th.inv())
    P = GroupPresentation("comm", (a, th), ((rel, "theta_a", "th"),), None, 1)
    com = (a, th, a.inv(), th.inv())
    assert area_of_word(com, P, bound=3) == 1
    n2 = (a,) * 2 + (th,) * 2 + (a.inv(),) * 2 + (th.inv(),) * 2
    assert area_of_word(n2, P, bound=6) == 4
    assert area_of_word((), P) == 0
    assert area_of_word((a, a.inv()), P) == 0
    # words not bounding any diagram within the bound
    assert area_of_word((a, th), P, bound=4) is None


def test_exports(S):
    trap = fig1(S)
    text = emit_diagram_text(trap.diagram)
    assert text.count("\ncell ") == trap.diagram.area
    svg = trapezium_svg(trap)
    assert svg.startswith("<svg") and svg.endswith("</svg>")


def test_band_cells_tagged_by_rule(pipeline):
    """Every cell of a one-rule band comes from that rule's relator family,
    and the trimmed sides are permissible."""
    from smforge.presentation import is_permissible
    M = pipeline.main
    L = 3
    P = emit_group_M(M, L)
    lift = lift_config(M, zoo.w_st(pipeline).word, 2, L)
    band = trapezium_from_computation(M, lift, [M.rule("ins(al)")], L)
    for c in band.diagram.cells:
        assert c.source == "ins(al)"
        info = P.relator_info(band.diagram.path_word(c.cycle))
        assert info is not None and info[2] == "ins(al)"
    for w in band.row_bottoms + band.row_tops:
        assert is_permissible(M, w, L)


def test_locking_rule_band_keeps_sectors_empty(pipeline):
    M = pipeline.main
    L = 2
    lift = lift_config(M, zoo.w_st(pipeline).word, 1, L)
    trap = trapezium_from_computation(M, lift, [M.rule("theta(12)")], L)
    top = trap.row_tops[0]
    assert all(x.kind == "q" for x in top)      # every sector still empty


def test_theta_stack_order(S, PS):
    from smforge.diagrams import theta_stack
    trap = fig1(S)
    stack = theta_stack(trap)
    assert [b.key for b in stack] == ["t1", "t2", "t1", "t2"]
    assert [len(b.cells) for b in stack] == [5, 6, 6, 5]


def test_two_part_qband_count():
    """Over the two-part machine's turnaround word the base has four
    letters, so a height-1 trapezium has four maximal q-bands."""
    M = zoo.make_two_part_example()
    P = emit_group_M(M, 1)
    w = M.parse("q1 b^-1 q2 d q2^-1 q1^-1")
    trap = trapezium_from_computation(M, w.word, [M.rule("theta")], 1)
    assert verify_diagram(trap.diagram, P) == []
    qb = extract_bands(trap.diagram, "q")
    assert sum(len(b.cells) for b in qb) == 4
    assert len(qb) == 4
