"""Planar diagrams over the machine presentations.

A band is a one-cell-thick row of relator cells sharing vertical edges; a
trapezium is a stack of bands whose trimmed tops and bottoms agree, built
from a computation; gluing the two equal sides of a trapezium over a
circular word gives an annulus, and capping a circle with a hub cell gives
a disk diagram.

Diagrams store directed labeled edges, cells as boundary cycles of signed
edges, and one or two outer boundary cycles.  Planarity is certified by the
face partition: every signed edge occurs exactly once among the cell cycles
and the (inverted) boundary cycles, and the Euler count of the resulting
face structure is that of a sphere.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .machine import Rule, SMachine, pair_allowed
from .presentation import (GroupPresentation, lift_config,
                           project_empty, letter_key)
from .words import Letter, Word, format_word, free_reduce, winv


class DiagramError(ValueError):
    pass


@dataclass
class Cell:
    cycle: tuple                    # signed edge ids, counterclockwise
    kind: str                       # theta_q | theta_a | hub
    source: str                     # rule name or hub tag


@dataclass
class Diagram:
    edges: dict                     # eid -> (tail, head, label)
    cells: tuple
    boundaries: tuple               # 1 (disk) or 2 (annular) ccw cycles
    kind: str = "disk"

    def label(self, se: int) -> Letter:
        t, h, lab = self.edges[abs(se)]
        return lab if se > 0 else lab.inv()

    def path_word(self, path) -> Word:
        return tuple(self.label(se) for se in path)

    def boundary_word(self, n: int = 0) -> Word:
        return self.path_word(self.boundaries[n])

    def ends(self, se: int):
        t, h, _ = self.edges[abs(se)]
        return (t, h) if se > 0 else (h, t)

    @property
    def area(self) -> int:
        return len(self.cells)

    def __repr__(self):
        return "<%s diagram: %d cells, %d edges>" % (self.kind, len(self.cells),
                                                     len(self.edges))


# ---------------------------------------------------------------------------
# Mutable complex used by the constructors.


class _Complex:
    def __init__(self):
        self._v = itertools.count(0)
        self._e = itertools.count(1)
        self.vparent: dict = {}
        self.emap: dict = {}          # eid -> (eid2, sign): identified into
        self.edges: dict = {}         # eid -> [tail, head, label]
        self.cells: list = []

    def vertex(self) -> int:
        v = next(self._v)
        self.vparent[v] = v
        return v

    def findv(self, v: int) -> int:
        while self.vparent[v] != v:
            self.vparent[v] = self.vparent[self.vparent[v]]
            v = self.vparent[v]
        return v

    def unionv(self, a: int, b: int):
        ra, rb = self.findv(a), self.findv(b)
        if ra != rb:
            self.vparent[rb] = ra

    def edge(self, tail: int, head: int, label: Letter) -> int:
        e = next(self._e)
        self.edges[e] = [tail, head, label]
        return e

    def resolve(self, se: int):
        sign = 1 if se > 0 else -1
        e = abs(se)
        while e in self.emap:
            e2, s2 = self.emap[e]
            sign *= s2
            e = e2
        return sign * e

    def identify(self, se: int, sf: int):
        """Identify edge sf with edge se (same direction when signs agree)."""
        a, b = self.resolve(se), self.resolve(sf)
        if a == b:
            return
        if abs(a) == abs(b):
            raise DiagramError("folding an edge onto itself")
        ea, eb = self.edges[abs(a)], self.edges[abs(b)]
        la = ea[2] if a > 0 else ea[2].inv()
        lb = eb[2] if b > 0 else eb[2].inv()
        if la != lb:
            raise DiagramError("identifying edges with labels %s vs %s"
                               % (la, lb))
        ta, ha = (ea[0], ea[1]) if a > 0 else (ea[1], ea[0])
        tb, hb = (eb[0], eb[1]) if b > 0 else (eb[1], eb[0])
        self.unionv(ta, tb)
        self.unionv(ha, hb)
        self.emap[abs(b)] = (abs(a), 1 if (a > 0) == (b > 0) else -1)

    def add_cell(self, cycle, kind: str, source: str):
        self.cells.append(Cell(tuple(cycle), kind, source))

    def fold_path(self, path: list) -> list:
        """Identify adjacent mutually-inverse tape edges of a path until none
        remain; the surviving path is returned.  Only tape letters fold:
        state and rule letters never cancel along the sides these paths
        realize."""
        out: list = []
        for se in path:
            se = self.resolve(se)
            if out:
                prev = self.resolve(out[-1])
                pl = self.label_of(prev)
                cl = self.label_of(se)
                if pl.kind == "y" and pl == cl.inv():
                    if abs(prev) != abs(se):
                        self.identify(prev, -se)
                    out.pop()
                    continue
            out.append(se)
        return out

    def label_of(self, se: int) -> Letter:
        e = self.edges[abs(se)]
        return e[2] if se > 0 else e[2].inv()

    def finish(self, boundaries, kind: str) -> Diagram:
        edges = {}
        for e, (t, h, lab) in self.edges.items():
            if e in self.emap:
                continue
            edges[e] = (self.findv(t), self.findv(h), lab)
        cells = tuple(Cell(tuple(self.resolve(se) for se in c.cycle),
                           c.kind, c.source) for c in self.cells)
        bnds = tuple(tuple(self.resolve(se) for se in b) for b in boundaries)
        return Diagram(edges, cells, bnds, kind)


# ---------------------------------------------------------------------------
# Theta bands.


@dataclass
class BandRow:
    rule: Rule                      # the signed rule the row realizes
    bot: list                       # signed eids, full bottom, left to right
    top: list
    tbot: tuple                     # slice (lo, hi) into bot
    ttop: tuple
    left: int                       # signed theta edge, pointing up
    right: int
    cells: tuple                    # indices into the complex cell list


def _theta_label(machine: SMachine, rule_name: str, junction: int,
                 occ_slot: int, sup, L: int) -> Letter:
    if sup is None:
        return Letter("t", junction, rule_name, 1, None)
    if junction == 0:
        i = sup if occ_slot == 0 else sup % L + 1
        return Letter("t", 0, rule_name, 1, i)
    return Letter("t", junction, rule_name, 1, sup)


def _row(cx: _Complex, machine: SMachine, rule: Rule, U: Word, L: int):
    """One-cell-thick row of a positive rule over its domain-side word U
    (the bottom).  Returns (bot, top, left, right, cell_ids, top_word); the
    theta edges point up."""
    hw = machine.hardware
    template = rule.tag("template", "plain")
    assert rule.sign > 0
    has_sup = any(x.sup is not None for x in U)
    if template == "plain" and has_sup:
        raise DiagramError("rule %s acts on superscript-free words" % rule.name)
    if template in ("super", "erase") and U and not has_sup:
        raise DiagramError("rule %s needs a superscripted lift" % rule.name)
    vb = cx.vertex()
    bot: list = []
    bot_verts = [vb]
    for x in U:
        v2 = cx.vertex()
        bot.append(cx.edge(bot_verts[-1], v2, x))
        bot_verts.append(v2)

    top: list = []
    cells = []
    cur_top_v = cx.vertex()
    prev_theta = None
    left_theta = None
    for idx, x in enumerate(U):
        if x.kind == "q":
            slot = x.part
            li, ri = hw.interfaces(x)
            part = rule.parts[slot]
            piece = (part.a + (Letter("q", slot, part.q_to, 1),) + part.b)
            if template == "super":
                piece = tuple(p._replace(sup=x.sup) for p in piece)
            if x.sign < 0:
                piece = winv(piece)
            lj = _theta_label(machine, rule.name, li, slot, x.sup, L)
            rj = _theta_label(machine, rule.name, ri, slot, x.sup, L)
        else:
            piece = (x.bare() if template == "erase" else x,)
            lj = rj = _theta_label(machine, rule.name, x.part, x.part,
                                   x.sup, L)
        if prev_theta is None:
            left_theta = cx.edge(bot_verts[idx], cur_top_v, lj)
            e_left = left_theta
        else:
            e_left = prev_theta
            if cx.label_of(e_left) != lj:
                raise DiagramError("theta seam mismatch: %s vs %s"
                                   % (cx.label_of(e_left), lj))
        top_piece = []
        for y in piece:
            v2 = cx.vertex()
            top_piece.append(cx.edge(cur_top_v, v2, y))
            cur_top_v = v2
        e_right = cx.edge(bot_verts[idx + 1], cur_top_v, rj)
        cycle = ([bot[idx], e_right] + [-se for se in reversed(top_piece)]
                 + [-e_left])
        kind = "theta_q" if x.kind == "q" else "theta_a"
        cx.add_cell(cycle, kind, rule.name)
        cells.append(len(cx.cells) - 1)
        top.extend(top_piece)
        prev_theta = e_right

    top = cx.fold_path(top)
    top_word = tuple(cx.label_of(se) for se in top)
    return bot, top, left_theta, prev_theta, cells, top_word


def _trim_slice(word: Word):
    lo, hi = 0, len(word)
    while lo < hi and word[lo].kind == "y":
        lo += 1
    while hi > lo and word[hi - 1].kind == "y":
        hi -= 1
    return lo, hi


def build_band(cx: _Complex, machine: SMachine, W1: Word, rule: Rule,
               L: int, lift_hint=None) -> BandRow:
    """A reduced one-rule band whose trimmed bottom label is W1.

    A positive rule builds upward from W1; a negative rule realizes the
    positive band of its inverse upside down (built from the image side),
    with the cell cycles inverted to keep every cell counterclockwise."""
    if rule.sign > 0:
        bot, top, left, right, cells, top_word = _row(
            cx, machine, rule, tuple(W1), L)
        lo, hi = _trim_slice(top_word)
        return BandRow(rule, bot, top, (0, len(bot)), (lo, hi), left, right,
                       tuple(cells))
    pos = machine.inverse(rule)
    U = _image_side_lift(machine, rule, W1, L, lift_hint)
    bot, top, left, right, cells, top_word = _row(cx, machine, pos, U, L)
    lo, hi = _trim_slice(top_word)
    if tuple(top_word[lo:hi]) != tuple(W1):
        raise DiagramError("negative-rule band: trimmed image %s != %s"
                           % (format_word(top_word[lo:hi]), format_word(W1)))
    for n in cells:
        c = cx.cells[n]
        cx.cells[n] = Cell(tuple(-se for se in reversed(c.cycle)),
                           c.kind, c.source)
    return BandRow(rule, top, bot, (lo, hi), (0, len(bot)), -left, -right,
                   tuple(cells))


def _image_side_lift(machine: SMachine, rule: Rule, W1: Word, L: int,
                     lift_hint) -> Word:
    """The lift of W1 applied the (negative) rule, carrying superscripts
    through per the rule's template."""
    template = rule.tag("template", "plain")
    adm = machine.hardware.parse_admissible(project_empty(W1))
    out = machine.apply(rule, adm).word
    if template == "erase":
        sup = 1 if lift_hint is None else lift_hint
        return lift_config(machine, out, sup, L)
    first_sup = W1[0].sup if W1 else None
    if first_sup is None:
        return out
    return lift_config(machine, out, first_sup, L)


def build_theta_band(machine: SMachine, W1: Word, rule: Rule,
                     L: int = 1) -> Diagram:
    """One-band diagram with trimmed bottom label W1."""
    cx = _Complex()
    row = build_band(cx, machine, tuple(W1), rule, L)
    ccw = _trapezium_boundary(cx, [row])
    return cx.finish([ccw], "disk")


def _inv_path(path):
    return [-se for se in reversed(path)]


def _trapezium_boundary(cx: _Complex, rows: list) -> list:
    ccw: list = []
    r1 = rows[0]
    ccw += r1.bot[r1.tbot[0]:r1.tbot[1]]
    for row in rows:
        ccw += row.bot[row.tbot[1]:]              # bottom-right fins outward
        ccw.append(row.right)
        ccw += _inv_path(row.top[row.ttop[1]:])   # top-right fins inward
    last = rows[-1]
    ccw += _inv_path(last.top[last.ttop[0]:last.ttop[1]])
    for row in reversed(rows):
        ccw += _inv_path(row.top[:row.ttop[0]])   # top-left fins outward
        ccw.append(-row.left)
        ccw += row.bot[:row.tbot[0]]              # bottom-left fins inward
    return _fold_cyclic(cx, ccw)


def _fold_cyclic(cx: _Complex, walk: list) -> list:
    walk = cx.fold_path(walk)
    while len(walk) >= 2 and cx.label_of(walk[0]).kind == "y" and \
            cx.label_of(walk[0]) == cx.label_of(walk[-1]).inv():
        if abs(cx.resolve(walk[0])) != abs(cx.resolve(walk[-1])):
            cx.identify(walk[0], -walk[-1])
        walk = cx.fold_path(walk[1:-1])
    return [cx.resolve(se) for se in walk]


@dataclass
class TrapeziumData:
    diagram: Diagram
    rows: list                      # BandRow per step, bottom to top
    row_bottoms: list               # trimmed bottom words per row
    row_tops: list
    history: tuple

    @property
    def height(self) -> int:
        return len(self.rows)

    def base(self):
        return tuple((x.part, x.sign) for x in self.row_bottoms[0]
                     if x.kind == "q")


def trapezium_from_computation(machine: SMachine, W0: Word,
                               history: Sequence[Rule], L: int = 1,
                               check_eligible: bool = True) -> TrapeziumData:
    """Stack of bands realizing the computation; seam rows over the
    superscript-erasing rule restart the superscript count one higher, which
    keeps the stack reduced even across cancelling history pairs."""
    history = tuple(history)
    if not history:
        raise DiagramError("a trapezium needs height at least 1")
    if check_eligible:
        for a, b in zip(history, history[1:]):
            if not pair_allowed(a, b, "eligible"):
                raise DiagramError("history is not eligible")
    cx = _Complex()
    rows = []
    bottoms, tops = [], []
    cur = tuple(W0)
    sup_counter = 0
    for x in cur:
        if x.sup is not None:
            sup_counter = max(sup_counter, x.sup)
    for r in history:
        hint = None
        if r.sign < 0 and r.tag("template") == "erase":
            sup_counter += 1
            hint = (sup_counter - 1) % L + 1
        row = build_band(cx, machine, cur, r, L, lift_hint=hint)
        rows.append(row)
        bottoms.append(cur)
        cur = tuple(cx.label_of(se)
                    for se in row.top[row.ttop[0]:row.ttop[1]])
        tops.append(cur)
        for x in cur:
            if x.sup is not None:
                sup_counter = max(sup_counter, x.sup)
    for below, above in zip(rows, rows[1:]):
        seam_b = below.top[below.ttop[0]:below.ttop[1]]
        seam_a = above.bot[above.tbot[0]:above.tbot[1]]
        if len(seam_b) != len(seam_a):
            raise DiagramError("seam length mismatch")
        for se, sf in zip(seam_b, seam_a):
            cx.identify(se, sf)
    ccw = _trapezium_boundary(cx, rows)
    diagram = cx.finish([ccw], "disk")
    return TrapeziumData(diagram, rows, bottoms, tops, history)


# ---------------------------------------------------------------------------
# Verification.


def verify_diagram(dg: Diagram, P: GroupPresentation) -> list:
    """Structured list of violations; empty means the diagram is a genuine
    reduced diagram over the presentation with the stored boundary."""
    bad = []
    # 1. every signed edge in exactly one face (cells + inverted boundaries)
    seen: dict = {}
    def see(se, who):
        if se in seen:
            bad.append(("face-partition", se, seen[se], who))
        seen[se] = who
    for n, c in enumerate(dg.cells):
        for se in c.cycle:
            see(se, ("cell", n))
    for n, b in enumerate(dg.boundaries):
        for se in _inv_path(list(b)):
            see(se, ("boundary", n))
    for e in dg.edges:
        for se in (e, -e):
            if se not in seen:
                bad.append(("unused-edge-side", se))
    # 2. faces are closed walks
    for n, c in enumerate(dg.cells):
        if not _is_closed_walk(dg, c.cycle):
            bad.append(("cell-not-closed", n))
    for n, b in enumerate(dg.boundaries):
        if b and not _is_closed_walk(dg, b):
            bad.append(("boundary-not-closed", n))
    # 3. Euler characteristic of the face structure (sphere)
    verts = {v for (t, h, _) in dg.edges.values() for v in (t, h)}
    F = len(dg.cells) + len(dg.boundaries)
    if verts and len(verts) - len(dg.edges) + F != 2:
        bad.append(("euler", len(verts), len(dg.edges), F))
    if not _connected(dg):
        bad.append(("disconnected",))
    # 4. cell labels are relators
    for n, c in enumerate(dg.cells):
        w = dg.path_word(c.cycle)
        if not P.is_relator(w):
            bad.append(("not-a-relator", n, format_word(w)))
    # 5. reducedness: no two cells mirror each other across a shared edge
    owners: dict = {}
    for n, c in enumerate(dg.cells):
        for k, se in enumerate(c.cycle):
            owners.setdefault(se, []).append((n, k))
    for e in dg.edges:
        plus, minus = owners.get(e, []), owners.get(-e, [])
        if len(plus) == 1 and len(minus) == 1:
            (n1, k1), (n2, k2) = plus[0], minus[0]
            c1 = dg.cells[n1].cycle
            w1 = dg.path_word(c1[k1:] + c1[:k1])
            # the mirror reading of the second cell, starting from +e
            ic2 = tuple(-se for se in reversed(dg.cells[n2].cycle))
            j = len(ic2) - 1 - k2
            w2 = dg.path_word(ic2[j:] + ic2[:j])
            if w1 == w2:
                bad.append(("cancellable-pair", n1, n2, e))
    return bad


def _is_closed_walk(dg: Diagram, cycle) -> bool:
    if not cycle:
        return True
    for se, sf in zip(cycle, cycle[1:] + cycle[:1]):
        if dg.ends(se)[1] != dg.ends(sf)[0]:
            return False
    return True


def _connected(dg: Diagram) -> bool:
    if not dg.edges:
        return True
    adj: dict = {}
    for (t, h, _) in dg.edges.values():
        adj.setdefault(t, []).append(h)
        adj.setdefault(h, []).append(t)
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(adj)


# ---------------------------------------------------------------------------
# Maximal bands inside a finished diagram.


@dataclass
class MaximalBand:
    kind: str                       # "theta" | "q" | "y"
    key: object                     # rule name / slot index / (junction, sym)
    cells: tuple                    # cell indices in order
    is_annulus: bool
    links: tuple                    # shared signed edges along the chain


def _z_edges(dg: Diagram, cell: Cell, kind: str, key) -> list:
    out = []
    for se in cell.cycle:
        lab = dg.label(se)
        if kind == "theta" and lab.kind == "t" and lab.sym == key:
            out.append(se)
        elif kind == "q" and lab.kind == "q" and lab.part == key:
            out.append(se)
        elif kind == "y" and lab.kind == "y" and \
                (lab.part, lab.sym) == key:
            out.append(se)
    return out


def _band_keys(dg: Diagram, kind: str):
    keys = set()
    for e, (t, h, lab) in dg.edges.items():
        if kind == "theta" and lab.kind == "t":
            keys.add(lab.sym)
        elif kind == "q" and lab.kind == "q":
            keys.add(lab.part)
        elif kind == "y" and lab.kind == "y":
            keys.add((lab.part, lab.sym))
    return sorted(keys, key=str)


def extract_bands(dg: Diagram, kind: str) -> list:
    """Maximal bands of the given kind; Y-bands consist of commuting cells
    only, and hub cells belong to no band."""
    bands = []
    for key in _band_keys(dg, kind):
        members = {}
        for n, c in enumerate(dg.cells):
            if kind == "y" and c.kind != "theta_a":
                continue
            if c.kind == "hub":
                continue
            zs = _z_edges(dg, c, kind, key)
            if not zs:
                continue
            if len(zs) != 2:
                raise DiagramError("cell %d has %d edges for band %s"
                                   % (n, len(zs), key))
            members[n] = zs
        by_edge: dict = {}
        for n, zs in members.items():
            for se in zs:
                by_edge.setdefault(abs(se), set()).add(n)
        neighbors = {n: set() for n in members}
        for e, owners in by_edge.items():
            if len(owners) == 2:
                a, b = owners
                neighbors[a].add(b)
                neighbors[b].add(a)
        unseen = set(members)
        while unseen:
            # prefer a chain end so paths come out in order
            ends = [n for n in unseen
                    if len(neighbors[n] & unseen) <= 1]
            n0 = min(ends) if ends else min(unseen)
            chain = [n0]
            unseen.discard(n0)
            while True:
                nxt = [m for m in neighbors[chain[-1]] if m in unseen]
                if not nxt:
                    break
                chain.append(min(nxt))
                unseen.discard(chain[-1])
            annulus = False
            if len(chain) == 1:
                zs = members[chain[0]]
                annulus = abs(zs[0]) == abs(zs[1])
            elif len(chain) == 2:
                shared = {abs(se) for se in members[chain[0]]} & \
                    {abs(se) for se in members[chain[1]]}
                annulus = len(shared) == 2
            else:
                shared = {abs(se) for se in members[chain[0]]} & \
                    {abs(se) for se in members[chain[-1]]}
                annulus = bool(shared)
            links = []
            for a, b in zip(chain, chain[1:]):
                shared = {abs(se) for se in members[a]} & \
                    {abs(se) for se in members[b]}
                links.append(min(shared))
            bands.append(MaximalBand(kind, key, tuple(chain), annulus,
                                     tuple(links)))
    return bands


def band_sides(dg: Diagram, band: MaximalBand):
    """The two side paths of a band: per cell, the cycle arcs between its
    two band-edges, concatenated along the chain."""
    zkind = {"theta": "t", "q": "q", "y": "y"}[band.kind]
    arcs_a, arcs_b = [], []
    for n in band.cells:
        cyc = dg.cells[n].cycle
        pos = [k for k, se in enumerate(cyc)
               if dg.label(se).kind == zkind and
               (band.kind != "theta" or dg.label(se).sym == band.key) and
               (band.kind != "q" or dg.label(se).part == band.key) and
               (band.kind != "y" or (dg.label(se).part,
                                     dg.label(se).sym) == band.key)]
        assert len(pos) == 2
        i, j = pos
        arcs_a.append(tuple(cyc[i + 1:j]))
        arcs_b.append(tuple(cyc[j + 1:] + cyc[:i]))
    return arcs_a, arcs_b


def band_history(dg: Diagram, band: MaximalBand) -> tuple:
    """History of a q-band: the theta projection of one side path, read
    along the chain (up to global inversion, both sides agree)."""
    assert band.kind == "q"
    arcs_a, _ = band_sides(dg, band)
    out = []
    for arc in arcs_a:
        for se in arc:
            lab = dg.label(se)
            if lab.kind == "t":
                out.append((lab.sym, lab.sign))
    return tuple(out)


def band_base(dg: Diagram, band: MaximalBand) -> tuple:
    """Base of a theta-band: the slot/sign sequence of its q-edges read from
    the cell chain."""
    assert band.kind == "theta"
    out = []
    for n in band.cells:
        c = dg.cells[n]
        if c.kind != "theta_q":
            continue
        qs = [dg.label(se) for se in c.cycle if dg.label(se).kind == "q"]
        out.append((qs[0].part, qs[0].sign))
    return tuple(out)


# ---------------------------------------------------------------------------
# Annular gluings and disks.


def _build_stack(cx: _Complex, machine: SMachine, W0: Word,
                 history, L: int):
    """Rows of the trapezium over W0 with their seams identified."""
    rows = []
    bottoms, tops = [], []
    cur = tuple(W0)
    sup_counter = max([x.sup for x in cur if x.sup is not None], default=0)
    for r in history:
        hint = None
        if r.sign < 0 and r.tag("template") == "erase":
            sup_counter += 1
            hint = (sup_counter - 1) % L + 1
        row = build_band(cx, machine, cur, r, L, lift_hint=hint)
        rows.append(row)
        bottoms.append(cur)
        cur = tuple(cx.label_of(se)
                    for se in row.top[row.ttop[0]:row.ttop[1]])
        tops.append(cur)
        for x in cur:
            if x.sup is not None:
                sup_counter = max(sup_counter, x.sup)
    for below, above in zip(rows, rows[1:]):
        seam_b = below.top[below.ttop[0]:below.ttop[1]]
        seam_a = above.bot[above.tbot[0]:above.tbot[1]]
        if len(seam_b) != len(seam_a):
            raise DiagramError("seam length mismatch")
        for se, sf in zip(seam_b, seam_a):
            cx.identify(se, sf)
    return rows, bottoms, tops


def annular_from_computation(machine: SMachine, W0: Word, history,
                             L: int = 1) -> Diagram:
    """Glue the two equal sides of the trapezium over a circular word; the
    boundary cycles carry the first and last configurations."""
    history = tuple(history)
    cx = _Complex()
    rows, bottoms, tops = _build_stack(cx, machine, W0, history, L)
    for row in rows:
        if row.tbot != (0, len(row.bot)) or row.ttop != (0, len(row.top)):
            raise DiagramError("cannot glue a trapezium with side fins")
        la = cx.label_of(cx.resolve(row.left))
        lb = cx.label_of(cx.resolve(row.right))
        if la != lb:
            raise DiagramError("side labels differ: %s vs %s" % (la, lb))
        cx.identify(row.left, row.right)
    bottom = [cx.resolve(se) for se in rows[0].bot]
    top = [cx.resolve(se) for se in rows[-1].top]
    return cx.finish([bottom, _inv_path(top)], "annular")


def disk_from_accessible(machine: SMachine, comp, L: int,
                         hub_at: str) -> Diagram:
    """One hub plus L copies of a computation glued around it.

    comp runs from the start configuration to W (hub_at="bottom", the hub is
    the start-word hub) or from W to the accept configuration
    (hub_at="top", the accept-word hub).  The diagram's boundary projects to
    W^L.
    """
    assert hub_at in ("bottom", "top")
    w0 = comp.w0.word * L
    first_sup = 1 if hub_at == "bottom" else None
    W0 = lift_config(machine, w0, first_sup, L)
    cx = _Complex()
    if not comp.history:
        # the bare hub: one cell, boundary the hub word itself
        verts = [cx.vertex() for _ in W0]
        circle = [cx.edge(verts[i], verts[(i + 1) % len(W0)], x)
                  for i, x in enumerate(W0)]
        if hub_at == "bottom":
            cx.add_cell(_inv_path(circle), "hub", "start")
            return cx.finish([_inv_path(circle)], "disk")
        cx.add_cell(circle, "hub", "accept")
        return cx.finish([circle], "disk")
    rows, bottoms, tops = _build_stack(cx, machine, W0, comp.history, L)
    for row in rows:
        if row.tbot != (0, len(row.bot)) or row.ttop != (0, len(row.top)):
            raise DiagramError("cannot glue a trapezium with side fins")
        if cx.label_of(cx.resolve(row.left)) != \
                cx.label_of(cx.resolve(row.right)):
            raise DiagramError("side labels differ")
        cx.identify(row.left, row.right)
    bottom = [cx.resolve(se) for se in rows[0].bot]
    top = [cx.resolve(se) for se in rows[-1].top]
    if hub_at == "bottom":
        cx.add_cell(_inv_path(bottom), "hub", "start")
        return cx.finish([_inv_path(top)], "disk")
    cx.add_cell(top, "hub", "accept")
    return cx.finish([bottom], "disk")


def cyclic_equal(w1: Word, w2: Word, up_to_inversion: bool = True) -> bool:
    from .presentation import _canon_cyclic, letter_key
    if up_to_inversion:
        return _canon_cyclic(tuple(w1)) == _canon_cyclic(tuple(w2))
    k1 = [tuple(letter_key(x) for x in tuple(w1)[r:] + tuple(w1)[:r])
          for r in range(max(1, len(w1)))]
    k2 = tuple(letter_key(x) for x in w2)
    return k2 in k1


# ---------------------------------------------------------------------------
# Exact areas by shortest-certificate search.


def _winding_bound(w: Word, x: Letter, y: Letter):
    """Sum of |winding| of the closed lattice path tracing x as a unit step
    right and y as a unit step up: a lower bound for (and over the free
    abelian plane, the exact value of) the area over the commutator."""
    px = py = 0
    vert = {}                      # (x, y of lower end) -> signed crossings
    for s in w:
        if s[:3] == x[:3]:
            px += s.sign
        elif s[:3] == y[:3]:
            key = (px, py if s.sign > 0 else py - 1)
            vert[key] = vert.get(key, 0) + s.sign
            py += s.sign
        else:
            return None
    if px or py:
        return None
    xs = sorted({k[0] for k in vert})
    total = 0
    rows = {}
    for (cx_, cy), val in vert.items():
        rows.setdefault(cy, []).append((cx_, val))
    for cy, col in rows.items():
        col.sort()
        wind = 0
        prev = None
        for cx_, val in col:
            if prev is not None and wind:
                total += abs(wind) * (cx_ - prev)
            wind += val
            prev = cx_
    return total


def _commutator_pair(P: GroupPresentation):
    """If the presentation is a single commutator relator on two letters,
    return that ordered pair."""
    if len(P.relators) != 1:
        return None
    w = P.relators[0][0]
    if len(w) != 4:
        return None
    a, b = w[0], w[1]
    if tuple(map(letter_key, w)) == tuple(map(letter_key,
                                              (a, b, a.inv(), b.inv()))):
        return (a, b)
    return None


def area_of_word(w: Word, P: GroupPresentation,
                 bound: int = 20) -> Optional[int]:
    """Exact minimal cell count of a diagram with the given boundary, by
    shortest-path search over boundary-cell peelings: multiply a rotation of
    the cyclic boundary by a relator rotation that cancels at least one
    letter.  Over the free abelian plane on two letters the winding-number
    invariant guides and certifies the search; elsewhere the search is plain
    uniform-cost, fit for tiny instances only."""
    # intern letters as signed integers
    table: dict = {}

    def code(x: Letter) -> int:
        pos = x if x.sign > 0 else x.inv()
        if pos not in table:
            table[pos] = len(table) + 1
        return table[pos] * x.sign

    def enc(word) -> tuple:
        return tuple(code(x) for x in word)

    def reduce_i(word):
        out = []
        for c in word:
            if out and out[-1] == -c:
                out.pop()
            else:
                out.append(c)
        return tuple(out)

    def canon(word):
        word = reduce_i(word)
        if not word:
            return ()
        return min(word[r:] + word[:r] for r in range(len(word)))

    pair = _commutator_pair(P)
    if pair is not None:
        cx_, cy_ = code(pair[0]), code(pair[1])

        def h(word) -> int:
            px = py = 0
            vert: dict = {}
            for c in word:
                if abs(c) == cx_:
                    px += 1 if c > 0 else -1
                elif abs(c) == cy_:
                    s = 1 if c > 0 else -1
                    key = (px, py if s > 0 else py - 1)
                    vert[key] = vert.get(key, 0) + s
                    py += s
                else:
                    return 0
            if px or py:
                return 0
            total = 0
            rows: dict = {}
            for (vx, vy), val in vert.items():
                rows.setdefault(vy, []).append((vx, val))
            for col in rows.values():
                col.sort()
                wind = 0
                prev = None
                for vx, val in col:
                    if prev is not None and wind:
                        total += abs(wind) * (vx - prev)
                    wind += val
                    prev = vx
            return total
    else:
        def h(word) -> int:
            return 0

    moves = []
    for rel, tag, src in P.relators:
        for v in (enc(rel), tuple(-c for c in reversed(enc(rel)))):
            for r in range(len(v)):
                moves.append(v[r:] + v[:r])

    start = canon(enc(free_reduce(tuple(w))))
    if not start:
        return 0
    dist = {start: 0}
    tick = itertools.count()
    heap = [(h(start), 0, next(tick), start)]
    while heap:
        f, g, _, word = heapq.heappop(heap)
        if not word:
            return g
        if g > dist.get(word, bound + 1) or g >= bound:
            continue
        for mv in moves:
            last = mv[-1]
            for cut in range(len(word)):
                if word[cut] != -last:
                    continue        # the peeled cell must share an edge
                rot = word[cut:] + word[:cut]
                nxt = canon(mv + rot)
                ng = g + 1
                if ng < dist.get(nxt, bound + 1):
                    dist[nxt] = ng
                    heapq.heappush(heap, (ng + h(nxt), ng, next(tick), nxt))
    return None


# ---------------------------------------------------------------------------
# Exports.


def emit_diagram_text(dg: Diagram) -> str:
    from .words import format_letter
    lines = ["# %s diagram, %d cells" % (dg.kind, len(dg.cells))]
    for e in sorted(dg.edges):
        t, h, lab = dg.edges[e]
        lines.append("e%d %d %s %d" % (e, t, format_letter(lab), h))
    for c in dg.cells:
        lines.append("cell %s %s %s" % (c.kind, c.source, " ".join(
            str(se) for se in c.cycle)))
    for b in dg.boundaries:
        lines.append("boundary %s" % " ".join(str(se) for se in b))
    return "\n".join(lines) + "\n"


def trapezium_svg(trap: TrapeziumData, scale: int = 36) -> str:
    """Static drawing of a trapezium on the row/column grid: horizontal
    levels carry the configurations, verticals the rule letters."""
    from .words import format_letter
    rows = trap.rows
    width = max(len(r.bot) for r in rows) + 2
    height = len(rows) + 1
    W = width * scale + 2 * scale
    H = height * scale + 2 * scale
    out = ['<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
           'font-size="%d" font-family="monospace">' % (W, H, scale // 3)]

    def xy(col, row):
        return (scale + col * scale, H - scale - row * scale)

    def line(x1, y1, x2, y2, color):
        out.append('<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="%s"/>'
                   % (x1, y1, x2, y2, color))

    def text(x, y, s):
        out.append('<text x="%d" y="%d">%s</text>' % (x, y, s))

    for n, row in enumerate(rows):
        labels = [trap.diagram.label(se) if se in trap.diagram.edges or
                  -se in trap.diagram.edges else None for se in row.bot]
        for col, se in enumerate(row.bot):
            x1, y1 = xy(col, n)
            x2, y2 = xy(col + 1, n)
            lab = labels[col]
            color = "#888" if lab is None or lab.kind == "y" else "#000"
            line(x1, y1, x2, y2, color)
            if lab is not None:
                text((x1 + x2) // 2 - scale // 3, y1 - 4, format_letter(lab))
        x1, y1 = xy(0, n)
        x2, y2 = xy(0, n + 1)
        line(x1, y1, x2, y2, "#c00")
        text(x1 - scale + 4, (y1 + y2) // 2,
             format_letter(trap.diagram.label(row.left))
             if abs(row.left) in trap.diagram.edges else row.rule.name)
        x1, y1 = xy(len(row.bot), n)
        x2, y2 = xy(len(row.bot), n + 1)
        line(x1, y1, x2, y2, "#c00")
    top = rows[-1]
    for col in range(len(top.top)):
        x1, y1 = xy(col, len(rows))
        x2, y2 = xy(col + 1, len(rows))
        line(x1, y1, x2, y2, "#000")
        se = top.top[col]
        if abs(se) in trap.diagram.edges:
            text((x1 + x2) // 2 - scale // 3, y1 - 4,
                 format_letter(trap.diagram.label(se)))
    out.append("</svg>")
    return "\n".join(out)


def theta_stack(trap: TrapeziumData) -> list:
    """The maximal theta-bands of a trapezium in bottom-to-top order, read
    off the finished diagram and matched against the construction rows."""
    dg = trap.diagram
    bands = extract_bands(dg, "theta")
    by_cells = {frozenset(b.cells): b for b in bands}
    out = []
    for row in trap.rows:
        key = frozenset(row.cells)
        band = by_cells.get(key)
        if band is None:
            raise DiagramError("a construction row is not a maximal band")
        out.append(band)
    return out
