"""Group presentations defined by a machine.

Every positive rule theta contributes one cell relation per base position j
(U_j theta_{j+1} = theta_j V_j, where U_j -> V_j is the rule's part there)
and one commuting relation per letter of each sector domain (the theta
letter of a junction commutes with the letters that may cross it).  Rules
of the input-writing and input-sweeping sets act on L superscripted copies
of their letters at once; the set-2/3 seam rule erases superscripts, its
relations carrying superscripts on the left-hand side only.  Two hub
relators close the group: the product of the L superscripted copies of the
start word, and the L-th power of the accept word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .machine import Rule, SMachine
from .words import Hardware, Letter, Word, format_word, free_reduce, winv


def theta_letter(machine: SMachine, rule_name: str, j: int,
                 sup: Optional[int] = None, sign: int = 1,
                 L: int = 1) -> Letter:
    """The theta generator at base position j, with index wrapping on a
    circular machine (position N carries the next superscript)."""
    N = len(machine.hardware.slots)
    if machine.hardware.circular and j == N:
        j = 0
        if sup is not None:
            sup = sup % L + 1
    return Letter("t", j, rule_name, sign, sup)


def _sup_letter(x: Letter, i: Optional[int]) -> Letter:
    return x._replace(sup=i)


def letter_key(x: Letter):
    return (x.kind, x.part, x.sym, x.sign, -1 if x.sup is None else x.sup)


def _canon_cyclic(w: Word):
    """Lexicographically least rotation of w and of its inverse."""
    best = None
    for v in (tuple(w), winv(w)):
        for r in range(len(v)):
            rot = v[r:] + v[:r]
            key = tuple(letter_key(x) for x in rot)
            if best is None or key < best[0]:
                best = (key, rot)
    return best[0] if best else ()


@dataclass
class GroupPresentation:
    name: str
    generators: tuple                  # tuple[Letter, ...] (positive forms)
    relators: tuple                    # tuple[(Word, tag, source), ...]
    machine: SMachine
    L: int

    def __post_init__(self):
        self._index = {}
        for n, (w, tag, src) in enumerate(self.relators):
            self._index.setdefault(_canon_cyclic(w), n)

    def is_relator(self, w: Word) -> bool:
        return len(w) > 0 and _canon_cyclic(w) in self._index

    def relator_info(self, w: Word):
        n = self._index.get(_canon_cyclic(w))
        return None if n is None else self.relators[n]

    def census(self) -> dict:
        out: dict = {}
        for w, tag, src in self.relators:
            out[tag] = out.get(tag, 0) + 1
        return out

    def __repr__(self):
        return "<presentation %s: %d generators, %d relators>" % (
            self.name, len(self.generators), len(self.relators))


def super_world_syms(machine: SMachine) -> set:
    """State letters that get L superscripted copies: those rewritten by the
    input-writing/sweeping rules, including the left side of the seam rule."""
    out = set()
    for r in machine.positive_rules:
        t = r.tag("template", "plain")
        if t == "super":
            for p in r.parts:
                out.update((p.q_from, p.q_to))
        elif t == "erase":
            out.update(p.q_from for p in r.parts)
    return out


def plain_world_syms(machine: SMachine) -> set:
    out = set()
    for r in machine.positive_rules:
        t = r.tag("template", "plain")
        if t == "plain":
            for p in r.parts:
                out.update((p.q_from, p.q_to))
        elif t == "erase":
            out.update(p.q_to for p in r.parts)
    return out


def _positions(machine: SMachine):
    """(j, j+1) index pairs for the cell relations, one per slot."""
    N = len(machine.hardware.slots)
    return [(j, j + 1) for j in range(N)] if machine.hardware.circular \
        else [(j, j + 1) for j in range(N)]


def emit_group_M(machine: SMachine, L: int = 1) -> GroupPresentation:
    assert L >= 1
    hw = machine.hardware
    N = len(hw.slots)
    has_super = any(r.tag("template") in ("super", "erase")
                    for r in machine.positive_rules)
    sup_q = super_world_syms(machine) if has_super else set()
    plain_q = plain_world_syms(machine) if has_super else \
        {s for slot in hw.slots for s in slot.letters}

    gens = []
    for i, slot in enumerate(hw.slots):
        for s in slot.letters:
            if s in plain_q or s not in sup_q:
                gens.append(Letter("q", i, s, 1))
            if s in sup_q:
                gens.extend(Letter("q", i, s, 1, u) for u in range(1, L + 1))
    for j, alph in enumerate(hw.junctions):
        for s in alph:
            gens.append(Letter("y", j, s, 1))
            if has_super:
                gens.extend(Letter("y", j, s, 1, u) for u in range(1, L + 1))
    theta_gens = []
    for r in machine.positive_rules:
        t = r.tag("template", "plain")
        top = N if hw.circular else N + 1
        for j in range(top):
            if t in ("super", "erase"):
                theta_gens.extend(theta_letter(machine, r.name, j, u, 1, L)
                                  for u in range(1, L + 1))
            else:
                theta_gens.append(theta_letter(machine, r.name, j))
    seen = set()
    theta_unique = []
    for x in theta_gens:
        if x not in seen:
            seen.add(x)
            theta_unique.append(x)

    relators = []
    for r in machine.positive_rules:
        relators.extend(rule_relators(machine, r, L))
    return GroupPresentation(machine.name, tuple(gens) + tuple(theta_unique),
                             tuple(relators), machine, L)


def rule_relators(machine: SMachine, r: Rule, L: int):
    """All cell and commuting relators contributed by one positive rule."""
    hw = machine.hardware
    template = r.tag("template", "plain")
    out = []
    for p in r.parts:
        j = p.slot
        # At an inverted slot of the standard base the theta indices sit on
        # swapped sides: the cell relation there is U theta_j = theta_{j+1} V.
        after, before = (j + 1, j) if hw.slots[j].sign > 0 else (j, j + 1)
        U = (Letter("q", j, p.q_from, 1),)
        V = p.a + (Letter("q", j, p.q_to, 1),) + p.b
        if template == "plain":
            w = U + (theta_letter(machine, r.name, after),) \
                + winv(V) + (theta_letter(machine, r.name, before, sign=-1),)
            out.append((free_reduce(w), "theta_q", r.name))
        else:
            for i in range(1, L + 1):
                Ui = tuple(_sup_letter(x, i) for x in U)
                Vi = V if template == "erase" \
                    else tuple(_sup_letter(x, i) for x in V)
                w = Ui + (theta_letter(machine, r.name, after, i, 1, L),) \
                    + winv(Vi) \
                    + (theta_letter(machine, r.name, before, i, -1, L),)
                out.append((free_reduce(w), "theta_q", r.name))
    domains = machine.domains(r)
    for j in range(len(hw.slots)):
        for s in sorted(domains[j]):
            a = Letter("y", j, s, 1)
            if template == "plain":
                th = theta_letter(machine, r.name, j)
                w = (a, th, a.inv(), th.inv())
                out.append((w, "theta_a", r.name))
            else:
                for i in range(1, L + 1):
                    th = theta_letter(machine, r.name, j, i, 1, L)
                    ai = _sup_letter(a, i)
                    lo = a if template == "erase" else ai
                    w = (ai, th, lo.inv(), th.inv())
                    out.append((w, "theta_a", r.name))
    return out


# ---------------------------------------------------------------------------
# Superscript machinery on group-level words.


def project_empty(w: Word) -> Word:
    """Erase all superscripts."""
    return tuple(x.bare() for x in w)


def superscript_shift(w: Word, k: int, L: int) -> Word:
    def sh(x: Letter) -> Letter:
        if x.sup is None:
            return x
        return x._replace(sup=(x.sup - 1 + k) % L + 1)
    return tuple(sh(x) for x in w)


def wrap_delta(hw: Hardware, x: Letter, y: Letter) -> int:
    """Expected superscript step between adjacent letters: +-1 across the
    circular seam, 0 elsewhere."""
    if x.kind != "q" or y.kind != "q":
        return 0
    shared = hw.interfaces(x)[1]
    if not hw.circular or shared != 0:
        return 0
    return 1 if x.part == len(hw.slots) - 1 else -1


def lift_config(machine: SMachine, w: Word, first_sup: Optional[int],
                L: int) -> Word:
    """The permissible word over w with the given first-letter superscript
    (None = the superscript-free lift)."""
    if first_sup is None:
        return tuple(w)
    hw = machine.hardware
    out = []
    cur = first_sup
    prev_q = None
    for x in w:
        if x.kind == "q" and prev_q is not None:
            cur = (cur - 1 + wrap_delta(hw, prev_q, x)) % L + 1
        out.append(x._replace(sup=cur))
        if x.kind == "q":
            prev_q = x
    return tuple(out)


def is_permissible(machine: SMachine, w: Word, L: int) -> bool:
    """The projection is admissible and superscripts are locally constant,
    stepping by one across the circular seam; mixed bare/superscripted
    neighbors are not permissible."""
    hw = machine.hardware
    if not hw.is_admissible(project_empty(w)):
        return False
    for x, y in zip(w, w[1:]):
        if (x.sup is None) != (y.sup is None):
            return False
        if x.sup is None:
            continue
        want = (x.sup - 1 + wrap_delta(hw, x, y)) % L + 1
        if y.sup != want:
            return False
    return True


# ---------------------------------------------------------------------------
# The group with hubs.


def hub_words(pl, L: int):
    from . import zoo
    machine = pl.main
    wst = zoo.w_st(pl).word
    wac = zoo.w_ac(pl).word
    hub1 = lift_config(machine, wst * L, 1, L)
    hub2 = wac * L
    return hub1, hub2


def emit_group_G(pl, L: Optional[int] = None) -> GroupPresentation:
    from . import zoo
    if L is None:
        L = pl.params.L
    P = emit_group_M(pl.main, L)
    hub1, hub2 = hub_words(pl, L)
    relators = P.relators + ((hub1, "hub", "start"), (hub2, "hub", "accept"))
    return GroupPresentation("G[%s]" % pl.main.name, P.generators, relators,
                             pl.main, L)


def emit_presentation_text(P: GroupPresentation) -> str:
    """Stable plain-text export: one gen line per generator, one rel line
    per relator, with tag comments carrying the source rule."""
    from .words import format_letter, format_word
    lines = ["# presentation %s (L=%d)" % (P.name, P.L)]
    for g in P.generators:
        lines.append("gen %s" % format_letter(g))
    for w, tag, src in P.relators:
        lines.append("# tag:%s source:%s" % (tag, src))
        lines.append("rel %s" % format_word(w))
    return "\n".join(lines) + "\n"
