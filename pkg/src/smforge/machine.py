"""Symmetric rewriting machines: rules, application, computations.

A rule carries one part per slot of the hardware, q -> a q' b, plus a domain
alphabet per junction.  Applying a rule to an admissible word replaces every
occurrence q^e by (a q' b)^e simultaneously, freely reduces, and trims tape
letters from the two ends.  Every rule has an inverse (q' -> a^-1 q b^-1), so
rules are invertible partial maps on admissible words.

The effective domain of a junction is the declared alphabet together with
whatever letters the rule itself inserts next to that junction.  This keeps
the partial-bijection law exact: the image of the domain of a rule always
lies in the domain of the inverse rule.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .words import (AdmissibleWord, Hardware, Letter, Slot, Word, EMPTY,
                    format_word, free_reduce, is_reduced, winv)


class DomainViolation(ValueError):
    def __init__(self, rule_name: str, where, reason: str):
        self.rule_name = rule_name
        self.where = where
        self.reason = reason
        super().__init__("%s @ %s: %s" % (rule_name, where, reason))


class StuckAt(ValueError):
    def __init__(self, step: int, violation: DomainViolation):
        self.step = step
        self.violation = violation
        super().__init__("step %d: %s" % (step, violation))


class RulePart(tuple):
    """(slot, q_from, a, q_to, b); a goes left of q', b right of q'."""
    __slots__ = ()

    def __new__(cls, slot: int, q_from: str, a: Word, q_to: str, b: Word):
        return tuple.__new__(cls, (slot, q_from, a, q_to, b))

    slot = property(lambda s: s[0])
    q_from = property(lambda s: s[1])
    a = property(lambda s: s[2])
    q_to = property(lambda s: s[3])
    b = property(lambda s: s[4])


@dataclass(frozen=True)
class Rule:
    name: str
    sign: int
    parts: tuple                      # tuple[RulePart], one per slot
    declared: tuple                   # per junction: frozenset | None (=full)
    tags: tuple = ()                  # sorted tuple of (key, value)

    def tag(self, key, default=None):
        for k, v in self.tags:
            if k == key:
                return v
        return default

    def __repr__(self):
        return "<rule %s%s>" % (self.name, "" if self.sign > 0 else "^-1")

    def __eq__(self, other):
        return isinstance(other, Rule) and (self.name, self.sign) == \
            (other.name, other.sign)

    def __hash__(self):
        return hash((self.name, self.sign))


def _effective_domains(hw: Hardware, parts, declared) -> tuple:
    """Declared alphabets widened by the letters the rule inserts."""
    K = len(hw.slots)
    eff = []
    for j in range(K):
        base = declared[j]
        if base is None:
            base = frozenset(hw.junctions[j])
        else:
            base = frozenset(base)
        eff.append(set(base))
    for p in parts:
        for x in p.a + p.b:
            eff[x.part].add(x.sym)
    return tuple(frozenset(s) for s in eff)


class SMachine:
    """Hardware plus an ordered set of positive rules (inverses derived)."""

    def __init__(self, name: str, hardware: Hardware,
                 positive_rules: Sequence[Rule],
                 start_syms: Optional[tuple] = None,
                 end_syms: Optional[tuple] = None,
                 meta: Optional[dict] = None):
        self.name = name
        self.hardware = hardware
        self.positive_rules = tuple(positive_rules)
        self.start_syms = start_syms
        self.end_syms = end_syms
        self.meta = meta or {}
        self._by_name = {}
        self._inverses = {}
        self._domains = {}
        for r in self.positive_rules:
            assert r.sign > 0
            assert len(r.parts) == len(hardware.slots), r.name
            assert r.name not in self._by_name, "duplicate rule " + r.name
            self._by_name[r.name] = r
            self._domains[r] = _effective_domains(hardware, r.parts, r.declared)
            inv = self._make_inverse(r)
            self._inverses[r] = inv
            self._inverses[inv] = r
            self._domains[inv] = self._domains[r]
        self.rules = tuple(itertools.chain.from_iterable(
            (r, self._inverses[r]) for r in self.positive_rules))
        # rules indexed by the state letter they require at each slot; a
        # rule can apply to a word only if it rewrites the word's first
        # state letter, which prunes candidate rules during searches
        self._by_slot_sym: dict = {}
        for r in self.rules:
            for p in r.parts:
                self._by_slot_sym.setdefault((p.slot, p.q_from), []).append(r)

    def candidate_rules(self, adm: AdmissibleWord, among=None):
        first = adm.word[0]
        cands = self._by_slot_sym.get((first.part, first.sym), ())
        if among is None:
            return cands
        return [r for r in cands if r in among]

    def _make_inverse(self, r: Rule) -> Rule:
        parts = tuple(RulePart(p.slot, p.q_to, winv(p.a), p.q_from, winv(p.b))
                      for p in r.parts)
        return Rule(r.name, -r.sign, parts, r.declared, r.tags)

    def inverse(self, r: Rule) -> Rule:
        return self._inverses[r]

    def rule(self, name: str, sign: int = 1) -> Rule:
        r = self._by_name[name]
        return r if sign > 0 else self._inverses[r]

    def domains(self, r: Rule) -> tuple:
        return self._domains[r]

    # -- configurations -------------------------------------------------------

    def _config_from_syms(self, syms: Sequence[str]) -> AdmissibleWord:
        hw = self.hardware
        w = tuple(Letter("q", i, s, hw.slots[i].sign)
                  for i, s in enumerate(syms))
        return hw.parse_admissible(w)

    def start_configuration(self) -> AdmissibleWord:
        assert self.start_syms is not None
        return self._config_from_syms(self.start_syms)

    def end_configuration(self) -> AdmissibleWord:
        assert self.end_syms is not None
        return self._config_from_syms(self.end_syms)

    def parse(self, w) -> AdmissibleWord:
        if isinstance(w, AdmissibleWord):
            return w
        if isinstance(w, str):
            w = self.hardware.word(w)
        return self.hardware.parse_admissible(w)

    # -- rule application -----------------------------------------------------

    def in_domain(self, r: Rule, adm: AdmissibleWord) -> bool:
        try:
            self._check_domain(r, adm)
            return True
        except DomainViolation:
            return False

    def _check_domain(self, r: Rule, adm: AdmissibleWord) -> None:
        parts = r.parts
        for x in adm.word:
            if x.kind == "q" and parts[x.part].q_from != x.sym:
                raise DomainViolation(
                    r.name, x.part, "state letter %s not rewritten" % x.sym)
        dom = self._domains[r]
        for sec in adm.sectors:
            allowed = dom[sec.junction]
            for a in sec.content:
                if a.sym not in allowed:
                    raise DomainViolation(
                        r.name, sec.junction,
                        "tape letter %s outside domain" % a.sym)

    def apply(self, r: Rule, adm: AdmissibleWord) -> AdmissibleWord:
        adm = self.parse(adm)
        self._check_domain(r, adm)
        out: list[Letter] = []
        for x in adm.word:
            if x.kind != "q":
                out.append(x)
                continue
            p = r.parts[x.part]
            q2 = Letter("q", x.part, p.q_to, 1)
            piece = p.a + (q2,) + p.b
            out.extend(piece if x.sign > 0 else winv(piece))
        w = free_reduce(out)
        lo, hi = 0, len(w)
        while lo < hi and w[lo].kind == "y":
            lo += 1
        while hi > lo and w[hi - 1].kind == "y":
            hi -= 1
        return _assemble(self.hardware, w[lo:hi])

    def try_apply(self, r: Rule, adm: AdmissibleWord):
        try:
            return self.apply(r, adm)
        except DomainViolation:
            return None


def _assemble(hw: Hardware, w: Word) -> AdmissibleWord:
    """Sector decomposition of a word known to be admissible (the image of a
    rule application); skips the adjacency validation of parse_admissible."""
    from .words import Sector
    sectors = []
    base = []
    left = None
    for i, x in enumerate(w):
        if x.kind != "q":
            continue
        base.append((x.part, x.sign))
        if left is not None:
            content = w[left + 1:i]
            junction = content[0].part if content \
                else hw.interfaces(w[left])[1]
            sectors.append(Sector(left, junction, content, i))
        left = i
    return AdmissibleWord(w, tuple(sectors), tuple(base))


# ---------------------------------------------------------------------------
# Computations.


@dataclass(frozen=True)
class Computation:
    machine: SMachine
    configs: tuple                    # tuple[AdmissibleWord, ...]
    history: tuple                    # tuple[Rule, ...]

    def __len__(self) -> int:
        return len(self.history)

    @property
    def w0(self) -> AdmissibleWord:
        return self.configs[0]

    @property
    def wt(self) -> AdmissibleWord:
        return self.configs[-1]

    @property
    def space(self) -> int:
        return max(len(c.word) for c in self.configs)

    def y_lengths(self) -> tuple:
        return tuple(sum(1 for x in c.word if x.kind == "y")
                     for c in self.configs)

    def is_reduced(self) -> bool:
        return all(not _mutually_inverse(a, b)
                   for a, b in zip(self.history, self.history[1:]))

    def __repr__(self):
        return "<computation %s, %d steps>" % (
            format_word(self.w0.word), len(self.history))


def _mutually_inverse(a: Rule, b: Rule) -> bool:
    return a.name == b.name and a.sign == -b.sign


def run_history(machine: SMachine, w0, history: Sequence[Rule]) -> Computation:
    adm = machine.parse(w0)
    configs = [adm]
    for n, r in enumerate(history, start=1):
        try:
            adm = machine.apply(r, adm)
        except DomainViolation as v:
            raise StuckAt(n, v) from None
        configs.append(adm)
    return Computation(machine, tuple(configs), tuple(history))


THETA23 = "theta(23)"


def pair_allowed(prev: Rule, nxt: Rule, mode: str) -> bool:
    """May nxt follow prev in a history of the given mode?"""
    if not _mutually_inverse(prev, nxt):
        return True
    if mode == "eligible":
        return prev.name == THETA23 and prev.sign > 0
    return False


def is_eligible(history: Sequence[Rule]) -> bool:
    """Only theta(23) theta(23)^-1 may cancel; the reversed pair may not."""
    return all(pair_allowed(a, b, "eligible")
               for a, b in zip(history, history[1:]))


def enumerate_computations(machine: SMachine, w0, depth: int,
                           mode: str = "reduced",
                           rule_filter=None) -> Iterator[Computation]:
    """All computations of length <= depth from w0, lexicographic in the
    canonical rule order.  Deterministic; yields the empty computation first."""
    assert mode in ("reduced", "eligible")
    start = machine.parse(w0)
    configs = [start]
    history: list[Rule] = []
    order = {r: n for n, r in enumerate(machine.rules)}

    def walk() -> Iterator[Computation]:
        yield Computation(machine, tuple(configs), tuple(history))
        if len(history) == depth:
            return
        cands = sorted(machine.candidate_rules(configs[-1]),
                       key=order.__getitem__)
        for r in cands:
            if rule_filter is not None and not rule_filter(r):
                continue
            if history and not pair_allowed(history[-1], r, mode):
                continue
            nxt = machine.try_apply(r, configs[-1])
            if nxt is None:
                continue
            configs.append(nxt)
            history.append(r)
            yield from walk()
            configs.pop()
            history.pop()

    return walk()


def reachable_states(machine: SMachine, w0, depth: int,
                     rule_filter=None, node_budget: Optional[int] = None):
    """Breadth-first set of configurations reachable in <= depth steps.

    Returns (distances, exhausted) where distances maps each reached word to
    its distance and exhausted says whether the search covered every state at
    distance <= depth within the node budget.
    """
    start = machine.parse(w0)
    dist = {start.word: 0}
    frontier = [start]
    for d in range(1, depth + 1):
        nxt = []
        for adm in frontier:
            for r in machine.candidate_rules(adm):
                if rule_filter is not None and not rule_filter(r):
                    continue
                out = machine.try_apply(r, adm)
                if out is None or out.word in dist:
                    continue
                dist[out.word] = d
                nxt.append(out)
                if node_budget is not None and len(dist) > node_budget:
                    return dist, False
        frontier = nxt
        if not frontier:
            break
    return dist, True


def find_path(machine: SMachine, w0, targets, depth: int,
              rule_filter=None) -> Optional[Computation]:
    """Shortest computation from w0 to any target word, or None (exhaustive
    to the given depth)."""
    start = machine.parse(w0)
    target_words = {machine.parse(t).word for t in targets}
    if start.word in target_words:
        return Computation(machine, (start,), ())
    parent = {start.word: None}
    frontier = [start]
    for _ in range(depth):
        nxt = []
        for adm in frontier:
            for r in machine.candidate_rules(adm):
                if rule_filter is not None and not rule_filter(r):
                    continue
                out = machine.try_apply(r, adm)
                if out is None or out.word in parent:
                    continue
                parent[out.word] = (adm, r)
                if out.word in target_words:
                    return _rebuild(machine, parent, out)
                nxt.append(out)
        frontier = nxt
        if not frontier:
            break
    return None


def _rebuild(machine, parent, end: AdmissibleWord) -> Computation:
    configs, history = [end], []
    node = end
    while parent[node.word] is not None:
        prev, r = parent[node.word]
        configs.append(prev)
        history.append(r)
        node = prev
    return Computation(machine, tuple(reversed(configs)),
                       tuple(reversed(history)))


# ---------------------------------------------------------------------------
# Step histories.  Rules of the main machine carry a `step` tag (1..5) or a
# `transition` tag (i, i+1); the step history collapses maximal runs.


def step_symbol(r: Rule) -> str:
    tr = r.tag("transition")
    if tr is not None:
        i, j = tr
        return "(%d%d)" % ((i, j) if r.sign > 0 else (j, i))
    s = r.tag("step")
    if s is None:
        raise ValueError("rule %s carries no step tag" % r.name)
    return "(%d)" % s


def step_history(history: Sequence[Rule]) -> tuple:
    out: list[str] = []
    for r in history:
        s = step_symbol(r)
        if r.tag("transition") is not None or not out or out[-1] != s:
            out.append(s)
    return tuple(out)


# ---------------------------------------------------------------------------
# Parameters.  The estimates in the source machinery use a chain of constants
# each much larger than the previous one; at desk scale we instantiate the
# smallest values satisfying every registered inequality, which preserves
# orderings but none of the asymptotics.

_CHAIN = ("lam_inv", "m", "N", "c0", "c1", "c2", "c3", "c4", "c5",
          "L0", "L", "K", "J", "delta_inv", "c6", "c7",
          "N1", "N2", "N3", "N4")


@dataclass(frozen=True)
class Parameters:
    lam: Fraction
    m: int
    N: int
    c0: int
    c1: int
    c2: int
    c3: int
    c4: int
    c5: int
    L0: int
    L: int
    K: int
    J: int
    delta: Fraction
    c6: int
    c7: int
    N1: int
    N2: int
    N3: int
    N4: int

    @property
    def lam_inv(self) -> Fraction:
        return 1 / self.lam

    @property
    def delta_inv(self) -> Fraction:
        return 1 / self.delta

    @property
    def K0(self) -> int:
        return 2 * self.L * self.N

    @staticmethod
    def default(N: int, m: int = 2) -> "Parameters":
        c0 = N + 1
        L0 = N + 7
        L = max(L0 + 1, 5)
        K = 4 * L * N + 1
        J = max(K + 1, 6 * L * N + 1)
        delta = Fraction(1, J + 1)
        c6 = J + 2
        return Parameters(lam=Fraction(2, 3), m=m, N=N,
                          c0=c0, c1=c0 + 1, c2=c0 + 2, c3=c0 + 3,
                          c4=c0 + 4, c5=c0 + 5, L0=L0, L=L, K=K, J=J,
                          delta=delta, c6=c6, c7=c6 + 1,
                          N1=c6 + 2, N2=c6 + 3, N3=c6 + 4, N4=c6 + 5)

    def replace(self, **kw) -> "Parameters":
        d = {f: getattr(self, f) for f in self.__dataclass_fields__}
        d.update(kw)
        return Parameters(**d)


def check_parameters(p: Parameters) -> list:
    """Names of violated inequalities (empty list = consistent)."""
    bad = []
    values = [getattr(p, name) for name in _CHAIN]
    for (na, va), (nb, vb) in zip(zip(_CHAIN, values), zip(_CHAIN[1:], values[1:])):
        if not va < vb:
            bad.append("%s < %s" % (na, nb))
    if not p.J * p.delta < 1:
        bad.append("J*delta < 1")
    if not p.K > 2 * p.K0:
        bad.append("K > 2*K0 = 4LN")
    if not p.J > 3 * p.K0:
        bad.append("J > 3*K0")
    if not p.L > 4:
        bad.append("L > 4 (hub graph needs L/2 > 2)")
    if not 0 < p.lam < 1:
        bad.append("0 < lambda < 1")
    return bad


# ---------------------------------------------------------------------------
# Machine definition text format.  load(emit(M)) reproduces the machine
# structurally; used by the CLI and by the pipeline stage exporter.


def _tag_str(v) -> str:
    if isinstance(v, tuple):
        return ",".join(str(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _tag_parse(s: str):
    if "," in s:
        return tuple(int(x) for x in s.split(","))
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        return s


def emit_machine(machine: SMachine) -> str:
    hw = machine.hardware
    lines = ['machine "%s"' % machine.name, "", "[hardware]",
             "circular = %s" % ("true" if hw.circular else "false")]
    for slot in hw.slots:
        lines.append("slot %s %s = %s" % (slot.name,
                                          "+" if slot.sign > 0 else "-",
                                          " ".join(slot.letters)))
    for j, alph in enumerate(hw.junctions):
        if alph:
            lines.append("junction %d = %s" % (j, " ".join(alph)))
    if machine.start_syms:
        lines.append("start = %s" % " ".join(machine.start_syms))
    if machine.end_syms:
        lines.append("end = %s" % " ".join(machine.end_syms))
    for r in machine.positive_rules:
        lines.append("")
        lines.append('[rule "%s"]' % r.name)
        if r.tags:
            lines.append("tags = %s" % " ".join(
                "%s=%s" % (k, _tag_str(v)) for k, v in r.tags))
        for p in r.parts:
            slot = hw.slots[p.slot]
            rhs = [format_word(p.a)] if p.a else []
            rhs.append(p.q_to)
            if p.b:
                rhs.append(format_word(p.b))
            lines.append("part %s: %s -> %s" % (slot.name, p.q_from,
                                                " ".join(rhs)))
        for j, dom in enumerate(r.declared):
            if dom is None:
                continue
            if dom:
                lines.append("domain %d = %s" % (j, " ".join(sorted(dom))))
            else:
                lines.append("lock %d" % j)
    return "\n".join(lines) + "\n"


def load_machine(text: str) -> SMachine:
    name = "machine"
    circular = False
    slots: list[Slot] = []
    junction_map: dict[int, tuple] = {}
    start_syms = end_syms = None
    rules_raw: list[dict] = []
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith('machine "'):
            name = line.split('"')[1]
        elif line == "[hardware]":
            section = {"kind": "hardware"}
        elif line.startswith('[rule "'):
            section = {"kind": "rule", "name": line.split('"')[1],
                       "tags": (), "parts": {}, "declared": {}}
            rules_raw.append(section)
        elif section is None:
            raise ValueError("line outside any section: %r" % line)
        elif section["kind"] == "hardware":
            key, _, rest = line.partition("=")
            key, rest = key.strip(), rest.strip()
            if key == "circular":
                circular = rest == "true"
            elif key.startswith("slot "):
                _, sname, sgn = key.split()
                slots.append(Slot(sname, 1 if sgn == "+" else -1,
                                  tuple(rest.split())))
            elif key.startswith("junction "):
                junction_map[int(key.split()[1])] = tuple(rest.split())
            elif key == "start":
                start_syms = tuple(rest.split())
            elif key == "end":
                end_syms = tuple(rest.split())
            else:
                raise ValueError("bad hardware line: %r" % line)
        else:
            if line.startswith("tags"):
                _, _, rest = line.partition("=")
                section["tags"] = tuple(
                    (k, _tag_parse(v)) for k, v in
                    (item.split("=", 1) for item in rest.split()))
            elif line.startswith("part "):
                head, _, rhs = line.partition("->")
                slot_name, lhs = head[5:].split(":")
                section["parts"][slot_name.strip()] = (lhs.strip(),
                                                       rhs.strip().split())
            elif line.startswith("lock "):
                section["declared"][int(line.split()[1])] = frozenset()
            elif line.startswith("domain "):
                key, _, rest = line.partition("=")
                section["declared"][int(key.split()[1])] = \
                    frozenset(rest.split())
            else:
                raise ValueError("bad rule line: %r" % line)
    junctions = tuple(junction_map.get(j, ()) for j in range(len(slots)))
    hw = Hardware(tuple(slots), junctions, circular)
    rules = []
    for raw_rule in rules_raw:
        parts = []
        for i, slot in enumerate(hw.slots):
            q_from, rhs = raw_rule["parts"][slot.name]
            qpos = [k for k, s in enumerate(rhs) if s in slot.letters]
            assert len(qpos) == 1, (raw_rule["name"], slot.name)
            k = qpos[0]
            a = hw.word(" ".join(rhs[:k])) if k else EMPTY
            b = hw.word(" ".join(rhs[k + 1:])) if k + 1 < len(rhs) else EMPTY
            parts.append(RulePart(i, q_from, a, rhs[k], b))
        declared = tuple(raw_rule["declared"].get(j)
                         for j in range(len(hw.slots)))
        rules.append(Rule(raw_rule["name"], 1, tuple(parts), declared,
                          raw_rule["tags"]))
    return SMachine(name, hw, rules, start_syms, end_syms)


def same_machine(a: SMachine, b: SMachine) -> bool:
    return (a.name == b.name and a.hardware == b.hardware
            and a.positive_rules == b.positive_rules
            and all(x.parts == y.parts and x.declared == y.declared
                    and x.tags == y.tags
                    for x, y in zip(a.positive_rules, b.positive_rules))
            and a.start_syms == b.start_syms and a.end_syms == b.end_syms)
