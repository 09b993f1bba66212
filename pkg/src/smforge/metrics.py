"""Boundary invariants: the modified length, the bead-pair mixture, and
chord/arc designs.

The modified length charges 1 per state or rule letter, a small exact
rational delta per tape letter, and 1 for a two-letter syllable made of one
rule letter and one tape letter; the value of a word is the cheapest
decomposition, computed by dynamic programming.

The mixture of a necklace of white and black beads counts, for each j up to
J, the ordered pairs of white beads whose clockwise arc holds at least j
black beads.  A design is a set of disjoint chords and arcs where an arc
crosses a chord at most once; arcs are stored as their ordered crossing
sequences, and the no-n-parallel-subarcs property is decided by direct
enumeration.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .words import Letter


def modified_length(w: Sequence[Letter], delta: Fraction) -> Fraction:
    """Cheapest decomposition into letters (q, theta: 1; tape: delta) and
    one-theta-one-tape syllables (1)."""
    INF = None
    n = len(w)
    dp = [Fraction(0)] + [INF] * n
    cost = {"q": Fraction(1), "t": Fraction(1)}
    for i in range(n):
        if dp[i] is INF:
            continue
        c = dp[i] + cost.get(w[i].kind, delta)
        if dp[i + 1] is INF or c < dp[i + 1]:
            dp[i + 1] = c
        if i + 1 < n:
            kinds = {w[i].kind, w[i + 1].kind}
            if kinds == {"t", "y"}:
                c = dp[i] + 1
                if dp[i + 2] is INF or c < dp[i + 2]:
                    dp[i + 2] = c
    return dp[n]


def length_lower_bound(w: Sequence[Letter], delta: Fraction) -> Fraction:
    """max(c, c + (d - c) delta) for c rule letters and d tape letters."""
    c = sum(1 for x in w if x.kind == "t")
    d = sum(1 for x in w if x.kind == "y")
    return max(Fraction(c), Fraction(c) + (d - c) * delta)


# ---------------------------------------------------------------------------
# Necklaces.


WHITE, BLACK, PLAIN = "w", "b", "."


def necklace_mixture(beads: Sequence[str], J: int) -> int:
    """Sum over j <= J of the number of ordered white pairs separated
    clockwise by at least j black beads; equivalently the sum over ordered
    pairs of min(J, black count of the clockwise arc)."""
    n = len(beads)
    whites = [i for i, b in enumerate(beads) if b == WHITE]
    total = 0
    for o1 in whites:
        blacks = 0
        for step in range(1, n):
            k = (o1 + step) % n
            if beads[k] == BLACK:
                blacks += 1
            elif beads[k] == WHITE:
                total += min(J, blacks)
    return total


def boundary_necklace(dg, n: int = 0) -> list:
    """White beads at rule-letter edges, black at state-letter edges."""
    out = []
    for x in dg.path_word(dg.boundaries[n]):
        if x.kind == "t":
            out.append(WHITE)
        elif x.kind == "q":
            out.append(BLACK)
        else:
            out.append(PLAIN)
    return out


class AnnularNotSupported(ValueError):
    pass


def diagram_mixture(dg, J: int) -> int:
    if len(dg.boundaries) != 1:
        raise AnnularNotSupported("the mixture is defined for a single "
                                  "boundary cycle")
    return necklace_mixture(boundary_necklace(dg), J)


def all_necklaces(max_beads: int):
    """Every black/white necklace with at most the given number of beads."""
    for n in range(max_beads + 1):
        for combo in itertools.product((WHITE, BLACK), repeat=n):
            yield list(combo)


# ---------------------------------------------------------------------------
# Designs.


@dataclass(frozen=True)
class Design:
    """Chords are ids; each arc is the ordered sequence of chords it crosses
    (each at most once, so the sequence has no repeats)."""
    chords: frozenset
    arcs: tuple                     # tuple of tuples of chord ids

    def __post_init__(self):
        for arc in self.arcs:
            assert len(set(arc)) == len(arc), "an arc crosses a chord once"
            assert set(arc) <= self.chords

    @property
    def arc_lengths(self):
        return tuple(len(a) for a in self.arcs)


def parallel(c1: Sequence, c2: Sequence) -> bool:
    """Every chord crossing the first arc also crosses the second."""
    return set(c1) <= set(c2)


def _subarc_candidates(arc: Sequence, lam: Fraction):
    """Contiguous subarcs strictly longer than (1 - lambda) |arc|."""
    n = len(arc)
    need = (1 - lam) * n
    out = []
    for length in range(n, -1, -1):
        if not length > need:
            break
        for i in range(n - length + 1):
            out.append(tuple(arc[i:i + length]))
    return out


def design_check_P(d: Design, lam: Fraction, n: int) -> bool:
    """True when no n distinct arcs admit nearly-full subarcs that are
    pairwise parallel in a chain."""
    assert 0 < lam < 1
    if len(d.arcs) < n:
        return True
    for combo in itertools.permutations(range(len(d.arcs)), n):
        subs = [_subarc_candidates(d.arcs[i], lam) for i in combo]
        if _chain_exists(subs, 0, None):
            return False
    return True


def _chain_exists(subs, k, prev) -> bool:
    if k == len(subs):
        return True
    for cand in subs[k]:
        if prev is None or parallel(prev, cand):
            if _chain_exists(subs, k + 1, cand):
                return True
    return False


def design_ratio(d: Design):
    """(total arc length, chord count, ratio) per the length estimate the
    design property is for."""
    ell = sum(len(a) for a in d.arcs)
    nt = len(d.chords)
    return ell, nt, Fraction(ell, nt) if nt else Fraction(0)


def random_design(n_chords: int, n_arcs: int, max_len: int,
                  rng: random.Random) -> Design:
    """Arcs as random monotone runs over a linearly ordered chord family
    (nested chords crossed in order); reproducible from the seed."""
    chords = frozenset(range(n_chords))
    arcs = []
    for _ in range(n_arcs):
        length = rng.randint(0, min(max_len, n_chords))
        start = rng.randint(0, n_chords - length) if n_chords > length else 0
        arcs.append(tuple(range(start, start + length)))
    return Design(chords, tuple(arcs))
