import random
from fractions import Fraction

import pytest

from smforge.metrics import (Design, WHITE, BLACK, all_necklaces,
                             boundary_necklace, design_check_P, design_ratio,
                             diagram_mixture, modified_length,
                             length_lower_bound, necklace_mixture,
                             random_design, AnnularNotSupported)
from smforge.words import Letter

D = Fraction(1, 100)
q = Letter("q", 0, "q", 1)
a = Letter("y", 1, "a", 1)
th = Letter("t", 0, "th", 1)


def brute_length(w, delta):
    """Enumerate every decomposition into letters and syllables."""
    best = [None]

    def go(i, acc):
        if i == len(w):
            if best[0] is None or acc < best[0]:
                best[0] = acc
            return
        cost = {"q": Fraction(1), "t": Fraction(1)}.get(w[i].kind, delta)
        go(i + 1, acc + cost)
        if i + 1 < len(w) and {w[i].kind, w[i + 1].kind} == {"t", "y"}:
            go(i + 2, acc + 1)

    go(0, Fraction(0))
    return best[0]


def test_modified_length_examples():
    assert modified_length((th, a), D) == 1
    assert modified_length((q,), D) == 1
    # a th a: 4 decompositions, the best uses one syllable
    w = (a, th, a)
    assert brute_length(w, D) == 1 + D
    assert modified_length(w, D) == 1 + D
    assert modified_length((), D) == 0


def test_modified_length_matches_bruteforce():
    rng = random.Random(2)
    letters = [q, a, th, Letter("y", 1, "b", 1)]
    for _ in range(300):
        w = tuple(rng.choice(letters) for _ in range(rng.randint(0, 9)))
        assert modified_length(w, D) == brute_length(w, D)


def test_length_lower_bound_property():
    rng = random.Random(3)
    letters = [q, a, th]
    for _ in range(2000):
        w = tuple(rng.choice(letters) for _ in range(rng.randint(0, 12)))
        assert modified_length(w, D) >= length_lower_bound(w, D)


def test_concatenation_property():
    rng = random.Random(4)
    letters = [q, a, th]
    for _ in range(2000):
        w1 = tuple(rng.choice(letters) for _ in range(rng.randint(0, 8)))
        w2 = tuple(rng.choice(letters) for _ in range(rng.randint(0, 8)))
        l1, l2, l12 = (modified_length(w1, D), modified_length(w2, D),
                       modified_length(w1 + w2, D))
        assert l1 + l2 >= l12 >= l1 + l2 - D


# ---------------------------------------------------------------------------


def mixture_oracle(beads, J):
    """Direct enumeration of ordered white pairs and clockwise counts."""
    n = len(beads)
    total = 0
    for i in range(n):
        if beads[i] != WHITE:
            continue
        for k in range(n):
            if k == i or beads[k] != WHITE:
                continue
            arc = []
            s = (i + 1) % n
            while s != k:
                arc.append(beads[s])
                s = (s + 1) % n
            blacks = arc.count(BLACK)
            total += sum(1 for j in range(1, J + 1) if blacks >= j)
    return total


def test_mixture_examples():
    assert necklace_mixture([BLACK, BLACK], 3) == 0       # no white pairs
    assert necklace_mixture([WHITE], 3) == 0
    assert necklace_mixture([], 2) == 0
    alternating = [WHITE, BLACK, WHITE, BLACK]
    assert mixture_oracle(alternating, 2) == 2
    assert necklace_mixture(alternating, 2) == 2


def test_mixture_matches_oracle_exhaustively():
    for beads in all_necklaces(6):
        for J in (1, 2, 3):
            assert necklace_mixture(beads, J) == mixture_oracle(beads, J)


def test_mixture_rotation_invariant():
    rng = random.Random(5)
    for _ in range(100):
        beads = [rng.choice([WHITE, BLACK]) for _ in range(rng.randint(1, 9))]
        r = rng.randrange(len(beads))
        rotated = beads[r:] + beads[:r]
        assert necklace_mixture(beads, 3) == necklace_mixture(rotated, 3)


def test_diagram_mixture(S):
    from smforge.diagrams import trapezium_from_computation
    H = [S.rule("t1"), S.rule("t2"), S.rule("t1", -1), S.rule("t2", -1)]
    trap = trapezium_from_computation(S, S.parse("q^-1 a q a q").word, H, 1)
    beads = boundary_necklace(trap.diagram)
    mu = diagram_mixture(trap.diagram, 3)
    assert mu == necklace_mixture(beads, 3)
    n = beads.count(WHITE)
    assert mu <= 3 * (n * n - n)


def test_diagram_mixture_rejects_annular(pipeline):
    from smforge import zoo
    w = zoo.conjugacy_witness(pipeline, 0)
    with pytest.raises(AnnularNotSupported):
        diagram_mixture(w.diagram, 2)


def test_no_q_edges_zero():
    assert necklace_mixture([WHITE, WHITE, WHITE], 4) == 0


# ---------------------------------------------------------------------------


def test_design_examples():
    empty = Design(frozenset(range(3)), ())
    assert design_check_P(empty, Fraction(1, 2), 2)
    same = Design(frozenset(range(2)), ((0, 1), (0, 1)))
    assert not design_check_P(same, Fraction(1, 2), 2)
    few = Design(frozenset(range(2)), ((0, 1),))
    assert design_check_P(few, Fraction(1, 2), 2)


def test_design_monotone_under_arc_removal():
    rng = random.Random(6)
    for _ in range(60):
        d = random_design(5, 4, 4, rng)
        if design_check_P(d, Fraction(1, 2), 2):
            for i in range(len(d.arcs)):
                smaller = Design(d.chords, d.arcs[:i] + d.arcs[i + 1:])
                assert design_check_P(smaller, Fraction(1, 2), 2)


def test_design_ratio():
    d = Design(frozenset(range(4)), ((0, 1, 2),))
    ell, nt, ratio = design_ratio(d)
    assert (ell, nt, ratio) == (3, 4, Fraction(3, 4))
    empty = Design(frozenset(range(4)), ())
    assert design_ratio(empty)[2] == 0


def test_design_montecarlo_reproducible():
    r1 = random_design(6, 3, 5, random.Random(9))
    r2 = random_design(6, 3, 5, random.Random(9))
    assert r1 == r2
