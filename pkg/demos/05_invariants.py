"""Boundary invariants: modified length, mixtures, designs.

The modified length charges tape letters a small exact rational and lets a
rule letter absorb one neighboring tape letter into a unit syllable.  The
mixture counts ordered white-bead pairs by how many black beads separate
them, clockwise.  Designs abstract crossing patterns of two band families;
the no-n-parallel-subarcs property bounds total arc length against the
chord count, which the ratio sweep below illustrates empirically.
"""

import random
from fractions import Fraction

from smforge import zoo
from smforge.diagrams import trapezium_from_computation
from smforge.metrics import (Design, design_check_P, design_ratio,
                             diagram_mixture, modified_length,
                             necklace_mixture, random_design, WHITE, BLACK)
from smforge.words import Letter

delta = zoo.build_pipeline().params.delta
print("delta =", delta)
q = Letter("q", 0, "q", 1)
a = Letter("y", 1, "a", 1)
th = Letter("t", 0, "th", 1)
for w in [(th, a), (q,), (a, th, a), (a, a, th, a)]:
    print("  |%s| = %s" % (" ".join(x.sym for x in w),
                           modified_length(w, delta)))

print("\nmixture of the alternating 4-bead necklace at J=2:",
      necklace_mixture([WHITE, BLACK, WHITE, BLACK], 2))

S = zoo.make_S()
H = [S.rule("t1"), S.rule("t2"), S.rule("t1", -1), S.rule("t2", -1)]
trap = trapezium_from_computation(S, S.parse("q^-1 a q a q").word, H, 1)
print("mixture of the height-4 trapezium boundary at J=3:",
      diagram_mixture(trap.diagram, 3))

# Designs: a couple of tiny examples, then a seeded ratio sweep.
same = Design(frozenset(range(2)), ((0, 1), (0, 1)))
print("\ntwo identical arcs satisfy P(1/2, 2):",
      design_check_P(same, Fraction(1, 2), 2))

rng = random.Random(2024)
print("\nratio sweep over random designs with P(1/2, 2):")
for n_chords in (4, 8, 12, 16):
    best = Fraction(0)
    for _ in range(200):
        d = random_design(n_chords, 3, max(2, n_chords // 2), rng)
        if design_check_P(d, Fraction(1, 2), 2):
            best = max(best, design_ratio(d)[2])
    print("  %2d chords: max arc-length/chords ratio %s" % (n_chords, best))
