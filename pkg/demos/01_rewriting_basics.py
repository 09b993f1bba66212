"""A first tour of symmetric rewriting machines.

A machine rewrites reduced group words that alternate state letters and
tape words.  Every rule replaces all state letters at once, freely reduces
the result, and trims tape letters from the two ends; every rule has an
inverse, so rules are invertible partial maps on the word language.
"""

from smforge import zoo
from smforge.machine import enumerate_computations, run_history
from smforge.words import format_word

# The one-slot circular machine with two identical commands q -> a q.
S = zoo.make_S()
print("machine S:", [r.name for r in S.positive_rules])

w0 = S.parse("q^-1 a q a q")
H = [S.rule("t1"), S.rule("t2"), S.rule("t1", -1), S.rule("t2", -1)]
print("\nrunning the history t1 t2 t1^-1 t2^-1 from", format_word(w0.word))
for c in run_history(S, w0, H).configs:
    print("  ", format_word(c.word))

# Simultaneous replacement with reduction and trimming, on a word whose
# base is not reduced.
M = zoo.make_two_part_example()
w = M.parse("q1 b^-1 q2 d q2^-1 q1^-1")
print("\ntwo-part example, one application:")
print("  ", format_word(w.word), "->",
      format_word(M.apply(M.rule("theta"), w).word))

# The sweep machine: a middle letter walks left converting letters to
# copies, turns around, and walks back.  A full traverse of k letters
# takes exactly 2k + 1 steps.
LR = zoo.make_LR(("a", "b"))
w0 = LR.parse("q1 a b p1 q2")
names = ["zeta1(b)", "zeta1(a)", "zeta12", "zeta2(a)", "zeta2(b)"]
print("\nsweep machine traverse (2k+1 = 5 steps):")
for c in run_history(LR, w0, [LR.rule(n) for n in names]).configs:
    print("  ", format_word(c.word))

# Brute-force enumeration drives the property checks: all computations up
# to a depth, in a fixed rule order.
count = sum(1 for _ in enumerate_computations(LR, w0, 3))
print("\nreduced computations of depth <= 3 from the seed:", count)
