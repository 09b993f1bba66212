"""From machines to group presentations.

Every positive rule contributes one cell relation per base position and one
commuting relation per letter of each sector domain.  The input-writing and
input-sweeping rules act on L superscripted copies of their letters; the
seam rule erases superscripts; two hub relators (the product of the L
superscripted start-word copies, and the L-th power of the accept word)
close the group.
"""

from smforge import zoo
from smforge.presentation import (emit_group_G, emit_group_M, hub_words,
                                  is_permissible, lift_config,
                                  superscript_shift)
from smforge.words import format_word

S = zoo.make_S()
P = emit_group_M(S, 1)
print("presentation of the one-slot machine:")
for w, tag, src in P.relators:
    print("   [%s] %s" % (tag, format_word(w)))

pl = zoo.build_pipeline()
L = 4
PM = emit_group_M(pl.main, L)
PG = emit_group_G(pl, L)
print("\nmain machine at L = %d: %d generators, %d relators %s"
      % (L, len(PM.generators), len(PM.relators), PM.census()))
print("with hubs: %d relators %s" % (len(PG.relators), PG.census()))

hub1, hub2 = hub_words(pl, L)
print("\nhub 1 length = L*N =", len(hub1))
print("hub 1 is a relator:", PG.is_relator(hub1))
print("its superscript shift is one too:",
      PG.is_relator(superscript_shift(hub1, 1, L)))

# Permissible words: the superscript-erased projection is admissible and
# superscripts step by one exactly across the circular seam.
wst = zoo.w_st(pl).word
lift = lift_config(pl.main, wst, 3, L)
print("\nstart word lifted at superscript 3 is permissible:",
      is_permissible(pl.main, lift, L))
print("first letters:", format_word(lift[:4]), "...")
