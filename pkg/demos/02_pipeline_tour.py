"""The combinator pipeline, stage by stage.

A small recognizer (accepted inputs: al^k with k even) grows into the main
machine: history sectors record the planned run, running-letter slots and
4m+1 sweep/execute stages check it, a mirrored copy and a separator close
the base into a circle, and five rule sets wrap the whole thing with an
input phase and an erasing phase ending at a unique accept configuration.
"""

from smforge import zoo
from smforge.machine import run_history, step_history
from smforge.words import format_word, y_length

pl = zoo.build_pipeline()          # toy 'even', m = 2

for name in ("m1", "m2", "m2bar", "m3", "m4", "m5", "main"):
    st = pl.stage(name)
    print("%-6s %2d slots  %3d positive rules" %
          (st.name, len(st.hardware.slots), len(st.positive_rules)))

print("\nstandard base of the main machine:")
print("  ", " ".join(s.name + ("'" if s.sign < 0 else "")
                     for s in pl.main.hardware.slots))

# The canonical accepting run for k = 2: write the input, sweep it, write
# the planned history, run the checking stages, erase, accept.
comp = zoo.full_accepting_run(pl, 2)
print("\ncanonical accepting run for k = 2: %d steps" % len(comp))
print("step history:", "".join(step_history(comp.history)))

wkk = zoo.w_kk(pl, 2)
print("\nW(2,2) =", format_word(wkk.word))
print("tape length of W(3,2):", y_length(zoo.w_kk(pl, 3, 2).word))

# Rejected inputs have no accepting run.
print("\nk = 1 accepted?", zoo.full_accepting_run(pl, 1) is not None)

# Bounded search certifies accessibility of small configurations.
res = zoo.is_accessible(pl, zoo.w_kk(pl, 0), bound=50)
print("W(0,0) accessible (%s) via %d steps" %
      (res.direction, len(res.computation)))
