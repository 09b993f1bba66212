"""Planar diagrams: bands, trapezia, disks and annuli.

A computation becomes a stack of one-rule bands (a trapezium) whose side
labels both read the history.  Over the circular main machine the two sides
of a standard trapezium carry equal labels, so they glue into an annulus;
capping a circle with a hub cell yields a disk certificate that the
boundary word is trivial in the hub group.
"""

import os

from smforge import zoo
from smforge.diagrams import (disk_from_accessible, emit_diagram_text,
                              extract_bands, trapezium_from_computation,
                              trapezium_svg, verify_diagram, band_history,
                              cyclic_equal)
from smforge.machine import Computation
from smforge.presentation import emit_group_G, emit_group_M, project_empty
from smforge.words import format_word

S = zoo.make_S()
PS = emit_group_M(S, 1)
H = [S.rule("t1"), S.rule("t2"), S.rule("t1", -1), S.rule("t2", -1)]
trap = trapezium_from_computation(S, S.parse("q^-1 a q a q").word, H, 1)
print("height-4 trapezium:", trap.diagram)
print("verifies:", verify_diagram(trap.diagram, PS) == [])
print("boundary:", format_word(trap.diagram.boundary_word()))
qb = extract_bands(trap.diagram, "q")
print("one side history:", band_history(trap.diagram, qb[0]))

os.makedirs("out", exist_ok=True)
open("out/trapezium.svg", "w").write(trapezium_svg(trap))
open("out/trapezium.txt", "w").write(emit_diagram_text(trap.diagram))
print("wrote out/trapezium.svg and out/trapezium.txt")

# Conjugacy: for an accepted input the standard trapezium glues into an
# annulus whose boundary circles read W(k,k) and the accept word.
pl = zoo.build_pipeline()
w = zoo.conjugacy_witness(pl, 2)
print("\nannular witness for k = 2:", w.diagram)
P1 = emit_group_M(pl.main, 1)
print("verifies:", verify_diagram(w.diagram, P1) == [])
print("theta-bands are annuli:",
      all(b.is_annulus for b in extract_bands(w.diagram, "theta")))

c = zoo.conjugacy_witness(pl, 1, bound=4)
print("k = 1:", c.certificate["statement"])

# A disk certificate: one hub plus L copies of an accessible computation.
L = 6
PG = emit_group_G(pl, L)
full = zoo.full_accepting_run(pl, 0)
comp = Computation(pl.main, full.configs[:9], full.history[:8])
disk = disk_from_accessible(pl.main, comp, L, "bottom")
print("\ndisk over an accessible word:", disk)
print("verifies over the hub presentation:", verify_diagram(disk, PG) == [])
V = disk.boundary_word()
print("boundary projects to W^L:",
      cyclic_equal(project_empty(V), comp.wt.word * L))
