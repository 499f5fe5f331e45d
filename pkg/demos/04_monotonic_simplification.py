#!/usr/bin/env python3
"""Monotonic simplification: breadth-first search that never adds edges.

Unknot detection by brute force: apply all exchange and destabilization moves
(never increasing the number of vertical edges) and see whether the 2x2
diagram is reached.  The trefoil never drops below n = 5.
"""

from flype import GridDiagram, TREFOIL5, render_ascii, simplify, unknot_census

tangled = GridDiagram.make((2, 0, 3, 1), (0, 3, 1, 2))
print("a 4x4 unknot in disguise:")
print(render_ascii(tangled))
report = simplify(tangled)
print(f"simplifies to n = {report.min_complexity} "
      f"({report.visited} states visited)")
path = report.witness[report.minima[0]]
print(f"shortest witness path: {len(path) - 1} moves")

print("\nthe trefoil floor:")
report = simplify(TREFOIL5)
print(f"minimal complexity reached: {report.min_complexity} (never below 5)")

print("\ncensus over every diagram with n <= 4 (translation-deduplicated):")
census = unknot_census(4)
for n, row in census["per_n"].items():
    print(f"  n={n}: {row['diagrams']} diagrams, {row['jones_trivial']} unknots, "
          f"{row['monotonically_simplified']} simplified to n=2")
print(f"all unknots simplified: {census['all_simplified']}")
