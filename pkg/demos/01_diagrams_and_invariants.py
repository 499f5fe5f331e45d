#!/usr/bin/env python3
"""Grid diagrams on the torus and their invariant oracles.

A diagram of grid number n is two disjoint permutations: pos[j] and neg[j]
give the rows of the positive (X) and negative (O) vertex in column j.
Vertical arcs go over at every crossing; the Jones polynomial computed from
the cut-open picture is the workhorse oracle for "these two diagrams carry
the same link".
"""

from flype import (
    GridDiagram,
    TREFOIL5,
    UNKNOT2,
    crossings,
    jones,
    legendrian,
    render_ascii,
    serialize,
    writhe,
)

print("The 2x2 unknot and the 5x5 trefoil:")
for d in (UNKNOT2, TREFOIL5):
    print()
    print(render_ascii(d))
    print(serialize(d), end="")
    print(f"grid crossings {len(crossings(d))}, writhe {writhe(d)}")
    print(f"jones  {jones(d).pretty('t')}")
    pair = legendrian(d)
    print(f"legendrian up (tb, rot) = {pair.up}, down = {pair.down}")

print()
print("A split union of two unknots picks up the loop factor:")
split = GridDiagram.make((0, 1, 2, 3), (1, 0, 3, 2))
print(render_ascii(split))
print(f"jones  {jones(split).pretty('t')}   (= -t^1/2 - t^-1/2)")

print()
print("A 2-cable of the trefoil (a constructed stand-in for the satellite")
print("example; the original exists only as a figure):")
cable_pos = []
cable_neg = []
for j in range(5):
    cable_pos += [2 * TREFOIL5.pos[j], 2 * TREFOIL5.pos[j] + 1]
    cable_neg += [2 * TREFOIL5.neg[j] + 1, 2 * TREFOIL5.neg[j]]
cable = GridDiagram.make(cable_pos, cable_neg)
print(render_ascii(cable))
print(f"n = {cable.n}, jones has {len(jones(cable).coeffs)} terms,")
print("and it differs from both the unknot's and the trefoil's:")
print(f"  {jones(cable).pretty('t')}")
