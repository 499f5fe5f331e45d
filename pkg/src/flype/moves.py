"""Elementary moves: stabilizations, exchanges, destabilizations.

A move is carried by a rectangle r and a sign e; it sends sigma_R to
sigma_R - e*sigma_r.  It is legal when the diagram meets the closed rectangle
in one, two, or three cyclically successive corners and nothing else, and the
resulting map is again a diagram characteristic.  One corner gains a level
(stabilization, n+1), two keep n (exchange), three drop a level
(destabilization, n-1).

New coordinate levels are enumerated at half-integers, one per gap between
used levels; since only cyclic order matters, this is exhaustive up to
renormalization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import GridSyntaxError, InvalidResult, NotAnElementaryMove
from .torus_core import (
    GridDiagram,
    Rectangle,
    canonical_form,
    characteristic,
    from_characteristic,
    translate_equal,
)

STABILIZATION = "stabilization"
EXCHANGE = "exchange"
DESTABILIZATION = "destabilization"
UP_FAMILY = "up_family"
DOWN_FAMILY = "down_family"
BOTH_FAMILIES = "both"


@dataclass(frozen=True)
class ElementaryMove:
    """Rectangle plus sign; coordinates are relative to the source diagram.

    The sign is redundant (legality forces it) but stored so that every sigma
    computation stays literal.
    """

    rect: Rectangle
    sign: int

    def reversed(self) -> "ElementaryMove":
        return ElementaryMove(self.rect, -self.sign)


@dataclass(frozen=True)
class MoveKind:
    kind: str
    family: str


def corner_pattern(diagram: GridDiagram, rect: Rectangle):
    """Indices (0..3) of rectangle corners that are vertices of the diagram.

    Raises NotAnElementaryMove if a vertex meets the closed rectangle away
    from its corners, or the corner count / successiveness rule fails.
    """
    n = diagram.n
    corners = rect.corners()
    corner_set = {c.reduced(n) for c in corners}
    if len(corner_set) != 4:
        raise NotAnElementaryMove("rectangle corners are not distinct")
    for p, _ in diagram.vertices():
        if rect.contains(p, n) and p.reduced(n) not in corner_set:
            raise NotAnElementaryMove(f"vertex {p} inside the rectangle")
    hit = tuple(i for i, c in enumerate(corners) if diagram.sign_at(c) != 0)
    if len(hit) not in (1, 2, 3):
        raise NotAnElementaryMove(f"{len(hit)} corners on the diagram")
    if len(hit) == 2 and (hit[1] - hit[0]) % 4 == 2:
        raise NotAnElementaryMove("two opposite corners on the diagram")
    return hit


def move_kind_of(diagram: GridDiagram, move: ElementaryMove) -> str:
    return (STABILIZATION, EXCHANGE, DESTABILIZATION)[
        len(corner_pattern(diagram, move.rect)) - 1]


def map_corner_pattern(m, rect: Rectangle):
    """corner_pattern for a diagram given as a SignedPointMap (rational levels)."""
    c = m.circumference
    corners = rect.corners()
    corner_set = {q.reduced(c) for q in corners}
    if len(corner_set) != 4:
        raise NotAnElementaryMove("rectangle corners are not distinct")
    for p in m.entries:
        if rect.contains(p, c) and p not in corner_set:
            raise NotAnElementaryMove(f"vertex {p} inside the rectangle")
    hit = tuple(i for i, q in enumerate(corners) if m[q] != 0)
    if len(hit) not in (1, 2, 3):
        raise NotAnElementaryMove(f"{len(hit)} corners on the diagram")
    if len(hit) == 2 and (hit[1] - hit[0]) % 4 == 2:
        raise NotAnElementaryMove("two opposite corners on the diagram")
    return hit


def apply_move_to_map(m, move: ElementaryMove):
    """Map-level apply_elementary; validates legality and the result."""
    map_corner_pattern(m, move.rect)
    out = m.copy()
    out.add_rectangle(move.rect, -move.sign)
    if not out.is_diagram():
        raise InvalidResult("resulting map is not a diagram characteristic")
    return out


_FLIP_SIGN = {"none": 1, "flip_theta": -1, "flip_phi": -1, "both": 1, "transpose": 1}


def conjugate_move(move: ElementaryMove, symmetry: str, circumference) -> ElementaryMove:
    """Image of a move under a torus symmetry: sigma_{s(R)} - sigma_{s(R')} =
    (+-sign) * sigma_{s(rect)}; single reflections flip the sign."""
    from .torus_core import reduce_mod
    r = move.rect
    t1, t2, f1, f2 = r.theta1, r.theta2, r.phi1, r.phi2
    if symmetry == "none":
        rect = r
    elif symmetry == "flip_theta":
        rect = Rectangle.of(reduce_mod(-t2, circumference), reduce_mod(-t1, circumference), f1, f2)
    elif symmetry == "flip_phi":
        rect = Rectangle.of(t1, t2, reduce_mod(-f2, circumference), reduce_mod(-f1, circumference))
    elif symmetry == "both":
        rect = Rectangle.of(reduce_mod(-t2, circumference), reduce_mod(-t1, circumference),
                            reduce_mod(-f2, circumference), reduce_mod(-f1, circumference))
    elif symmetry == "transpose":
        rect = Rectangle.of(f1, f2, t1, t2)
    else:
        raise ValueError(f"unknown symmetry {symmetry!r}")
    return ElementaryMove(rect, move.sign * _FLIP_SIGN[symmetry])


def apply_elementary(diagram: GridDiagram, move: ElementaryMove) -> GridDiagram:
    """Apply sigma_R - sign*sigma_rect and renormalize."""
    if move.sign not in (1, -1):
        raise NotAnElementaryMove(f"sign {move.sign}")
    corner_pattern(diagram, move.rect)
    m = characteristic(diagram)
    m.add_rectangle(move.rect, -move.sign)
    if not m.is_diagram():
        raise InvalidResult("resulting map is not a diagram characteristic")
    return from_characteristic(m)


def _half_levels(n: int):
    out = []
    for j in range(n):
        out.append(Fraction(j))
        out.append(Fraction(2 * j + 1, 2))
    return out


def enumerate_elementary(diagram: GridDiagram, move_filter: str = "all"):
    """Every legal move on the half-integer level lattice, deduplicated.

    Two rectangles carrying the same (source, target, kind) transition count
    as one move; order is deterministic (sorted rectangle coordinates).  The
    scan runs on the integer lattice of doubled coordinates for speed; the
    returned moves carry the usual exact rationals.
    """
    if move_filter not in ("all", "non_increasing", "destabilizations",
                           "exchanges", "stabilizations"):
        raise ValueError(f"unknown filter {move_filter!r}")
    wanted = {
        "all": {STABILIZATION, EXCHANGE, DESTABILIZATION},
        "non_increasing": {EXCHANGE, DESTABILIZATION},
        "destabilizations": {DESTABILIZATION},
        "exchanges": {EXCHANGE},
        "stabilizations": {STABILIZATION},
    }[move_filter]
    n = diagram.n
    big = 2 * n  # doubled circumference: half-integers become integers
    verts = {}
    for j in range(n):
        verts[(2 * j, 2 * diagram.pos[j])] = 1
        verts[(2 * j, 2 * diagram.neg[j])] = -1
    vert_items = sorted(verts.items())

    rect_keys = set()
    for (x, y), _s in vert_items:
        for ta in range(big):
            for fa in range(big):
                for t1, t2, f1, f2 in ((x, ta, y, fa), (ta, x, y, fa),
                                       (ta, x, fa, y), (x, ta, fa, y)):
                    if t1 != t2 and f1 != f2:
                        rect_keys.add((t1, t2, f1, f2))

    kinds = (STABILIZATION, EXCHANGE, DESTABILIZATION)
    moves = []
    seen = set()
    for t1, t2, f1, f2 in sorted(rect_keys):
        w = (t2 - t1) % big
        h = (f2 - f1) % big
        hit = []
        ok = True
        for (x, y), _s in vert_items:
            dx = (x - t1) % big
            dy = (y - f1) % big
            if dx <= w and dy <= h:
                cx, cy = dx in (0, w), dy in (0, h)
                if cx and cy:
                    hit.append((dx != 0) + 2 * (dy != 0))
                else:
                    ok = False
                    break
        if not ok or len(hit) not in (1, 2, 3):
            continue
        # corner index in cyclic order v1 v2 v3 v4: 0,1 bottom / 3,2 top
        cyc = sorted({0: 0, 1: 1, 3: 2, 2: 3}[c] for c in hit)
        if len(cyc) == 2 and (cyc[1] - cyc[0]) % 4 == 2:
            continue
        kind = kinds[len(hit) - 1]
        if kind not in wanted:
            continue
        corner_sigma = {0: 1, 1: -1, 2: 1, 3: -1}  # cyclic corner order
        first = cyc[0]  # hit corners force a consistent sign on valid moves
        corner_xy = {0: (t1, f1), 1: (t2, f1), 2: (t2, f2), 3: (t1, f2)}[first]
        sign = verts[corner_xy] * corner_sigma[first]
        new = dict(verts)
        for idx, (cx, cy) in ((0, (t1, f1)), (1, (t2, f1)),
                              (2, (t2, f2)), (3, (t1, f2))):
            val = new.get((cx, cy), 0) - sign * corner_sigma[idx]
            if val == 0:
                new.pop((cx, cy), None)
            else:
                new[(cx, cy)] = val
        target = _renormalize_int(new)
        if target is None:
            continue
        key = (canonical_form(target), kind)
        if key in seen:
            continue
        seen.add(key)
        moves.append(ElementaryMove(
            Rectangle.of(Fraction(t1, 2), Fraction(t2, 2),
                         Fraction(f1, 2), Fraction(f2, 2)), sign))
    return moves


def _renormalize_int(sigma):
    """Renormalize an integer-lattice vertex map, or None if not a diagram."""
    cols, rows = {}, {}
    for (x, y), v in sigma.items():
        if v not in (1, -1):
            return None
        cols.setdefault(x, []).append(v)
        rows.setdefault(y, []).append(v)
    if not sigma or len(cols) != len(rows):
        return None
    if any(sorted(vs) != [-1, 1] for vs in cols.values()):
        return None
    if any(sorted(vs) != [-1, 1] for vs in rows.values()):
        return None
    xi = {x: i for i, x in enumerate(sorted(cols))}
    yi = {y: i for i, y in enumerate(sorted(rows))}
    pos = [None] * len(xi)
    neg = [None] * len(xi)
    for (x, y), v in sigma.items():
        if v == 1:
            pos[xi[x]] = yi[y]
        else:
            neg[xi[x]] = yi[y]
    if len(xi) < 2:
        return None
    return GridDiagram(len(xi), tuple(pos), tuple(neg))


def classify(diagram: GridDiagram, move: ElementaryMove) -> MoveKind:
    """Kind from the corner count; family by multiflype realizability.

    Exchange moves are simultaneously up- and down-family; every
    (de)stabilization is realizable as a one-interior-vertex multiflype for
    exactly one slope family.
    """
    kind = move_kind_of(diagram, move)
    if kind == EXCHANGE:
        return MoveKind(kind, BOTH_FAMILIES)
    from .multiflype import realize_elementary
    direct = realize_elementary(diagram, move, "direct")
    reflected = realize_elementary(diagram, move, "reflected")
    if (direct is None) == (reflected is None):
        raise NotAnElementaryMove(
            f"family of {move} is not well defined ({direct=}, {reflected=})")
    return MoveKind(kind, UP_FAMILY if direct is not None else DOWN_FAMILY)


def find_elementary(diagram: GridDiagram, target: GridDiagram):
    """A single move carrying diagram onto target up to translation, if any."""
    for move in enumerate_elementary(diagram, "all"):
        if translate_equal(apply_elementary(diagram, move), target):
            return move
    return None


# ---------------------------------------------------------------------------
# Serialization: "move e t1 t2 f1 f2" with rationals as p/q
# ---------------------------------------------------------------------------

def serialize_move(move: ElementaryMove) -> str:
    r = move.rect
    return "move {:+d} {} {} {} {}".format(
        move.sign, r.theta1, r.theta2, r.phi1, r.phi2)


def parse_move(line: str) -> ElementaryMove:
    parts = line.split()
    if len(parts) != 6 or parts[0] != "move":
        raise GridSyntaxError(f"bad move line {line!r}")
    try:
        sign = int(parts[1])
        t1, t2, f1, f2 = (Fraction(p) for p in parts[2:])
    except (ValueError, ZeroDivisionError):
        raise GridSyntaxError(f"bad move line {line!r}") from None
    if sign not in (1, -1):
        raise GridSyntaxError(f"bad move sign {parts[1]!r}")
    return ElementaryMove(Rectangle.of(t1, t2, f1, f2), sign)
