"""Independent oracles the tests compare the library against.

Each oracle re-derives its answer straight from definitions through a
different code path than the implementation under test: the bracket by the
full 2^c state sum over a port graph, annulus membership by the vertical
order of boundary crossings on a meridian, and the move list by a raw scan of
all half-integer rectangles with the sigma arithmetic done inline.
"""

from fractions import Fraction

from flype.invariants import LaurentPolynomial
from flype.torus_core import (
    GridDiagram,
    Point,
    canonical_form,
    cyc_dist,
    reduce_mod,
    to_planar,
)


# ---------------------------------------------------------------------------
# Naive Kauffman bracket: 2^c states, loops counted with union-find
# ---------------------------------------------------------------------------

class _UF:
    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def naive_bracket(diagram: GridDiagram, cut=None) -> LaurentPolynomial:
    planar = to_planar(diagram, cut)
    n = planar.n
    cr = planar.crossings
    c = len(cr)
    if c > 18:
        raise ValueError("oracle is sized for few crossings")
    # nodes: 4 ports per crossing (N E S W), then one node per vertex
    N, E, S, W = 0, 1, 2, 3
    port = lambda i, d: 4 * i + d
    vnode = {}
    for j in range(n):
        vnode[(j, diagram.pos[j])] = 4 * c + 2 * j
        vnode[(j, diagram.neg[j])] = 4 * c + 2 * j + 1
    links = []

    pos_col = {diagram.pos[j]: j for j in range(n)}
    neg_col = {diagram.neg[j]: j for j in range(n)}
    col_cross = {j: sorted((i for i, x in enumerate(cr) if x.col == j),
                           key=lambda i: planar.row_pos[cr[i].row])
                 for j in range(n)}
    row_cross = {k: sorted((i for i, x in enumerate(cr) if x.row == k),
                           key=lambda i: planar.col_pos[cr[i].col])
                 for k in range(n)}

    for j in range(n):
        lo, hi, _up = planar.col_span[j]
        bottom = diagram.pos[j] if planar.row_pos[diagram.pos[j]] == lo else diagram.neg[j]
        top = diagram.neg[j] if bottom == diagram.pos[j] else diagram.pos[j]
        chain = col_cross[j]
        if chain:
            links.append((vnode[(j, bottom)], port(chain[0], S)))
            links.append((port(chain[-1], N), vnode[(j, top)]))
            for a, b in zip(chain, chain[1:]):
                links.append((port(a, N), port(b, S)))
        else:
            links.append((vnode[(j, bottom)], vnode[(j, top)]))
    for k in range(n):
        lo_h, hi_h, _r = planar.row_span[k]
        jl = pos_col[k] if planar.col_pos[pos_col[k]] == lo_h else neg_col[k]
        jr = neg_col[k] if jl == pos_col[k] else pos_col[k]
        chain = row_cross[k]
        if chain:
            links.append((vnode[(jl, k)], port(chain[0], W)))
            links.append((port(chain[-1], E), vnode[(jr, k)]))
            for a, b in zip(chain, chain[1:]):
                links.append((port(a, E), port(b, W)))
        else:
            links.append((vnode[(jl, k)], vnode[(jr, k)]))

    size = 4 * c + 2 * n
    delta = LaurentPolynomial({8: -1, -8: -1})
    total = LaurentPolynomial.zero()
    for state in range(2 ** c):
        uf = _UF(size)
        for a, b in links:
            uf.union(a, b)
        a_count = 0
        for i in range(c):
            if (state >> i) & 1:  # A-smoothing joins N-E and S-W
                a_count += 1
                uf.union(port(i, N), port(i, E))
                uf.union(port(i, S), port(i, W))
            else:
                uf.union(port(i, N), port(i, W))
                uf.union(port(i, S), port(i, E))
        loops = len({uf.find(x) for x in range(size)})
        term = LaurentPolynomial.one().shifted(4 * (2 * a_count - c))
        for _ in range(loops - 1):
            term = term * delta
        total = total + term
    return total


def naive_jones(diagram: GridDiagram, cut=None) -> LaurentPolynomial:
    planar = to_planar(diagram, cut)
    w = sum(x.sign for x in planar.crossings)
    f = naive_bracket(diagram, cut).shifted(-12 * w, (-1) ** (w % 2))
    return f.substitute_inverse_fourth()


# ---------------------------------------------------------------------------
# Annulus membership by vertical boundary order on the meridian
# ---------------------------------------------------------------------------

def membership_oracle(annulus, point) -> str:
    """interior / on_b1 / on_b2 / outside by the nearest boundary crossings
    below and above the point on its meridian."""
    c = annulus.circumference
    p = Point(Fraction(point[0]), Fraction(point[1])).reduced(c)
    hits = []
    for tag, curve in (("on_b1", annulus.b1), ("on_b2", annulus.b2)):
        for h in curve.meridian_crossings(p.theta):
            hits.append((tag, h))
    for tag, h in hits:
        if h == p.phi:
            return tag
    below = min(hits, key=lambda th: cyc_dist(th[1], p.phi, c))
    above = min(hits, key=lambda th: cyc_dist(p.phi, th[1], c))
    if below[0] == "on_b1" and above[0] == "on_b2":
        return "interior"
    return "outside"


# ---------------------------------------------------------------------------
# Brute-force elementary move scan, straight from the definitions
# ---------------------------------------------------------------------------

def brute_transitions(diagram: GridDiagram):
    """All (canonical target, kind) transitions by scanning every rectangle
    with corners on the half-integer lattice and both signs."""
    n = diagram.n
    levels = [Fraction(k, 2) for k in range(2 * n)]
    sigma = {}
    for j in range(n):
        sigma[Point(Fraction(j), Fraction(diagram.pos[j]))] = 1
        sigma[Point(Fraction(j), Fraction(diagram.neg[j]))] = -1
    out = set()
    for t1 in levels:
        for t2 in levels:
            if t1 == t2:
                continue
            for f1 in levels:
                for f2 in levels:
                    if f1 == f2:
                        continue
                    corners = [Point(t1, f1), Point(t2, f1), Point(t2, f2), Point(t1, f2)]
                    csig = {corners[0]: 1, corners[1]: -1, corners[2]: 1, corners[3]: -1}
                    inside = [p for p in sigma
                              if cyc_dist(t1, p.theta, n) <= cyc_dist(t1, t2, n)
                              and cyc_dist(f1, p.phi, n) <= cyc_dist(f1, f2, n)]
                    if any(p not in corners for p in inside):
                        continue
                    hit = [i for i, q in enumerate(corners) if q in sigma]
                    if len(hit) not in (1, 2, 3):
                        continue
                    if len(hit) == 2 and (hit[1] - hit[0]) % 4 == 2:
                        continue
                    for sign in (1, -1):
                        new = dict(sigma)
                        for q, s in csig.items():
                            new[q] = new.get(q, 0) - sign * s
                            if new[q] == 0:
                                del new[q]
                        if _is_diagram(new, n):
                            target = _renorm(new)
                            kind = ("stabilization", "exchange",
                                    "destabilization")[len(hit) - 1]
                            out.add((canonical_form(target), kind))
    return out


def _is_diagram(sigma, n):
    cols, rows = {}, {}
    if not sigma:
        return False
    for p, v in sigma.items():
        if v not in (1, -1):
            return False
        cols.setdefault(p.theta, []).append(v)
        rows.setdefault(p.phi, []).append(v)
    return (all(sorted(v) == [-1, 1] for v in cols.values())
            and all(sorted(v) == [-1, 1] for v in rows.values()))


def _renorm(sigma):
    ts = sorted({p.theta for p in sigma})
    fs = sorted({p.phi for p in sigma})
    ti = {t: i for i, t in enumerate(ts)}
    fi = {f: i for i, f in enumerate(fs)}
    pos = [None] * len(ts)
    neg = [None] * len(ts)
    for p, v in sigma.items():
        if v == 1:
            pos[ti[p.theta]] = fi[p.phi]
        else:
            neg[ti[p.theta]] = fi[p.phi]
    return GridDiagram(len(ts), tuple(pos), tuple(neg))


# ---------------------------------------------------------------------------
# Omega membership by explicit polygon, even-odd rule in the lift
# ---------------------------------------------------------------------------

def omega_polygon_oracle(om):
    """Point-in-polygon test for Omega_v, built from its boundary walk."""
    c = om.circumference
    u0 = om.v
    x0, y0 = Fraction(u0.theta), Fraction(u0.phi)
    dx_co = cyc_dist(om.co.theta1, u0.theta, c)
    dy_co = cyc_dist(om.co.phi1, u0.phi, c)
    dx_rv = cyc_dist(om.rv.theta1, om.rv.theta2, c)
    dy_rv = cyc_dist(om.rv.phi1, om.rv.phi2, c)

    poly = [(x0, y0), (x0 - dx_co, y0)]
    rx, ry = om.roof.points[0]
    poly.extend((x0 - dx_co + (x - rx), y0 + (y - ry)) for x, y in om.roof.points[1:])
    poly.append((x0 + dx_rv, y0 + dy_rv))  # along the top edge to u1
    poly.append((x0 + dx_rv, y0))          # down the right edge
    fx, fy = om.floor.points[-1]
    poly.extend((x0 + dx_rv + (x - fx), y0 + (y - fy))
                for x, y in reversed(om.floor.points[:-1]))
    # polygon closes back up the co right edge to u0

    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]

    def on_edge(px, py):
        k = len(poly)
        for i in range(k):
            (ax, ay), (bx, by) = poly[i], poly[(i + 1) % k]
            cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
            if cross == 0 and min(ax, bx) <= px <= max(ax, bx) \
                    and min(ay, by) <= py <= max(ay, by):
                return True
        return False

    def inside_lift(px, py):
        if on_edge(px, py):
            return True
        count = 0
        k = len(poly)
        for i in range(k):
            (ax, ay), (bx, by) = poly[i], poly[(i + 1) % k]
            if (ay > py) != (by > py):
                xin = ax + (py - ay) * (bx - ax) / (by - ay)
                if px < xin:
                    count += 1
        return count % 2 == 1

    def member(point):
        px = reduce_mod(point[0], c)
        py = reduce_mod(point[1], c)
        a = ((min(xs) - px) / c).__ceil__()
        while px + a * c <= max(xs):
            b = ((min(ys) - py) / c).__ceil__()
            while py + b * c <= max(ys):
                if inside_lift(px + a * c, py + b * c):
                    return True
                b += 1
            a += 1
        return False

    return member
