"""Oriented rectangular diagrams of links on the torus.

Grid diagrams, their elementary moves and multiflypes, a certified algorithm
decomposing any multiflype into elementary moves, link-invariant oracles
(Kauffman bracket / Jones, Legendrian tb and rotation pairs), and monotonic
simplification search.  All arithmetic is exact rational; there is no
floating point anywhere in the package.
"""

from .annulus import (
    Annulus,
    MonotoneCurve,
    bar,
    co_rect,
    locate,
    omega_regions,
    parse_annulus,
    perturb_boundary,
    rect_rv,
    serialize_annulus,
    validate_annulus,
)
from .decompose import (
    MoveCertificate,
    SweepPath,
    base_case_sweep,
    conjugate_rectangle,
    decompose,
    decompose_with_trace,
    induction_step,
    pick_u0,
    validate_certificate,
)
from .invariants import LaurentPolynomial, LegendrianPair, jones, kauffman_bracket, legendrian, writhe
from .moves import (
    ElementaryMove,
    MoveKind,
    apply_elementary,
    classify,
    enumerate_elementary,
    find_elementary,
    parse_move,
    serialize_move,
)
from .multiflype import (
    MultiflypeSpec,
    apply_multiflype,
    apply_multiflype_map,
    inverse_spec,
    realize_elementary,
    thin_move_annulus,
)
from .search import SearchReport, simplify, unknot_census
from .torus_core import (
    CyclicInterval,
    GridDiagram,
    PlanarDiagram,
    Point,
    Rectangle,
    SignedPointMap,
    TREFOIL5,
    UNKNOT2,
    apply_symmetry,
    canonical_form,
    characteristic,
    complexity,
    crossings,
    edges,
    from_characteristic,
    parse,
    render_ascii,
    serialize,
    to_planar,
    translate_equal,
    validate_diagram,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
