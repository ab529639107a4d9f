"""Multivariable polynomial invariant of virtual link diagrams via cut systems.

Main entry points: :func:`x_polynomial`, :func:`arrow_oracle`, the skein
verifiers, and the diagram constructors in :mod:`vskein.codec`.
"""

from .codec import catalog, emit_json, emit_pd, parse_braid, parse_gauss, parse_pd, realize_gauss
from .invariant import (
    CrossingCapError,
    LoopIndexError,
    PreconditionError,
    arrow_oracle,
    check_exponent_congruence,
    double_bracket,
    enumerate_states,
    f_polynomial,
    skein_state_classes,
    verify_skein_classical,
    verify_skein_main,
    verify_skein_virtual_cc,
    x_polynomial,
)
from .model import (
    Diagram,
    components,
    crossing_change,
    mirror,
    semi_arcs,
    skein_triples,
    smooth_oriented,
    validate_diagram,
    virtualize,
    writhe,
)
from .numbering import (
    CutSystem,
    canonical_cut_system,
    insert_canceling_pair,
    is_almost_classical_diagram,
    is_checkerboard_colorable,
    is_valid_cut_system,
    push_through_crossing,
    solve_numbering,
)
from .poly import MultiPoly

__version__ = "0.1.0"
