"""Exact computation with the two trace-based classification invariants.

The Stevens side presents finite-trace simplices of hereditary corners
over the ideal lattice; the Elliott side presents the cone of extended
valued lower semicontinuous traces.  The two functors between them, and
morphism transport in both directions, are exact on these finite
presentations; round trips are the identity precisely when no trace
directions are hidden from K-theory.
"""

from .rationals import INF, ExtRat, ext_add, ext_max, ext_min, ext_scale
from .groups import (FinAbGroup, K1Hom, PositiveHom, Report, Scale,
                     ScaledOrderedGroup, Violation, compose_homs, compose_k1,
                     enumerate_ideals, generated_ideal, in_corner_group, support,
                     validate_k1_hom, validate_scaled_hom)
from .cones import (SimplicialCone, alg_leq, join_pointwise, meet_pointwise,
                    pairing, riesz_decompose, simplex_base_check)
from .stevens import (DeltaFamily, SMorphism, SObject, class_family,
                      compose_s_morphisms, coordinate_family, decompose_over_union,
                      hereditary_lift, identity_s_morphism, restrict,
                      validate_s_morphism, validate_s_object)
from .elliott import (EMorphism, EObject, TraceConeX, XElement,
                      compose_e_morphisms, identity_e_morphism,
                      validate_e_morphism, validate_e_object, zeta_apply)
from .functors import (RoundTripReport, elliott_to_stevens, has_ideal_property,
                       roundtrip_morphism, roundtrip_object, stevens_to_elliott,
                       transport_elliott_to_stevens, transport_stevens_to_elliott,
                       verify_iso)
from .documents import Document, MorphismBundle, document_of, emit, parse
from .corpus import CorpusEntry, corpus, gen_composable_pair, gen_random, run_entry

__all__ = [name for name in dir() if not name.startswith("_")]
