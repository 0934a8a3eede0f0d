"""Reflexive polytopes, weight systems and Calabi-Yau hypersurface data."""
__version__ = "0.1.0"

from .errors import (Degenerate, InvalidSubsystem, NoInteriorOrigin, NonIntegerVPM,
                     NotReflexive, NotReflexivePair, ParseError, RankMismatch, RefpolyError,
                     Unsupported, WrongDimension)
from .polytope import (FaceLattice, NormalForm, Polytope, automorphism_order, dual,
                       face_lattice, has_integer_vpm, hull, is_reflexive, lattice_points,
                       normal_form, vpm)
from .weights import (CWS, Minimality, WeightSystem, delta_of_q, embedding, enumerate_cws,
                      enumerate_single_ws, format_cws, minimality_type, nabla_of_q,
                      parse_cws_line)
from .lattices import LatticeRealization, enumerate_lattices, reflexive_on_lattice
from .hodge import HodgeData, hodge_numbers, mirror_check, picard
from .fibration import (FibrationData, count_facet_projections, count_reflexive_projections,
                        cws_fibration, facet_projection, reflexive_sections, unique_partitions)
from .classify import ClassificationRun, DedupStore, classify, connectedness_report

__all__ = [name for name in dir() if not name.startswith("_")]
