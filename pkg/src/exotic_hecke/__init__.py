"""Exact verification of Hecke fields of exotic weight-one newforms.

Modules: ``cyclo`` (cyclotomic fields and their subfields), ``dirichlet``
(Conrey characters), ``exotic_groups`` (finite subgroups of GL_2),
``rep_engine`` (twisted representations and field predictions),
``newform_classify`` (newform data and census tables), ``lmfdb`` (API client)
and ``cli``.
"""

__version__ = "0.1.0"

from .cyclo import CycElt, Subfield, fixing_group, min_poly, named_surd, splits_completely, subfield_equal, zeta
from .dirichlet import ConreyChar, char_value, membership_q, q_set_density
from .exotic_groups import KINDS, Mat2, MatGroup, build_group, c_value, verify_bl
from .rep_engine import SyntheticRep, build_twist, predicted_field, theorem_sweep, trace_field, verify_theorem
from .newform_classify import (
    MetadataRecord, NewformRecord, build_tables, check_prediction, classify_type, hecke_field_from_traces,
)

__all__ = [
    "KINDS", "ConreyChar", "CycElt", "Mat2", "MatGroup", "MetadataRecord", "NewformRecord", "Subfield",
    "SyntheticRep", "build_group", "build_tables", "build_twist", "c_value", "char_value", "check_prediction",
    "classify_type", "fixing_group", "hecke_field_from_traces", "membership_q", "min_poly", "named_surd",
    "predicted_field", "q_set_density", "splits_completely", "subfield_equal", "theorem_sweep", "trace_field",
    "verify_bl", "verify_theorem", "zeta",
]
