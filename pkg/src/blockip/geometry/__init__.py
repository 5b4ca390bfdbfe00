"""Cone geometry and polyhedral certificates for integer-cone membership."""

from blockip.geometry.certificates import (
    PolyhedralCertificate,
    certificate_is_empty,
    certified_member,
    construct_Q,
    facet_residue,
    family_L_member,
)
from blockip.geometry.cones import (
    ConeConstants,
    DualRepresentation,
    cone_constants,
    cone_member,
    deep_threshold,
    orthogonal_subset,
    weyl_dual,
)

__all__ = [
    "ConeConstants",
    "DualRepresentation",
    "PolyhedralCertificate",
    "certificate_is_empty",
    "certified_member",
    "cone_constants",
    "cone_member",
    "construct_Q",
    "deep_threshold",
    "facet_residue",
    "family_L_member",
    "orthogonal_subset",
    "weyl_dual",
]
