"""Exact Euler-Satake characteristics of closed 2-orbifolds.

Computation of the characteristic family of a signature, construction of
distinct orbifolds sharing prescribed characteristics, and exact
reconstruction of a signature from its characteristic sequence.
"""

from .classify import (
    CollisionGroup,
    InsufficientData,
    InvalidSequenceError,
    char_sequence,
    enumerate_by_chi_es,
    iter_signatures_by_chi_es,
    minimal_recurrence,
    reconstruct,
    search_collisions,
)
from .constructions import (
    ConstructionError,
    base_pair,
    build_collision_pair,
    combine,
    equalize_cone_counts,
    expand_family,
    general_gamma_family,
    prime_avoiding_seeds,
    remove_cone_point,
    repeat,
    same_level_family,
    scale,
)
from .core import (
    FgAbelian,
    FreeGroup,
    GammaDescriptor,
    GammaSupportError,
    MirroredCylinder,
    OrbifoldSignature,
    Presented,
    TRIVIAL_GROUP,
    abelianize,
    chi_es,
    chi_es_mirrored,
    chi_gamma,
    chi_gamma_times_manifold,
    chi_level,
    chi_top,
    format_rational,
    hom_count_cyclic,
    is_diffeomorphic,
    parse_rational,
    parse_signature,
    power_sum,
)
from .sectors import (
    FiniteGroup,
    FixedPointCharacter,
    FixedPointDataError,
    HomBudgetExceeded,
    HomClass,
    chi_gamma_mirrored,
    chi_gamma_quotient,
    cyclic_group,
    dihedral_group,
    direct_product,
    enumerate_homs,
    group_by_name,
    hom_classes,
    rotation_kernel,
    rotation_sphere_action,
)

__all__ = [
    "CollisionGroup",
    "ConstructionError",
    "FgAbelian",
    "FiniteGroup",
    "FixedPointCharacter",
    "FixedPointDataError",
    "FreeGroup",
    "GammaDescriptor",
    "GammaSupportError",
    "HomBudgetExceeded",
    "HomClass",
    "InsufficientData",
    "InvalidSequenceError",
    "MirroredCylinder",
    "OrbifoldSignature",
    "Presented",
    "TRIVIAL_GROUP",
    "abelianize",
    "base_pair",
    "build_collision_pair",
    "char_sequence",
    "chi_es",
    "chi_es_mirrored",
    "chi_gamma",
    "chi_gamma_mirrored",
    "chi_gamma_quotient",
    "chi_gamma_times_manifold",
    "chi_level",
    "chi_top",
    "combine",
    "cyclic_group",
    "dihedral_group",
    "direct_product",
    "enumerate_by_chi_es",
    "enumerate_homs",
    "equalize_cone_counts",
    "expand_family",
    "format_rational",
    "general_gamma_family",
    "group_by_name",
    "hom_classes",
    "hom_count_cyclic",
    "is_diffeomorphic",
    "iter_signatures_by_chi_es",
    "minimal_recurrence",
    "parse_rational",
    "parse_signature",
    "power_sum",
    "prime_avoiding_seeds",
    "reconstruct",
    "remove_cone_point",
    "repeat",
    "rotation_kernel",
    "rotation_sphere_action",
    "same_level_family",
    "scale",
    "search_collisions",
]
