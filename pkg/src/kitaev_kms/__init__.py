"""Exact desk-scale toolkit for abelian Kitaev models: operator algebra,
syndrome configurations, equilibrium measures, and transfer matrices."""

from .cyclotomic import Cyclo
from .groups import Character, GroupElement, GroupSpec, pairing, pairing_exponent
from .lattice import (
    DIRECT,
    DUAL,
    FACE,
    VERTEX,
    Edge,
    LatticePatch,
    Ribbon,
    Site,
    face,
    find_ribbon,
    incidence,
    incidence_face,
    incidence_vertex,
    ribbon_site_signs,
    vertex,
)
from .configs import (
    GammaElement,
    SiteConfig,
    SyndromeConfig,
    act,
    cocycle_energy,
    compose_factors,
    connection_face_syndrome,
    corner_cylinder_config,
    cylinder_measure,
    decompose_gamma,
    elementary_delta,
    face_holonomy,
    is_gauge,
    kms_measure_check,
    measure_weight,
    pi_hat,
    standard_window,
)
from .operators import (
    OperatorAlgebra,
    OperatorSum,
    RelationCheck,
    expected_twist,
    hamiltonian_twist,
    random_operator,
    verify_relation_suite,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
