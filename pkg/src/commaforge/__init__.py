"""commaforge: finite categories, their arrow-category tower and the constructions that climb it."""

__version__ = "0.1.0"

from .arrows import (
    LevelTower,
    Square,
    arrow_category,
    arrow_diagonal,
    arrow_label,
    comma_lift_functor,
    comma_lift_nat,
    cube_equations,
    decapsulate,
    encapsulate,
    leaf_count,
    level,
    level_cube_equations,
    nat_functor,
    peano,
    proj_fst,
    proj_snd,
    psi,
    terminal_category,
)
from .core import (
    FiniteCategory,
    ValidationReport,
    Violation,
    budget,
    categories_equal,
    chain_category,
    compose,
    discrete_category,
    empty_category,
    hom_set,
    identity,
    is_commutative,
    make_category,
    make_poset_category,
    opposite_category,
    power_category,
    product_category,
    validate_category,
)
from .dot import emit_dot
from .dsl import SourceSpan, Workspace, parse, serialize
from .errors import *  # noqa: F401,F403
from .functors import (
    Functor,
    IsoWitness,
    NatTrans,
    check_iso,
    compose_functors,
    horizontal_compose,
    identity_functor,
    identity_nat,
    validate_functor,
    validate_nat_trans,
    vertical_compose,
    whisker_left,
    whisker_right,
)
from .propagation import (
    BASIC,
    CSElement,
    FunctorCategory,
    LeveledConcept,
    PropagationCase,
    base_concept,
    check_distributive_laws,
    cs_act,
    equivalence_level_two,
    functor_category,
    general_diagonal,
    modulator_K,
    modulator_L,
    propagate_functor,
    propagate_nat,
    transported_modulators,
)
from .universal import (
    Adjunction,
    Cone,
    LimitCertificate,
    UniversalArrow,
    adjunction_from_order,
    check_adjunction,
    check_limit,
    check_universal_arrow,
    colimit,
    find_universal_arrow,
    lift_adjunction,
    limit,
    limit_adjunction,
    propagate_adjunction,
    propagate_limit,
    propagate_universal_arrow,
)
