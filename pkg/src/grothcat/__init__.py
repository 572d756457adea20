"""Grothendieck constructions of functors from finitely presented categories
into linear categories, and their quiver presentations."""

from .congruence import (
    FinPresCategory,
    FiniteCategory,
    MorphismClass,
    are_equivalent,
    compose_classes,
    hom_set,
    present_category,
    saturate,
)
from .errors import (
    BoundError,
    GrothcatError,
    InductionError,
    InfiniteDimensionError,
    InputError,
    NonStabilizingError,
)
from .functor import (
    ArrowAction,
    FiberPresentation,
    FunctorAssignment,
    act_on_morphism,
    act_on_object,
    induce_from_vertex_map,
    validate_functor,
)
from .grothendieck import (
    GrMorphism,
    GrObject,
    diagonal_presentation,
    gr_compose,
    gr_dim,
    gr_hom_basis,
    gr_identity,
    verify_diagonal_iso,
)
from .path_algebra import Algebra, LinComb, PathQuotient, hom_basis, quotient_free_module
from .problem import ProblemFile, load, loads
from .quiver import Arrow, Path, Quiver, export_dot, format_path
from .scalars import GF, RATIONAL, Field
from .synth import (
    GrQuiver,
    GrRelationSet,
    build_qprime,
    build_relations,
    phi_eval,
    pi_path,
    presented_hom_basis,
    sigma_embed,
    simplify_presentation,
    verify_presentation,
)

__version__ = "0.1.0"
