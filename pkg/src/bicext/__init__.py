"""bicext: exact algebra of bicyclic-monoid extensions over tail-set families.

Public surface re-exported here: element algebra (:mod:`bicext.core`),
finite balls (:mod:`bicext.balls`), definitional oracles
(:mod:`bicext.oracles`), congruence machinery (:mod:`bicext.congruence`),
structure maps (:mod:`bicext.morphisms`) and the command line
(:mod:`bicext.cli`).
"""

from .core import (
    INT_BOUND,
    BallError,
    BicextError,
    BicyclicElement,
    DomainError,
    DomainEscapeError,
    Element,
    FamilyError,
    NormalizedFamily,
    ParseError,
    SetPrefix,
    SigmaClass,
    bicyclic_multiply,
    embed,
    family_canonicalize,
    hasse_covers,
    idempotent_leq,
    inverse,
    is_idempotent,
    is_inductive,
    is_omega_closed,
    multiply,
    natural_leq,
    project,
    sigma_class,
    sigma_equivalent,
    tail_prefix,
)
from .balls import BallUniverse, make_ball
from .kernels import BACKEND

__version__ = "0.1.0"
