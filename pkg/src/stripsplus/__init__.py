"""Learning lifted STRIPS+ action models from partially observable
state-action traces, with translation, trace generation and verification
tooling."""

from .model import (
    Domain,
    GroundAction,
    LiftedAtom,
    PredicateSig,
    Problem,
    State,
    StratifiedQuery,
    StripsPlusSchema,
    StripsSchema,
    Subquery,
    Trace,
    VariableRef,
    canonical_atom_order,
)

__all__ = [
    "Domain",
    "GroundAction",
    "LiftedAtom",
    "PredicateSig",
    "Problem",
    "State",
    "StratifiedQuery",
    "StripsPlusSchema",
    "StripsSchema",
    "Subquery",
    "Trace",
    "VariableRef",
    "canonical_atom_order",
]

__version__ = "0.1.0"
