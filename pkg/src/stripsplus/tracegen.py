"""Seeded random state-action trace generation.

The walk simulates on full states; recorded states are projected to the
observed predicates (dropped predicates removed).  The PRNG is CPython's
Mersenne Twister (`random.Random`), consumed only through `randrange` over
the canonically sorted applicable-action list, so identical inputs always
produce byte-identical trace files.
"""

from __future__ import annotations

import random
from typing import List, Optional, Set, Tuple

from .engine import (
    ApplicabilityError,
    MutableTypeInfo,
    TypeInfo,
    enumerate_applicable,
    plus_applicable,
    plus_successor,
    strips_applicable,
    strips_successor,
)
from .model import (
    Domain,
    GroundAction,
    Problem,
    State,
    StripsSchema,
    Trace,
)


def generate_trace(
    problem: Problem,
    domain: Domain,
    length: int,
    seed: int,
    dropped: Optional[Set[str]] = None,
) -> Trace:
    """Random walk of up to `length` steps from the instance's initial state.

    A dead end (no applicable action) truncates the trace and is recorded as
    a normal outcome.  For STRIPS+ domains the recorded action labels carry
    the explicit arguments only.  Type domains accumulate along the walk, so
    an applicable action is never missed by a too-narrow grounding universe.
    """
    if length < 0:
        raise ValueError("length must be >= 0")
    dropped = set(dropped or ())
    declared = {p.name for p in domain.predicates}
    unknown = dropped - declared
    if unknown:
        raise ValueError(f"dropped predicates not in domain: {sorted(unknown)}")
    tracker = MutableTypeInfo(dict(problem.objects))
    rng = random.Random(seed)
    state = problem.init
    steps: List[Tuple[GroundAction, State]] = []
    truncated = False
    for _ in range(length):
        tracker.observe(state)
        applicable = enumerate_applicable(domain, problem, state, tracker.snapshot())
        if not applicable:
            truncated = True
            break
        action, zbind = applicable[rng.randrange(len(applicable))]
        schema = domain.schema(action.name)
        if isinstance(schema, StripsSchema):
            state = strips_successor(state, schema, action.args)
        else:
            state = plus_successor(state, schema, action.args, zbind)
        steps.append((action, state.project(dropped)))
    return Trace(
        domain_name=domain.name,
        seed=seed,
        objects=problem.objects,
        init=problem.init.project(dropped),
        steps=tuple(steps),
        dropped=tuple(sorted(dropped)),
        truncated=truncated,
    )


def replay(
    problem: Problem,
    domain: Domain,
    trace: Trace,
    types: Optional[TypeInfo] = None,
) -> List[State]:
    """Re-simulate a trace's action labels under `domain` on full states.

    Negated-atom quantification uses domains over the whole instance (init
    plus every replayed state), matching what a learner would have observed.
    Returns the full successor states; raises if a step is inapplicable.
    """
    if types is None:
        builder = MutableTypeInfo(dict(problem.objects))
        builder.observe(problem.init)
        for s in trace.states():
            builder.observe(s)
        types = builder.snapshot()
    state = problem.init
    out: List[State] = []
    for k, (action, _) in enumerate(trace.steps):
        schema = domain.schema(action.name)
        if isinstance(schema, StripsSchema):
            if not strips_applicable(schema, action.args, state):
                raise ApplicabilityError(
                    f"step {k}: {action} not applicable during replay")
            state = strips_successor(state, schema, action.args)
        else:
            zbind = plus_applicable(schema, action.args, state, types)
            if zbind is None:
                raise ApplicabilityError(
                    f"step {k}: {action} not applicable during replay")
            state = plus_successor(state, schema, action.args, zbind)
        out.append(state)
    return out
