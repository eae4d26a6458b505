"""Grounded STRIPS semantics and the relational query evaluator.

Evaluation strategy: backtracking join over the state's inverted index,
most-constrained-atom first.  Negated atoms with free slots hold iff no typed
grounding of those slots matches a true atom; the quantification domain is
the observed position domain of the slot, closed under type classes inferred
by position co-occurrence.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .model import (
    KIND_EXPLICIT,
    KIND_IMPLICIT,
    Assignment,
    Domain,
    GroundAction,
    GroundAtom,
    LiftedAtom,
    Problem,
    State,
    StratifiedQuery,
    StripsPlusSchema,
    StripsSchema,
    Subquery,
    Trace,
    VariableRef,
    x_ref,
    z_ref,
)


class EvaluationError(Exception):
    """An atom references a variable that is neither fixed nor a target."""


class ModelIntegrityError(Exception):
    """A binding stratum produced several candidate objects in a reachable
    state: the model violates the determinedness invariant."""

    def __init__(self, action: str, stratum: int, candidates: Sequence[str]):
        self.action = action
        self.stratum = stratum
        self.candidates = sorted(candidates)
        super().__init__(
            f"{action}: stratum z{stratum} is not determined, candidates "
            f"{self.candidates}")


class ApplicabilityError(Exception):
    """An action was applied in a state where its preconditions do not hold."""


class TypeInfo:
    """Observed object domains per predicate position, plus the object type
    classes obtained by merging positions that share objects.

    The class closure makes negated-atom quantification robust on fresh
    instances: an object counts as a candidate for a slot as soon as it was
    observed anywhere in the slot's class.
    """

    def __init__(self, position_domains: Dict[Tuple[str, int], Set[str]]):
        self._observed = {slot: frozenset(objs)
                          for slot, objs in position_domains.items()}
        self._parent: Dict[Tuple[str, int], Tuple[str, int]] = {}
        for slot in self._observed:
            self._parent[slot] = slot
        self._union_by_objects()
        self._class_domains: Dict[Tuple[str, int], FrozenSet[str]] = {}
        members: Dict[Tuple[str, int], List[Tuple[str, int]]] = {}
        for slot in sorted(self._observed):
            members.setdefault(self._find(slot), []).append(slot)
        for rep, slots in members.items():
            dom = frozenset().union(*(self._observed[s] for s in slots))
            for s in slots:
                self._class_domains[s] = dom
        self._obj_class: Dict[str, Tuple[str, int]] = {}
        for slot in sorted(self._observed):
            rep = self._find(slot)
            for obj in self._observed[slot]:
                self._obj_class.setdefault(obj, rep)

    def _find(self, slot: Tuple[str, int]) -> Tuple[str, int]:
        root = slot
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[slot] != root:
            self._parent[slot], slot = root, self._parent[slot]
        return root

    def _union_by_objects(self) -> None:
        by_obj: Dict[str, List[Tuple[str, int]]] = {}
        for slot in sorted(self._observed):
            for obj in self._observed[slot]:
                by_obj.setdefault(obj, []).append(slot)
        for slots in by_obj.values():
            first = slots[0]
            for other in slots[1:]:
                ra, rb = self._find(first), self._find(other)
                if ra != rb:
                    # deterministic representative: lexicographically smallest
                    if rb < ra:
                        ra, rb = rb, ra
                    self._parent[rb] = ra

    @staticmethod
    def from_states(states: Iterable[State],
                    object_types: Optional[Dict[str, str]] = None) -> "TypeInfo":
        domains: Dict[Tuple[str, int], Set[str]] = {}
        for state in states:
            for atom in state:
                pred = atom[0]
                for pos in range(1, len(atom)):
                    domains.setdefault((pred, pos), set()).add(atom[pos])
        if object_types:
            # declared non-universal types act as extra pseudo-slots so that
            # same-typed objects land in one class even if never co-observed
            by_type: Dict[str, Set[str]] = {}
            for obj, typ in object_types.items():
                if typ != "object":
                    by_type.setdefault(typ, set()).add(obj)
            for typ, objs in by_type.items():
                domains[("type:" + typ, 1)] = objs
        return TypeInfo(domains)

    @staticmethod
    def from_traces(traces: Sequence[Trace]) -> "TypeInfo":
        states: List[State] = []
        object_types: Dict[str, str] = {}
        for trace in traces:
            states.extend(trace.states())
            object_types.update(dict(trace.objects))
        return TypeInfo.from_states(states, object_types)

    def position_domain(self, pred: str, pos: int) -> FrozenSet[str]:
        """Class-closed candidate objects for a predicate position."""
        return self._class_domains.get((pred, pos), frozenset())

    def observed_domain(self, pred: str, pos: int) -> FrozenSet[str]:
        return self._observed.get((pred, pos), frozenset())

    def anchor(self, pred: str, pos: int) -> str:
        """Stable name for the slot's type class, usable as a type token."""
        if (pred, pos) not in self._observed:
            return "object"
        rep = self._find((pred, pos))
        return f"{rep[0]}.{rep[1]}"

    def anchor_of_object(self, obj: str) -> str:
        rep = self._obj_class.get(obj)
        return f"{rep[0]}.{rep[1]}" if rep else "object"

    def objects_of_anchor(self, anchor: str) -> FrozenSet[str]:
        pred, _, pos = anchor.rpartition(".")
        if not pred:
            return frozenset()
        return self.position_domain(pred, int(pos))

    def same_class(self, anchor_a: str, anchor_b: str) -> bool:
        if anchor_a == "object" or anchor_b == "object":
            return True
        return self.objects_of_anchor(anchor_a) == self.objects_of_anchor(anchor_b)


class MutableTypeInfo:
    """Cumulative observation wrapper: grows position domains as states are
    observed and rebuilds the class structure lazily.  Used by the trace
    generator, where the instance's states are only discovered on the way."""

    def __init__(self, object_types: Optional[Dict[str, str]] = None):
        self._domains: Dict[Tuple[str, int], Set[str]] = {}
        self._object_types = dict(object_types or {})
        self._dirty = True
        self._snapshot: Optional[TypeInfo] = None

    def observe(self, state: State) -> None:
        for atom in state:
            pred = atom[0]
            for pos in range(1, len(atom)):
                dom = self._domains.setdefault((pred, pos), set())
                if atom[pos] not in dom:
                    dom.add(atom[pos])
                    self._dirty = True

    def snapshot(self) -> TypeInfo:
        if self._dirty or self._snapshot is None:
            domains = {slot: set(objs) for slot, objs in self._domains.items()}
            by_type: Dict[str, Set[str]] = {}
            for obj, typ in self._object_types.items():
                if typ != "object":
                    by_type.setdefault(typ, set()).add(obj)
            for typ, objs in by_type.items():
                domains[("type:" + typ, 1)] = objs
            self._snapshot = TypeInfo(domains)
            self._dirty = False
        return self._snapshot


def infer_position_domains(traces: Sequence[Trace]) -> TypeInfo:
    """TypeInfo over every state (including init) of the given traces."""
    return TypeInfo.from_traces(traces)


def param_domain(type_token: str, problem: Problem, types: TypeInfo) -> List[str]:
    """Objects an action parameter of the given type may range over."""
    if type_token == "object":
        return list(problem.object_names)
    if "." in type_token:
        dom = types.objects_of_anchor(type_token)
        if dom:
            return sorted(dom)
        return list(problem.object_names)
    objs = problem.objects_of_type(type_token)
    return objs if objs else list(problem.object_names)


# ---------------------------------------------------------------------------
# Atom evaluation primitives
# ---------------------------------------------------------------------------

def _pattern(atom: LiftedAtom, binding: Assignment,
             hole: Optional[VariableRef] = None) -> List[Optional[str]]:
    """Per-slot object or None (free slot, or the hole variable)."""
    pat: List[Optional[str]] = []
    for ref in atom.args:
        if ref.is_free or (hole is not None and ref == hole):
            pat.append(None)
        else:
            try:
                pat.append(binding[ref])
            except KeyError:
                raise EvaluationError(f"unbound variable {ref} in {atom}") from None
    return pat


def _has_match(state: State, pred: str, pat: Sequence[Optional[str]]) -> bool:
    bound = [(i + 1, v) for i, v in enumerate(pat) if v is not None]
    if not bound:
        return bool(state.atoms_of(pred))
    if len(bound) == len(pat):
        return (pred, *pat) in state
    pos, obj = bound[0]
    for cand in state.atoms_at(pred, pos, obj):
        if all(cand[p] == v for p, v in bound[1:]):
            return True
    return False


def holds(atom: LiftedAtom, state: State, types: TypeInfo,
          binding: Assignment) -> bool:
    """Truth of a lifted atom whose non-free slots are all bound.

    Positive: some true atom matches (frees existential).  Negative: no true
    atom matches, which over the observed typed domains is exactly the
    universal reading of the free slots.
    """
    pat = _pattern(atom, binding)
    matched = _has_match(state, atom.predicate, pat)
    return matched if atom.positive else not matched


def atom_values(atom: LiftedAtom, state: State, types: TypeInfo,
                binding: Assignment, hole: VariableRef) -> FrozenSet[str]:
    """Objects v such that the atom holds with `hole` bound to v.

    This is the single-target primitive behind stratum evaluation: a
    stratum's candidate set is the intersection of its atoms' value sets,
    which is sound because free slots are never shared between atoms.
    """
    pred = atom.predicate
    pat = _pattern(atom, binding, hole)
    hole_positions = [i + 1 for i, ref in enumerate(atom.args) if ref == hole]
    if not hole_positions:
        return frozenset()
    if atom.positive:
        bound = [(i + 1, v) for i, v in enumerate(pat)
                 if v is not None]
        if bound:
            pos0, obj0 = min(bound, key=lambda pv: len(state.atoms_at(pred, *pv)))
            candidates = state.atoms_at(pred, pos0, obj0)
        else:
            candidates = state.atoms_of(pred)
        values: Set[str] = set()
        for cand in candidates:
            if any(cand[p] != v for p, v in bound):
                continue
            first = cand[hole_positions[0]]
            if all(cand[p] == first for p in hole_positions[1:]):
                values.add(first)
        return frozenset(values)
    # negative: try every typed candidate for the hole
    domain = types.position_domain(pred, hole_positions[0])
    for pos in hole_positions[1:]:
        domain = domain & types.position_domain(pred, pos)
    values = set()
    for obj in domain:
        for pos in hole_positions:
            pat[pos - 1] = obj
        if not _has_match(state, pred, pat):
            values.add(obj)
    return frozenset(values)


def stratum_values(sq: Subquery, state: State, types: TypeInfo,
                   binding: Assignment) -> FrozenSet[str]:
    """Candidate objects for the stratum's new variable, given all earlier
    bindings.  Atoms not mentioning the new variable act as guards."""
    new = z_ref(sq.introduces)
    values: Optional[FrozenSet[str]] = None
    for atom in sq.atoms:
        if atom.mentions(new):
            vals = atom_values(atom, state, types, binding, new)
            values = vals if values is None else values & vals
            if not values:
                return frozenset()
        elif not holds(atom, state, types, binding):
            return frozenset()
    return values if values is not None else frozenset()


# ---------------------------------------------------------------------------
# General conjunctive evaluation (backtracking join)
# ---------------------------------------------------------------------------

def satisfying_assignments(
    atoms: Sequence[LiftedAtom],
    state: State,
    types: TypeInfo,
    fixed: Assignment,
    targets: Set[VariableRef],
    universe: Optional[Dict[VariableRef, Sequence[str]]] = None,
) -> Set[Tuple[str, ...]]:
    """All groundings of `targets` extending `fixed` that satisfy every atom,
    projected to `targets` (ordered by variable sort key) and deduplicated.

    Targets that occur in no atom are filled from `universe` when given.
    """
    order = sorted(targets, key=VariableRef.sort_key)
    for atom in atoms:
        for ref in atom.variables:
            if ref not in fixed and ref not in targets:
                raise EvaluationError(f"variable {ref} of {atom} is neither "
                                      f"fixed nor a target")
    results: Set[Tuple[str, ...]] = set()
    binding: Assignment = dict(fixed)

    def unbound_refs(atom: LiftedAtom) -> List[VariableRef]:
        return [r for r in atom.variables if r not in binding]

    def score(atom: LiftedAtom) -> Tuple[int, int]:
        missing = len(set(unbound_refs(atom)))
        if atom.positive:
            return (0 if missing == 0 else 2, missing)
        return (1 if missing == 0 else 4, missing)

    def emit() -> None:
        results.add(tuple(binding[r] for r in order))

    def solve(remaining: List[LiftedAtom]) -> None:
        if not remaining:
            free_targets = [r for r in order if r not in binding]
            if not free_targets:
                emit()
                return
            if universe is None or any(r not in universe for r in free_targets):
                raise EvaluationError(
                    f"targets {free_targets} occur in no atom and no universe "
                    f"was provided")
            for combo in product(*(universe[r] for r in free_targets)):
                for r, v in zip(free_targets, combo):
                    binding[r] = v
                emit()
                for r in free_targets:
                    del binding[r]
            return
        remaining = sorted(remaining, key=lambda a: (score(a), a.sort_key()))
        atom, rest = remaining[0], remaining[1:]
        missing = sorted(set(unbound_refs(atom)), key=VariableRef.sort_key)
        if not missing:
            if holds(atom, state, types, binding):
                solve(rest)
            return
        if len(missing) == 1:
            for val in sorted(atom_values(atom, state, types, binding, missing[0])):
                binding[missing[0]] = val
                solve(rest)
                del binding[missing[0]]
            return
        # several unbound variables in one atom
        pred = atom.predicate
        if atom.positive:
            seen: Set[Tuple[str, ...]] = set()
            for cand in state.atoms_of(pred):
                local: Assignment = {}
                ok = True
                for pos, ref in enumerate(atom.args, start=1):
                    if ref.is_free:
                        continue
                    want = binding.get(ref)
                    if want is None:
                        prev = local.get(ref)
                        if prev is None:
                            local[ref] = cand[pos]
                        elif prev != cand[pos]:
                            ok = False
                            break
                    elif want != cand[pos]:
                        ok = False
                        break
                if not ok:
                    continue
                key = tuple(local[r] for r in missing)
                if key in seen:
                    continue
                seen.add(key)
                binding.update(local)
                solve(rest)
                for r in local:
                    del binding[r]
            return
        # negative with several unbound variables: typed product
        doms: List[FrozenSet[str]] = []
        for ref in missing:
            dom: Optional[FrozenSet[str]] = None
            for pos, slot_ref in enumerate(atom.args, start=1):
                if slot_ref == ref:
                    d = types.position_domain(pred, pos)
                    dom = d if dom is None else dom & d
            doms.append(dom or frozenset())
        for combo in product(*(sorted(d) for d in doms)):
            for r, v in zip(missing, combo):
                binding[r] = v
            if holds(atom, state, types, binding):
                solve(rest)
            for r in missing:
                del binding[r]

    solve(list(atoms))
    return results


def assignment_dicts(result: Set[Tuple[str, ...]],
                     targets: Set[VariableRef]) -> List[Assignment]:
    """Expand the packed projection tuples into assignment dicts."""
    order = sorted(targets, key=VariableRef.sort_key)
    return [dict(zip(order, row)) for row in sorted(result)]


# ---------------------------------------------------------------------------
# STRIPS semantics
# ---------------------------------------------------------------------------

def ground_init(problem: Problem) -> State:
    """The initial state is exactly the instance's init atom set."""
    return problem.init


def _ground(atom: LiftedAtom, args: Sequence[str]) -> GroundAtom:
    return (atom.predicate, *(args[r.index - 1] for r in atom.args))


def strips_applicable(schema: StripsSchema, args: Sequence[str],
                      state: State) -> bool:
    if len(args) != schema.arity:
        raise ApplicabilityError(
            f"{schema.name} expects {schema.arity} args, got {len(args)}")
    return all(_ground(p, args) in state for p in schema.pre)


def strips_successor(state: State, schema: StripsSchema,
                     args: Sequence[str]) -> State:
    if not strips_applicable(schema, args, state):
        raise ApplicabilityError(
            f"{schema.name}({','.join(args)}) is not applicable")
    dels = {_ground(a, args) for a in schema.delete}
    adds = {_ground(a, args) for a in schema.add}
    return State((state.atoms - dels) | adds)


# ---------------------------------------------------------------------------
# STRIPS+ semantics
# ---------------------------------------------------------------------------

def eval_negated(atom: LiftedAtom, state: State, fixed: Assignment,
                 types: TypeInfo) -> bool:
    """Universal reading of a negated atom's free slots over typed domains."""
    if atom.positive:
        raise EvaluationError("eval_negated expects a negative atom")
    return holds(atom, state, types, fixed)


def plus_applicable(schema: StripsPlusSchema, args: Sequence[str],
                    state: State, types: TypeInfo) -> Optional[Assignment]:
    """Evaluate binding strata in order (each must determine exactly one
    object), then the extra preconditions.  Returns the z assignment, or None
    when inapplicable.  Raises ModelIntegrityError on a non-determined
    stratum: determinedness is a domain invariant, not a soft failure."""
    if len(args) != schema.arity:
        raise ApplicabilityError(
            f"{schema.name} expects {schema.arity} args, got {len(args)}")
    binding: Assignment = {x_ref(i + 1): o for i, o in enumerate(args)}
    zbind: Assignment = {}
    for sq in schema.binding.subqueries:
        values = stratum_values(sq, state, types, binding)
        if not values:
            return None
        if len(values) > 1:
            raise ModelIntegrityError(schema.name, sq.introduces, values)
        (value,) = values
        ref = z_ref(sq.introduces)
        binding[ref] = value
        zbind[ref] = value
    for atom in schema.extra_pre:
        if not holds(atom, state, types, binding):
            return None
    return zbind


def plus_successor(state: State, schema: StripsPlusSchema, args: Sequence[str],
                   zbind: Assignment) -> State:
    binding: Assignment = {x_ref(i + 1): o for i, o in enumerate(args)}
    binding.update(zbind)

    def ground(atom: LiftedAtom) -> GroundAtom:
        return (atom.predicate, *(binding[r] for r in atom.args))

    dels = {ground(a) for a in schema.delete}
    adds = {ground(a) for a in schema.add}
    return State((state.atoms - dels) | adds)


# ---------------------------------------------------------------------------
# Applicable-action enumeration
# ---------------------------------------------------------------------------

def enumerate_applicable(domain: Domain, problem: Problem, state: State,
                         types: TypeInfo) -> List[Tuple[GroundAction, Optional[Assignment]]]:
    """Complete, duplicate-free, canonically ordered list of applicable
    ground actions (with the z binding for STRIPS+ schemas)."""
    out: List[Tuple[GroundAction, Optional[Assignment]]] = []
    for schema in domain.schemas:
        if isinstance(schema, StripsSchema):
            targets = {x_ref(i + 1) for i in range(schema.arity)}
            universe = {
                x_ref(i + 1): param_domain(schema.param_types[i], problem, types)
                for i in range(schema.arity)
            }
            rows = satisfying_assignments(schema.pre, state, types, {}, targets,
                                          universe=universe)
            for row in sorted(rows):
                out.append((GroundAction(schema.name, row), None))
        else:
            domains = [param_domain(t, problem, types) for t in schema.param_types]
            for combo in product(*domains):
                zbind = plus_applicable(schema, combo, state, types)
                if zbind is not None:
                    out.append((GroundAction(schema.name, tuple(combo)), zbind))
    out.sort(key=lambda pair: (pair[0].name, pair[0].args))
    return out
