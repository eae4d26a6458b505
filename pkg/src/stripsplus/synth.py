"""The learner: per action, synthesize the stratified binding query, prune
instance-constant referring expressions, mine the extra preconditions (both
polarities) and the effects, and assemble the learned domain.

The stratum search evaluates candidate conjunctions through per-atom value
sets: because free slots are never shared between atoms and each stratum
introduces exactly one new variable, a conjunction's candidate set for that
variable is the intersection of its atoms' value sets.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .engine import (
    TypeInfo,
    atom_values,
    holds,
    satisfying_assignments,
    stratum_values,
)
from .model import (
    FLAVOR_STRIPSPLUS,
    FREE,
    Assignment,
    Domain,
    LiftedAtom,
    Occurrence,
    OccurrenceSet,
    PredicateSig,
    State,
    StratifiedQuery,
    StripsPlusSchema,
    Subquery,
    Trace,
    VariableRef,
    canonical_atom_order,
    x_ref,
    z_ref,
)


class LearnError(Exception):
    """Learning failed for one or more actions; message carries the context."""


class TestVerdict(enum.Enum):
    VALID = "valid"
    NOT_VALID = "not-valid"
    NOT_DETERMINED = "not-determined"
    SUBSUMED = "subsumed"


@dataclass
class StratumReport:
    atoms: Tuple[str, ...]
    bounded: bool  # search for the *next* stratum hit the atom bound


@dataclass
class ActionReport:
    name: str
    arity: int
    occurrences: int
    strata: List[Tuple[str, ...]] = field(default_factory=list)
    pruned_constants: List[Tuple[int, Tuple[str, ...]]] = field(default_factory=list)
    bounded_maximal: bool = False
    extras_mined: int = 0
    extras_kept: int = 0
    seconds: float = 0.0


@dataclass
class LearnReport:
    actions: List[ActionReport] = field(default_factory=list)
    max_atoms: int = 3
    seconds: float = 0.0

    def render(self) -> str:
        lines = [f"learned {len(self.actions)} actions in {self.seconds:.2f}s "
                 f"(max {self.max_atoms} atoms per stratum)"]
        for rep in self.actions:
            lines.append(f"action {rep.name}/{rep.arity}: "
                         f"{rep.occurrences} occurrences, {rep.seconds:.2f}s")
            for j, atoms in enumerate(rep.strata, start=1):
                lines.append(f"  z{j}: {' & '.join(atoms)}")
            if rep.bounded_maximal:
                lines.append("  (stratum search stopped at the atom bound)")
            for stratum_idx, atoms in rep.pruned_constants:
                lines.append(f"  pruned instance-constant z{stratum_idx}: "
                             f"{' & '.join(atoms)}")
            lines.append(f"  extra preconditions: kept {rep.extras_kept} "
                         f"of {rep.extras_mined}")
        return "\n".join(lines) + "\n"


def collect_occurrences(traces: Sequence[Trace], name: str) -> OccurrenceSet:
    """All (pre-state, action, post-state) triples for one action name."""
    occs: List[Occurrence] = []
    for idx, trace in enumerate(traces):
        prev = trace.init
        for action, succ in trace.steps:
            if action.name == name:
                occs.append(Occurrence(action, prev, succ, idx))
            prev = succ
    return OccurrenceSet(name, occs)


# ---------------------------------------------------------------------------
# Candidate space
# ---------------------------------------------------------------------------

@dataclass
class CandidateSpace:
    """Canonically ordered candidate atoms for one stratum of one action."""

    atoms: List[LiftedAtom]

    def __len__(self) -> int:
        return len(self.atoms)


def _predicate_sigs(traces: Sequence[Trace], types: TypeInfo) -> List[PredicateSig]:
    preds: Dict[str, int] = {}
    for trace in traces:
        for state in trace.states():
            for atom in state:
                preds.setdefault(atom[0], len(atom) - 1)
    return [PredicateSig(n, k, tuple(types.anchor(n, p + 1) for p in range(k)))
            for n, k in sorted(preds.items())]


def static_predicates(states: Sequence[State]) -> FrozenSet[str]:
    """Predicates whose extension never changes across the given states."""
    if not states:
        return frozenset()
    extensions: Dict[str, Set[Tuple[str, ...]]] = {}
    for atom in states[0]:
        extensions.setdefault(atom[0], set()).add(atom)
    stable = set(extensions)
    for state in states[1:]:
        current: Dict[str, Set[Tuple[str, ...]]] = {}
        for atom in state:
            current.setdefault(atom[0], set()).add(atom)
        for pred in list(stable):
            if current.get(pred, set()) != extensions.get(pred, set()):
                stable.discard(pred)
        for pred in current:
            if pred not in extensions:
                stable.discard(pred)
    return frozenset(stable)


def _var_anchor(var: VariableRef, occs: OccurrenceSet, zdenote: List[Dict[int, str]],
                types: TypeInfo) -> str:
    """Type-class anchor of a bound variable, from its first denotation."""
    first = occs.occurrences[0]
    if var.kind == "x":
        return types.anchor_of_object(first.action.args[var.index - 1])
    return types.anchor_of_object(zdenote[0][var.index])


def build_candidates(
    occs: OccurrenceSet,
    preds: Sequence[PredicateSig],
    types: TypeInfo,
    var_anchors: Dict[VariableRef, str],
    new_index: int,
) -> CandidateSpace:
    """Atoms over x, earlier z's, the new z and free slots, both polarities,
    that mention the new z and are slot-compatible with the observed type
    classes."""
    new = z_ref(new_index)
    atoms: List[LiftedAtom] = []
    for sig in preds:
        if sig.arity == 0:
            continue
        options: List[List[VariableRef]] = []
        for pos in range(sig.arity):
            slot_anchor = sig.position_types[pos]
            opts: List[VariableRef] = []
            for var, anchor in var_anchors.items():
                if anchor == "object" or anchor == slot_anchor:
                    opts.append(var)
            opts.append(new)
            opts.append(FREE)
            options.append(opts)
        for combo in product(*options):
            if new not in combo:
                continue
            new_anchors = {sig.position_types[pos]
                           for pos, ref in enumerate(combo) if ref == new}
            if len(new_anchors) > 1:
                continue
            atom = LiftedAtom(sig.name, tuple(combo), True)
            atoms.append(atom)
            atoms.append(atom.negate())
    return CandidateSpace(canonical_atom_order(atoms))


# ---------------------------------------------------------------------------
# The TEST procedure
# ---------------------------------------------------------------------------

class _StratumSearch:
    """State for synthesizing one stratum: caches per-(atom, occurrence)
    value sets and runs TEST over candidate conjunctions."""

    def __init__(self, occs: OccurrenceSet, bindings: List[Assignment],
                 per_instance_types: Dict[int, TypeInfo],
                 candidates: CandidateSpace, new_index: int,
                 prefix: Sequence[Subquery],
                 instance_states: Dict[int, List[State]],
                 instance_args: Dict[int, List[Tuple[str, ...]]],
                 static_preds: Dict[int, FrozenSet[str]]):
        self.occs = occs
        self.bindings = bindings
        self.types = per_instance_types
        self.candidates = candidates
        self.new = z_ref(new_index)
        self.new_index = new_index
        self.prefix = list(prefix)
        self.instance_states = instance_states
        self.instance_args = instance_args
        self.static_preds = static_preds
        self._values: Dict[Tuple[int, int], FrozenSet[str]] = {}
        # caches for the instance-constant scan, shared across candidate
        # conjunctions: prefix bindings and per-atom value sets keyed by
        # (instance, state index, argument tuple)
        self._scan_prefix: Dict[Tuple[int, int, Tuple[str, ...]],
                                Optional[Assignment]] = {}
        self._scan_values: Dict[Tuple[int, int, int, Tuple[str, ...]],
                                FrozenSet[str]] = {}
        self.pruned_constants: List[Tuple[str, ...]] = []

    def _atom_values(self, atom_idx: int, occ_idx: int) -> FrozenSet[str]:
        key = (atom_idx, occ_idx)
        cached = self._values.get(key)
        if cached is None:
            occ = self.occs.occurrences[occ_idx]
            cached = atom_values(self.candidates.atoms[atom_idx], occ.state,
                                 self.types[occ.instance],
                                 self.bindings[occ_idx], self.new)
            self._values[key] = cached
        return cached

    def test(self, conj: FrozenSet[int]) -> Tuple[TestVerdict, Optional[List[str]]]:
        """Alg. TEST: Not-Valid on any empty occurrence, Not-Determined on
        any ambiguous one, Subsumed when the denotation coincides with an
        existing variable everywhere (or is instance-constant), else Valid."""
        denote: List[str] = []
        unique = True
        for occ_idx in range(len(self.occs.occurrences)):
            values: Optional[FrozenSet[str]] = None
            for atom_idx in conj:
                vals = self._atom_values(atom_idx, occ_idx)
                values = vals if values is None else values & vals
                if not values:
                    return TestVerdict.NOT_VALID, None
            assert values is not None
            if len(values) > 1:
                unique = False
                denote.append("")
            else:
                (val,) = values
                denote.append(val)
        if not unique:
            return TestVerdict.NOT_DETERMINED, None
        for var in self._existing_vars():
            if all(self.bindings[k][var] == denote[k]
                   for k in range(len(denote))):
                return TestVerdict.SUBSUMED, None
        if self._instance_constant(conj, denote):
            self.pruned_constants.append(
                tuple(self.candidates.atoms[i].render() for i in sorted(conj)))
            return TestVerdict.SUBSUMED, None
        return TestVerdict.VALID, denote

    def _existing_vars(self) -> List[VariableRef]:
        out = [x_ref(i + 1) for i in range(self.occs.arity)]
        out += [z_ref(j + 1) for j in range(len(self.prefix))]
        return out

    def _instance_constant(self, conj: FrozenSet[int], denote: List[str]) -> bool:
        """True when the candidate denotes one fixed object across all states
        of every instance (checked on every state where the full query is
        evaluable), like "the top-left corner": such expressions do not
        denote functions of the state and are discarded."""
        per_instance: Dict[int, str] = {}
        for k, occ in enumerate(self.occs.occurrences):
            seen = per_instance.setdefault(occ.instance, denote[k])
            if seen != denote[k]:
                return False
        conj_ids = sorted(conj)
        conj_atoms = [self.candidates.atoms[i] for i in conj_ids]
        # a conjunction over never-changing predicates that mentions no
        # earlier implicit variable cannot read the state at all: it is
        # constant without scanning
        refs_prefix_z = any(r.kind == "z" and r != self.new
                            for a in conj_atoms for r in a.variables)
        if not refs_prefix_z and all(
                all(a.predicate in self.static_preds[inst] for a in conj_atoms)
                for inst in per_instance):
            return True
        for inst, expected in sorted(per_instance.items()):
            types = self.types[inst]
            for state_idx, state in enumerate(self.instance_states[inst]):
                for args in self.instance_args[inst]:
                    value = self._scan_once(inst, state_idx, state, args,
                                            conj_ids, types)
                    if value is not None and value != expected:
                        return False
        return True

    def _scan_prefix_binding(self, inst: int, state_idx: int, state: State,
                             args: Tuple[str, ...],
                             types: TypeInfo) -> Optional[Assignment]:
        key = (inst, state_idx, args)
        if key in self._scan_prefix:
            return self._scan_prefix[key]
        binding: Optional[Assignment] = {x_ref(i + 1): o
                                         for i, o in enumerate(args)}
        for sq in self.prefix:
            vals = stratum_values(sq, state, types, binding)
            if len(vals) != 1:
                binding = None
                break
            binding[z_ref(sq.introduces)] = next(iter(vals))
        self._scan_prefix[key] = binding
        return binding

    def _scan_once(self, inst: int, state_idx: int, state: State,
                   args: Tuple[str, ...], conj_ids: List[int],
                   types: TypeInfo) -> Optional[str]:
        """Denotation of the new variable on an arbitrary state, or None when
        the prefix-plus-candidate query is not uniquely evaluable there."""
        binding = self._scan_prefix_binding(inst, state_idx, state, args, types)
        if binding is None:
            return None
        values: Optional[FrozenSet[str]] = None
        for atom_idx in conj_ids:
            key = (atom_idx, inst, state_idx, args)
            vals = self._scan_values.get(key)
            if vals is None:
                vals = atom_values(self.candidates.atoms[atom_idx], state,
                                   types, binding, self.new)
                self._scan_values[key] = vals
            values = vals if values is None else values & vals
            if not values:
                return None
        if values is None or len(values) != 1:
            return None
        return next(iter(values))


def expand(search: _StratumSearch, max_atoms: int
           ) -> Tuple[Optional[Tuple[Subquery, List[str]]], bool]:
    """Breadth-first growth of candidate conjunctions, one atom per level in
    canonical order with set-level deduplication.  The first Valid conjunction
    wins; Not-Determined conjunctions seed the next level; exhausting the
    space (or the atom bound) yields Maximal."""
    seen: Set[FrozenSet[int]] = set()
    current: List[FrozenSet[int]] = [frozenset()]
    bounded = False
    while current:
        next_level: List[FrozenSet[int]] = []
        for conj in current:
            for idx in range(len(search.candidates)):
                if idx in conj:
                    continue
                grown = conj | {idx}
                if grown in seen:
                    continue
                seen.add(grown)
                verdict, denote = search.test(grown)
                if verdict is TestVerdict.VALID:
                    atoms = tuple(search.candidates.atoms[i] for i in sorted(grown))
                    assert denote is not None
                    return (Subquery(atoms, search.new_index), denote), bounded
                if verdict is TestVerdict.NOT_DETERMINED:
                    if len(grown) < max_atoms:
                        next_level.append(grown)
                    else:
                        bounded = True
        current = next_level
    return None, bounded


def synthesize_binding_query(
    occs: OccurrenceSet,
    per_instance_types: Dict[int, TypeInfo],
    merged_types: TypeInfo,
    preds: Sequence[PredicateSig],
    instance_states: Dict[int, List[State]],
    max_atoms: int = 3,
    report: Optional[ActionReport] = None,
    static_preds: Optional[Dict[int, FrozenSet[str]]] = None,
) -> Tuple[StratifiedQuery, List[Assignment]]:
    """Grow strata until Maximal.  Returns the query plus, per occurrence,
    the full variable binding (x arguments and every accepted z)."""
    bindings: List[Assignment] = [
        {x_ref(i + 1): o for i, o in enumerate(occ.action.args)}
        for occ in occs.occurrences
    ]
    instance_args: Dict[int, List[Tuple[str, ...]]] = {}
    for occ in occs.occurrences:
        rows = instance_args.setdefault(occ.instance, [])
        if occ.action.args not in rows:
            rows.append(occ.action.args)
    var_anchors: Dict[VariableRef, str] = {}
    first = occs.occurrences[0]
    for i, obj in enumerate(first.action.args):
        var_anchors[x_ref(i + 1)] = merged_types.anchor_of_object(obj)
    strata: List[Subquery] = []
    while True:
        new_index = len(strata) + 1
        candidates = build_candidates(occs, preds, merged_types, var_anchors,
                                      new_index)
        if static_preds is None:
            static_preds = {inst: static_predicates(states)
                            for inst, states in instance_states.items()}
        search = _StratumSearch(occs, bindings, per_instance_types, candidates,
                                new_index, strata, instance_states,
                                instance_args, static_preds)
        result, bounded = expand(search, max_atoms)
        if report is not None:
            for atoms in search.pruned_constants:
                report.pruned_constants.append((new_index, atoms))
        if result is None:
            if report is not None and bounded:
                report.bounded_maximal = True
            break
        subquery, denote = result
        strata.append(subquery)
        ref = z_ref(new_index)
        for k, value in enumerate(denote):
            bindings[k][ref] = value
        var_anchors[ref] = merged_types.anchor_of_object(denote[0])
        if report is not None:
            report.strata.append(tuple(a.render() for a in subquery.atoms))
    return StratifiedQuery(tuple(strata)), bindings


# ---------------------------------------------------------------------------
# Extra preconditions
# ---------------------------------------------------------------------------

def _extra_candidates(preds: Sequence[PredicateSig], types: TypeInfo,
                      var_anchors: Dict[VariableRef, str],
                      binding_atoms: Set[LiftedAtom]) -> List[LiftedAtom]:
    atoms: List[LiftedAtom] = []
    for sig in preds:
        options: List[List[VariableRef]] = []
        for pos in range(sig.arity):
            slot_anchor = sig.position_types[pos]
            opts = [var for var, anchor in var_anchors.items()
                    if anchor == "object" or anchor == slot_anchor]
            opts.append(FREE)
            options.append(opts)
        for combo in product(*options):
            positive = LiftedAtom(sig.name, tuple(combo), True)
            if positive not in binding_atoms:
                atoms.append(positive)
            negative = positive.negate()
            all_free = sig.arity > 0 and all(r.is_free for r in combo)
            if not all_free and negative not in binding_atoms:
                atoms.append(negative)
    return canonical_atom_order(atoms)


def mine_extra_preconditions(
    occs: OccurrenceSet,
    bindings: List[Assignment],
    binding_query: StratifiedQuery,
    per_instance_types: Dict[int, TypeInfo],
    merged_types: TypeInfo,
    preds: Sequence[PredicateSig],
) -> List[LiftedAtom]:
    """Every lifted atom over x, z and free slots (free: existential when
    positive, universal when negative) that holds at every occurrence and is
    not already a binding atom."""
    var_anchors: Dict[VariableRef, str] = {}
    first_binding = bindings[0]
    for var in sorted(first_binding, key=VariableRef.sort_key):
        var_anchors[var] = merged_types.anchor_of_object(first_binding[var])
    candidates = _extra_candidates(preds, merged_types, var_anchors,
                                   set(binding_query.all_atoms()))
    kept: List[LiftedAtom] = []
    for atom in candidates:
        ok = True
        for k, occ in enumerate(occs.occurrences):
            if not holds(atom, occ.state, per_instance_types[occ.instance],
                         bindings[k]):
                ok = False
                break
        if ok:
            kept.append(atom)
    return kept


def minimize_extras(
    occs: OccurrenceSet,
    binding_query: StratifiedQuery,
    extras: List[LiftedAtom],
    per_instance_types: Dict[int, TypeInfo],
    merged_types: TypeInfo,
    instance_states: Dict[int, List[State]],
) -> List[LiftedAtom]:
    """Drop extra atoms that never separate a state-action pair from the
    others: an atom is kept iff some (trace state, typed argument tuple)
    satisfies the binding query and every other kept extra but falsifies it.

    Without this, occurrence-invariant tautologies (static facts, atoms
    implied by the binding) would survive as preconditions, and dropping one
    of them in a mutation test would not change the model's behavior.  The
    argument tuples range over the full typed universe, exactly like the
    verifier's grounding enumeration.
    """
    if not extras:
        return extras
    first = occs.occurrences[0]
    arg_domains: List[List[str]] = []
    for i, obj in enumerate(first.action.args):
        anchor = merged_types.anchor_of_object(obj)
        dom = sorted(merged_types.objects_of_anchor(anchor)) or [obj]
        arg_domains.append(dom)
    tuple_universe = [tuple(row) for row in product(*arg_domains)]
    fail_sets: Set[FrozenSet[int]] = set()
    index = {atom: i for i, atom in enumerate(extras)}
    for inst, states in sorted(instance_states.items()):
        types = per_instance_types[inst]
        for state in states:
            for args in tuple_universe:
                binding: Assignment = {x_ref(i + 1): o
                                       for i, o in enumerate(args)}
                evaluable = True
                for sq in binding_query.subqueries:
                    vals = stratum_values(sq, state, types, binding)
                    if len(vals) != 1:
                        evaluable = False
                        break
                    binding[z_ref(sq.introduces)] = next(iter(vals))
                if not evaluable:
                    continue
                failed = frozenset(
                    index[a] for a in extras
                    if not holds(a, state, types, binding))
                if failed:
                    fail_sets.add(failed)
    kept: Set[int] = set(index.values())
    for i in range(len(extras)):  # canonical order: extras arrive sorted
        others = kept - {i}
        witnessed = any(f & kept == {i} for f in fail_sets)
        if not witnessed:
            kept = others
    return [extras[i] for i in sorted(kept)]


# ---------------------------------------------------------------------------
# Effects
# ---------------------------------------------------------------------------

def mine_effects(
    occs: OccurrenceSet,
    bindings: List[Assignment],
) -> Tuple[List[LiftedAtom], List[LiftedAtom]]:
    """Lift the observed ground changes through the inverse variable binding.

    An atom is a valid add (delete) effect iff its grounding flips false-to-
    true (true-to-false) at every occurrence; afterwards the kept effects
    must reproduce each occurrence's change set exactly, else the action is
    not expressible over x and z and learning fails loudly.
    """
    def lift(ground: Tuple[str, ...], binding: Assignment,
             occ: Occurrence) -> List[LiftedAtom]:
        slot_vars: List[List[VariableRef]] = []
        for obj in ground[1:]:
            matches = [var for var in sorted(binding, key=VariableRef.sort_key)
                       if binding[var] == obj]
            if not matches:
                raise LearnError(
                    f"{occs.name}: changed atom {ground} at occurrence "
                    f"{occ.action.render()} has argument {obj} outside the "
                    f"x/z denotations; the action is not well formed or "
                    f"under-observed")
            slot_vars.append(matches)
        return [LiftedAtom(ground[0], combo, True)
                for combo in product(*slot_vars)]

    first = occs.occurrences[0]
    first_binding = bindings[0]
    added0 = sorted(first.successor.atoms - first.state.atoms)
    deleted0 = sorted(first.state.atoms - first.successor.atoms)
    add_candidates: List[LiftedAtom] = []
    for ground in added0:
        add_candidates.extend(lift(ground, first_binding, first))
    del_candidates: List[LiftedAtom] = []
    for ground in deleted0:
        del_candidates.extend(lift(ground, first_binding, first))

    def ground_atom(atom: LiftedAtom, binding: Assignment) -> Tuple[str, ...]:
        return (atom.predicate, *(binding[r] for r in atom.args))

    adds: List[LiftedAtom] = []
    for atom in dict.fromkeys(add_candidates):
        if all(ground_atom(atom, bindings[k]) not in occ.state
               and ground_atom(atom, bindings[k]) in occ.successor
               for k, occ in enumerate(occs.occurrences)):
            adds.append(atom)
    dels: List[LiftedAtom] = []
    for atom in dict.fromkeys(del_candidates):
        if all(ground_atom(atom, bindings[k]) in occ.state
               and ground_atom(atom, bindings[k]) not in occ.successor
               for k, occ in enumerate(occs.occurrences)):
            dels.append(atom)

    for k, occ in enumerate(occs.occurrences):
        grounded_adds = {ground_atom(a, bindings[k]) for a in adds}
        grounded_dels = {ground_atom(a, bindings[k]) for a in dels}
        if grounded_adds != occ.successor.atoms - occ.state.atoms or \
                grounded_dels != occ.state.atoms - occ.successor.atoms:
            missing = (occ.successor.atoms - occ.state.atoms) - grounded_adds
            missing |= (occ.state.atoms - occ.successor.atoms) - grounded_dels
            raise LearnError(
                f"{occs.name}: effects do not cover the observed change at "
                f"occurrence {occ.action.render()} (uncovered: "
                f"{sorted(missing)})")
    return canonical_atom_order(adds), canonical_atom_order(dels)


# ---------------------------------------------------------------------------
# Whole-domain learning
# ---------------------------------------------------------------------------

def _learn_action(
    name: str,
    traces: Sequence[Trace],
    per_instance_types: Dict[int, TypeInfo],
    merged_types: TypeInfo,
    preds: Sequence[PredicateSig],
    instance_states: Dict[int, List[State]],
    max_atoms: int,
    minimize: bool,
    static_preds: Optional[Dict[int, FrozenSet[str]]] = None,
) -> Tuple[StripsPlusSchema, ActionReport]:
    started = time.perf_counter()
    occs = collect_occurrences(traces, name)
    if not occs.occurrences:
        raise LearnError(f"action {name} never occurs in the traces")
    report = ActionReport(name=name, arity=occs.arity,
                          occurrences=len(occs.occurrences))
    binding_query, bindings = synthesize_binding_query(
        occs, per_instance_types, merged_types, preds, instance_states,
        max_atoms=max_atoms, report=report, static_preds=static_preds)
    extras = mine_extra_preconditions(occs, bindings, binding_query,
                                      per_instance_types, merged_types, preds)
    report.extras_mined = len(extras)
    if minimize:
        extras = minimize_extras(occs, binding_query, extras,
                                 per_instance_types, merged_types,
                                 instance_states)
    report.extras_kept = len(extras)
    adds, dels = mine_effects(occs, bindings)
    first = occs.occurrences[0]
    param_types = tuple(merged_types.anchor_of_object(o)
                        for o in first.action.args)
    schema = StripsPlusSchema(
        name=name,
        params=tuple(f"x{i + 1}" for i in range(occs.arity)),
        param_types=param_types,
        binding=binding_query,
        extra_pre=tuple(extras),
        add=tuple(adds),
        delete=tuple(dels),
    )
    report.seconds = time.perf_counter() - started
    return schema, report


_FORK_CONTEXT: Dict[str, object] = {}


def _fork_worker(name: str):
    ctx = _FORK_CONTEXT
    try:
        return name, _learn_action(
            name, ctx["traces"], ctx["per_instance_types"],
            ctx["merged_types"], ctx["preds"], ctx["instance_states"],
            ctx["max_atoms"], ctx["minimize"], ctx["static_preds"]), None
    except LearnError as exc:
        return name, None, str(exc)


def learn_domain(
    traces: Sequence[Trace],
    max_atoms: int = 3,
    jobs: int = 1,
    minimize: bool = True,
    domain_name: Optional[str] = None,
) -> Tuple[Domain, LearnReport]:
    """Learn a STRIPS+ domain from one or more traces of a single hidden
    domain.  Per-action learning is independent; with jobs > 1 the actions
    are distributed over forked workers and merged by name."""
    if not traces:
        raise LearnError("no input traces")
    started = time.perf_counter()
    per_instance_types = {
        idx: TypeInfo.from_states(trace.states(), dict(trace.objects))
        for idx, trace in enumerate(traces)
    }
    merged_types = TypeInfo.from_traces(traces)
    preds = _predicate_sigs(traces, merged_types)
    instance_states = {idx: trace.states() for idx, trace in enumerate(traces)}
    static_preds = {idx: static_predicates(states)
                    for idx, states in instance_states.items()}
    names = sorted({action.name for trace in traces
                    for action, _ in trace.steps})
    if not names:
        raise LearnError("traces contain no action steps")

    results: Dict[str, Tuple[StripsPlusSchema, ActionReport]] = {}
    failures: Dict[str, str] = {}
    if jobs > 1 and len(names) > 1:
        import multiprocessing as mp

        _FORK_CONTEXT.update(
            traces=traces, per_instance_types=per_instance_types,
            merged_types=merged_types, preds=preds,
            instance_states=instance_states, max_atoms=max_atoms,
            minimize=minimize, static_preds=static_preds)
        with mp.get_context("fork").Pool(min(jobs, len(names))) as pool:
            for name, result, error in pool.map(_fork_worker, names):
                if error is not None:
                    failures[name] = error
                else:
                    results[name] = result
        _FORK_CONTEXT.clear()
    else:
        for name in names:
            try:
                results[name] = _learn_action(
                    name, traces, per_instance_types, merged_types, preds,
                    instance_states, max_atoms, minimize, static_preds)
            except LearnError as exc:
                failures[name] = str(exc)
    if failures:
        details = "; ".join(f"{n}: {msg}" for n, msg in sorted(failures.items()))
        raise LearnError(f"learning failed for {len(failures)} actions: {details}")

    report = LearnReport(max_atoms=max_atoms)
    schemas = []
    for name in names:
        schema, action_report = results[name]
        schemas.append(schema)
        report.actions.append(action_report)
    report.seconds = time.perf_counter() - started
    domain = Domain(
        name=domain_name or f"{traces[0].domain_name}-learned",
        flavor=FLAVOR_STRIPSPLUS,
        predicates=tuple(preds),
        schemas=tuple(schemas),
    )
    return domain, report
