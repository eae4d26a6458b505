"""Convert a STRIPS domain into a STRIPS+ domain by demoting explicit action
arguments that are determined by the remaining arguments and the schema's own
preconditions, certified against traces of the original domain.

The detection is a simplification of the learner's stratum search: candidate
atoms come only from the schema's declared preconditions (renamed), tried in
declaration order, greedily and without backtracking over the demotion set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .engine import TypeInfo, atom_values, stratum_values
from .model import (
    FLAVOR_STRIPS,
    FLAVOR_STRIPSPLUS,
    FREE,
    Assignment,
    Domain,
    LiftedAtom,
    Occurrence,
    OccurrenceSet,
    State,
    StratifiedQuery,
    StripsPlusSchema,
    StripsSchema,
    Subquery,
    Trace,
    VariableRef,
    canonical_atom_order,
    x_ref,
    z_ref,
)
from .synth import collect_occurrences, static_predicates


class TranslateError(Exception):
    pass


@dataclass
class SchemaTranslation:
    """How one schema's parameters were split into kept and demoted."""

    name: str
    orig_params: Tuple[str, ...]
    kept: List[int] = field(default_factory=list)      # original indices, 1-based
    demoted: List[Tuple[int, int, Tuple[str, ...]]] = field(default_factory=list)
    unobserved: bool = False

    def kept_positions(self) -> List[int]:
        return list(self.kept)


@dataclass
class TranslateReport:
    schemas: List[SchemaTranslation] = field(default_factory=list)

    def render(self) -> str:
        lines = []
        for entry in self.schemas:
            if entry.unobserved:
                lines.append(f"action {entry.name}: never observed, passed "
                             f"through unchanged")
                continue
            kept = ", ".join(entry.orig_params[i - 1] for i in entry.kept) or "-"
            lines.append(f"action {entry.name}: kept [{kept}]")
            for orig_idx, z_idx, atoms in entry.demoted:
                lines.append(f"  {entry.orig_params[orig_idx - 1]} -> z{z_idx}: "
                             f"{' & '.join(atoms)}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = [
            {
                "action": e.name,
                "params": list(e.orig_params),
                "kept": e.kept,
                "demoted": [
                    {"param": i, "z": z, "stratum": list(atoms)}
                    for i, z, atoms in e.demoted
                ],
                "unobserved": e.unobserved,
            }
            for e in self.schemas
        ]
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @staticmethod
    def from_json(text: str) -> "TranslateReport":
        report = TranslateReport()
        for item in json.loads(text):
            entry = SchemaTranslation(item["action"], tuple(item["params"]))
            entry.kept = list(item["kept"])
            entry.demoted = [(d["param"], d["z"], tuple(d["stratum"]))
                             for d in item["demoted"]]
            entry.unobserved = item["unobserved"]
            report.schemas.append(entry)
        return report


def _rename(atom: LiftedAtom, mapping: Dict[int, VariableRef]) -> LiftedAtom:
    return LiftedAtom(atom.predicate,
                      tuple(mapping[r.index] for r in atom.args),
                      atom.positive)


def _value_sets(atoms: Sequence[LiftedAtom], occ: Occurrence,
                binding: Assignment, types: TypeInfo,
                new: VariableRef) -> Optional[FrozenSet[str]]:
    values: Optional[FrozenSet[str]] = None
    for atom in atoms:
        vals = atom_values(atom, occ.state, types, binding, new)
        values = vals if values is None else values & vals
        if not values:
            return frozenset()
    return values if values is not None else frozenset()


def _constant_on_instances(
    strata: Sequence[Subquery],
    conj: Sequence[LiftedAtom],
    occs: OccurrenceSet,
    denote: List[str],
    instance_states: Dict[int, List[State]],
    instance_args: Dict[int, List[Tuple[str, ...]]],
    per_instance_types: Dict[int, TypeInfo],
    static_preds: Dict[int, FrozenSet[str]],
    kept_of_args,
) -> bool:
    """Same pruning rule as the learner: a stratum whose variable denotes one
    fixed object across all evaluable states of every instance does not
    express a function of the state (single trucks, grid corners)."""
    per_instance: Dict[int, str] = {}
    for k, occ in enumerate(occs.occurrences):
        seen = per_instance.setdefault(occ.instance, denote[k])
        if seen != denote[k]:
            return False
    new = z_ref(len(strata) + 1)
    refs_prefix_z = any(r.kind == "z" and r != new
                        for a in conj for r in a.variables)
    if not refs_prefix_z and all(
            all(a.predicate in static_preds[inst] for a in conj)
            for inst in per_instance):
        return True
    for inst, expected in sorted(per_instance.items()):
        types = per_instance_types[inst]
        for state in instance_states[inst]:
            for full_args in instance_args[inst]:
                binding: Assignment = {}
                for new_idx, value in kept_of_args(full_args):
                    binding[x_ref(new_idx)] = value
                ok = True
                for sq in strata:
                    vals = stratum_values(sq, state, types, binding)
                    if len(vals) != 1:
                        ok = False
                        break
                    binding[z_ref(sq.introduces)] = next(iter(vals))
                if not ok:
                    continue
                values: Optional[FrozenSet[str]] = None
                for atom in conj:
                    vals = atom_values(atom, state, types, binding, new)
                    values = vals if values is None else values & vals
                    if not values:
                        break
                if values is None or len(values) != 1:
                    continue
                if next(iter(values)) != expected:
                    return False
    return True


def detect_determined_args(
    schema: StripsSchema,
    occs: OccurrenceSet,
    per_instance_types: Dict[int, TypeInfo],
    merged_types: TypeInfo,
    instance_states: Dict[int, List[State]],
    max_atoms: int = 3,
    static_preds: Optional[Dict[int, FrozenSet[str]]] = None,
) -> SchemaTranslation:
    """Greedy declaration-order demotion.

    A parameter is demotable when some conjunction of its own (renamed)
    precondition atoms pins its observed value uniquely at every occurrence,
    given the kept parameters and previously demoted ones; parameters not yet
    processed appear as free slots.  Instance-constant strata are rejected:
    the learner would prune them, so demoting through one would make the
    argument unrecoverable.
    """
    if static_preds is None:
        static_preds = {inst: static_predicates(states)
                        for inst, states in instance_states.items()}
    entry = SchemaTranslation(schema.name, schema.params)
    if not occs.occurrences:
        entry.unobserved = True
        entry.kept = list(range(1, schema.arity + 1))
        return entry

    kept_new_index: Dict[int, int] = {}
    z_of_orig: Dict[int, int] = {}
    strata: List[Subquery] = []
    bindings: List[Assignment] = [{} for _ in occs.occurrences]
    instance_args: Dict[int, List[Tuple[str, ...]]] = {}
    for occ in occs.occurrences:
        rows = instance_args.setdefault(occ.instance, [])
        if occ.action.args not in rows:
            rows.append(occ.action.args)

    def kept_of_args(full_args: Tuple[str, ...]):
        return [(new_idx, full_args[orig - 1])
                for orig, new_idx in kept_new_index.items()]

    for orig_idx in range(1, schema.arity + 1):
        new_z = len(strata) + 1
        mapping: Dict[int, VariableRef] = {}
        for j in range(1, schema.arity + 1):
            if j == orig_idx:
                mapping[j] = z_ref(new_z)
            elif j in kept_new_index:
                mapping[j] = x_ref(kept_new_index[j])
            elif j in z_of_orig:
                mapping[j] = z_ref(z_of_orig[j])
            else:
                mapping[j] = FREE
        pool = canonical_atom_order({
            _rename(atom, mapping)
            for atom in schema.pre
            if any(r.index == orig_idx for r in atom.args)
        })
        found: Optional[Tuple[Subquery, List[str]]] = None
        if pool:
            found = _search_stratum(pool, occs, bindings, per_instance_types,
                                    strata, new_z, orig_idx, instance_states,
                                    instance_args, static_preds, kept_of_args,
                                    max_atoms)
        if found is None:
            kept_new_index[orig_idx] = len(kept_new_index) + 1
            entry.kept.append(orig_idx)
            for k, occ in enumerate(occs.occurrences):
                bindings[k][x_ref(kept_new_index[orig_idx])] = \
                    occ.action.args[orig_idx - 1]
        else:
            subquery, denote = found
            strata.append(subquery)
            z_of_orig[orig_idx] = new_z
            entry.demoted.append(
                (orig_idx, new_z, tuple(a.render() for a in subquery.atoms)))
            for k in range(len(occs.occurrences)):
                bindings[k][z_ref(new_z)] = denote[k]
    return entry


def _search_stratum(pool, occs, bindings, per_instance_types, strata, new_z,
                    orig_idx, instance_states, instance_args, static_preds,
                    kept_of_args, max_atoms
                    ) -> Optional[Tuple[Subquery, List[str]]]:
    new = z_ref(new_z)
    seen: Set[FrozenSet[int]] = set()
    current: List[FrozenSet[int]] = [frozenset()]
    cache: Dict[Tuple[int, int], FrozenSet[str]] = {}

    def values_for(atom_idx: int, occ_idx: int) -> FrozenSet[str]:
        key = (atom_idx, occ_idx)
        got = cache.get(key)
        if got is None:
            occ = occs.occurrences[occ_idx]
            got = atom_values(pool[atom_idx], occ.state,
                              per_instance_types[occ.instance],
                              bindings[occ_idx], new)
            cache[key] = got
        return got

    while current:
        next_level: List[FrozenSet[int]] = []
        for conj in current:
            for idx in range(len(pool)):
                if idx in conj:
                    continue
                grown = conj | {idx}
                if grown in seen:
                    continue
                seen.add(grown)
                denote: List[str] = []
                unique = True
                valid = True
                for occ_idx, occ in enumerate(occs.occurrences):
                    values: Optional[FrozenSet[str]] = None
                    for atom_idx in grown:
                        vals = values_for(atom_idx, occ_idx)
                        values = vals if values is None else values & vals
                        if not values:
                            break
                    if not values:
                        valid = False
                        break
                    if len(values) > 1:
                        unique = False
                        denote.append("")
                    else:
                        denote.append(next(iter(values)))
                if not valid:
                    continue
                if not unique:
                    if len(grown) < max_atoms:
                        next_level.append(grown)
                    continue
                actual = [occ.action.args[orig_idx - 1]
                          for occ in occs.occurrences]
                if denote != actual:
                    # unique but denoting some other object everywhere: this
                    # conjunction cannot recover the argument
                    continue
                conj_atoms = [pool[i] for i in sorted(grown)]
                if _constant_on_instances(strata, conj_atoms, occs, denote,
                                          instance_states, instance_args,
                                          per_instance_types, static_preds,
                                          kept_of_args):
                    continue
                return Subquery(tuple(conj_atoms), new_z), denote
        current = next_level
    return None


def translate_domain(
    strips: Domain,
    traces: Sequence[Trace],
    max_atoms: int = 3,
) -> Tuple[Domain, TranslateReport]:
    """Per-schema demotion of determined arguments; preconditions and effects
    are re-expressed over the kept x and new z variables (pure renaming, no
    invented atoms and no free variables in the output)."""
    if strips.flavor != FLAVOR_STRIPS:
        raise TranslateError("translate_domain expects a STRIPS domain")
    if not traces:
        raise TranslateError("translation requires traces of the original domain")
    per_instance_types = {
        idx: TypeInfo.from_states(trace.states(), dict(trace.objects))
        for idx, trace in enumerate(traces)
    }
    merged_types = TypeInfo.from_traces(traces)
    instance_states = {idx: trace.states() for idx, trace in enumerate(traces)}
    static_preds = {idx: static_predicates(states)
                    for idx, states in instance_states.items()}

    report = TranslateReport()
    schemas: List[StripsPlusSchema] = []
    for schema in strips.schemas:
        occs = collect_occurrences(traces, schema.name)
        entry = detect_determined_args(schema, occs, per_instance_types,
                                       merged_types, instance_states,
                                       max_atoms=max_atoms,
                                       static_preds=static_preds)
        report.schemas.append(entry)
        schemas.append(_apply_translation(schema, entry, merged_types))
    plus = Domain(strips.name, FLAVOR_STRIPSPLUS, strips.predicates,
                  tuple(schemas), strips.types)
    return plus, report


def _apply_translation(schema: StripsSchema, entry: SchemaTranslation,
                       types: TypeInfo) -> StripsPlusSchema:
    mapping: Dict[int, VariableRef] = {}
    for new_idx, orig_idx in enumerate(entry.kept, start=1):
        mapping[orig_idx] = x_ref(new_idx)
    for orig_idx, z_idx, _ in entry.demoted:
        mapping[orig_idx] = z_ref(z_idx)

    strata = tuple(
        Subquery(tuple(LiftedAtom.parse(a) for a in atoms), z_idx)
        for _, z_idx, atoms in entry.demoted
    )
    stratum_atoms = {a for sq in strata for a in sq.atoms}
    extra = [
        renamed for atom in schema.pre
        if (renamed := _rename(atom, mapping)) not in stratum_atoms
    ]
    params: List[str] = []
    param_types: List[str] = []
    for orig_idx in entry.kept:
        params.append(schema.params[orig_idx - 1])
        param_types.append(_param_anchor(schema, orig_idx, types))
    return StripsPlusSchema(
        name=schema.name,
        params=tuple(params),
        param_types=tuple(param_types),
        binding=StratifiedQuery(strata),
        extra_pre=tuple(extra),
        add=tuple(_rename(a, mapping) for a in schema.add),
        delete=tuple(_rename(a, mapping) for a in schema.delete),
    )


def _param_anchor(schema: StripsSchema, orig_idx: int, types: TypeInfo) -> str:
    """Ground-enumeration universe for a kept parameter: the type class of a
    positive precondition slot that mentions it.  Applicability then implies
    the object was observed in that class, so no applicable grounding is
    missed."""
    for atom in schema.pre:
        for pos, ref in enumerate(atom.args, start=1):
            if ref.index == orig_idx:
                anchor = types.anchor(atom.predicate, pos)
                if anchor != "object":
                    return anchor
    return "object"
