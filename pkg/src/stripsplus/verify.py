"""Verification protocol: sample reachable states from a fresh instance,
enumerate ground actions over the hidden domain's typed universe, and compare
applicability and successor states between the hidden and learned domains.

Successors are compared on the learned domain's declared (observed)
predicates, so incomplete-state models verify against their own observation
language.
"""

from __future__ import annotations

import hashlib
import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .engine import (
    ModelIntegrityError,
    MutableTypeInfo,
    TypeInfo,
    enumerate_applicable,
    param_domain,
    plus_applicable,
    plus_successor,
    strips_applicable,
    strips_successor,
)
from .model import (
    Domain,
    GroundAction,
    LiftedAtom,
    Problem,
    State,
    StratifiedQuery,
    StripsPlusSchema,
    StripsSchema,
    Subquery,
    Trace,
    VariableRef,
    z_ref,
)

KIND_MISSING_POSITIVE = "applicability+"   # hidden applicable, learned not
KIND_SPURIOUS_POSITIVE = "applicability-"  # learned applicable, hidden not
KIND_EFFECT = "effect"


def state_digest(state: State) -> str:
    text = "\n".join(" ".join(atom) for atom in state.sorted_atoms())
    return hashlib.sha1(text.encode()).hexdigest()[:12]


@dataclass
class Mismatch:
    state: str  # digest
    action: GroundAction
    kind: str
    detail: str = ""


@dataclass
class VerifyReport:
    pairs_tested: int = 0
    matches: int = 0
    mismatches: List[Mismatch] = field(default_factory=list)
    per_action: Dict[str, Tuple[int, int]] = field(default_factory=dict)
    states_sampled: int = 0
    seconds: float = 0.0

    @property
    def score(self) -> float:
        if self.pairs_tested == 0:
            return 0.0
        return 100.0 * self.matches / self.pairs_tested

    @property
    def perfect(self) -> bool:
        return self.pairs_tested > 0 and self.matches == self.pairs_tested

    def render(self) -> str:
        lines = [f"pairs={self.pairs_tested} matches={self.matches} "
                 f"score={self.score:.2f}% states={self.states_sampled} "
                 f"time={self.seconds:.2f}s"]
        for name in sorted(self.per_action):
            tested, matched = self.per_action[name]
            lines.append(f"  {name}: {matched}/{tested}")
        for mm in self.mismatches[:50]:
            lines.append(f"  MISMATCH {mm.kind} {mm.action.render()} "
                         f"state={mm.state} {mm.detail}")
        if len(self.mismatches) > 50:
            lines.append(f"  ... {len(self.mismatches) - 50} more mismatches")
        return "\n".join(lines) + "\n"


def _state_stream(problem: Problem, hidden: Domain, walk_length: int,
                  seed: int) -> Iterator[State]:
    """Endless stream of reachable states: seeded random walks from init,
    restarted every `walk_length` steps (and at dead ends), every visited
    state yielded."""
    rng = random.Random(seed)
    tracker = MutableTypeInfo(dict(problem.objects))
    while True:
        state = problem.init
        yield state
        for _ in range(walk_length):
            tracker.observe(state)
            applicable = enumerate_applicable(hidden, problem, state,
                                              tracker.snapshot())
            if not applicable:
                break
            action, zbind = applicable[rng.randrange(len(applicable))]
            schema = hidden.schema(action.name)
            if isinstance(schema, StripsSchema):
                state = strips_successor(state, schema, action.args)
            else:
                state = plus_successor(state, schema, action.args, zbind)
            yield state


def sample_states(problem: Problem, hidden: Domain, count: int,
                  walk_length: int, seed: int) -> List[State]:
    """First `count` states of the walk stream (duplicates allowed)."""
    if count <= 0:
        return []
    stream = _state_stream(problem, hidden, walk_length, seed)
    return list(itertools.islice(stream, count))


def _applicable_successor(
    domain: Domain, name: str, args: Tuple[str, ...], state: State,
    types: TypeInfo,
) -> Tuple[bool, Optional[State], Optional[str]]:
    """(applicable, successor, fault) for one grounding under one domain."""
    try:
        schema = domain.schema(name)
    except KeyError:
        return False, None, "action missing from domain"
    try:
        if isinstance(schema, StripsSchema):
            if not strips_applicable(schema, args, state):
                return False, None, None
            return True, strips_successor(state, schema, args), None
        zbind = plus_applicable(schema, args, state, types)
        if zbind is None:
            return False, None, None
        return True, plus_successor(state, schema, args, zbind), None
    except ModelIntegrityError as exc:
        return False, None, str(exc)


def compare_on_state(
    state: State,
    hidden: Domain,
    learned: Domain,
    types_full: TypeInfo,
    types_observed: TypeInfo,
    observed: Set[str],
    groundings: Dict[str, List[Tuple[str, ...]]],
) -> List[Tuple[GroundAction, bool, Optional[Mismatch]]]:
    """Compare every supplied grounding on one state.  Returns one record per
    pair: (action, matched, mismatch-or-None)."""
    out: List[Tuple[GroundAction, bool, Optional[Mismatch]]] = []
    digest = state_digest(state)
    projected = state.project({p.name for p in hidden.predicates} - observed)
    learned_names = {s.name for s in learned.schemas}
    for name in sorted(groundings):
        for args in groundings[name]:
            action = GroundAction(name, args)
            h_app, h_succ, h_fault = _applicable_successor(
                hidden, name, args, state, types_full)
            if h_fault:
                out.append((action, False, Mismatch(digest, action, "integrity",
                                                    f"hidden: {h_fault}")))
                continue
            if name not in learned_names:
                if h_app:
                    out.append((action, False,
                                Mismatch(digest, action, KIND_MISSING_POSITIVE,
                                         "action not learned")))
                else:
                    out.append((action, True, None))
                continue
            l_app, l_succ, l_fault = _applicable_successor(
                learned, name, args, projected, types_observed)
            if l_fault:
                out.append((action, False, Mismatch(digest, action, "integrity",
                                                    f"learned: {l_fault}")))
                continue
            if h_app != l_app:
                kind = KIND_MISSING_POSITIVE if h_app else KIND_SPURIOUS_POSITIVE
                out.append((action, False, Mismatch(digest, action, kind)))
                continue
            if not h_app:
                out.append((action, True, None))
                continue
            h_view = h_succ.project({p.name for p in hidden.predicates} - observed)
            if h_view == l_succ:
                out.append((action, True, None))
            else:
                diff = (h_view.atoms ^ l_succ.atoms)
                out.append((action, False,
                            Mismatch(digest, action, KIND_EFFECT,
                                     f"differs on {sorted(diff)[:4]}")))
    return out


def verify_equivalence(
    problem: Problem,
    hidden: Domain,
    learned: Domain,
    n_pairs: int,
    seed: int,
    walk_length: int = 100,
    stop_on_first_mismatch: bool = False,
) -> VerifyReport:
    """Accumulate n_pairs (state, ground action) comparisons, split evenly
    across action names (remainder to the earliest names in canonical order).
    """
    started = time.perf_counter()
    names = sorted(s.name for s in hidden.schemas)
    quotas: Dict[str, int] = {}
    base, rem = divmod(n_pairs, len(names))
    for i, name in enumerate(names):
        quotas[name] = base + (1 if i < rem else 0)

    observed = {p.name for p in learned.predicates}
    stream = _state_stream(problem, hidden, walk_length, seed)
    pool: List[State] = []

    def grounding_counts(types: TypeInfo) -> Dict[str, int]:
        counts = {}
        for schema in hidden.schemas:
            total = 1
            for t in schema.param_types:
                total *= max(1, len(param_domain(t, problem, types)))
            counts[schema.name] = total
        return counts

    # grow the pool until every action's quota is coverable, then freeze the
    # type info so every comparison sees the same quantification domains
    pool.extend(itertools.islice(stream, 32))
    while True:
        types_full = TypeInfo.from_states(pool + [problem.init],
                                          dict(problem.objects))
        counts = grounding_counts(types_full)
        needed = max((quotas[n] + counts[n] - 1) // counts[n] for n in names)
        if len(pool) >= needed:
            break
        pool.extend(itertools.islice(stream, needed - len(pool)))
    types_full = TypeInfo.from_states(pool + [problem.init],
                                      dict(problem.objects))
    hidden_preds = {p.name for p in hidden.predicates}
    projected_pool = [s.project(hidden_preds - observed) for s in pool]
    types_observed = TypeInfo.from_states(
        projected_pool + [problem.init.project(hidden_preds - observed)],
        dict(problem.objects))

    domains_by_action = {
        schema.name: [sorted(param_domain(t, problem, types_full))
                      for t in schema.param_types]
        for schema in hidden.schemas
    }

    report = VerifyReport(states_sampled=len(pool))
    remaining = dict(quotas)
    for state in pool:
        if all(v == 0 for v in remaining.values()):
            break
        groundings: Dict[str, List[Tuple[str, ...]]] = {}
        for name in names:
            if remaining[name] <= 0:
                continue
            rows = list(itertools.islice(
                itertools.product(*domains_by_action[name]), remaining[name]))
            groundings[name] = [tuple(r) for r in rows]
        records = compare_on_state(state, hidden, learned, types_full,
                                   types_observed, observed, groundings)
        for action, matched, mismatch in records:
            remaining[action.name] -= 1
            report.pairs_tested += 1
            tested, ok = report.per_action.get(action.name, (0, 0))
            if matched:
                report.matches += 1
                report.per_action[action.name] = (tested + 1, ok + 1)
            else:
                report.per_action[action.name] = (tested + 1, ok)
                report.mismatches.append(mismatch)
                if stop_on_first_mismatch:
                    report.seconds = time.perf_counter() - started
                    return report
    report.seconds = time.perf_counter() - started
    return report


# ---------------------------------------------------------------------------
# Mutation sensitivity
# ---------------------------------------------------------------------------

def _rebuild(domain: Domain, name: str, schema: StripsPlusSchema) -> Domain:
    schemas = tuple(schema if s.name == name else s for s in domain.schemas)
    return Domain(domain.name, domain.flavor, domain.predicates, schemas,
                  domain.types)


def single_atom_mutations(domain: Domain) -> List[Tuple[str, Domain]]:
    """All well-formed single-atom mutants: drop one extra precondition, drop
    one binding atom (from multi-atom strata), drop one effect atom, or remap
    one implicit index.  A correct learned model must lose to every one of
    them somewhere on the verification instance."""
    mutants: List[Tuple[str, Domain]] = []
    seen: Set[str] = set()

    def push(label: str, schema: StripsPlusSchema) -> None:
        try:
            mutated = _rebuild(domain, schema.name, schema)
        except Exception:
            return
        key = repr(sorted((s.name, s.params, s.binding, s.extra_pre, s.add,
                           s.delete) for s in mutated.schemas))
        if key not in seen:
            seen.add(key)
            mutants.append((label, mutated))

    for schema in domain.schemas:
        for i, atom in enumerate(schema.extra_pre):
            extras = schema.extra_pre[:i] + schema.extra_pre[i + 1:]
            push(f"{schema.name}: drop precondition {atom.render()}",
                 StripsPlusSchema(schema.name, schema.params,
                                  schema.param_types, schema.binding, extras,
                                  schema.add, schema.delete))
        for si, sq in enumerate(schema.binding.subqueries):
            if len(sq.atoms) < 2:
                continue
            for ai, atom in enumerate(sq.atoms):
                atoms = sq.atoms[:ai] + sq.atoms[ai + 1:]
                if not any(a.mentions(z_ref(sq.introduces)) for a in atoms):
                    continue
                subqueries = list(schema.binding.subqueries)
                subqueries[si] = Subquery(atoms, sq.introduces)
                push(f"{schema.name}: drop binding atom {atom.render()}",
                     StripsPlusSchema(schema.name, schema.params,
                                      schema.param_types,
                                      StratifiedQuery(tuple(subqueries)),
                                      schema.extra_pre, schema.add,
                                      schema.delete))
        for label, group in (("add", schema.add), ("del", schema.delete)):
            for i, atom in enumerate(group):
                shrunk = group[:i] + group[i + 1:]
                add = shrunk if label == "add" else schema.add
                delete = shrunk if label == "del" else schema.delete
                push(f"{schema.name}: drop {label} effect {atom.render()}",
                     StripsPlusSchema(schema.name, schema.params,
                                      schema.param_types, schema.binding,
                                      schema.extra_pre, add, delete))
        n_z = schema.num_implicit
        if n_z >= 2:
            for kind, group in (("add", schema.add), ("del", schema.delete),
                                ("pre", schema.extra_pre)):
                for i, atom in enumerate(group):
                    z_positions = [p for p, r in enumerate(atom.args)
                                   if r.kind == "z"]
                    if not z_positions:
                        continue
                    pos = z_positions[0]
                    current = atom.args[pos].index
                    for other in range(1, n_z + 1):
                        if other == current:
                            continue
                        args = list(atom.args)
                        args[pos] = z_ref(other)
                        swapped = LiftedAtom(atom.predicate, tuple(args),
                                             atom.positive)
                        new_group = list(group)
                        new_group[i] = swapped
                        add, delete, extra = schema.add, schema.delete, schema.extra_pre
                        if kind == "add":
                            add = tuple(new_group)
                        elif kind == "del":
                            delete = tuple(new_group)
                        else:
                            extra = tuple(new_group)
                        push(f"{schema.name}: swap z{current}->z{other} in "
                             f"{kind} {atom.render()}",
                             StripsPlusSchema(schema.name, schema.params,
                                              schema.param_types,
                                              schema.binding, extra, add,
                                              delete))
    return mutants


def compare_against_strips(
    problem: Problem,
    original: Domain,
    hidden: Domain,
    translation,
    pairs: int,
    seed: int,
    walk_length: int = 100,
) -> Tuple[int, int]:
    """Check the translation itself: every original STRIPS ground action
    applicable in a sampled state must, projected to the kept arguments, be
    applicable under the STRIPS+ domain with the same successor.  Reported
    only; never part of the verification score."""
    kept = {e.name: e.kept_positions() for e in translation.schemas}
    stream = _state_stream(problem, hidden, walk_length, seed)
    tracker = MutableTypeInfo(dict(problem.objects))
    agree = total = 0
    for state in stream:
        if total >= pairs:
            break
        tracker.observe(state)
        types = tracker.snapshot()
        from .engine import enumerate_applicable as enum_app

        for action, _ in enum_app(original, problem, state, types):
            if total >= pairs:
                break
            total += 1
            schema = original.schema(action.name)
            projected = tuple(action.args[i - 1] for i in kept[action.name])
            h_app, h_succ, fault = _applicable_successor(
                hidden, action.name, projected, state, types)
            if fault or not h_app:
                continue
            if h_succ == strips_successor(state, schema, action.args):
                agree += 1
    return agree, total


# ---------------------------------------------------------------------------
# Denotation capture metrics
# ---------------------------------------------------------------------------

def z_denotations(domain: Domain, pre_states: Sequence[State],
                  actions: Sequence[GroundAction],
                  types: TypeInfo) -> Dict[str, List[Dict[int, str]]]:
    """Per action name, per occurrence (in trace order): the denotation of
    each implicit variable on the given pre-states."""
    out: Dict[str, List[Dict[int, str]]] = {}
    for state, action in zip(pre_states, actions):
        schema = domain.schema(action.name)
        zbind = plus_applicable(schema, action.args, state, types)
        if zbind is None:
            raise ModelIntegrityError(action.name, 0, ["<inapplicable>"])
        out.setdefault(action.name, []).append(
            {ref.index: obj for ref, obj in zbind.items()})
    return out


@dataclass
class CaptureMetrics:
    hidden_z: int = 0
    learned_z: int = 0
    uncaptured_hidden: int = 0   # |x' \ z|
    unused_learned: int = 0      # |z \ x'|

    @property
    def captured(self) -> bool:
        return self.uncaptured_hidden == 0


def capture_metrics(
    hidden: Domain,
    learned: Domain,
    problem: Problem,
    trace: Trace,
) -> CaptureMetrics:
    """Theorem-1 check: every hidden implicit variable must be denotation-
    identical to some learned implicit variable at every training occurrence.
    """
    from .tracegen import replay

    full_states = [problem.init] + replay(problem, hidden, trace)
    actions = [a for a, _ in trace.steps]
    pre_full = full_states[:-1]
    hidden_types = TypeInfo.from_states(full_states, dict(problem.objects))
    observed = {p.name for p in learned.predicates}
    all_preds = {p.name for p in hidden.predicates}
    pre_proj = [s.project(all_preds - observed) for s in pre_full]
    learned_types = TypeInfo.from_states(
        [s.project(all_preds - observed) for s in full_states],
        dict(problem.objects))

    hidden_denote = z_denotations(hidden, pre_full, actions, hidden_types)
    learned_denote = z_denotations(learned, pre_proj, actions, learned_types)

    metrics = CaptureMetrics()
    for schema in hidden.schemas:
        h_rows = hidden_denote.get(schema.name, [])
        l_rows = learned_denote.get(schema.name, [])
        n_h = schema.num_implicit if hasattr(schema, "num_implicit") else 0
        try:
            l_schema = learned.schema(schema.name)
            n_l = l_schema.num_implicit
        except KeyError:
            n_l = 0
        metrics.hidden_z += n_h
        metrics.learned_z += n_l
        matched_learned: Set[int] = set()
        for j in range(1, n_h + 1):
            captured = False
            for k in range(1, n_l + 1):
                if h_rows and l_rows and all(
                        h[j] == l[k] for h, l in zip(h_rows, l_rows)):
                    captured = True
                    matched_learned.add(k)
            if not captured:
                metrics.uncaptured_hidden += 1
        for k in range(1, n_l + 1):
            if k not in matched_learned:
                covers_some = any(
                    h_rows and l_rows and all(h[j] == l[k] for h, l in
                                              zip(h_rows, l_rows))
                    for j in range(1, n_h + 1))
                if not covers_some:
                    metrics.unused_learned += 1
    return metrics
