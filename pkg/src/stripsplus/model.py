"""Core domain types: predicates, variables, lifted atoms, queries, schemas,
domains, problems, states and traces.

All values are immutable after construction and safe to share across
concurrent tasks.  Ground atoms are plain tuples ``(pred, obj1, obj2, ...)``
for speed; everything lifted is a frozen dataclass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

GroundAtom = Tuple[str, ...]  # (predicate, obj1, ..., objK)

# Variable kinds.  Explicit action arguments are "x", implicit determined
# arguments are "z", anonymous free variables are "y".  Free variables never
# carry an identity: in a positive atom each one is an independent
# existential, in a negative atom each one is read universally.
KIND_EXPLICIT = "x"
KIND_IMPLICIT = "z"
KIND_FREE = "y"

_KIND_RANK = {KIND_EXPLICIT: 0, KIND_IMPLICIT: 1, KIND_FREE: 2}


class ModelError(Exception):
    """Malformed model value (bad arity, dangling variable, ...)."""


@dataclass(frozen=True, slots=True)
class VariableRef:
    """A slot in a lifted atom: x_i, z_j or an anonymous free variable."""

    kind: str
    index: int = 0  # 1-based for x/z, always 0 for free slots

    def __post_init__(self) -> None:
        if self.kind not in _KIND_RANK:
            raise ModelError(f"bad variable kind {self.kind!r}")
        if self.kind == KIND_FREE and self.index != 0:
            raise ModelError("free variables are anonymous (index must be 0)")
        if self.kind != KIND_FREE and self.index < 1:
            raise ModelError(f"{self.kind} index must be >= 1")

    @property
    def is_free(self) -> bool:
        return self.kind == KIND_FREE

    def sort_key(self) -> Tuple[int, int]:
        return (_KIND_RANK[self.kind], self.index)

    def render(self) -> str:
        if self.kind == KIND_FREE:
            return "_"
        if self.kind == KIND_IMPLICIT:
            return f"{self.index}z"
        return str(self.index)

    @staticmethod
    def parse(token: str) -> "VariableRef":
        if token == "_":
            return FREE
        if token.endswith("z"):
            return VariableRef(KIND_IMPLICIT, int(token[:-1]))
        return VariableRef(KIND_EXPLICIT, int(token))

    def __str__(self) -> str:
        return self.render()


FREE = VariableRef(KIND_FREE, 0)


def x_ref(i: int) -> VariableRef:
    return VariableRef(KIND_EXPLICIT, i)


def z_ref(j: int) -> VariableRef:
    return VariableRef(KIND_IMPLICIT, j)


@dataclass(frozen=True, slots=True)
class PredicateSig:
    """A predicate symbol with its arity and per-position type labels."""

    name: str
    arity: int
    position_types: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.position_types:
            object.__setattr__(self, "position_types", ("object",) * self.arity)
        if len(self.position_types) != self.arity:
            raise ModelError(f"predicate {self.name}: arity {self.arity} but "
                             f"{len(self.position_types)} position types")


@dataclass(frozen=True, slots=True)
class LiftedAtom:
    """A signed predicate pattern over x/z/free slots.

    Positive atoms read free slots existentially, negative atoms read them
    universally over the typed object domain of the slot.
    """

    predicate: str
    args: Tuple[VariableRef, ...]
    positive: bool = True

    def negate(self) -> "LiftedAtom":
        return LiftedAtom(self.predicate, self.args, not self.positive)

    @property
    def variables(self) -> Tuple[VariableRef, ...]:
        return tuple(a for a in self.args if not a.is_free)

    def mentions(self, ref: VariableRef) -> bool:
        return ref in self.args

    def free_count(self) -> int:
        return sum(1 for a in self.args if a.is_free)

    def sort_key(self) -> Tuple[str, int, Tuple[Tuple[int, int], ...]]:
        return (self.predicate, 0 if self.positive else 1,
                tuple(a.sort_key() for a in self.args))

    def render(self) -> str:
        body = f"{self.predicate}({','.join(a.render() for a in self.args)})"
        return body if self.positive else "!" + body

    @staticmethod
    def parse(text: str) -> "LiftedAtom":
        text = text.strip()
        positive = True
        if text.startswith("!"):
            positive = False
            text = text[1:]
        if not text.endswith(")") or "(" not in text:
            raise ModelError(f"bad atom pattern {text!r}")
        name, rest = text[:-1].split("(", 1)
        args = tuple(VariableRef.parse(t.strip())
                     for t in rest.split(",") if t.strip()) if rest.strip() else ()
        return LiftedAtom(name, args, positive)

    def __str__(self) -> str:
        return self.render()


def canonical_atom_order(atoms: Iterable[LiftedAtom]) -> List[LiftedAtom]:
    """Total deterministic order: predicate name, then polarity (positive
    first), then the slot-kind/index tuple."""
    return sorted(atoms, key=LiftedAtom.sort_key)


@dataclass(frozen=True, slots=True)
class Subquery:
    """One stratum: the atoms that pin down a single new implicit variable."""

    atoms: Tuple[LiftedAtom, ...]
    introduces: int

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ModelError("empty subquery")
        new = z_ref(self.introduces)
        if not any(a.mentions(new) for a in self.atoms):
            raise ModelError(f"stratum {self.introduces} never mentions z{self.introduces}")
        for a in self.atoms:
            for ref in a.variables:
                if ref.kind == KIND_IMPLICIT and ref.index > self.introduces:
                    raise ModelError(
                        f"stratum {self.introduces} mentions later variable z{ref.index}")
        object.__setattr__(self, "atoms", tuple(canonical_atom_order(self.atoms)))


@dataclass(frozen=True, slots=True)
class StratifiedQuery:
    """Ordered subqueries Q_1..Q_n, the k-th determining z_k."""

    subqueries: Tuple[Subquery, ...] = ()

    def __post_init__(self) -> None:
        for k, sq in enumerate(self.subqueries, start=1):
            if sq.introduces != k:
                raise ModelError(f"stratum at position {k} introduces z{sq.introduces}")

    @property
    def num_implicit(self) -> int:
        return len(self.subqueries)

    def all_atoms(self) -> List[LiftedAtom]:
        return [a for sq in self.subqueries for a in sq.atoms]


@dataclass(frozen=True, slots=True)
class StripsSchema:
    """A classical STRIPS action schema (positive conjunctive preconditions)."""

    name: str
    params: Tuple[str, ...]  # parameter names, without '?'
    param_types: Tuple[str, ...]
    pre: Tuple[LiftedAtom, ...]
    add: Tuple[LiftedAtom, ...]
    delete: Tuple[LiftedAtom, ...]

    def __post_init__(self) -> None:
        if len(self.params) != len(self.param_types):
            raise ModelError(f"{self.name}: params/types length mismatch")
        for group, atoms in (("pre", self.pre), ("add", self.add), ("del", self.delete)):
            for a in atoms:
                if group != "pre" and not a.positive:
                    raise ModelError(f"{self.name}: signed atom in {group} list")
                for ref in a.args:
                    if ref.kind != KIND_EXPLICIT:
                        raise ModelError(f"{self.name}: non-explicit ref in {group}")
                    if ref.index > len(self.params):
                        raise ModelError(f"{self.name}: arg x{ref.index} out of range")
        for canon, attr in (("pre", "pre"), ("add", "add"), ("delete", "delete")):
            object.__setattr__(self, attr,
                               tuple(canonical_atom_order(getattr(self, attr))))

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True, slots=True)
class StripsPlusSchema:
    """A STRIPS+ action schema: explicit parameters x, a stratified binding
    query introducing the implicit z variables, extra signed preconditions, and
    add/delete effects over x and z only."""

    name: str
    params: Tuple[str, ...]
    param_types: Tuple[str, ...]
    binding: StratifiedQuery
    extra_pre: Tuple[LiftedAtom, ...]
    add: Tuple[LiftedAtom, ...]
    delete: Tuple[LiftedAtom, ...]

    def __post_init__(self) -> None:
        if len(self.params) != len(self.param_types):
            raise ModelError(f"{self.name}: params/types length mismatch")
        n_z = self.binding.num_implicit
        for a in list(self.add) + list(self.delete):
            if not a.positive:
                raise ModelError(f"{self.name}: signed atom in effect list")
            for ref in a.args:
                if ref.is_free:
                    raise ModelError(f"{self.name}: free variable in effect")
                self._check_ref(ref, n_z, "effect")
        for a in self.extra_pre:
            for ref in a.variables:
                self._check_ref(ref, n_z, "precondition")
        for sq in self.binding.subqueries:
            for a in sq.atoms:
                for ref in a.variables:
                    if ref.kind == KIND_EXPLICIT and ref.index > len(self.params):
                        raise ModelError(f"{self.name}: binding arg x{ref.index} out of range")
        object.__setattr__(self, "extra_pre", tuple(canonical_atom_order(self.extra_pre)))
        object.__setattr__(self, "add", tuple(canonical_atom_order(self.add)))
        object.__setattr__(self, "delete", tuple(canonical_atom_order(self.delete)))

    def _check_ref(self, ref: VariableRef, n_z: int, where: str) -> None:
        if ref.kind == KIND_EXPLICIT and ref.index > len(self.params):
            raise ModelError(f"{self.name}: {where} arg x{ref.index} out of range")
        if ref.kind == KIND_IMPLICIT and ref.index > n_z:
            raise ModelError(f"{self.name}: {where} mentions unintroduced z{ref.index}")

    @property
    def arity(self) -> int:
        return len(self.params)

    @property
    def num_implicit(self) -> int:
        return self.binding.num_implicit


FLAVOR_STRIPS = "strips"
FLAVOR_STRIPSPLUS = "stripsplus"


@dataclass(frozen=True)
class Domain:
    """A first-order domain, either classical STRIPS or STRIPS+."""

    name: str
    flavor: str
    predicates: Tuple[PredicateSig, ...]
    schemas: tuple  # of StripsSchema or StripsPlusSchema
    types: Tuple[str, ...] = ("object",)

    def __post_init__(self) -> None:
        if self.flavor not in (FLAVOR_STRIPS, FLAVOR_STRIPSPLUS):
            raise ModelError(f"bad flavor {self.flavor!r}")
        names = [s.name for s in self.schemas]
        if len(set(names)) != len(names):
            raise ModelError("duplicate schema names")
        declared = {p.name: p.arity for p in self.predicates}
        for s in self.schemas:
            atoms: List[LiftedAtom] = list(s.add) + list(s.delete)
            if isinstance(s, StripsSchema):
                atoms += list(s.pre)
            else:
                atoms += list(s.extra_pre) + s.binding.all_atoms()
            for a in atoms:
                if a.predicate not in declared:
                    raise ModelError(f"{s.name}: undeclared predicate {a.predicate}")
                if len(a.args) != declared[a.predicate]:
                    raise ModelError(f"{s.name}: arity mismatch for {a.predicate}")
        object.__setattr__(self, "predicates",
                           tuple(sorted(self.predicates, key=lambda p: p.name)))
        object.__setattr__(self, "schemas",
                           tuple(sorted(self.schemas, key=lambda s: s.name)))

    def schema(self, name: str):
        for s in self.schemas:
            if s.name == name:
                return s
        raise KeyError(name)

    def predicate(self, name: str) -> PredicateSig:
        for p in self.predicates:
            if p.name == name:
                return p
        raise KeyError(name)

    @property
    def total_explicit_args(self) -> int:
        return sum(s.arity for s in self.schemas)


class State:
    """An immutable set of ground atoms with O(1) membership.

    The per-predicate and per-(predicate, position, object) indexes are built
    lazily and cached; states are safe to share between threads because the
    index construction is idempotent.
    """

    __slots__ = ("atoms", "_by_pred", "_by_slot_obj", "_hash")

    def __init__(self, atoms: Iterable[GroundAtom]):
        self.atoms: FrozenSet[GroundAtom] = frozenset(atoms)
        self._by_pred: Optional[Dict[str, List[GroundAtom]]] = None
        self._by_slot_obj: Optional[Dict[Tuple[str, int, str], List[GroundAtom]]] = None
        self._hash: Optional[int] = None

    def __contains__(self, atom: GroundAtom) -> bool:
        return atom in self.atoms

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __eq__(self, other) -> bool:
        return isinstance(other, State) and self.atoms == other.atoms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.atoms)
        return self._hash

    def _build_index(self) -> None:
        by_pred: Dict[str, List[GroundAtom]] = {}
        by_slot: Dict[Tuple[str, int, str], List[GroundAtom]] = {}
        for atom in self.atoms:
            pred = atom[0]
            by_pred.setdefault(pred, []).append(atom)
            for pos in range(1, len(atom)):
                by_slot.setdefault((pred, pos, atom[pos]), []).append(atom)
        self._by_pred = by_pred
        self._by_slot_obj = by_slot

    def atoms_of(self, pred: str) -> List[GroundAtom]:
        if self._by_pred is None:
            self._build_index()
        return self._by_pred.get(pred, [])

    def atoms_at(self, pred: str, pos: int, obj: str) -> List[GroundAtom]:
        """Atoms of `pred` whose 1-based position `pos` holds `obj`."""
        if self._by_slot_obj is None:
            self._build_index()
        return self._by_slot_obj.get((pred, pos, obj), [])

    def project(self, dropped: Set[str]) -> "State":
        if not dropped:
            return self
        return State(a for a in self.atoms if a[0] not in dropped)

    def sorted_atoms(self) -> List[GroundAtom]:
        return sorted(self.atoms)


@dataclass(frozen=True, slots=True)
class GroundAction:
    """An action label as observed in a trace: name plus explicit args."""

    name: str
    args: Tuple[str, ...]

    def render(self) -> str:
        return f"{self.name}({','.join(self.args)})"

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Problem:
    """Instance information: objects, the initial state and an unused goal."""

    name: str
    domain_name: str
    objects: Tuple[Tuple[str, str], ...]  # (name, type), sorted by name
    init: State
    goal: Tuple[GroundAtom, ...] = ()

    def __post_init__(self) -> None:
        names = {n for n, _ in self.objects}
        if len(names) != len(self.objects):
            raise ModelError("duplicate object names")
        for atom in self.init:
            for obj in atom[1:]:
                if obj not in names:
                    raise ModelError(f"init atom {atom} uses undeclared object {obj}")
        object.__setattr__(self, "objects", tuple(sorted(self.objects)))

    @property
    def object_names(self) -> List[str]:
        return [n for n, _ in self.objects]

    def objects_of_type(self, typ: str) -> List[str]:
        if typ == "object":
            return list(self.object_names)
        return [n for n, t in self.objects if t == typ]


@dataclass(frozen=True)
class Trace:
    """Object table, initial state and the alternating action/state steps of
    one instance.  `truncated` marks a dead end before the requested length."""

    domain_name: str
    seed: int
    objects: Tuple[Tuple[str, str], ...]
    init: State
    steps: Tuple[Tuple[GroundAction, State], ...]
    dropped: Tuple[str, ...] = ()
    truncated: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(sorted(self.objects)))
        object.__setattr__(self, "dropped", tuple(sorted(self.dropped)))

    def __len__(self) -> int:
        return len(self.steps)

    def states(self) -> List[State]:
        return [self.init] + [s for _, s in self.steps]


@dataclass
class Occurrence:
    """One (pre-state, ground action, post-state) triple from a trace."""

    action: GroundAction
    state: State
    successor: State
    instance: int  # index of the source trace, for instance-constant pruning


@dataclass
class OccurrenceSet:
    """All occurrences of one action name across the input traces."""

    name: str
    occurrences: List[Occurrence] = field(default_factory=list)

    def __post_init__(self) -> None:
        arities = {len(o.action.args) for o in self.occurrences}
        if len(arities) > 1:
            raise ModelError(f"{self.name}: inconsistent arity across occurrences")
        if any(o.action.name != self.name for o in self.occurrences):
            raise ModelError(f"occurrence set for {self.name} mixes action names")

    def __len__(self) -> int:
        return len(self.occurrences)

    @property
    def arity(self) -> int:
        return len(self.occurrences[0].action.args) if self.occurrences else 0


# An assignment maps variables to object names.  Only the variables the
# caller asked for (targets) appear; free slots never bind.
Assignment = Dict[VariableRef, str]
