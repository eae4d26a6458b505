"""Parsing and serialization: typed STRIPS PDDL input, the native STRIPS+
domain dialect, a flattened PDDL view, and the line-oriented trace format.

Parsing is case-insensitive (everything is folded to lowercase) and
whitespace-insensitive.  All writers emit canonically sorted output so that
identical values serialize to identical bytes.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .model import (
    FLAVOR_STRIPS,
    FLAVOR_STRIPSPLUS,
    Domain,
    GroundAction,
    GroundAtom,
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
    x_ref,
)

TRACE_FORMAT_VERSION = 1

SUPPORTED_REQUIREMENTS = {":strips", ":typing", ":negative-preconditions"}


class PddlError(Exception):
    """Syntax or semantic error in a PDDL or STRIPS+ input."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f" at line {line}, column {col}" if line else ""
        super().__init__(message + where)


class UnsupportedFeatureError(PddlError):
    """Input uses a PDDL feature outside the supported fragment."""


class TraceFormatError(Exception):
    """Malformed or incompatible trace file."""


# ---------------------------------------------------------------------------
# S-expression reader
# ---------------------------------------------------------------------------

class _Token:
    __slots__ = ("text", "line", "col")

    def __init__(self, text: str, line: int, col: int):
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in "()":
            tokens.append(_Token(ch, line, col))
            col += 1
            i += 1
            continue
        start = i
        start_col = col
        while i < n and not text[i].isspace() and text[i] not in "();":
            i += 1
            col += 1
        tokens.append(_Token(text[start:i].lower(), line, start_col))
    return tokens


def _read_sexpr(tokens: List[_Token], pos: int):
    if pos >= len(tokens):
        raise PddlError("unexpected end of input")
    tok = tokens[pos]
    if tok.text == "(":
        items = []
        pos += 1
        while True:
            if pos >= len(tokens):
                raise PddlError("unclosed parenthesis", tok.line, tok.col)
            if tokens[pos].text == ")":
                return items, pos + 1
            item, pos = _read_sexpr(tokens, pos)
            items.append(item)
    if tok.text == ")":
        raise PddlError("unexpected ')'", tok.line, tok.col)
    return tok, pos + 1


def _parse_sexpr(text: str):
    tokens = _tokenize(text)
    expr, pos = _read_sexpr(tokens, 0)
    while pos < len(tokens):
        if tokens[pos].text not in ("",):
            raise PddlError("trailing content after expression",
                            tokens[pos].line, tokens[pos].col)
    return expr


def _is_tok(x, text: Optional[str] = None) -> bool:
    return isinstance(x, _Token) and (text is None or x.text == text)


def _tok_text(x) -> str:
    if not isinstance(x, _Token):
        raise PddlError("expected a symbol, got a list")
    return x.text


def _parse_typed_list(items: Sequence, what: str) -> List[Tuple[str, str]]:
    """Parse `a b - t c d - u e` into [(a,t),(b,t),(c,u),(d,u),(e,object)]."""
    out: List[Tuple[str, str]] = []
    pending: List[str] = []
    i = 0
    while i < len(items):
        tok = items[i]
        text = _tok_text(tok)
        if text == "-":
            if i + 1 >= len(items):
                raise PddlError(f"dangling '-' in {what}", tok.line, tok.col)
            typ = _tok_text(items[i + 1])
            out.extend((name, typ) for name in pending)
            pending = []
            i += 2
        else:
            pending.append(text)
            i += 1
    out.extend((name, "object") for name in pending)
    return out


# ---------------------------------------------------------------------------
# STRIPS PDDL domain / problem
# ---------------------------------------------------------------------------

def _atom_from_expr(expr, params: Dict[str, int], where: str) -> LiftedAtom:
    if not isinstance(expr, list) or not expr:
        raise PddlError(f"malformed atom in {where}")
    name = _tok_text(expr[0])
    args: List[VariableRef] = []
    for item in expr[1:]:
        text = _tok_text(item)
        if not text.startswith("?"):
            raise UnsupportedFeatureError(
                f"constants in action bodies ({text!r} in {where})",
                item.line, item.col)
        if text not in params:
            raise PddlError(f"unknown parameter {text} in {where}",
                            item.line, item.col)
        args.append(x_ref(params[text]))
    return LiftedAtom(name, tuple(args), True)


def _flatten_and(expr, where: str) -> List:
    if isinstance(expr, list) and expr and _is_tok(expr[0], "and"):
        return list(expr[1:])
    if isinstance(expr, list) and not expr:
        return []
    return [expr]


def parse_domain(text: str) -> Domain:
    """Parse a typed STRIPS PDDL domain.

    Supported requirements: :strips, :typing, :negative-preconditions (flag
    only; actual negated preconditions are rejected in this version, since
    hidden corpus domains are positive STRIPS).
    """
    expr = _parse_sexpr(text)
    if not (isinstance(expr, list) and expr and _is_tok(expr[0], "define")):
        raise PddlError("not a PDDL define form")
    header = expr[1]
    if not (isinstance(header, list) and len(header) == 2
            and _is_tok(header[0], "domain")):
        raise PddlError("missing (domain NAME)")
    name = _tok_text(header[1])

    types: List[str] = ["object"]
    predicates: List[PredicateSig] = []
    schemas: List[StripsSchema] = []

    for section in expr[2:]:
        if not (isinstance(section, list) and section):
            raise PddlError("malformed domain section")
        kind = _tok_text(section[0])
        if kind == ":requirements":
            for req in section[1:]:
                text_req = _tok_text(req)
                if text_req not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedFeatureError(
                        f"requirement {text_req}", req.line, req.col)
        elif kind == ":types":
            for tname, parent in _parse_typed_list(section[1:], ":types"):
                if tname not in types:
                    types.append(tname)
                if parent != "object":
                    raise UnsupportedFeatureError("type hierarchies (only a "
                                                  "flat type list is supported)")
        elif kind == ":constants":
            raise UnsupportedFeatureError(":constants")
        elif kind == ":predicates":
            for pexpr in section[1:]:
                if not isinstance(pexpr, list) or not pexpr:
                    raise PddlError("malformed predicate declaration")
                pname = _tok_text(pexpr[0])
                typed = _parse_typed_list(pexpr[1:], f"predicate {pname}")
                predicates.append(PredicateSig(pname, len(typed),
                                               tuple(t for _, t in typed)))
        elif kind == ":action":
            schemas.append(_parse_action(section))
        elif kind == ":functions":
            raise UnsupportedFeatureError(":functions")
        else:
            raise UnsupportedFeatureError(f"section {kind}")

    return Domain(name, FLAVOR_STRIPS, tuple(predicates), tuple(schemas),
                  tuple(types))


def _parse_action(section) -> StripsSchema:
    aname = _tok_text(section[1])
    fields: Dict[str, object] = {}
    i = 2
    while i < len(section):
        key = _tok_text(section[i])
        if i + 1 >= len(section):
            raise PddlError(f"missing value for {key} in action {aname}")
        fields[key] = section[i + 1]
        i += 2
    params_expr = fields.get(":parameters", [])
    typed = _parse_typed_list(params_expr, f"action {aname} parameters")
    for pname, _ in typed:
        if not pname.startswith("?"):
            raise PddlError(f"parameter {pname} of {aname} must start with '?'")
    params = tuple(p[1:] for p, _ in typed)
    param_types = tuple(t for _, t in typed)
    index = {f"?{p}": i + 1 for i, (p) in enumerate(params)}

    pre: List[LiftedAtom] = []
    for item in _flatten_and(fields.get(":precondition", []), aname):
        if isinstance(item, list) and item and _is_tok(item[0], "not"):
            raise UnsupportedFeatureError(
                f"negative precondition in action {aname} (hidden corpus "
                f"domains are positive STRIPS)")
        if isinstance(item, list) and item and _is_tok(item[0], "=",):
            raise UnsupportedFeatureError("equality preconditions")
        pre.append(_atom_from_expr(item, index, f"{aname} precondition"))

    add: List[LiftedAtom] = []
    delete: List[LiftedAtom] = []
    for item in _flatten_and(fields.get(":effect", []), aname):
        if isinstance(item, list) and item and _is_tok(item[0], "not"):
            if len(item) != 2:
                raise PddlError(f"malformed (not ...) in {aname} effect")
            delete.append(_atom_from_expr(item[1], index, f"{aname} effect"))
        else:
            add.append(_atom_from_expr(item, index, f"{aname} effect"))
    return StripsSchema(aname, params, param_types, tuple(pre), tuple(add),
                        tuple(delete))


def parse_problem(text: str, domain: Domain) -> Problem:
    expr = _parse_sexpr(text)
    if not (isinstance(expr, list) and expr and _is_tok(expr[0], "define")):
        raise PddlError("not a PDDL define form")
    header = expr[1]
    if not (isinstance(header, list) and len(header) == 2
            and _is_tok(header[0], "problem")):
        raise PddlError("missing (problem NAME)")
    name = _tok_text(header[1])

    domain_name = ""
    objects: List[Tuple[str, str]] = []
    init: List[GroundAtom] = []
    goal: List[GroundAtom] = []

    declared = {p.name: p for p in domain.predicates}

    def ground_atom(aexpr, where: str) -> GroundAtom:
        if not isinstance(aexpr, list) or not aexpr:
            raise PddlError(f"malformed atom in {where}")
        pname = _tok_text(aexpr[0])
        if pname not in declared:
            raise PddlError(f"undeclared predicate {pname} in {where}")
        args = tuple(_tok_text(a) for a in aexpr[1:])
        if len(args) != declared[pname].arity:
            raise PddlError(f"arity mismatch for {pname} in {where}")
        return (pname, *args)

    for section in expr[2:]:
        kind = _tok_text(section[0])
        if kind == ":domain":
            domain_name = _tok_text(section[1])
            if domain_name != domain.name:
                raise PddlError(f"problem is for domain {domain_name!r}, "
                                f"expected {domain.name!r}")
        elif kind == ":objects":
            objects.extend(_parse_typed_list(section[1:], ":objects"))
        elif kind == ":init":
            init.extend(ground_atom(a, ":init") for a in section[1:])
        elif kind == ":goal":
            for item in _flatten_and(section[1] if len(section) > 1 else [],
                                     ":goal"):
                goal.append(ground_atom(item, ":goal"))
        else:
            raise UnsupportedFeatureError(f"problem section {kind}")

    known = {n for n, _ in objects}
    obj_type = dict(objects)
    for atom in init:
        sig = declared[atom[0]]
        for pos, obj in enumerate(atom[1:]):
            if obj not in known:
                raise PddlError(f"init atom {atom} uses undeclared object {obj}")
            want = sig.position_types[pos]
            if want != "object" and obj_type[obj] != want:
                raise PddlError(f"init atom {atom}: object {obj} has type "
                                f"{obj_type[obj]}, expected {want}")
    return Problem(name, domain_name or domain.name, tuple(objects),
                   State(init), tuple(sorted(goal)))


# ---------------------------------------------------------------------------
# STRIPS+ domain dialect
# ---------------------------------------------------------------------------

def _render_pattern(atom: LiftedAtom) -> str:
    body = "(" + " ".join([atom.predicate] + [a.render() for a in atom.args]) + ")"
    return body if atom.positive else f"(not {body})"


def write_stripsplus_domain(domain: Domain) -> str:
    """Serialize a STRIPS+ domain in the native s-expression dialect.

    Per action: `:parameters` for the explicit arguments, one `:implicit`
    block per binding stratum (in stratified order), `:precondition` for the
    extra preconditions, and `:effect` for add/delete effects.  Atom slots use
    the pattern notation: 1..n explicit, 1z..mz implicit, _ free.
    """
    if domain.flavor != FLAVOR_STRIPSPLUS:
        raise ValueError("write_stripsplus_domain expects a STRIPS+ domain")
    lines = [f"(define (domain {domain.name})", "  (:flavor strips+)"]
    preds = " ".join(
        "(" + " ".join([p.name] + list(p.position_types)) + ")"
        for p in domain.predicates)
    lines.append(f"  (:predicates {preds})")
    for schema in domain.schemas:
        lines.append(f"  (:action {schema.name}")
        pieces = []
        for i, typ in enumerate(schema.param_types, start=1):
            pieces.append(f"?x{i} - {typ}" if typ != "object" else f"?x{i}")
        lines.append(f"    :parameters ({' '.join(pieces)})")
        for sq in schema.binding.subqueries:
            atoms = " ".join(_render_pattern(a) for a in sq.atoms)
            lines.append(f"    :implicit (z{sq.introduces} {atoms})")
        pre = " ".join(_render_pattern(a) for a in schema.extra_pre)
        lines.append(f"    :precondition (and {pre})" if pre
                     else "    :precondition (and)")
        effs = [_render_pattern(a) for a in schema.add]
        effs += [f"(not {_render_pattern(a)})" for a in schema.delete]
        lines.append(f"    :effect (and {' '.join(effs)})")
        lines.append("  )")
    lines.append(")")
    return "\n".join(lines) + "\n"


def _pattern_from_expr(expr, where: str) -> LiftedAtom:
    if not isinstance(expr, list) or not expr:
        raise PddlError(f"malformed pattern atom in {where}")
    if _is_tok(expr[0], "not"):
        inner = _pattern_from_expr(expr[1], where)
        return inner.negate()
    name = _tok_text(expr[0])
    args = tuple(VariableRef.parse(_tok_text(t)) for t in expr[1:])
    return LiftedAtom(name, args, True)


def parse_stripsplus_domain(text: str) -> Domain:
    expr = _parse_sexpr(text)
    if not (isinstance(expr, list) and expr and _is_tok(expr[0], "define")):
        raise PddlError("not a domain definition")
    name = _tok_text(expr[1][1])
    predicates: List[PredicateSig] = []
    schemas: List[StripsPlusSchema] = []
    for section in expr[2:]:
        kind = _tok_text(section[0])
        if kind == ":flavor":
            if _tok_text(section[1]) not in ("strips+", "stripsplus"):
                raise PddlError("unknown flavor")
        elif kind == ":predicates":
            for pexpr in section[1:]:
                pname = _tok_text(pexpr[0])
                ptypes = tuple(_tok_text(t) for t in pexpr[1:])
                predicates.append(PredicateSig(pname, len(ptypes), ptypes))
        elif kind == ":action":
            schemas.append(_parse_plus_action(section))
        else:
            raise PddlError(f"unknown section {kind} in STRIPS+ domain")
    return Domain(name, FLAVOR_STRIPSPLUS, tuple(predicates), tuple(schemas))


def _parse_plus_action(section) -> StripsPlusSchema:
    aname = _tok_text(section[1])
    params: List[str] = []
    param_types: List[str] = []
    strata: List[Subquery] = []
    extra: List[LiftedAtom] = []
    add: List[LiftedAtom] = []
    delete: List[LiftedAtom] = []
    i = 2
    while i < len(section):
        key = _tok_text(section[i])
        value = section[i + 1]
        i += 2
        if key == ":parameters":
            typed = _parse_typed_list(value, f"{aname} parameters")
            params = [p[1:] for p, _ in typed]
            param_types = [t for _, t in typed]
        elif key == ":implicit":
            ztok = _tok_text(value[0])
            if not ztok.startswith("z"):
                raise PddlError(f"bad :implicit header {ztok} in {aname}")
            introduces = int(ztok[1:])
            atoms = tuple(_pattern_from_expr(e, f"{aname} :implicit") for e in value[1:])
            strata.append(Subquery(atoms, introduces))
        elif key == ":precondition":
            for item in _flatten_and(value, aname):
                extra.append(_pattern_from_expr(item, f"{aname} precondition"))
        elif key == ":effect":
            for item in _flatten_and(value, aname):
                if isinstance(item, list) and item and _is_tok(item[0], "not"):
                    delete.append(_pattern_from_expr(item[1], f"{aname} effect"))
                else:
                    add.append(_pattern_from_expr(item, f"{aname} effect"))
        else:
            raise PddlError(f"unknown action field {key} in {aname}")
    strata.sort(key=lambda sq: sq.introduces)
    return StripsPlusSchema(aname, tuple(params), tuple(param_types),
                            StratifiedQuery(tuple(strata)), tuple(extra),
                            tuple(add), tuple(delete))


def load_domain(path: Union[str, Path]) -> Domain:
    """Dispatch on content: the native dialect carries a (:flavor ...) tag."""
    text = Path(path).read_text()
    if ":flavor" in text:
        return parse_stripsplus_domain(text)
    return parse_domain(text)


# ---------------------------------------------------------------------------
# Flattened pure-STRIPS view
# ---------------------------------------------------------------------------

def write_flattened_domain(domain: Domain) -> str:
    """PDDL view with implicit and existential variables pushed into the
    parameter list.  Negated atoms with free slots become foralls, so the
    output declares :adl when such atoms are present."""
    if domain.flavor != FLAVOR_STRIPSPLUS:
        raise ValueError("flatten expects a STRIPS+ domain")
    needs_adl = False
    blocks: List[str] = []
    for schema in domain.schemas:
        var_names: Dict[VariableRef, str] = {}
        for idx in range(1, schema.arity + 1):
            var_names[x_ref(idx)] = f"?x{idx}"
        for sq in schema.binding.subqueries:
            var_names[VariableRef("z", sq.introduces)] = f"?z{sq.introduces}"
        counter = [0]
        existential: List[str] = []

        def render(atom: LiftedAtom) -> str:
            nonlocal needs_adl
            parts = [atom.predicate]
            universal: List[str] = []
            for ref in atom.args:
                if ref.is_free:
                    counter[0] += 1
                    fresh = f"?y{counter[0]}"
                    parts.append(fresh)
                    if atom.positive:
                        existential.append(fresh)
                    else:
                        universal.append(fresh)
                else:
                    parts.append(var_names[ref])
            body = "(" + " ".join(parts) + ")"
            if not atom.positive:
                body = f"(not {body})"
                if universal:
                    needs_adl = True
                    body = f"(forall ({' '.join(universal)}) {body})"
            return body

        pre = [render(a) for sq in schema.binding.subqueries for a in sq.atoms]
        pre += [render(a) for a in schema.extra_pre]
        effs = [render(a) for a in schema.add]
        effs += [f"(not {render(a)})" for a in schema.delete]
        param_list = [f"?x{i}" for i in range(1, schema.arity + 1)]
        param_list += [f"?z{j}" for j in range(1, schema.num_implicit + 1)]
        param_list += existential
        blocks.append("\n".join([
            f"  (:action {schema.name}",
            f"    :parameters ({' '.join(param_list)})",
            f"    :precondition (and {' '.join(pre)})",
            f"    :effect (and {' '.join(effs)})",
            "  )",
        ]))
    reqs = ":adl" if needs_adl else ":strips"
    preds = " ".join(
        "(" + " ".join([p.name] + [f"?a{i}" for i in range(1, p.arity + 1)]) + ")"
        for p in domain.predicates)
    return "\n".join([
        f"(define (domain {domain.name}-flat)",
        f"  (:requirements {reqs})",
        f"  (:predicates {preds})",
        *blocks,
        ")",
    ]) + "\n"


# ---------------------------------------------------------------------------
# Trace files
# ---------------------------------------------------------------------------

def _render_ground(atom: GroundAtom) -> str:
    return "(" + " ".join(atom) + ")"


def _state_record(tag: str, state: State) -> str:
    atoms = " ".join(_render_ground(a) for a in state.sorted_atoms())
    return f"{tag} {atoms}".rstrip()


def write_trace(trace: Trace, path: Union[str, Path]) -> None:
    lines = [f"H {TRACE_FORMAT_VERSION} {trace.domain_name} {trace.seed}"]
    for name, typ in trace.objects:
        lines.append(f"O {name} {typ}")
    for pred in trace.dropped:
        lines.append(f"D {pred}")
    lines.append(_state_record("I", trace.init))
    for action, state in trace.steps:
        lines.append(f"A {' '.join([action.name, *action.args])}".rstrip())
        lines.append(_state_record("S", state))
    if trace.truncated:
        lines.append("E dead-end")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_state_record(rest: str, known: Set[str], lineno: int) -> List[GroundAtom]:
    atoms: List[GroundAtom] = []
    rest = rest.strip()
    if not rest:
        return atoms
    depth = 0
    current: List[str] = []
    for chunk in rest.replace("(", " ( ").replace(")", " ) ").split():
        if chunk == "(":
            if depth:
                raise TraceFormatError(f"line {lineno}: nested atom")
            depth = 1
            current = []
        elif chunk == ")":
            if not depth or not current:
                raise TraceFormatError(f"line {lineno}: malformed atom")
            for obj in current[1:]:
                if obj not in known:
                    raise TraceFormatError(
                        f"line {lineno}: object {obj} not in header table")
            atoms.append(tuple(current))
            depth = 0
        else:
            if not depth:
                raise TraceFormatError(f"line {lineno}: stray token {chunk!r}")
            current.append(chunk)
    if depth:
        raise TraceFormatError(f"line {lineno}: unclosed atom")
    return atoms


def read_trace(path: Union[str, Path]) -> Trace:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("H "):
        raise TraceFormatError("missing header record")
    header = lines[0].split()
    if len(header) != 4:
        raise TraceFormatError("malformed header record")
    if int(header[1]) != TRACE_FORMAT_VERSION:
        raise TraceFormatError(f"unsupported trace version {header[1]}")
    domain_name, seed = header[2], int(header[3])

    objects: List[Tuple[str, str]] = []
    dropped: List[str] = []
    init: Optional[State] = None
    steps: List[Tuple[GroundAction, State]] = []
    pending_action: Optional[GroundAction] = None
    truncated = False
    known: Set[str] = set()

    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        tag, _, rest = line.partition(" ")
        if tag == "O":
            parts = rest.split()
            if len(parts) != 2:
                raise TraceFormatError(f"line {lineno}: malformed object record")
            objects.append((parts[0], parts[1]))
            known.add(parts[0])
        elif tag == "D":
            dropped.append(rest.strip())
        elif tag == "I":
            init = State(_parse_state_record(rest, known, lineno))
        elif tag == "A":
            parts = rest.split()
            if not parts:
                raise TraceFormatError(f"line {lineno}: empty action record")
            for obj in parts[1:]:
                if obj not in known:
                    raise TraceFormatError(
                        f"line {lineno}: object {obj} not in header table")
            pending_action = GroundAction(parts[0], tuple(parts[1:]))
        elif tag == "S":
            if pending_action is None:
                raise TraceFormatError(f"line {lineno}: state without action")
            steps.append((pending_action,
                          State(_parse_state_record(rest, known, lineno))))
            pending_action = None
        elif tag == "E":
            truncated = True
        else:
            raise TraceFormatError(f"line {lineno}: unknown record {tag!r}")
    if init is None:
        raise TraceFormatError("missing init record")
    if pending_action is not None:
        raise TraceFormatError("action record without a following state")
    return Trace(domain_name, seed, tuple(objects), init, tuple(steps),
                 tuple(dropped), truncated)
