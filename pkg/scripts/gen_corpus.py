#!/usr/bin/env python3
"""Regenerate the bundled corpus PDDL files (deterministic)."""

from __future__ import annotations

import sys
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "stripsplus" / "corpus"


def write(name: str, text: str) -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / name).write_text(text.strip() + "\n")
    print(f"wrote {name}")


def atoms(lines):
    return "\n    ".join(lines)


# ---------------------------------------------------------------------------
# blocks3: stack / unstack / move over on, on_table, clear
# ---------------------------------------------------------------------------

BLOCKS3_DOMAIN = """
(define (domain blocks3)
  (:requirements :strips)
  (:predicates (on ?x ?y) (on_table ?x) (clear ?x) (neq ?x ?y))
  (:action stack
    :parameters (?x ?y)
    :precondition (and (on_table ?x) (clear ?x) (clear ?y) (neq ?x ?y))
    :effect (and (on ?x ?y) (not (on_table ?x)) (not (clear ?y))))
  (:action unstack
    :parameters (?x ?y)
    :precondition (and (on ?x ?y) (clear ?x))
    :effect (and (on_table ?x) (clear ?y) (not (on ?x ?y))))
  (:action move
    :parameters (?x ?y ?z)
    :precondition (and (on ?x ?y) (clear ?x) (clear ?z) (neq ?x ?z) (neq ?y ?z))
    :effect (and (on ?x ?z) (clear ?y) (not (on ?x ?y)) (not (clear ?z))))
)
"""


def blocks3_problem(name: str, n: int) -> str:
    blocks = [f"b{i}" for i in range(1, n + 1)]
    init = [f"(on_table {b})" for b in blocks] + [f"(clear {b})" for b in blocks]
    init += [f"(neq {a} {b})" for a in blocks for b in blocks if a != b]
    return f"""
(define (problem {name})
  (:domain blocks3)
  (:objects {' '.join(blocks)})
  (:init
    {atoms(init)})
  (:goal (and (on_table b1)))
)
"""


# ---------------------------------------------------------------------------
# blocks4: pickup / putdown / stack / unstack with an explicit hand
# ---------------------------------------------------------------------------

BLOCKS4_DOMAIN = """
(define (domain blocks4)
  (:requirements :strips)
  (:predicates (on ?x ?y) (on_table ?x) (clear ?x) (holding ?x) (handempty))
  (:action pickup
    :parameters (?x)
    :precondition (and (on_table ?x) (clear ?x) (handempty))
    :effect (and (holding ?x) (not (on_table ?x)) (not (clear ?x)) (not (handempty))))
  (:action putdown
    :parameters (?x)
    :precondition (and (holding ?x))
    :effect (and (on_table ?x) (clear ?x) (handempty) (not (holding ?x))))
  (:action stack
    :parameters (?x ?y)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (on ?x ?y) (clear ?x) (handempty) (not (holding ?x)) (not (clear ?y))))
  (:action unstack
    :parameters (?x ?y)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (on ?x ?y)) (not (clear ?x)) (not (handempty))))
)
"""


def blocks4_problem(name: str, n: int) -> str:
    blocks = [f"b{i}" for i in range(1, n + 1)]
    init = [f"(on_table {b})" for b in blocks] + [f"(clear {b})" for b in blocks]
    init.append("(handempty)")
    return f"""
(define (problem {name})
  (:domain blocks4)
  (:objects {' '.join(blocks)})
  (:init
    {atoms(init)})
  (:goal (and (on_table b1)))
)
"""


# ---------------------------------------------------------------------------
# ferry: board / sail / debark, one-car ferry
# ---------------------------------------------------------------------------

FERRY_DOMAIN = """
(define (domain ferry)
  (:requirements :strips)
  (:predicates (at-ferry ?l) (at ?c ?l) (on ?c) (empty-ferry) (neq ?a ?b))
  (:action board
    :parameters (?c ?l)
    :precondition (and (at ?c ?l) (at-ferry ?l) (empty-ferry))
    :effect (and (on ?c) (not (at ?c ?l)) (not (empty-ferry))))
  (:action sail
    :parameters (?from ?to)
    :precondition (and (at-ferry ?from) (neq ?from ?to))
    :effect (and (at-ferry ?to) (not (at-ferry ?from))))
  (:action debark
    :parameters (?c ?l)
    :precondition (and (on ?c) (at-ferry ?l))
    :effect (and (at ?c ?l) (empty-ferry) (not (on ?c))))
)
"""


def ferry_problem(name: str, n_locs: int, cars_at) -> str:
    locs = [f"l{i}" for i in range(1, n_locs + 1)]
    cars = [f"c{i}" for i in range(1, len(cars_at) + 1)]
    init = [f"(at-ferry {locs[0]})", "(empty-ferry)"]
    init += [f"(at c{i + 1} {loc})" for i, loc in enumerate(cars_at)]
    init += [f"(neq {a} {b})" for a in locs for b in locs if a != b]
    return f"""
(define (problem {name})
  (:domain ferry)
  (:objects {' '.join(locs + cars)})
  (:init
    {atoms(init)})
  (:goal (and (at-ferry {locs[0]})))
)
"""


# ---------------------------------------------------------------------------
# gripper: move / grab / drop, two rooms, two grippers
# ---------------------------------------------------------------------------

GRIPPER_DOMAIN = """
(define (domain gripper)
  (:requirements :strips)
  (:predicates (at-robby ?r) (at ?b ?r) (free ?g) (carry ?b ?g) (neq ?a ?b))
  (:action move
    :parameters (?from ?to)
    :precondition (and (at-robby ?from) (neq ?from ?to))
    :effect (and (at-robby ?to) (not (at-robby ?from))))
  (:action grab
    :parameters (?b ?r ?g)
    :precondition (and (at ?b ?r) (at-robby ?r) (free ?g))
    :effect (and (carry ?b ?g) (not (at ?b ?r)) (not (free ?g))))
  (:action drop
    :parameters (?b ?r ?g)
    :precondition (and (carry ?b ?g) (at-robby ?r))
    :effect (and (at ?b ?r) (free ?g) (not (carry ?b ?g))))
)
"""


def gripper_problem(name: str, n_balls: int) -> str:
    balls = [f"ball{i}" for i in range(1, n_balls + 1)]
    init = ["(at-robby rooma)", "(free left)", "(free right)",
            "(neq rooma roomb)", "(neq roomb rooma)"]
    init += [f"(at {b} rooma)" for b in balls]
    return f"""
(define (problem {name})
  (:domain gripper)
  (:objects rooma roomb left right {' '.join(balls)})
  (:init
    {atoms(init)})
  (:goal (and (at-robby rooma)))
)
"""


# ---------------------------------------------------------------------------
# hanoi: a single move schema; smaller(?a ?b) reads "?b is smaller than ?a"
# ---------------------------------------------------------------------------

HANOI_DOMAIN = """
(define (domain hanoi)
  (:requirements :strips)
  (:predicates (clear ?x) (on ?d ?x) (smaller ?x ?d))
  (:action move
    :parameters (?d ?from ?to)
    :precondition (and (smaller ?to ?d) (on ?d ?from) (clear ?d) (clear ?to))
    :effect (and (on ?d ?to) (clear ?from) (not (on ?d ?from)) (not (clear ?to))))
)
"""


def hanoi_problem(name: str, n_discs: int) -> str:
    pegs = ["peg1", "peg2", "peg3"]
    discs = [f"d{i}" for i in range(1, n_discs + 1)]  # d1 is the smallest
    init = [f"(smaller {p} {d})" for p in pegs for d in discs]
    init += [f"(smaller d{i} d{j})" for i in range(1, n_discs + 1)
             for j in range(1, i)]
    init.append(f"(on d{n_discs} peg1)")
    init += [f"(on d{i} d{i + 1})" for i in range(n_discs - 1, 0, -1)]
    init += ["(clear d1)", "(clear peg2)", "(clear peg3)"]
    return f"""
(define (problem {name})
  (:domain hanoi)
  (:objects {' '.join(pegs + discs)})
  (:init
    {atoms(init)})
  (:goal (and (clear peg2)))
)
"""


# ---------------------------------------------------------------------------
# miconic: board / depart / up / down; board consumes the origin atom
# ---------------------------------------------------------------------------

MICONIC_DOMAIN = """
(define (domain miconic)
  (:requirements :strips)
  (:predicates (lift-at ?f) (above ?f1 ?f2) (origin ?p ?f) (destin ?p ?f)
               (waiting ?p) (in_lift ?p) (served ?p))
  (:action board
    :parameters (?f ?p)
    :precondition (and (lift-at ?f) (origin ?p ?f) (waiting ?p))
    :effect (and (in_lift ?p) (not (waiting ?p))))
  (:action depart
    :parameters (?f ?p)
    :precondition (and (lift-at ?f) (destin ?p ?f) (in_lift ?p))
    :effect (and (served ?p) (not (in_lift ?p))))
  (:action up
    :parameters (?f1 ?f2)
    :precondition (and (lift-at ?f1) (above ?f1 ?f2))
    :effect (and (lift-at ?f2) (not (lift-at ?f1))))
  (:action down
    :parameters (?f1 ?f2)
    :precondition (and (lift-at ?f1) (above ?f2 ?f1))
    :effect (and (lift-at ?f2) (not (lift-at ?f1))))
)
"""


def miconic_problem(name: str, n_floors: int, origins, destins) -> str:
    floors = [f"f{i}" for i in range(1, n_floors + 1)]
    passengers = [f"p{i}" for i in range(1, len(origins) + 1)]
    init = [f"(lift-at f1)"]
    init += [f"(above f{i} f{j})" for i in range(1, n_floors + 1)
             for j in range(i + 1, n_floors + 1)]
    init += [f"(origin p{i + 1} f{o})" for i, o in enumerate(origins)]
    init += [f"(destin p{i + 1} f{d})" for i, d in enumerate(destins)]
    init += [f"(waiting p{i + 1})" for i in range(len(origins))]
    return f"""
(define (problem {name})
  (:domain miconic)
  (:objects {' '.join(floors + passengers)})
  (:init
    {atoms(init)})
  (:goal (and (lift-at f1)))
)
"""


# ---------------------------------------------------------------------------
# c-puzzle: sliding-tile over cells; the blank moves in the named direction
# ---------------------------------------------------------------------------

CPUZZLE_DOMAIN = """
(define (domain cpuzzle)
  (:requirements :strips)
  (:predicates (at ?t ?c) (blank ?c) (above ?c1 ?c2) (leftof ?c1 ?c2))
  (:action up
    :parameters (?b ?c ?t)
    :precondition (and (blank ?b) (above ?b ?c) (at ?t ?c))
    :effect (and (at ?t ?b) (blank ?c) (not (at ?t ?c)) (not (blank ?b))))
  (:action down
    :parameters (?b ?c ?t)
    :precondition (and (blank ?b) (above ?c ?b) (at ?t ?c))
    :effect (and (at ?t ?b) (blank ?c) (not (at ?t ?c)) (not (blank ?b))))
  (:action left
    :parameters (?b ?c ?t)
    :precondition (and (blank ?b) (leftof ?b ?c) (at ?t ?c))
    :effect (and (at ?t ?b) (blank ?c) (not (at ?t ?c)) (not (blank ?b))))
  (:action right
    :parameters (?b ?c ?t)
    :precondition (and (blank ?b) (leftof ?c ?b) (at ?t ?c))
    :effect (and (at ?t ?b) (blank ?c) (not (at ?t ?c)) (not (blank ?b))))
)
"""


def cpuzzle_problem(name: str, size: int, scramble: int) -> str:
    import random
    cells = [f"c{r}{c}" for r in range(1, size + 1) for c in range(1, size + 1)]
    tiles = [f"t{i}" for i in range(1, size * size)]
    # above(a, b): b is directly above a; leftof(a, b): b is directly left of a
    rel = []
    for r in range(1, size + 1):
        for c in range(1, size + 1):
            if r >= 2:
                rel.append(f"(above c{r}{c} c{r - 1}{c})")
            if c >= 2:
                rel.append(f"(leftof c{r}{c} c{r}{c - 1})")
    rng = random.Random(scramble)
    order = list(cells)
    rng.shuffle(order)
    blank = order[0]
    init = [f"(blank {blank})"]
    init += [f"(at {t} {cell})" for t, cell in zip(tiles, order[1:])]
    init += rel
    return f"""
(define (problem {name})
  (:domain cpuzzle)
  (:objects {' '.join(cells + tiles)})
  (:init
    {atoms(init)})
  (:goal (and (blank {blank})))
)
"""


# ---------------------------------------------------------------------------
# sokoban / sokoban-pull over an explicit cell graph
# ---------------------------------------------------------------------------

SOKOBAN_DOMAIN = """
(define (domain sokoban)
  (:requirements :strips)
  (:predicates (at ?c) (box ?c) (clear ?c) (adjacent ?a ?b) (adjacent_2 ?a ?b))
  (:action move
    :parameters (?from ?to)
    :precondition (and (at ?from) (adjacent ?from ?to) (clear ?to))
    :effect (and (at ?to) (clear ?from) (not (at ?from)) (not (clear ?to))))
  (:action push
    :parameters (?from ?bpos ?to)
    :precondition (and (at ?from) (box ?bpos) (clear ?to) (adjacent ?from ?bpos)
                       (adjacent ?bpos ?to) (adjacent_2 ?from ?to))
    :effect (and (at ?bpos) (box ?to) (clear ?from)
                 (not (at ?from)) (not (box ?bpos)) (not (clear ?to))))
)
"""

SOKOPULL_DOMAIN = """
(define (domain sokopull)
  (:requirements :strips)
  (:predicates (at ?c) (box ?c) (clear ?c) (adjacent ?a ?b) (adjacent_2 ?a ?b))
  (:action move
    :parameters (?from ?to)
    :precondition (and (at ?from) (adjacent ?from ?to) (clear ?to))
    :effect (and (at ?to) (clear ?from) (not (at ?from)) (not (clear ?to))))
  (:action push
    :parameters (?from ?bpos ?to)
    :precondition (and (at ?from) (box ?bpos) (clear ?to) (adjacent ?from ?bpos)
                       (adjacent ?bpos ?to) (adjacent_2 ?from ?to))
    :effect (and (at ?bpos) (box ?to) (clear ?from)
                 (not (at ?from)) (not (box ?bpos)) (not (clear ?to))))
  (:action pull
    :parameters (?from ?bpos ?to)
    :precondition (and (at ?from) (box ?bpos) (clear ?to) (adjacent ?from ?bpos)
                       (adjacent ?from ?to) (adjacent_2 ?bpos ?to))
    :effect (and (at ?to) (box ?from) (clear ?bpos)
                 (not (at ?from)) (not (box ?bpos)) (not (clear ?to))))
)
"""


def grid_cells(rows: int, cols: int, holes=()):
    cells = {}
    for r in range(1, rows + 1):
        for c in range(1, cols + 1):
            if (r, c) not in holes:
                cells[(r, c)] = f"s{r}{c}"
    return cells


def sokoban_problem(domain: str, name: str, rows: int, cols: int, holes,
                    agent, boxes) -> str:
    cells = grid_cells(rows, cols, holes)
    rel = []
    for (r, c), cell in sorted(cells.items()):
        for dr, dc in ((0, 1), (1, 0)):
            other = cells.get((r + dr, c + dc))
            if other:
                rel.append(f"(adjacent {cell} {other})")
                rel.append(f"(adjacent {other} {cell})")
        for dr, dc in ((0, 2), (2, 0)):
            far = cells.get((r + dr, c + dc))
            mid = cells.get((r + dr // 2, c + dc // 2))
            if far and mid:
                rel.append(f"(adjacent_2 {cell} {far})")
                rel.append(f"(adjacent_2 {far} {cell})")
    names = sorted(cells.values())
    agent_cell = cells[agent]
    box_cells = [cells[b] for b in boxes]
    init = [f"(at {agent_cell})"]
    init += [f"(box {b})" for b in box_cells]
    init += [f"(clear {c})" for c in names
             if c != agent_cell and c not in box_cells]
    init += rel
    return f"""
(define (problem {name})
  (:domain {domain})
  (:objects {' '.join(names)})
  (:init
    {atoms(init)})
  (:goal (and (at {agent_cell})))
)
"""


# ---------------------------------------------------------------------------
# stretch domains
# ---------------------------------------------------------------------------

DELIVERY_DOMAIN = """
(define (domain delivery)
  (:requirements :strips)
  (:predicates (at-truck ?t ?c) (at-pkg ?p ?c) (in ?p ?t) (adjacent ?a ?b))
  (:action drive
    :parameters (?t ?from ?to)
    :precondition (and (at-truck ?t ?from) (adjacent ?from ?to))
    :effect (and (at-truck ?t ?to) (not (at-truck ?t ?from))))
  (:action load
    :parameters (?p ?t ?c)
    :precondition (and (at-pkg ?p ?c) (at-truck ?t ?c))
    :effect (and (in ?p ?t) (not (at-pkg ?p ?c))))
  (:action unload
    :parameters (?p ?t ?c)
    :precondition (and (in ?p ?t) (at-truck ?t ?c))
    :effect (and (at-pkg ?p ?c) (not (in ?p ?t))))
)
"""


def delivery_problem(name: str, size: int, trucks, pkgs) -> str:
    cells = {(r, c): f"g{r}{c}" for r in range(1, size + 1)
             for c in range(1, size + 1)}
    rel = []
    for (r, c), cell in sorted(cells.items()):
        for dr, dc in ((0, 1), (1, 0)):
            other = cells.get((r + dr, c + dc))
            if other:
                rel.append(f"(adjacent {cell} {other})")
                rel.append(f"(adjacent {other} {cell})")
    tr = [f"tr{i}" for i in range(1, len(trucks) + 1)]
    pk = [f"pk{i}" for i in range(1, len(pkgs) + 1)]
    init = [f"(at-truck tr{i + 1} {cells[p]})" for i, p in enumerate(trucks)]
    init += [f"(at-pkg pk{i + 1} {cells[p]})" for i, p in enumerate(pkgs)]
    init += rel
    return f"""
(define (problem {name})
  (:domain delivery)
  (:objects {' '.join(sorted(cells.values()) + tr + pk)})
  (:init
    {atoms(init)})
  (:goal (and (at-truck tr1 {cells[trucks[0]]})))
)
"""


LOGISTICS_DOMAIN = """
(define (domain logistics)
  (:requirements :strips)
  (:predicates (at ?x ?l) (in ?p ?v) (in-city ?l ?c) (airport ?l)
               (vehicle ?v) (truck ?t) (airplane ?a) (package ?p) (neq ?a ?b))
  (:action load
    :parameters (?o ?v ?l)
    :precondition (and (package ?o) (vehicle ?v) (at ?o ?l) (at ?v ?l))
    :effect (and (in ?o ?v) (not (at ?o ?l))))
  (:action unload
    :parameters (?o ?v ?l)
    :precondition (and (package ?o) (vehicle ?v) (in ?o ?v) (at ?v ?l))
    :effect (and (at ?o ?l) (not (in ?o ?v))))
  (:action drive
    :parameters (?t ?from ?to ?c)
    :precondition (and (truck ?t) (at ?t ?from) (in-city ?from ?c)
                       (in-city ?to ?c) (neq ?from ?to))
    :effect (and (at ?t ?to) (not (at ?t ?from))))
  (:action fly
    :parameters (?a ?from ?to)
    :precondition (and (airplane ?a) (at ?a ?from) (airport ?to) (neq ?from ?to))
    :effect (and (at ?a ?to) (not (at ?a ?from))))
)
"""


def logistics_problem(name: str, n_cities: int, locs_per_city: int,
                      n_trucks: int, n_planes: int, pkg_locs) -> str:
    cities = [f"ct{i}" for i in range(1, n_cities + 1)]
    locs = []
    init = []
    airports = []
    for i in range(1, n_cities + 1):
        ap = f"ap{i}"
        airports.append(ap)
        city_locs = [ap] + [f"lo{i}{chr(ord('a') + k)}"
                            for k in range(locs_per_city - 1)]
        locs += city_locs
        init += [f"(in-city {l} ct{i})" for l in city_locs]
    init += [f"(airport {a})" for a in airports]
    trucks = [f"tk{i}" for i in range(1, n_trucks + 1)]
    planes = [f"pl{i}" for i in range(1, n_planes + 1)]
    pkgs = [f"pg{i}" for i in range(1, len(pkg_locs) + 1)]
    for i, t in enumerate(trucks):
        init.append(f"(truck {t})")
        init.append(f"(vehicle {t})")
        init.append(f"(at {t} ap{(i % n_cities) + 1})")
    for i, a in enumerate(planes):
        init.append(f"(airplane {a})")
        init.append(f"(vehicle {a})")
        init.append(f"(at {a} ap{(i % n_cities) + 1})")
    for i, loc in enumerate(pkg_locs):
        init.append(f"(package pg{i + 1})")
        init.append(f"(at pg{i + 1} {loc})")
    init += [f"(neq {a} {b})" for a in locs for b in locs if a != b]
    objs = locs + cities + trucks + planes + pkgs
    return f"""
(define (problem {name})
  (:domain logistics)
  (:objects {' '.join(objs)})
  (:init
    {atoms(init)})
  (:goal (and (at tk1 ap1)))
)
"""


GRID_DOMAIN = """
(define (domain grid)
  (:requirements :strips)
  (:predicates (conn ?a ?b) (open ?c) (locked ?c) (lock-shape ?c ?s)
               (key-shape ?k ?s) (at ?k ?c) (at-robot ?c) (holding ?k)
               (arm-empty))
  (:action move
    :parameters (?from ?to)
    :precondition (and (at-robot ?from) (conn ?from ?to) (open ?to))
    :effect (and (at-robot ?to) (not (at-robot ?from))))
  (:action pickup
    :parameters (?c ?k)
    :precondition (and (at-robot ?c) (at ?k ?c) (arm-empty))
    :effect (and (holding ?k) (not (at ?k ?c)) (not (arm-empty))))
  (:action putdown
    :parameters (?c ?k)
    :precondition (and (at-robot ?c) (holding ?k))
    :effect (and (at ?k ?c) (arm-empty) (not (holding ?k))))
  (:action pickup-and-loose
    :parameters (?c ?new ?old)
    :precondition (and (at-robot ?c) (holding ?old) (at ?new ?c))
    :effect (and (holding ?new) (at ?old ?c) (not (holding ?old)) (not (at ?new ?c))))
  (:action unlock
    :parameters (?c ?lockpos ?k ?s)
    :precondition (and (at-robot ?c) (conn ?c ?lockpos) (key-shape ?k ?s)
                       (lock-shape ?lockpos ?s) (locked ?lockpos) (holding ?k))
    :effect (and (open ?lockpos) (not (locked ?lockpos))))
)
"""


def grid_problem(name: str, rows: int, cols: int, holes, locked, keys,
                 robot) -> str:
    cells = {(r, c): f"pl{r}{c}" for r in range(1, rows + 1)
             for c in range(1, cols + 1) if (r, c) not in holes}
    rel = []
    for (r, c), cell in sorted(cells.items()):
        for dr, dc in ((0, 1), (1, 0)):
            other = cells.get((r + dr, c + dc))
            if other:
                rel.append(f"(conn {cell} {other})")
                rel.append(f"(conn {other} {cell})")
    shapes = sorted({s for _, s in locked} | {s for _, _, s in keys})
    init = [f"(at-robot {cells[robot]})", "(arm-empty)"]
    locked_cells = {cells[pos] for pos, _ in locked}
    init += [f"(locked {cells[pos]})" for pos, _ in locked]
    init += [f"(lock-shape {cells[pos]} {shape})" for pos, shape in locked]
    init += [f"(open {cell})" for cell in sorted(cells.values())
             if cell not in locked_cells]
    key_names = []
    for i, (pos, _, shape) in enumerate(keys, start=1):
        key_names.append(f"k{i}")
        init.append(f"(at k{i} {cells[pos]})")
        init.append(f"(key-shape k{i} {shape})")
    objs = sorted(cells.values()) + key_names + shapes
    return f"""
(define (problem {name})
  (:domain grid)
  (:objects {' '.join(objs)})
  (:init
    {atoms(init)})
  (:goal (and (at-robot {cells[robot]})))
)
"""


DRIVERLOG_DOMAIN = """
(define (domain driverlog)
  (:requirements :strips)
  (:predicates (at ?x ?l) (in ?p ?t) (driving ?d ?t) (link ?a ?b)
               (path ?a ?b) (empty ?t) (driver ?d) (truck ?t) (package ?p))
  (:action load
    :parameters (?p ?t ?l)
    :precondition (and (package ?p) (truck ?t) (at ?t ?l) (at ?p ?l))
    :effect (and (in ?p ?t) (not (at ?p ?l))))
  (:action unload
    :parameters (?p ?t ?l)
    :precondition (and (package ?p) (truck ?t) (in ?p ?t) (at ?t ?l))
    :effect (and (at ?p ?l) (not (in ?p ?t))))
  (:action board
    :parameters (?d ?t ?l)
    :precondition (and (driver ?d) (truck ?t) (at ?t ?l) (at ?d ?l) (empty ?t))
    :effect (and (driving ?d ?t) (not (at ?d ?l)) (not (empty ?t))))
  (:action disembark
    :parameters (?d ?t ?l)
    :precondition (and (driver ?d) (truck ?t) (at ?t ?l) (driving ?d ?t))
    :effect (and (at ?d ?l) (empty ?t) (not (driving ?d ?t))))
  (:action drive
    :parameters (?t ?from ?to ?d)
    :precondition (and (truck ?t) (at ?t ?from) (driving ?d ?t) (link ?from ?to))
    :effect (and (at ?t ?to) (not (at ?t ?from))))
  (:action walk
    :parameters (?d ?from ?to)
    :precondition (and (driver ?d) (at ?d ?from) (path ?from ?to))
    :effect (and (at ?d ?to) (not (at ?d ?from))))
)
"""


def driverlog_problem(name: str, rows: int, cols: int, drivers, trucks,
                      pkgs) -> str:
    cells = {(r, c): f"n{r}x{c}" for r in range(1, rows + 1)
             for c in range(1, cols + 1)}
    rel = []
    for (r, c), cell in sorted(cells.items()):
        for dr, dc in ((0, 1), (1, 0)):
            other = cells.get((r + dr, c + dc))
            if other:
                rel.append(f"(link {cell} {other})")
                rel.append(f"(link {other} {cell})")
                rel.append(f"(path {cell} {other})")
                rel.append(f"(path {other} {cell})")
    dr_names = [f"dr{i}" for i in range(1, len(drivers) + 1)]
    tk_names = [f"tk{i}" for i in range(1, len(trucks) + 1)]
    pk_names = [f"pk{i}" for i in range(1, len(pkgs) + 1)]
    init = []
    for i, pos in enumerate(drivers):
        init += [f"(driver dr{i + 1})", f"(at dr{i + 1} {cells[pos]})"]
    for i, pos in enumerate(trucks):
        init += [f"(truck tk{i + 1})", f"(at tk{i + 1} {cells[pos]})",
                 f"(empty tk{i + 1})"]
    for i, pos in enumerate(pkgs):
        init += [f"(package pk{i + 1})", f"(at pk{i + 1} {cells[pos]})"]
    init += rel
    return f"""
(define (problem {name})
  (:domain driverlog)
  (:objects {' '.join(sorted(cells.values()) + dr_names + tk_names + pk_names)})
  (:init
    {atoms(init)})
  (:goal (and (at tk1 {cells[trucks[0]]})))
)
"""


NPUZZLE_DOMAIN = """
(define (domain npuzzle)
  (:requirements :strips)
  (:predicates (at ?t ?x ?y) (blank ?x ?y) (inc ?a ?b))
  (:action up
    :parameters (?x ?yb ?ya ?t)
    :precondition (and (blank ?x ?yb) (inc ?ya ?yb) (at ?t ?x ?ya))
    :effect (and (blank ?x ?ya) (at ?t ?x ?yb)
                 (not (blank ?x ?yb)) (not (at ?t ?x ?ya))))
  (:action down
    :parameters (?x ?yb ?ya ?t)
    :precondition (and (blank ?x ?yb) (inc ?yb ?ya) (at ?t ?x ?ya))
    :effect (and (blank ?x ?ya) (at ?t ?x ?yb)
                 (not (blank ?x ?yb)) (not (at ?t ?x ?ya))))
  (:action left
    :parameters (?y ?xb ?xa ?t)
    :precondition (and (blank ?xb ?y) (inc ?xa ?xb) (at ?t ?xa ?y))
    :effect (and (blank ?xa ?y) (at ?t ?xb ?y)
                 (not (blank ?xb ?y)) (not (at ?t ?xa ?y))))
  (:action right
    :parameters (?y ?xb ?xa ?t)
    :precondition (and (blank ?xb ?y) (inc ?xb ?xa) (at ?t ?xa ?y))
    :effect (and (blank ?xa ?y) (at ?t ?xb ?y)
                 (not (blank ?xb ?y)) (not (at ?t ?xa ?y))))
)
"""


def npuzzle_problem(name: str, size: int, scramble: int) -> str:
    import random
    xs = [f"xc{i}" for i in range(1, size + 1)]
    ys = [f"yc{i}" for i in range(1, size + 1)]
    tiles = [f"t{i}" for i in range(1, size * size)]
    init = [f"(inc xc{i} xc{i + 1})" for i in range(1, size)]
    init += [f"(inc yc{i} yc{i + 1})" for i in range(1, size)]
    coords = [(x, y) for y in range(1, size + 1) for x in range(1, size + 1)]
    rng = random.Random(scramble)
    rng.shuffle(coords)
    bx, by = coords[0]
    init.append(f"(blank xc{bx} yc{by})")
    init += [f"(at {t} xc{x} yc{y})" for t, (x, y) in zip(tiles, coords[1:])]
    return f"""
(define (problem {name})
  (:domain npuzzle)
  (:objects {' '.join(xs + ys + tiles)})
  (:init
    {atoms(init)})
  (:goal (and (blank xc{bx} yc{by})))
)
"""


def main() -> None:
    write("blocks3-domain.pddl", BLOCKS3_DOMAIN)
    write("blocks3-train.pddl", blocks3_problem("blocks3-train", 5))
    write("blocks3-verify.pddl", blocks3_problem("blocks3-verify", 6))

    write("blocks4-domain.pddl", BLOCKS4_DOMAIN)
    write("blocks4-train.pddl", blocks4_problem("blocks4-train", 5))
    write("blocks4-verify.pddl", blocks4_problem("blocks4-verify", 6))

    write("ferry-domain.pddl", FERRY_DOMAIN)
    write("ferry-train.pddl",
          ferry_problem("ferry-train", 4, ["l1", "l1", "l2", "l3"]))
    write("ferry-verify.pddl",
          ferry_problem("ferry-verify", 5, ["l1", "l1", "l2", "l3", "l4"]))

    write("gripper-domain.pddl", GRIPPER_DOMAIN)
    write("gripper-train.pddl", gripper_problem("gripper-train", 6))
    write("gripper-verify.pddl", gripper_problem("gripper-verify", 8))

    write("hanoi-domain.pddl", HANOI_DOMAIN)
    write("hanoi-train.pddl", hanoi_problem("hanoi-train", 5))
    write("hanoi-verify.pddl", hanoi_problem("hanoi-verify", 7))

    write("miconic-domain.pddl", MICONIC_DOMAIN)
    write("miconic-train.pddl",
          miconic_problem("miconic-train", 5, [1, 2, 3, 4], [3, 5, 2, 1]))
    write("miconic-verify.pddl",
          miconic_problem("miconic-verify", 6, [1, 2, 3, 4, 5, 6],
                          [2, 3, 4, 5, 6, 1]))

    write("cpuzzle-domain.pddl", CPUZZLE_DOMAIN)
    write("cpuzzle-train.pddl", cpuzzle_problem("cpuzzle-train", 5, 7))
    write("cpuzzle-verify.pddl", cpuzzle_problem("cpuzzle-verify", 5, 29))

    write("sokoban-domain.pddl", SOKOBAN_DOMAIN)
    write("sokoban-train.pddl",
          sokoban_problem("sokoban", "sokoban-train", 6, 5, (), (1, 2),
                          [(2, 3), (3, 3), (4, 3), (3, 2)]))
    write("sokoban-verify.pddl",
          sokoban_problem("sokoban", "sokoban-verify", 7, 5,
                          ((1, 1), (1, 5), (7, 1), (7, 5), (4, 3)), (2, 2),
                          [(3, 3), (5, 3), (3, 4), (5, 2)]))

    write("sokopull-domain.pddl", SOKOPULL_DOMAIN)
    write("sokopull-train.pddl",
          sokoban_problem("sokopull", "sokopull-train", 5, 5, (), (1, 1),
                          [(2, 3), (3, 2), (3, 4), (4, 3)]))
    write("sokopull-verify.pddl",
          sokoban_problem("sokopull", "sokopull-verify", 6, 5, (), (1, 2),
                          [(2, 3), (3, 3), (4, 2), (5, 4)]))

    write("delivery-domain.pddl", DELIVERY_DOMAIN)
    write("delivery-train.pddl",
          delivery_problem("delivery-train", 3, [(1, 1), (3, 3)],
                           [(1, 2), (2, 1), (2, 2), (3, 1), (1, 3)]))
    write("delivery-verify.pddl",
          delivery_problem("delivery-verify", 4, [(1, 1), (4, 4)],
                           [(1, 2), (2, 1), (2, 3), (3, 2), (4, 1), (3, 4)]))

    write("logistics-domain.pddl", LOGISTICS_DOMAIN)
    write("logistics-train.pddl",
          logistics_problem("logistics-train", 4, 5, 4, 2,
                            ["lo1a", "lo2b", "lo3a", "ap4", "lo1c"]))
    write("logistics-verify.pddl",
          logistics_problem("logistics-verify", 5, 5, 5, 2,
                            ["lo1a", "lo2b", "lo3c", "ap4", "lo5a", "lo4b",
                             "lo2a", "ap3"]))

    write("grid-domain.pddl", GRID_DOMAIN)
    write("grid-train.pddl",
          grid_problem("grid-train", 6, 6, (),
                       [((3, 4), "sh1"), ((3, 5), "sh2"), ((4, 4), "sh1"),
                        ((5, 3), "sh3")],
                       [((1, 2), None, "sh1"), ((2, 1), None, "sh2"),
                        ((1, 4), None, "sh3"), ((2, 5), None, "sh1"),
                        ((5, 1), None, "sh2"), ((6, 2), None, "sh4"),
                        ((6, 5), None, "sh5"), ((4, 1), None, "sh6")],
                       (1, 1)))
    write("grid-verify.pddl",
          grid_problem("grid-verify", 6, 6, ((6, 6), (1, 6)),
                       [((2, 4), "sh1"), ((2, 5), "sh2"), ((4, 4), "sh2"),
                        ((5, 2), "sh3")],
                       [((1, 2), None, "sh1"), ((2, 1), None, "sh2"),
                        ((3, 3), None, "sh3"), ((1, 4), None, "sh1"),
                        ((5, 1), None, "sh2"), ((6, 2), None, "sh4"),
                        ((5, 5), None, "sh5"), ((4, 1), None, "sh6")],
                       (1, 1)))

    write("driverlog-domain.pddl", DRIVERLOG_DOMAIN)
    write("driverlog-train.pddl",
          driverlog_problem("driverlog-train", 8, 6,
                            [(1, 1), (4, 4), (8, 6)],
                            [(1, 2), (2, 5), (5, 1), (7, 3), (8, 1)],
                            [(1, 3), (2, 2), (3, 6), (5, 5), (6, 2), (7, 6),
                             (8, 4)]))
    write("driverlog-verify.pddl",
          driverlog_problem("driverlog-verify", 16, 8,
                            [(1, 1), (6, 6), (12, 3), (16, 8)],
                            [(1, 2), (3, 5), (7, 1), (9, 3), (11, 7), (14, 2),
                             (16, 1)],
                            [(1, 3), (2, 2), (4, 6), (6, 5), (8, 2), (10, 6),
                             (12, 4), (14, 8), (15, 5)]))

    write("npuzzle-domain.pddl", NPUZZLE_DOMAIN)
    write("npuzzle-train.pddl", npuzzle_problem("npuzzle-train", 5, 11))
    write("npuzzle-verify.pddl", npuzzle_problem("npuzzle-verify", 5, 13))


if __name__ == "__main__":
    sys.exit(main())
