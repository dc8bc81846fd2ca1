"""Tiny STRIPS interpreter used to cross-check exported planning tasks.

Self-contained on purpose: it reads back only the emitted text (s-expression
parser, typed grounding, delete-free saturation) and shares no code with the
attacker implementation, so agreement between the two is meaningful.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass


def _tokenize(text: str) -> list[str]:
    text = re.sub(r";[^\n]*", "", text)
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _parse(tokens: list[str]):
    def walk(i: int):
        if tokens[i] != "(":
            return tokens[i], i + 1
        out = []
        i += 1
        while tokens[i] != ")":
            node, i = walk(i)
            out.append(node)
        return out, i + 1

    tree, end = walk(0)
    if end != len(tokens):
        raise ValueError("trailing tokens after s-expression")
    return tree


def _typed_pairs(items: list[str]) -> list[tuple[str, str]]:
    """Expand `a b - t c - u` into [(a, t), (b, t), (c, u)]."""
    pairs = []
    pending: list[str] = []
    i = 0
    while i < len(items):
        if items[i] == "-":
            typ = items[i + 1]
            pairs.extend((name, typ) for name in pending)
            pending = []
            i += 2
        else:
            pending.append(items[i])
            i += 1
    pairs.extend((name, "object") for name in pending)
    return pairs


@dataclass(frozen=True)
class SimAction:
    name: str
    params: tuple[tuple[str, str], ...]
    precondition: object
    effects: tuple[tuple, ...]


def _effect_atoms(expr) -> tuple[tuple, ...]:
    if expr and expr[0] == "and":
        return tuple(tuple(atom) for atom in expr[1:])
    return (tuple(expr),)


def parse_domain(text: str):
    tree = _parse(_tokenize(text))
    constants: dict[str, str] = {}
    actions: list[SimAction] = []
    for block in tree:
        if not isinstance(block, list) or not block:
            continue
        if block[0] == ":constants":
            constants.update(_typed_pairs(block[1:]))
        elif block[0] == ":action":
            fields = {}
            key = None
            for item in block[2:]:
                if isinstance(item, str) and item.startswith(":"):
                    key = item
                else:
                    fields[key] = item
            actions.append(
                SimAction(
                    name=block[1],
                    params=tuple(_typed_pairs(fields.get(":parameters", []))),
                    precondition=fields[":precondition"],
                    effects=_effect_atoms(fields[":effect"]),
                )
            )
    return constants, actions


def parse_problem(text: str):
    tree = _parse(_tokenize(text))
    objects: dict[str, str] = {}
    init: set[tuple] = set()
    goal = None
    for block in tree:
        if not isinstance(block, list) or not block:
            continue
        if block[0] == ":objects":
            objects.update(_typed_pairs(block[1:]))
        elif block[0] == ":init":
            init = {tuple(atom) for atom in block[1:]}
        elif block[0] == ":goal":
            goal = block[1]
    return objects, init, goal


def _holds(expr, facts: set[tuple], binding: dict[str, str]) -> bool:
    if expr[0] == "and":
        return all(_holds(e, facts, binding) for e in expr[1:])
    if expr[0] == "or":
        return any(_holds(e, facts, binding) for e in expr[1:])
    atom = tuple(binding.get(t, t) for t in expr)
    return atom in facts


def saturate(domain_text: str, problem_text: str) -> set[tuple]:
    """All facts reachable by exhaustively applying ground actions."""
    constants, actions = parse_domain(domain_text)
    objects, facts, _ = parse_problem(problem_text)
    pool = {**constants, **objects}
    by_type: dict[str, list[str]] = {}
    for name, typ in sorted(pool.items()):
        by_type.setdefault(typ, []).append(name)

    grounded = []
    for action in actions:
        domains = [
            by_type.get(typ, []) if typ != "object" else sorted(pool)
            for _, typ in action.params
        ]
        for combo in itertools.product(*domains):
            binding = {var: obj for (var, _), obj in zip(action.params, combo)}
            effects = tuple(
                tuple(binding.get(t, t) for t in atom) for atom in action.effects
            )
            grounded.append((action.precondition, binding, effects))

    facts = set(facts)
    changed = True
    while changed:
        changed = False
        for pre, binding, effects in grounded:
            if _holds(pre, facts, binding):
                for atom in effects:
                    if atom not in facts:
                        facts.add(atom)
                        changed = True
    return facts


def goal_reachable(domain_text: str, problem_text: str) -> bool:
    _, _, goal = parse_problem(problem_text)
    facts = saturate(domain_text, problem_text)
    return _holds(goal, facts, {})
